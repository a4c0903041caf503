#pragma once

#include <span>
#include <utility>
#include <vector>

namespace conleygp {

double normal_cdf(double x);

/// Inverse standard normal CDF, accurate to ~1e-15 absolute. Rational
/// initial guess (Acklam) refined by one Halley step against erfc.
double normal_quantile(double p);

/// Regularized lower and upper incomplete gamma functions P(a, x), Q(a, x).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

double chi2_cdf(int dof, double x);

/// Order-p quantile of chi-square with `dof` degrees of freedom; safeguarded
/// Newton iteration on the incomplete gamma function.
double chi2_quantile(int dof, double p);

/// How the overall failure probability delta is split between the Lipschitz
/// assumption and the pointwise confidence bands.
struct ConfidenceBudget {
  double delta_total = 0.05;
  double lipschitz_share = 0.0;
  double pointwise_share = 0.0;

  /// Both shares (1 - delta)^{1/2}.
  static ConfidenceBudget even_split(double delta_total);
  static ConfidenceBudget with_lipschitz_share(double delta_total, double lipschitz_share);
  void validate() const;
};

/// User-supplied Lipschitz bound and the confidence it is assumed to hold with.
/// Recorded, never verified.
struct LipschitzAssumption {
  double L = 8.0;
  double assumed_confidence = 0.0;
};

/// Per-midpoint standard-deviation multipliers z(v) and failure masses delta_v.
struct RadiusAssignment {
  std::vector<double> z;
  std::vector<double> delta;

  std::size_t size() const { return z.size(); }
};

/// A weight applied to every midpoint inside [lower, upper].
struct RegionWeight {
  double lower = 0.0;
  double upper = 0.0;
  double weight = 1.0;
};

/// Expands region weights to per-midpoint weights (default 1, later regions
/// override earlier ones).
std::vector<double> region_weights(std::span<const double> midpoints,
                                   std::span<const RegionWeight> regions);

/// Union-bound allocation: delta_v = w_v / sum(w) * (1 - pointwise_share),
/// z(v) = Phi^{-1}(1 - delta_v / 2). Empty `weights` means uniform.
RadiusAssignment allocate(const ConfidenceBudget& budget, std::span<const double> midpoints,
                          std::span<const double> weights = {});

}  // namespace conleygp
