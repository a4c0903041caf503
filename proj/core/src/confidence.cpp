#include "conleygp/confidence.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "conleygp/error.hpp"

namespace conleygp {

namespace {

double acklam_guess(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double chi2_density(int dof, double x) {
  const double k = 0.5 * dof;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::numbers::ln2 - std::lgamma(k));
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("normal_quantile requires 0 < p < 1");
  if (p == 0.5) return 0.0;
  double x = acklam_guess(p);
  // Halley step; the residual is taken in the smaller tail to avoid cancellation.
  const double e = (p < 0.5) ? normal_cdf(x) - p : (1.0 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw ConfigError("incomplete gamma requires a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_series(a, x);
  return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw ConfigError("incomplete gamma requires a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series(a, x);
  return gamma_continued_fraction(a, x);
}

double chi2_cdf(int dof, double x) {
  if (dof < 1) throw ConfigError("chi-square needs at least one degree of freedom");
  if (x <= 0.0) return 0.0;
  return regularized_gamma_p(0.5 * dof, 0.5 * x);
}

double chi2_quantile(int dof, double p) {
  if (dof < 1) throw ConfigError("chi-square needs at least one degree of freedom");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("chi2_quantile requires 0 < p < 1");
  const double k = 0.5 * dof;
  const bool upper = p > 0.5;
  const double target = upper ? 1.0 - p : p;
  // f is increasing in x in both branches.
  auto residual = [&](double x) {
    return upper ? target - regularized_gamma_q(k, 0.5 * x) : regularized_gamma_p(k, 0.5 * x) - target;
  };

  double lo = 0.0;
  double hi = std::max(1.0, static_cast<double>(dof));
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  double x = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    const double r = residual(x);
    if (r == 0.0) return x;
    if (r < 0.0) lo = x;
    else hi = x;
    double next = x - r / chi2_density(dof, x);
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * x || hi - lo <= 1e-16 * hi) return next;
    x = next;
  }
  return x;
}

ConfidenceBudget ConfidenceBudget::even_split(double delta_total) {
  const double share = std::sqrt(1.0 - delta_total);
  ConfidenceBudget b{delta_total, share, share};
  b.validate();
  return b;
}

ConfidenceBudget ConfidenceBudget::with_lipschitz_share(double delta_total, double lipschitz_share) {
  ConfidenceBudget b{delta_total, lipschitz_share, (1.0 - delta_total) / lipschitz_share};
  b.validate();
  return b;
}

void ConfidenceBudget::validate() const {
  auto in_unit = [](double v) { return v > 0.0 && v < 1.0; };
  if (!in_unit(delta_total) || !in_unit(lipschitz_share) || !in_unit(pointwise_share)) {
    throw ConfigError("confidence budget values must lie in (0, 1)");
  }
  if (std::abs(lipschitz_share * pointwise_share - (1.0 - delta_total)) > 1e-12) {
    throw ConfigError("confidence budget shares must multiply to 1 - delta");
  }
}

std::vector<double> region_weights(std::span<const double> midpoints,
                                   std::span<const RegionWeight> regions) {
  std::vector<double> w(midpoints.size(), 1.0);
  for (const auto& region : regions) {
    if (!(region.weight > 0.0) || !std::isfinite(region.weight)) {
      throw ConfigError("region weights must be positive");
    }
    for (std::size_t i = 0; i < midpoints.size(); ++i) {
      if (midpoints[i] >= region.lower && midpoints[i] <= region.upper) w[i] = region.weight;
    }
  }
  return w;
}

RadiusAssignment allocate(const ConfidenceBudget& budget, std::span<const double> midpoints,
                          std::span<const double> weights) {
  budget.validate();
  if (midpoints.empty()) throw ConfigError("cannot allocate confidence over zero midpoints");
  if (!weights.empty() && weights.size() != midpoints.size()) {
    throw ConfigError("weights must match midpoints one to one");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < midpoints.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("confidence weights must be positive");
    total += w;
  }
  const double failure = 1.0 - budget.pointwise_share;
  RadiusAssignment out;
  out.z.resize(midpoints.size());
  out.delta.resize(midpoints.size());
  for (std::size_t i = 0; i < midpoints.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    const double dv = w / total * failure;
    if (!(dv < 1.0)) {
      throw ConfigError("failure mass >= 1 at midpoint " + std::to_string(midpoints[i]) +
                        "; weights are too skewed");
    }
    out.delta[i] = dv;
    // Phi^{-1}(1 - dv/2) evaluated in the lower tail.
    out.z[i] = -normal_quantile(0.5 * dv);
  }
  return out;
}

}  // namespace conleygp
