#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "conleygp/dataio.hpp"
#include "conleygp/rng.hpp"

namespace conleygp {

/// Squared-exponential correlation exp(-|a - b|^2 / theta).
inline double sq_exp_kernel(double a, double b, double theta) {
  const double d = a - b;
  return std::exp(-(d * d) / theta);
}

struct KernelConfig {
  /// Length parameter used when `optimize` is false.
  double theta = 0.1;
  double theta_lower = 1e-4;
  double theta_upper = 1e2;
  double jitter = 1e-10;
  bool optimize = true;

  /// Search bounds [1e-4 (b-a)^2, 1e2 (b-a)^2] and jitter 1e-10.
  static KernelConfig defaults_for(const Domain& domain);
  void validate() const;
};

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;

  double sd() const { return std::sqrt(variance); }
};

/// Profile quantities at a fixed theta.
struct ProfileLikelihood {
  double value = 0.0;  ///< N log(sigma2) + log|K|
  double beta = 0.0;
  double sigma2 = 0.0;
  double log_det = 0.0;
};

/// Closed-form profile estimators and objective at `theta`. Throws
/// NumericalError when K + jitter*I cannot be factored or when the residual
/// vanishes (degenerate constant-residual data).
ProfileLikelihood profile_likelihood(double theta, const TrainingData& data, double jitter = 1e-10);
double neg_log_profile_likelihood(double theta, const TrainingData& data, double jitter = 1e-10);

/// Noise-free GP surrogate fitted by maximum likelihood. Immutable after
/// construction, so all queries are safe to call concurrently.
class GpModel {
 public:
  /// Builds the conditioned model at a fixed theta (no optimization).
  static GpModel at_theta(const TrainingData& data, double theta, double jitter);

  const TrainingData& data() const { return data_; }
  double beta_hat() const { return beta_; }
  double sigma2_hat() const { return sigma2_; }
  double theta_hat() const { return theta_; }
  double jitter() const { return jitter_; }
  /// True when all responses coincide; the model then has sigma2_hat = 0.
  bool degenerate() const { return degenerate_; }

  /// Lower Cholesky factor of K(theta_hat) + jitter*I.
  Eigen::MatrixXd factor() const { return llt_.matrixL(); }
  const Eigen::VectorXd& alpha_weights() const { return alpha_; }

  Eigen::VectorXd correlation(double x) const;
  double mean(double x) const;
  Prediction predict(double x) const;
  double posterior_cov(double x1, double x2) const;

 private:
  GpModel(TrainingData data, double theta, double jitter);

  TrainingData data_;
  Eigen::VectorXd inputs_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  Eigen::VectorXd alpha_;
  double beta_ = 0.0;
  double sigma2_ = 0.0;
  double theta_ = 0.0;
  double jitter_ = 0.0;
  bool degenerate_ = false;
};

/// Maximum-likelihood fit: 64-point log-grid prescan, then golden-section
/// search on log theta (tolerance 1e-4) inside the best grid bracket.
GpModel fit(const TrainingData& data, const KernelConfig& config);

/// Draws from the posterior restricted to a fixed grid. The grid covariance
/// is factored once by diagonal-pivoted Cholesky, truncated when the largest
/// residual variance drops below `1e-13 * sigma2_hat`; the jitter term is
/// added as independent noise on each grid point.
class PosteriorSampler {
 public:
  PosteriorSampler(const GpModel& model, std::span<const double> grid);

  std::size_t grid_size() const { return mean_.size(); }
  std::size_t rank() const { return static_cast<std::size_t>(factor_.cols()); }
  const Eigen::VectorXd& mean() const { return mean_; }

  /// Fills `out` (grid_size) with one draw.
  void draw(Rng& rng, std::span<double> out) const;

  /// `count` draws, one per column.
  Eigen::MatrixXd draw_batch(Rng& rng, std::size_t count) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd factor_;  // n x rank
  double noise_sd_ = 0.0;
};

std::vector<std::vector<double>> sample_posterior_paths(const GpModel& model,
                                                        std::span<const double> grid,
                                                        std::size_t count, std::uint64_t seed);

}  // namespace conleygp
