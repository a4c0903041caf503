#include "conleygp/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <quadmath.h>

#include "conleygp/error.hpp"

namespace conleygp {

namespace {

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd correlation_matrix(const Eigen::VectorXd& x, double theta, double jitter) {
  const Eigen::Index n = x.size();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    k(i, i) = 1.0 + jitter;
    for (Eigen::Index j = 0; j < i; ++j) {
      k(i, j) = k(j, i) = sq_exp_kernel(x[i], x[j], theta);
    }
  }
  return k;
}

std::string theta_text(double theta) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", theta);
  return buf;
}

Eigen::LLT<Eigen::MatrixXd> factor_or_throw(const Eigen::VectorXd& x, double theta, double jitter) {
  Eigen::LLT<Eigen::MatrixXd> llt(correlation_matrix(x, theta, jitter));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("correlation matrix factorization failed at theta=" + theta_text(theta));
  }
  const Eigen::MatrixXd l = llt.matrixL();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    if (!(l(i, i) > 0.0) || !std::isfinite(l(i, i))) {
      throw NumericalError("correlation matrix factorization failed at theta=" + theta_text(theta));
    }
  }
  return llt;
}

bool all_equal(const std::vector<double>& ys) {
  return std::all_of(ys.begin(), ys.end(), [&](double y) { return y == ys.front(); });
}

double degenerate_threshold(const Eigen::VectorXd& y) {
  const double scale = 1e-14 * (1.0 + y.cwiseAbs().maxCoeff());
  return scale * scale;
}

}  // namespace

KernelConfig KernelConfig::defaults_for(const Domain& domain) {
  KernelConfig cfg;
  const double len2 = domain.length() * domain.length();
  cfg.theta_lower = 1e-4 * len2;
  cfg.theta_upper = 1e2 * len2;
  cfg.theta = 1e-1 * len2;
  return cfg;
}

void KernelConfig::validate() const {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw ConfigError("kernel theta must be positive");
  if (!(theta_lower > 0.0) || !(theta_lower < theta_upper) || !std::isfinite(theta_upper)) {
    throw ConfigError("kernel theta bounds must satisfy 0 < lower < upper");
  }
  if (!(jitter >= 0.0) || jitter > 1e-6) throw ConfigError("kernel jitter must lie in [0, 1e-6]");
}

// Evaluated in quad precision: K(theta) + jitter*I has condition numbers up
// to ~1/jitter near the likelihood optimum, which costs double (and long
// double) several digits of the objective.
ProfileLikelihood profile_likelihood(double theta, const TrainingData& data, double jitter) {
  using Q = __float128;
  if (!(theta > 0.0)) throw ConfigError("theta must be positive");
  const auto xs = data.xs();
  const auto ys = data.ys();
  const std::size_t n = xs.size();
  std::vector<Q> l(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const Q d = static_cast<Q>(xs[i]) - static_cast<Q>(xs[j]);
      Q s = i == j ? 1 + static_cast<Q>(jitter) : expq(-(d * d) / theta);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      if (i == j) {
        if (!(s > 0)) throw NumericalError("correlation matrix factorization failed at theta=" + theta_text(theta));
        l[i * n + i] = sqrtq(s);
      } else {
        l[i * n + j] = s / l[j * n + j];
      }
    }
  }
  // K^{-1} v through the two triangular solves
  auto solve = [&](std::vector<Q> v) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < i; ++k) v[i] -= l[i * n + k] * v[k];
      v[i] /= l[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t k = i + 1; k < n; ++k) v[i] -= l[k * n + i] * v[k];
      v[i] /= l[i * n + i];
    }
    return v;
  };
  auto dot = [](const std::vector<Q>& a, const std::vector<Q>& b) {
    Q s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  const std::vector<Q> ones(n, 1);
  std::vector<Q> y(ys.begin(), ys.end());
  const Q beta = dot(ones, solve(y)) / dot(ones, solve(ones));
  std::vector<Q> resid(n);
  for (std::size_t i = 0; i < n; ++i) resid[i] = y[i] - beta;
  const Q sigma2 = dot(resid, solve(resid)) / static_cast<Q>(n);
  ProfileLikelihood out;
  out.beta = static_cast<double>(beta);
  out.sigma2 = static_cast<double>(sigma2);
  if (!(out.sigma2 > degenerate_threshold(to_vector(ys)))) {
    throw NumericalError("degenerate constant-residual data (sigma2 = 0) at theta=" + theta_text(theta));
  }
  Q log_det = 0;
  for (std::size_t i = 0; i < n; ++i) log_det += 2 * logq(l[i * n + i]);
  out.log_det = static_cast<double>(log_det);
  out.value = static_cast<double>(static_cast<Q>(n) * logq(sigma2) + log_det);
  return out;
}

double neg_log_profile_likelihood(double theta, const TrainingData& data, double jitter) {
  return profile_likelihood(theta, data, jitter).value;
}

GpModel::GpModel(TrainingData data, double theta, double jitter)
    : data_(std::move(data)), theta_(theta), jitter_(jitter) {
  inputs_ = to_vector(data_.xs());
  const Eigen::VectorXd y = to_vector(data_.ys());
  llt_ = factor_or_throw(inputs_, theta, jitter);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(inputs_.size());
  if (all_equal(data_.ys())) {
    degenerate_ = true;
    beta_ = y[0];
    sigma2_ = 0.0;
    alpha_ = Eigen::VectorXd::Zero(inputs_.size());
    return;
  }
  beta_ = ones.dot(llt_.solve(y)) / ones.dot(llt_.solve(ones));
  const Eigen::VectorXd resid = y - beta_ * ones;
  alpha_ = llt_.solve(resid);
  sigma2_ = resid.dot(alpha_) / static_cast<double>(inputs_.size());
  if (!(sigma2_ > degenerate_threshold(y))) {
    degenerate_ = true;
    sigma2_ = 0.0;
  }
}

GpModel GpModel::at_theta(const TrainingData& data, double theta, double jitter) {
  if (!(theta > 0.0)) throw ConfigError("theta must be positive");
  return GpModel(data, theta, jitter);
}

Eigen::VectorXd GpModel::correlation(double x) const {
  Eigen::VectorXd k(inputs_.size());
  for (Eigen::Index i = 0; i < inputs_.size(); ++i) k[i] = sq_exp_kernel(x, inputs_[i], theta_);
  return k;
}

double GpModel::mean(double x) const { return beta_ + correlation(x).dot(alpha_); }

Prediction GpModel::predict(double x) const {
  const Eigen::VectorXd k = correlation(x);
  Prediction p;
  p.mean = beta_ + k.dot(alpha_);
  const Eigen::VectorXd w = llt_.matrixL().solve(k);
  const double raw = sigma2_ * (1.0 - w.squaredNorm());
  if (raw < -1e-8 * sigma2_) {
    throw NumericalError("posterior variance " + theta_text(raw) + " is negative beyond roundoff");
  }
  p.variance = std::max(raw, 0.0);
  return p;
}

double GpModel::posterior_cov(double x1, double x2) const {
  const Eigen::VectorXd w1 = llt_.matrixL().solve(correlation(x1));
  const Eigen::VectorXd w2 = llt_.matrixL().solve(correlation(x2));
  const double c = sigma2_ * (sq_exp_kernel(x1, x2, theta_) - w1.dot(w2));
  if (x1 == x2) return std::max(c, 0.0);
  return c;
}

GpModel fit(const TrainingData& data, const KernelConfig& config) {
  config.validate();
  if (!config.optimize) return GpModel::at_theta(data, config.theta, config.jitter);
  if (config.theta_upper < 100.0 * config.theta_lower) {
    throw ConfigError("theta search bounds must span at least two orders of magnitude");
  }
  const double log_lo = std::log(config.theta_lower);
  const double log_hi = std::log(config.theta_upper);

  if (all_equal(data.ys())) {
    // Constant responses carry no information about theta.
    return GpModel::at_theta(data, std::exp(0.5 * (log_lo + log_hi)), config.jitter);
  }

  constexpr double kInf = std::numeric_limits<double>::infinity();
  auto objective = [&](double log_theta) {
    try {
      return neg_log_profile_likelihood(std::exp(log_theta), data, config.jitter);
    } catch (const NumericalError&) {
      return kInf;
    }
  };

  constexpr int kGrid = 64;
  std::vector<double> grid_values(kGrid);
  const double step = (log_hi - log_lo) / (kGrid - 1);
  int best = -1;
  for (int j = 0; j < kGrid; ++j) {
    grid_values[j] = objective(log_lo + step * j);
    if (grid_values[j] < kInf && (best < 0 || grid_values[j] < grid_values[best])) best = j;
  }
  if (best < 0) {
    throw NumericalError("likelihood could not be evaluated anywhere inside the theta bounds");
  }

  double a = log_lo + step * std::max(best - 1, 0);
  double b = log_lo + step * std::min(best + 1, kGrid - 1);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > 1e-4) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = objective(d);
    }
  }
  double log_theta = 0.5 * (a + b);
  double value = objective(log_theta);
  const double grid_log = log_lo + step * best;
  if (!(value <= grid_values[best])) log_theta = grid_log;
  return GpModel::at_theta(data, std::exp(log_theta), config.jitter);
}

PosteriorSampler::PosteriorSampler(const GpModel& model, std::span<const double> grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  if (n == 0) throw ConfigError("posterior sampling grid is empty");
  const auto& domain = model.data().domain();
  for (double g : grid) {
    if (!domain.contains(g)) throw ConfigError("posterior sampling grid leaves the domain");
  }
  noise_sd_ = std::sqrt(model.jitter());
  mean_.resize(n);
  const auto m = static_cast<Eigen::Index>(model.data().size());
  const double sigma2 = model.sigma2_hat();
  const double theta = model.theta_hat();

  // w_i = L^{-1} k(g_i): posterior covariance is sigma2 (k(g_i, g_j) - w_i . w_j).
  Eigen::MatrixXd w(m, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXd k = model.correlation(grid[i]);
    w.col(i) = k;
    mean_[i] = model.beta_hat() + k.dot(model.alpha_weights());
  }
  const Eigen::MatrixXd l = model.factor();
  l.triangularView<Eigen::Lower>().solveInPlace(w);

  Eigen::VectorXd residual(n);
  for (Eigen::Index i = 0; i < n; ++i) residual[i] = sigma2 * (1.0 - w.col(i).squaredNorm());

  const double tolerance = 1e-13 * sigma2;
  std::vector<Eigen::VectorXd> columns;
  while (sigma2 > 0.0 && static_cast<Eigen::Index>(columns.size()) < n) {
    Eigen::Index pivot = 0;
    const double largest = residual.maxCoeff(&pivot);
    if (largest <= tolerance) break;
    Eigen::VectorXd col(n);
    const double gp = grid[pivot];
    for (Eigen::Index i = 0; i < n; ++i) {
      col[i] = sigma2 * (sq_exp_kernel(grid[i], gp, theta) - w.col(i).dot(w.col(pivot)));
    }
    for (const auto& prev : columns) col -= prev * prev[pivot];
    col /= std::sqrt(largest);
    residual -= col.cwiseAbs2();
    residual[pivot] = 0.0;
    columns.push_back(std::move(col));
  }
  if (sigma2 > 0.0 && residual.minCoeff() < -1e-8 * sigma2) {
    throw NumericalError("grid covariance factorization failed; coarsen the grid or raise jitter");
  }
  factor_.resize(n, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t k = 0; k < columns.size(); ++k) factor_.col(static_cast<Eigen::Index>(k)) = columns[k];
}

void PosteriorSampler::draw(Rng& rng, std::span<double> out) const {
  Eigen::VectorXd z(factor_.cols());
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = rng.normal();
  Eigen::VectorXd path = mean_ + factor_ * z;
  for (Eigen::Index i = 0; i < path.size(); ++i) {
    out[static_cast<std::size_t>(i)] = path[i] + noise_sd_ * rng.normal();
  }
}

Eigen::MatrixXd PosteriorSampler::draw_batch(Rng& rng, std::size_t count) const {
  const auto c = static_cast<Eigen::Index>(count);
  Eigen::MatrixXd z(factor_.cols(), c);
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index k = 0; k < z.rows(); ++k) z(k, j) = rng.normal();
  }
  Eigen::MatrixXd paths = factor_ * z;
  for (Eigen::Index j = 0; j < c; ++j) {
    for (Eigen::Index i = 0; i < paths.rows(); ++i) {
      paths(i, j) += mean_[i] + noise_sd_ * rng.normal();
    }
  }
  return paths;
}

std::vector<std::vector<double>> sample_posterior_paths(const GpModel& model,
                                                        std::span<const double> grid,
                                                        std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ConfigError("path count must be positive");
  PosteriorSampler sampler(model, grid);
  Rng rng(seed);
  std::vector<std::vector<double>> paths(count, std::vector<double>(grid.size()));
  for (auto& p : paths) sampler.draw(rng, p);
  return paths;
}

}  // namespace conleygp
