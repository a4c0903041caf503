#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conleygp/pipeline.hpp"

namespace conleygp {

struct ValidationOptions {
  std::size_t trials = 20;
  std::size_t paths_per_trial = 2000;
  /// Multiplies the band multipliers z(v).
  double z_scale = 1.0;
  /// 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
  /// Paths drawn per batch; each batch has its own RNG stream.
  std::size_t batch = 50;
};

struct TrialResult {
  std::size_t trial = 0;
  std::uint64_t data_seed = 0;
  bool ok = false;
  std::string error;
  bool confidence_valid = false;
  bool diameter_bound_holds = false;
  std::size_t paths_inside = 0;
  double posterior_coverage = 0.0;
  bool truth_checked = false;
  bool truth_inside = false;
  std::optional<Point> truth_violation;
  std::size_t sampler_rank = 0;
  double theta_hat = 0.0;
};

struct ValidationSummary {
  std::size_t trials = 0;
  std::size_t paths_per_trial = 0;
  std::size_t grid_points = 0;
  std::size_t ok_trials = 0;
  std::size_t error_trials = 0;
  std::size_t valid_trials = 0;
  double mean_posterior_coverage = 0.0;
  double min_posterior_coverage = 0.0;
  /// Fraction of ok trials whose true map lies inside G-tilde; NaN without truth.
  double truth_coverage = 0.0;
  std::vector<TrialResult> per_trial;
  double seconds = 0.0;
};

/// Inclusive linspace with 2^{B+1} points.
std::vector<double> validation_grid(const Domain& domain, int B);

/// Trial t draws its data seed and path master seed from Rng::stream(config.seed, t);
/// batch b of its paths uses Rng::stream(path master, b). CSV sources keep
/// the same data in every trial (posterior-only mode).
ValidationSummary validate(const AnalysisConfig& config, const ValidationOptions& options);

nlohmann::json to_json(const ValidationSummary& s);

}  // namespace conleygp
