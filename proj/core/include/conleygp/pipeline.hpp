#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "conleygp/confidence.hpp"
#include "conleygp/conley.hpp"
#include "conleygp/dataio.hpp"
#include "conleygp/enclosure.hpp"
#include "conleygp/error.hpp"
#include "conleygp/gp.hpp"
#include "conleygp/grid.hpp"
#include "conleygp/morse.hpp"
#include "conleygp/report.hpp"

namespace conleygp {

struct CsvSource {
  std::filesystem::path path;
};

/// Synthetic data; the sample seed is AnalysisConfig::seed.
struct SyntheticSource {
  SyntheticFunction function;
  std::size_t samples = 0;
};

using DataSource = std::variant<CsvSource, SyntheticSource>;

/// One experiment. JSON schema (unknown keys are rejected):
///
///   domain          [lower, upper]                       required
///   B               integer refinement level             required
///   delta_total     overall failure probability          default 0.05
///   lipschitz_share confidence of the L assumption       default (1 - delta)^{1/2}
///   L               Lipschitz bound                      default 8
///   kernel          {theta_bounds: [lo, hi], jitter, theta}; giving theta
///                   fixes it instead of maximizing the likelihood
///   data            {csv: path} or {synthetic: {function, samples}}
///   weights         [{lower, upper, weight}, ...]        default uniform
///   selector        "leftmost" | "rightmost"             default leftmost
///   seed            unsigned integer                     default 0
///   outputs         {report: path, svg: path}            optional
///
/// function: {type: logistic, r} | {type: arctan_sigmoid, scale, slope,
/// shift, offset} | {type: gauss_bump, height, width, center} |
/// {type: table, knots: [[x, y], ...]}. Relative paths resolve against the
/// directory of the config file.
struct AnalysisConfig {
  Domain domain;
  int B = 9;
  ConfidenceBudget budget = ConfidenceBudget::even_split(0.05);
  double L = 8.0;
  KernelConfig kernel;
  DataSource data;
  std::vector<RegionWeight> weights;
  ChainSelector::Rule selector = ChainSelector::Rule::leftmost;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> report_path;
  std::optional<std::filesystem::path> svg_path;

  /// Synthetic function when the data source has one.
  const SyntheticFunction* truth() const;
};

inline constexpr const char* kConfigSchema = "conleygp.analysis/1";

AnalysisConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
AnalysisConfig load_config(const std::filesystem::path& path);
/// Canonical form echoed into reports; parse_config(config_to_json(c)) == c.
nlohmann::json config_to_json(const AnalysisConfig& c);

std::string selector_name(ChainSelector::Rule rule);
nlohmann::json function_to_json(const SyntheticFunction& f);
SyntheticFunction function_from_json(const nlohmann::json& j);

/// A module error tagged with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message, bool ray_validity = false,
             double required_L = 0.0);
  const std::string& stage() const { return stage_; }
  bool ray_validity() const { return ray_validity_; }
  double required_L() const { return required_L_; }

 private:
  std::string stage_;
  bool ray_validity_;
  double required_L_;
};

struct RunOptions {
  /// Record wall-clock stage timings. Off gives byte-reproducible reports.
  bool timings = true;
  /// Check union/intersection closure of all nu and pred sets when the graph
  /// has at most this many Morse nodes.
  std::size_t lattice_check_limit = 32;
};

/// Everything the pipeline computed, kept for rendering and validation.
struct Analysis {
  AnalysisConfig config;
  TrainingData data;
  GpModel model;
  RadiusAssignment radii;
  Enclosure enclosure;
  EnclosureDiagnostics diagnostics;
  Digraph graph;
  MorseGraph morse;
  ChainSelector selector;
  std::vector<ConleyIndex> indices;
  /// Indices on downset_index_pair, for the cross-check and the report.
  std::vector<ConleyIndex> downset_indices;
  std::vector<Classification> classes;
  std::vector<ConnectionResult> connections;
  Report report;
};

TrainingData load_data(const AnalysisConfig& config);

/// Fit, allocate and assemble only (no Morse or Conley stage).
struct EnclosureStage {
  TrainingData data;
  GpModel model;
  RadiusAssignment radii;
  Assembly assembly;
};
/// `z_scale` multiplies every band multiplier z(v) before assembly.
EnclosureStage build_enclosure(const AnalysisConfig& config, const TrainingData& data, double z_scale = 1.0);

Analysis run(const AnalysisConfig& config, const RunOptions& options = {});

/// The exact inequality max diam < 2(l + 2 L eps + 2 eps).
bool diameter_bound_holds(const EnclosureDiagnostics& d);

}  // namespace conleygp
