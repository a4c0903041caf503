#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "conleygp/enclosure.hpp"
#include "conleygp/grid.hpp"

namespace conleygp {

inline constexpr int kReportSchemaVersion = 1;

struct ModelSummary {
  std::size_t samples = 0;
  double beta_hat = 0.0;
  double sigma2_hat = 0.0;
  double theta_hat = 0.0;
  double jitter = 0.0;
  bool degenerate = false;
  /// max_n |mu(x_n) - y_n|
  double interpolation_residual = 0.0;

  friend bool operator==(const ModelSummary&, const ModelSummary&) = default;
};

struct DiagnosticsSummary {
  EnclosureDiagnostics enclosure;
  bool diameter_bound_holds = false;
  bool selector_verified = false;
  bool lattice_verified = false;
  /// Every node has equivalent indices on both of its index pairs.
  bool index_pairs_agree = false;

  friend bool operator==(const DiagnosticsSummary&, const DiagnosticsSummary&);
};

struct NodeReport {
  std::string label;
  std::size_t cell_count = 0;
  std::size_t first_cell = 0;
  std::size_t last_cell = 0;
  std::vector<Interval> intervals;
  std::string intervals_text;
  std::size_t attractor_cells = 0;
  bool minimal = false;
  bool maximal = false;

  friend bool operator==(const NodeReport&, const NodeReport&) = default;
};

struct IndexReport {
  std::string label;
  std::string p0;
  std::string p1;
  std::string classification;
  std::array<std::size_t, 2> homology_dims{0, 0};
  std::array<std::size_t, 2> core_dims{0, 0};
  std::array<std::vector<std::string>, 2> invariant_factors;
  std::array<std::vector<std::vector<int>>, 2> maps;
  /// Same node on the pair (nu(M), nu(M) minus M).
  std::array<std::size_t, 2> downset_homology_dims{0, 0};
  std::array<std::vector<std::vector<int>>, 2> downset_maps;

  std::string index_string() const { return "(" + p0 + ", " + p1 + ")"; }
  friend bool operator==(const IndexReport&, const IndexReport&) = default;
};

struct ConnectionReport {
  std::string upper;
  std::string lower;
  bool connecting = false;
  std::string combined_index;
  std::string sum_index;
  std::array<std::vector<std::string>, 2> combined_invariant_factors;
  std::array<std::vector<std::string>, 2> sum_invariant_factors;

  friend bool operator==(const ConnectionReport&, const ConnectionReport&) = default;
};

struct Report {
  nlohmann::json config;
  ModelSummary model;
  DiagnosticsSummary diagnostics;
  bool confidence_valid = false;
  std::vector<NodeReport> nodes;
  /// Covering relation as (upper, lower) label pairs.
  std::vector<std::pair<std::string, std::string>> covers;
  std::vector<IndexReport> conley;
  std::vector<ConnectionReport> connections;
  std::map<std::string, double> timings;

  const NodeReport* node(const std::string& label) const;
  const IndexReport* index(const std::string& label) const;

  friend bool operator==(const Report&, const Report&) = default;
};

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
/// Pretty-printed JSON with a trailing newline.
std::string serialize(const Report& r);

}  // namespace conleygp
