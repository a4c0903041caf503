#include "conleygp/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>

namespace conleygp {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing '" + std::string(key) + "' in " + where);
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError("'" + std::string(key) + "' in " + where + " must be a number");
  return v.get<double>();
}

double number_or(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

std::uint64_t unsigned_integer(const json& v, const std::string& what) {
  // literals built in code come through as signed integers
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(what + " must be an unsigned integer");
}

std::filesystem::path resolve(const std::string& p, const std::filesystem::path& base) {
  std::filesystem::path path(p);
  if (path.is_relative() && !base.empty()) path = base / path;
  return path;
}

template <class F>
auto timed(std::map<std::string, double>& timings, bool enabled, const std::string& stage, F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  auto finish = [&] {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    timings[stage] = enabled ? s : 0.0;
  };
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      finish();
    } else {
      auto r = f();
      finish();
      return r;
    }
  } catch (const StageError&) {
    throw;
  } catch (const RayValidityError& e) {
    throw StageError(stage, e.what(), true, e.required_L());
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

const SyntheticFunction* AnalysisConfig::truth() const {
  if (const auto* s = std::get_if<SyntheticSource>(&data)) return &s->function;
  return nullptr;
}

std::string selector_name(ChainSelector::Rule rule) {
  return rule == ChainSelector::Rule::leftmost ? "leftmost" : "rightmost";
}

json function_to_json(const SyntheticFunction& f) {
  struct V {
    json operator()(const Logistic& g) const { return {{"type", "logistic"}, {"r", g.r}}; }
    json operator()(const ArctanSigmoid& g) const {
      return {{"type", "arctan_sigmoid"}, {"scale", g.scale}, {"slope", g.slope}, {"shift", g.shift}, {"offset", g.offset}};
    }
    json operator()(const GaussBump& g) const {
      return {{"type", "gauss_bump"}, {"height", g.height}, {"width", g.width}, {"center", g.center}};
    }
    json operator()(const TableFunction& g) const {
      json knots = json::array();
      for (const auto& p : g.knots) knots.push_back({p.x, p.y});
      return {{"type", "table"}, {"knots", knots}};
    }
  };
  return std::visit(V{}, f);
}

SyntheticFunction function_from_json(const json& j) {
  const std::string where = "data.synthetic.function";
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string()) {
    throw ConfigError(where + " needs a string 'type'");
  }
  const auto type = j.at("type").get<std::string>();
  if (type == "logistic") {
    reject_unknown(j, {"type", "r"}, where);
    return Logistic{number(j, "r", where)};
  }
  if (type == "arctan_sigmoid") {
    reject_unknown(j, {"type", "scale", "slope", "shift", "offset"}, where);
    return ArctanSigmoid{number(j, "scale", where), number(j, "slope", where), number(j, "shift", where),
                         number(j, "offset", where)};
  }
  if (type == "gauss_bump") {
    reject_unknown(j, {"type", "height", "width", "center"}, where);
    return GaussBump{number(j, "height", where), number(j, "width", where), number(j, "center", where)};
  }
  if (type == "table") {
    reject_unknown(j, {"type", "knots"}, where);
    TableFunction t;
    if (!j.contains("knots") || !j.at("knots").is_array()) throw ConfigError(where + ".knots must be an array");
    for (const auto& k : j.at("knots")) {
      if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
        throw ConfigError(where + ".knots entries must be [x, y]");
      }
      t.knots.push_back({k[0].get<double>(), k[1].get<double>()});
    }
    return t;
  }
  throw ConfigError("unknown function type '" + type + "'");
}

AnalysisConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j,
                 {"schema", "domain", "B", "delta_total", "lipschitz_share", "L", "kernel", "data", "weights",
                  "selector", "seed", "outputs"},
                 "config");
  if (j.contains("schema") && j.at("schema") != kConfigSchema) {
    throw ConfigError("unsupported config schema " + j.at("schema").dump());
  }
  AnalysisConfig c;

  if (!j.contains("domain") || !j.at("domain").is_array() || j.at("domain").size() != 2 ||
      !j.at("domain")[0].is_number() || !j.at("domain")[1].is_number()) {
    throw ConfigError("config.domain must be [lower, upper]");
  }
  c.domain = Domain::make(j.at("domain")[0].get<double>(), j.at("domain")[1].get<double>());

  if (!j.contains("B") || !j.at("B").is_number_integer()) throw ConfigError("config.B must be an integer");
  c.B = j.at("B").get<int>();
  if (c.B < 2 || c.B > 24) throw ConfigError("config.B must lie in [2, 24]");

  const double delta = number_or(j, "delta_total", 0.05, "config");
  c.budget = ConfidenceBudget::even_split(delta);
  if (j.contains("lipschitz_share")) {
    const double share = number(j, "lipschitz_share", "config");
    if (share != c.budget.lipschitz_share) c.budget = ConfidenceBudget::with_lipschitz_share(delta, share);
  }
  c.budget.validate();

  c.L = number_or(j, "L", 8.0, "config");
  if (!(c.L > 0.0) || !std::isfinite(c.L)) throw ConfigError("config.L must be positive");

  c.kernel = KernelConfig::defaults_for(c.domain);
  if (j.contains("kernel")) {
    const auto& k = j.at("kernel");
    reject_unknown(k, {"theta_bounds", "jitter", "theta"}, "config.kernel");
    if (k.contains("theta_bounds")) {
      const auto& b = k.at("theta_bounds");
      if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) {
        throw ConfigError("config.kernel.theta_bounds must be [lower, upper]");
      }
      c.kernel.theta_lower = b[0].get<double>();
      c.kernel.theta_upper = b[1].get<double>();
    }
    c.kernel.jitter = number_or(k, "jitter", c.kernel.jitter, "config.kernel");
    if (k.contains("theta")) {
      c.kernel.theta = number(k, "theta", "config.kernel");
      c.kernel.optimize = false;
    }
  }
  c.kernel.validate();

  if (!j.contains("data")) throw ConfigError("config.data is required");
  const auto& d = j.at("data");
  reject_unknown(d, {"csv", "synthetic"}, "config.data");
  if (d.contains("csv") == d.contains("synthetic")) {
    throw ConfigError("config.data needs exactly one of 'csv' or 'synthetic'");
  }
  if (d.contains("csv")) {
    if (!d.at("csv").is_string()) throw ConfigError("config.data.csv must be a path");
    c.data = CsvSource{resolve(d.at("csv").get<std::string>(), base_dir)};
  } else {
    const auto& s = d.at("synthetic");
    reject_unknown(s, {"function", "samples"}, "config.data.synthetic");
    if (!s.contains("function")) throw ConfigError("config.data.synthetic.function is required");
    if (!s.contains("samples")) throw ConfigError("config.data.synthetic.samples is required");
    SyntheticSource src{function_from_json(s.at("function")),
                        static_cast<std::size_t>(unsigned_integer(s.at("samples"), "config.data.synthetic.samples"))};
    validate(SyntheticSpec{src.function, src.samples, 0});
    c.data = std::move(src);
  }

  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    if (!w.is_array()) throw ConfigError("config.weights must be an array");
    for (const auto& r : w) {
      reject_unknown(r, {"lower", "upper", "weight"}, "config.weights[]");
      RegionWeight rw{number(r, "lower", "config.weights[]"), number(r, "upper", "config.weights[]"),
                      number(r, "weight", "config.weights[]")};
      if (!(rw.lower <= rw.upper) || !(rw.weight > 0.0) || !std::isfinite(rw.weight)) {
        throw ConfigError("config.weights[] needs lower <= upper and a positive weight");
      }
      c.weights.push_back(rw);
    }
  }

  if (j.contains("selector")) {
    const auto& s = j.at("selector");
    if (s == "leftmost") c.selector = ChainSelector::Rule::leftmost;
    else if (s == "rightmost") c.selector = ChainSelector::Rule::rightmost;
    else throw ConfigError("config.selector must be 'leftmost' or 'rightmost'");
  }
  if (j.contains("seed")) c.seed = unsigned_integer(j.at("seed"), "config.seed");

  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    reject_unknown(o, {"report", "svg"}, "config.outputs");
    for (const char* key : {"report", "svg"}) {
      if (!o.contains(key)) continue;
      if (!o.at(key).is_string()) throw ConfigError(std::string("config.outputs.") + key + " must be a path");
      auto p = resolve(o.at(key).get<std::string>(), base_dir);
      (std::string(key) == "report" ? c.report_path : c.svg_path) = p;
    }
  }
  return c;
}

AnalysisConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  auto c = parse_config(j, path.parent_path());
  if (const auto* csv = std::get_if<CsvSource>(&c.data); csv && !std::filesystem::exists(csv->path)) {
    throw ConfigError("data file " + csv->path.string() + " does not exist");
  }
  return c;
}

json config_to_json(const AnalysisConfig& c) {
  json j;
  j["schema"] = kConfigSchema;
  j["domain"] = {c.domain.lower, c.domain.upper};
  j["B"] = c.B;
  j["delta_total"] = c.budget.delta_total;
  j["lipschitz_share"] = c.budget.lipschitz_share;
  j["L"] = c.L;
  json k = {{"theta_bounds", {c.kernel.theta_lower, c.kernel.theta_upper}}, {"jitter", c.kernel.jitter}};
  if (!c.kernel.optimize) k["theta"] = c.kernel.theta;
  j["kernel"] = k;
  if (const auto* csv = std::get_if<CsvSource>(&c.data)) {
    j["data"] = {{"csv", csv->path.generic_string()}};
  } else {
    const auto& s = std::get<SyntheticSource>(c.data);
    j["data"] = {{"synthetic", {{"function", function_to_json(s.function)}, {"samples", s.samples}}}};
  }
  json w = json::array();
  for (const auto& r : c.weights) w.push_back({{"lower", r.lower}, {"upper", r.upper}, {"weight", r.weight}});
  j["weights"] = w;
  j["selector"] = selector_name(c.selector);
  j["seed"] = c.seed;
  return j;
}

StageError::StageError(std::string stage, const std::string& message, bool ray_validity, double required_L)
    : Error(stage + ": " + message), stage_(std::move(stage)), ray_validity_(ray_validity), required_L_(required_L) {}

bool diameter_bound_holds(const EnclosureDiagnostics& d) { return d.max_fiber_diameter < d.diameter_bound; }

TrainingData load_data(const AnalysisConfig& config) {
  if (const auto* csv = std::get_if<CsvSource>(&config.data)) return load_csv(csv->path, config.domain);
  const auto& s = std::get<SyntheticSource>(config.data);
  return generate(SyntheticSpec{s.function, s.samples, config.seed}, config.domain);
}

namespace {

struct Stages {
  std::map<std::string, double> timings;
  bool record = true;
};

RadiusAssignment allocate_radii(const AnalysisConfig& config, const CellComplex1D& complex) {
  const auto mids = complex.odd_midpoints();
  const auto w = region_weights(mids, config.weights);
  return allocate(config.budget, mids, config.weights.empty() ? std::span<const double>{} : std::span<const double>(w));
}

EnclosureStage enclosure_stages(const AnalysisConfig& config, const TrainingData& data, Stages& st,
                                double z_scale = 1.0) {
  auto model = timed(st.timings, st.record, "fit", [&] { return fit(data, config.kernel); });
  CellComplex1D complex(config.domain, config.B);
  auto radii = timed(st.timings, st.record, "allocate", [&] {
    auto r = allocate_radii(config, complex);
    for (auto& z : r.z) z *= z_scale;
    return r;
  });
  auto assembly = timed(st.timings, st.record, "enclosure", [&] { return assemble(model, complex, radii, config.L); });
  return EnclosureStage{data, std::move(model), std::move(radii), std::move(assembly)};
}

bool check_lattice(const MorseGraph& mg, const Digraph& g, std::size_t limit) {
  if (mg.size() > limit) return false;
  std::vector<CellSet> sets;
  for (std::size_t i = 0; i < mg.size(); ++i) {
    sets.push_back(mg.nodes[i].attractor);
    sets.push_back(pred(mg, g, i));
  }
  for (std::size_t a = 0; a < sets.size(); ++a) {
    if (!is_attractor(g, sets[a])) throw InternalError("lattice element is not invariant");
    for (std::size_t b = a + 1; b < sets.size(); ++b) {
      if (!is_attractor(g, set_union(sets[a], sets[b])) || !is_attractor(g, set_intersection(sets[a], sets[b]))) {
        throw InternalError("attractor lattice is not closed under union and intersection");
      }
    }
  }
  return true;
}

std::vector<std::vector<int>> lifted_rows(const Z5Matrix& m) {
  std::vector<std::vector<int>> out;
  for (const auto& row : m.to_rows()) {
    std::vector<int> r;
    for (auto v : row) r.push_back(static_cast<int>(v));
    out.push_back(std::move(r));
  }
  return out;
}

std::array<std::vector<std::string>, 2> factor_strings(const ConleyIndex& idx) {
  std::array<std::vector<std::string>, 2> out;
  for (int k = 0; k < 2; ++k)
    for (const auto& f : idx.cores[static_cast<std::size_t>(k)].invariant_factors) out[static_cast<std::size_t>(k)].push_back(f.to_string());
  return out;
}

}  // namespace

EnclosureStage build_enclosure(const AnalysisConfig& config, const TrainingData& data, double z_scale) {
  if (!(z_scale > 0.0)) throw ConfigError("z scale must be positive");
  Stages st;
  return enclosure_stages(config, data, st, z_scale);
}

Analysis run(const AnalysisConfig& config, const RunOptions& options) {
  Stages st;
  st.record = options.timings;
  const auto t0 = std::chrono::steady_clock::now();

  auto data = timed(st.timings, st.record, "data", [&] { return load_data(config); });
  auto es = enclosure_stages(config, data, st);
  Enclosure& enc = es.assembly.enclosure;
  const auto& complex = enc.complex();

  auto [graph, morse] = timed(st.timings, st.record, "morse", [&] {
    Digraph g = Digraph::from_fibers(enc.fibers());
    MorseGraph mg = morse_graph(g);
    return std::pair<Digraph, MorseGraph>(std::move(g), std::move(mg));
  });

  bool lattice_ok = false;
  ChainSelector selector;
  std::vector<ConleyIndex> indices;
  std::vector<ConleyIndex> downset_indices;
  bool pairs_agree = true;
  std::vector<Classification> classes;
  std::vector<ConnectionResult> connections;
  timed(st.timings, st.record, "conley", [&] {
    lattice_ok = check_lattice(morse, graph, options.lattice_check_limit);
    selector = build_selector(graph, config.selector);
    verify_selector(selector, graph);
    for (std::size_t i = 0; i < morse.size(); ++i) {
      indices.push_back(conley_index(morse, graph, selector, i));
      downset_indices.push_back(conley_index(downset_index_pair(morse, i), selector, graph));
      pairs_agree = pairs_agree && downset_indices.back().equivalent(indices.back());
      classes.push_back(interpret(indices.back()));
    }
    for (std::size_t i = 0; i < morse.size(); ++i)
      for (auto j : morse.covers[i])
        connections.push_back(connecting_orbit(morse, graph, selector, i, j, indices[i], indices[j]));
  });

  Report r;
  r.config = config_to_json(config);
  r.config["schema_version"] = kReportSchemaVersion;
  r.model.samples = data.size();
  r.model.beta_hat = es.model.beta_hat();
  r.model.sigma2_hat = es.model.sigma2_hat();
  r.model.theta_hat = es.model.theta_hat();
  r.model.jitter = es.model.jitter();
  r.model.degenerate = es.model.degenerate();
  for (const auto& p : data.points())
    r.model.interpolation_residual = std::max(r.model.interpolation_residual, std::abs(es.model.mean(p.x) - p.y));

  r.diagnostics.enclosure = es.assembly.diagnostics;
  r.diagnostics.diameter_bound_holds = diameter_bound_holds(es.assembly.diagnostics);
  r.diagnostics.selector_verified = true;
  r.diagnostics.lattice_verified = lattice_ok;
  r.diagnostics.index_pairs_agree = pairs_agree;
  r.confidence_valid = enc.g_tilde_contained();

  const auto minimal = morse.minimal();
  const auto maximal = morse.maximal();
  for (std::size_t i = 0; i < morse.size(); ++i) {
    const auto& n = morse.nodes[i];
    NodeReport nr;
    nr.label = n.label;
    nr.cell_count = n.cells.size();
    nr.first_cell = n.cells.front();
    nr.last_cell = n.cells.back();
    nr.intervals = morse_set_intervals(complex, n.cells);
    nr.intervals_text = format_intervals(nr.intervals);
    nr.attractor_cells = n.attractor.size();
    nr.minimal = std::find(minimal.begin(), minimal.end(), i) != minimal.end();
    nr.maximal = std::find(maximal.begin(), maximal.end(), i) != maximal.end();
    r.nodes.push_back(std::move(nr));
    for (auto j : morse.covers[i]) r.covers.emplace_back(n.label, morse.nodes[j].label);

    const auto& idx = indices[i];
    IndexReport ir;
    ir.label = n.label;
    ir.p0 = idx.p_string(0);
    ir.p1 = idx.p_string(1);
    ir.classification = classes[i].to_string();
    ir.homology_dims = idx.homology_dims;
    ir.core_dims = {idx.cores[0].dimension, idx.cores[1].dimension};
    ir.invariant_factors = factor_strings(idx);
    ir.maps = {lifted_rows(idx.maps[0]), lifted_rows(idx.maps[1])};
    ir.downset_homology_dims = downset_indices[i].homology_dims;
    ir.downset_maps = {lifted_rows(downset_indices[i].maps[0]), lifted_rows(downset_indices[i].maps[1])};
    r.conley.push_back(std::move(ir));
  }
  for (const auto& c : connections) {
    ConnectionReport cr;
    cr.upper = morse.nodes[c.upper].label;
    cr.lower = morse.nodes[c.lower].label;
    cr.connecting = c.connecting;
    cr.combined_index = c.combined.to_string();
    cr.sum_index = c.sum.to_string();
    cr.combined_invariant_factors = factor_strings(c.combined);
    cr.sum_invariant_factors = factor_strings(c.sum);
    r.connections.push_back(std::move(cr));
  }
  r.timings = st.timings;
  r.timings["total"] =
      st.record ? std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() : 0.0;

  return Analysis{config,
                  std::move(data),
                  std::move(es.model),
                  std::move(es.radii),
                  std::move(enc),
                  es.assembly.diagnostics,
                  std::move(graph),
                  std::move(morse),
                  std::move(selector),
                  std::move(indices),
                  std::move(downset_indices),
                  std::move(classes),
                  std::move(connections),
                  std::move(r)};
}

}  // namespace conleygp
