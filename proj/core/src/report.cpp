#include "conleygp/report.hpp"

#include "conleygp/error.hpp"

namespace conleygp {

using nlohmann::json;

bool operator==(const DiagnosticsSummary& a, const DiagnosticsSummary& b) {
  const auto& x = a.enclosure;
  const auto& y = b.enclosure;
  return x.max_fiber_diameter == y.max_fiber_diameter && x.ell == y.ell && x.epsilon == y.epsilon &&
         x.diameter_bound == y.diameter_bound && x.gamma == y.gamma && x.variance_bound == y.variance_bound &&
         x.max_posterior_sd == y.max_posterior_sd && x.required_L == y.required_L &&
         x.clipped_edges == y.clipped_edges && x.image_cells == y.image_cells &&
         a.diameter_bound_holds == b.diameter_bound_holds && a.selector_verified == b.selector_verified &&
         a.lattice_verified == b.lattice_verified && a.index_pairs_agree == b.index_pairs_agree;
}

const NodeReport* Report::node(const std::string& label) const {
  for (const auto& n : nodes)
    if (n.label == label) return &n;
  return nullptr;
}

const IndexReport* Report::index(const std::string& label) const {
  for (const auto& c : conley)
    if (c.label == label) return &c;
  return nullptr;
}

json to_json(const Report& r) {
  json j;
  j["config"] = r.config;
  j["model"] = {{"samples", r.model.samples},
                {"beta_hat", r.model.beta_hat},
                {"sigma2_hat", r.model.sigma2_hat},
                {"theta_hat", r.model.theta_hat},
                {"jitter", r.model.jitter},
                {"degenerate", r.model.degenerate},
                {"interpolation_residual", r.model.interpolation_residual}};
  const auto& d = r.diagnostics.enclosure;
  j["diagnostics"] = {{"max_fiber_diameter", d.max_fiber_diameter},
                      {"ell", d.ell},
                      {"epsilon", d.epsilon},
                      {"diameter_bound", d.diameter_bound},
                      {"gamma", d.gamma},
                      {"variance_bound", d.variance_bound},
                      {"max_posterior_sd", d.max_posterior_sd},
                      {"required_L", d.required_L},
                      {"clipped_edges", d.clipped_edges},
                      {"image_cells", d.image_cells},
                      {"diameter_bound_holds", r.diagnostics.diameter_bound_holds},
                      {"selector_verified", r.diagnostics.selector_verified},
                      {"lattice_verified", r.diagnostics.lattice_verified},
                      {"index_pairs_agree", r.diagnostics.index_pairs_agree}};
  j["confidence_valid"] = r.confidence_valid;

  json nodes = json::array();
  for (const auto& n : r.nodes) {
    json iv = json::array();
    for (const auto& i : n.intervals) iv.push_back({i.lo, i.hi});
    nodes.push_back({{"label", n.label},
                     {"cell_count", n.cell_count},
                     {"first_cell", n.first_cell},
                     {"last_cell", n.last_cell},
                     {"intervals", iv},
                     {"intervals_text", n.intervals_text},
                     {"attractor_cells", n.attractor_cells},
                     {"minimal", n.minimal},
                     {"maximal", n.maximal}});
  }
  json covers = json::array();
  for (const auto& [u, l] : r.covers) covers.push_back({u, l});
  j["morse_graph"] = {{"nodes", nodes}, {"covers", covers}};

  json conley = json::array();
  for (const auto& c : r.conley) {
    conley.push_back({{"label", c.label},
                      {"p0", c.p0},
                      {"p1", c.p1},
                      {"index", c.index_string()},
                      {"classification", c.classification},
                      {"homology_dims", c.homology_dims},
                      {"core_dims", c.core_dims},
                      {"invariant_factors", c.invariant_factors},
                      {"maps", c.maps},
                      {"downset_homology_dims", c.downset_homology_dims},
                      {"downset_maps", c.downset_maps}});
  }
  j["conley"] = conley;

  json conns = json::array();
  for (const auto& c : r.connections) {
    conns.push_back({{"upper", c.upper},
                     {"lower", c.lower},
                     {"connecting", c.connecting},
                     {"combined_index", c.combined_index},
                     {"sum_index", c.sum_index},
                     {"combined_invariant_factors", c.combined_invariant_factors},
                     {"sum_invariant_factors", c.sum_invariant_factors}});
  }
  j["connections"] = conns;
  j["timings"] = r.timings;
  return j;
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.config = j.at("config");
    const auto& m = j.at("model");
    r.model.samples = m.at("samples").get<std::size_t>();
    r.model.beta_hat = m.at("beta_hat").get<double>();
    r.model.sigma2_hat = m.at("sigma2_hat").get<double>();
    r.model.theta_hat = m.at("theta_hat").get<double>();
    r.model.jitter = m.at("jitter").get<double>();
    r.model.degenerate = m.at("degenerate").get<bool>();
    r.model.interpolation_residual = m.at("interpolation_residual").get<double>();

    const auto& dj = j.at("diagnostics");
    auto& d = r.diagnostics.enclosure;
    d.max_fiber_diameter = dj.at("max_fiber_diameter").get<double>();
    d.ell = dj.at("ell").get<double>();
    d.epsilon = dj.at("epsilon").get<double>();
    d.diameter_bound = dj.at("diameter_bound").get<double>();
    d.gamma = dj.at("gamma").get<double>();
    d.variance_bound = dj.at("variance_bound").get<double>();
    d.max_posterior_sd = dj.at("max_posterior_sd").get<double>();
    d.required_L = dj.at("required_L").get<double>();
    d.clipped_edges = dj.at("clipped_edges").get<std::size_t>();
    d.image_cells = dj.at("image_cells").get<std::size_t>();
    r.diagnostics.diameter_bound_holds = dj.at("diameter_bound_holds").get<bool>();
    r.diagnostics.selector_verified = dj.at("selector_verified").get<bool>();
    r.diagnostics.lattice_verified = dj.at("lattice_verified").get<bool>();
    r.diagnostics.index_pairs_agree = dj.at("index_pairs_agree").get<bool>();

    r.confidence_valid = j.at("confidence_valid").get<bool>();

    const auto& mg = j.at("morse_graph");
    for (const auto& n : mg.at("nodes")) {
      NodeReport nr;
      nr.label = n.at("label").get<std::string>();
      nr.cell_count = n.at("cell_count").get<std::size_t>();
      nr.first_cell = n.at("first_cell").get<std::size_t>();
      nr.last_cell = n.at("last_cell").get<std::size_t>();
      for (const auto& iv : n.at("intervals")) nr.intervals.push_back({iv.at(0).get<double>(), iv.at(1).get<double>()});
      nr.intervals_text = n.at("intervals_text").get<std::string>();
      nr.attractor_cells = n.at("attractor_cells").get<std::size_t>();
      nr.minimal = n.at("minimal").get<bool>();
      nr.maximal = n.at("maximal").get<bool>();
      r.nodes.push_back(std::move(nr));
    }
    for (const auto& c : mg.at("covers")) r.covers.emplace_back(c.at(0).get<std::string>(), c.at(1).get<std::string>());

    for (const auto& c : j.at("conley")) {
      IndexReport ir;
      ir.label = c.at("label").get<std::string>();
      ir.p0 = c.at("p0").get<std::string>();
      ir.p1 = c.at("p1").get<std::string>();
      ir.classification = c.at("classification").get<std::string>();
      ir.homology_dims = c.at("homology_dims").get<std::array<std::size_t, 2>>();
      ir.core_dims = c.at("core_dims").get<std::array<std::size_t, 2>>();
      ir.invariant_factors = c.at("invariant_factors").get<std::array<std::vector<std::string>, 2>>();
      ir.maps = c.at("maps").get<std::array<std::vector<std::vector<int>>, 2>>();
      ir.downset_homology_dims = c.at("downset_homology_dims").get<std::array<std::size_t, 2>>();
      ir.downset_maps = c.at("downset_maps").get<std::array<std::vector<std::vector<int>>, 2>>();
      r.conley.push_back(std::move(ir));
    }
    for (const auto& c : j.at("connections")) {
      ConnectionReport cr;
      cr.upper = c.at("upper").get<std::string>();
      cr.lower = c.at("lower").get<std::string>();
      cr.connecting = c.at("connecting").get<bool>();
      cr.combined_index = c.at("combined_index").get<std::string>();
      cr.sum_index = c.at("sum_index").get<std::string>();
      cr.combined_invariant_factors = c.at("combined_invariant_factors").get<std::array<std::vector<std::string>, 2>>();
      cr.sum_invariant_factors = c.at("sum_invariant_factors").get<std::array<std::vector<std::string>, 2>>();
      r.connections.push_back(std::move(cr));
    }
    r.timings = j.at("timings").get<std::map<std::string, double>>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

std::string serialize(const Report& r) { return to_json(r).dump(2) + "\n"; }

}  // namespace conleygp
