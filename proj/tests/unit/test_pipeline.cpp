#include <fstream>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "conleygp/pipeline.hpp"
#include "conleygp/svg.hpp"

using namespace conleygp;
using nlohmann::json;

namespace {

const std::filesystem::path kSource = CONLEYGP_SOURCE_DIR;

json bist_json(std::uint64_t seed) {
  return json{{"schema", "conleygp.analysis/1"},
              {"domain", {0.0, 1.0}},
              {"B", 9},
              {"data",
               {{"synthetic",
                 {{"function", {{"type", "arctan_sigmoid"}, {"scale", 0.3}, {"slope", 8.0}, {"shift", 4.0}, {"offset", 0.5}}},
                  {"samples", 8}}}}},
              {"seed", seed}};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal XML checker: balanced tags, quoted attributes, no stray '<'.
bool well_formed(const std::string& s, std::string& why) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  if (s.rfind("<?xml", 0) == 0) i = s.find("?>") + 2;
  bool root_closed = false;
  while (i < s.size()) {
    const auto lt = s.find('<', i);
    if (lt == std::string::npos) break;
    if (s.find('>', i) < lt) {
      why = "stray '>'";
      return false;
    }
    const auto gt = s.find('>', lt);
    if (gt == std::string::npos) {
      why = "unterminated tag";
      return false;
    }
    std::string tag = s.substr(lt + 1, gt - lt - 1);
    if (tag.find('<') != std::string::npos) {
      why = "'<' inside tag";
      return false;
    }
    if (tag.rfind("!--", 0) == 0) {
      i = s.find("-->", lt) + 3;
      continue;
    }
    if (root_closed) {
      why = "content after root";
      return false;
    }
    std::size_t quotes = 0;
    for (char c : tag) quotes += c == '"';
    if (quotes % 2) {
      why = "unbalanced quotes in <" + tag + ">";
      return false;
    }
    if (tag[0] == '/') {
      const auto name = tag.substr(1);
      if (stack.empty() || stack.back() != name) {
        why = "mismatched </" + name + ">";
        return false;
      }
      stack.pop_back();
      root_closed = stack.empty();
    } else if (tag.back() != '/') {
      stack.push_back(tag.substr(0, tag.find_first_of(" \t\n")));
    }
    i = gt + 1;
  }
  if (!stack.empty()) why = "unclosed <" + stack.back() + ">";
  return stack.empty() && root_closed;
}

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST(Config, ParsesShippedConfigs) {
  for (const char* name : {"bistability", "period2", "connecting", "chaos"}) {
    const auto c = load_config(kSource / "configs" / (std::string(name) + ".json"));
    EXPECT_NE(c.truth(), nullptr) << name;
    EXPECT_EQ(c.L, 8.0);
    EXPECT_EQ(c.budget.delta_total, 0.05);
  }
  const auto chaos = load_config(kSource / "configs" / "chaos.json");
  EXPECT_EQ(chaos.domain, Domain::make(-0.2, 2.3));
  EXPECT_EQ(chaos.B, 10);
}

TEST(Config, RoundTrip) {
  auto j = bist_json(3);
  j["weights"] = json::array({{{"lower", 0.4}, {"upper", 0.6}, {"weight", 4.0}}});
  j["selector"] = "rightmost";
  j["lipschitz_share"] = 0.99;
  j["kernel"] = {{"theta_bounds", {1e-3, 10.0}}, {"jitter", 1e-9}};
  const auto c = parse_config(j);
  const auto echo = config_to_json(c);
  EXPECT_EQ(config_to_json(parse_config(echo)), echo);
  EXPECT_EQ(c.selector, ChainSelector::Rule::rightmost);
  EXPECT_EQ(c.weights.size(), 1u);
  EXPECT_DOUBLE_EQ(c.budget.lipschitz_share, 0.99);
  EXPECT_DOUBLE_EQ(c.kernel.jitter, 1e-9);
}

TEST(Config, Rejections) {
  auto bad = [](json j) { EXPECT_THROW(parse_config(j), ConfigError) << j.dump(); };
  auto j = bist_json(0);
  j["colour"] = "blue";
  bad(j);
  j = bist_json(0);
  j.erase("B");
  bad(j);
  j = bist_json(0);
  j["B"] = 1;
  bad(j);
  j = bist_json(0);
  j["domain"] = {1.0, 0.0};
  bad(j);
  j = bist_json(0);
  j["delta_total"] = 1.5;
  bad(j);
  j = bist_json(0);
  j["L"] = -1.0;
  bad(j);
  j = bist_json(0);
  j["selector"] = "middle";
  bad(j);
  j = bist_json(0);
  j["data"]["synthetic"]["function"]["type"] = "tent";
  bad(j);
  j = bist_json(0);
  j["schema"] = "conleygp.analysis/99";
  bad(j);
  EXPECT_THROW(load_config(kSource / "configs" / "missing.json"), Error);
}

TEST(Config, CsvPathsResolveAgainstConfigDir) {
  const auto dir = std::filesystem::temp_directory_path() / "conleygp_cfg_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "pts.csv") << "x,y\n0.1,0.2\n0.5,0.6\n0.9,0.3\n";
    json j = {{"domain", {0.0, 1.0}}, {"B", 6}, {"data", {{"csv", "pts.csv"}}}};
    std::ofstream(dir / "c.json") << j.dump();
  }
  const auto c = load_config(dir / "c.json");
  ASSERT_TRUE(std::holds_alternative<CsvSource>(c.data));
  EXPECT_EQ(std::get<CsvSource>(c.data).path, dir / "pts.csv");
  EXPECT_EQ(c.truth(), nullptr);
  EXPECT_EQ(load_data(c).size(), 3u);
  std::filesystem::remove_all(dir);
}

TEST(Pipeline, DeterministicReports) {
  const auto c = parse_config(bist_json(4));
  const RunOptions opts{.timings = false};
  const auto a = serialize(run(c, opts).report);
  const auto b = serialize(run(c, opts).report);
  EXPECT_EQ(a, b);
  const auto timed = run(c).report;
  EXPECT_GT(timed.timings.at("total"), 0.0);
}

TEST(Pipeline, ReportShape) {
  const auto r = run(parse_config(bist_json(4)), {.timings = false}).report;
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"confidence_valid", "config", "conley", "connections", "diagnostics",
                                            "model", "morse_graph", "timings"}));
  EXPECT_EQ(report_from_json(j), r);
  EXPECT_EQ(report_from_json(json::parse(serialize(r))), r);
  EXPECT_THROW(report_from_json(json{{"config", 1}}), DataError);
}

TEST(Pipeline, GoldenReport) {
  // written by `conleygp analyze --config configs/bistability.json --seed 6 --deterministic`
  const auto golden = kSource / "tests" / "golden" / "bistability_seed6.json";
  const auto r = run(parse_config(bist_json(6)), {.timings = false}).report;
  EXPECT_EQ(serialize(r), read_file(golden));
  EXPECT_TRUE(r.confidence_valid);
  const auto* idx = r.index("M2");
  ASSERT_NE(idx, nullptr);
  EXPECT_EQ(idx->index_string(), "(0, x - 1)");
  EXPECT_EQ(r.node("M2")->intervals.size(), 4u);
  EXPECT_EQ(r.index("M0")->classification, "fixed_point");
  EXPECT_EQ(r.index("nope"), nullptr);
}

TEST(Pipeline, InvalidConfidenceIsReported) {
  // Lipschitz cap far below the true slope of the data
  auto j = bist_json(4);
  j["domain"] = {0.0, 1.0};
  j["B"] = 6;
  j["L"] = 2.5;
  j["data"]["synthetic"]["function"] = {{"type", "logistic"}, {"r", 4.0}};
  j["data"]["synthetic"]["samples"] = 30;
  try {
    const auto a = run(parse_config(j), {.timings = false});
    EXPECT_FALSE(a.report.confidence_valid);
  } catch (const StageError& e) {
    EXPECT_TRUE(e.ray_validity());
    EXPECT_GT(e.required_L(), 2.5);
  }
}

TEST(Pipeline, DiagnosticsConsistent) {
  const auto a = run(parse_config(bist_json(4)), {.timings = false});
  const auto& d = a.report.diagnostics;
  EXPECT_TRUE(d.selector_verified);
  EXPECT_TRUE(d.lattice_verified);
  EXPECT_TRUE(d.index_pairs_agree);
  EXPECT_EQ(d.diameter_bound_holds, diameter_bound_holds(a.diagnostics));
  EXPECT_EQ(a.report.nodes.size(), a.morse.size());
  EXPECT_EQ(a.report.conley.size(), a.morse.size());
  std::size_t covers = 0;
  for (const auto& cv : a.morse.covers) covers += cv.size();
  EXPECT_EQ(a.report.connections.size(), covers);
}

TEST(Svg, PerCellRectsAndStructure) {
  const auto a = run(parse_config(bist_json(4)), {.timings = false});
  const auto svg = render_svg(a.report, a.enclosure, a.data, a.model);
  std::size_t cells = 0;
  for (const auto& r : a.enclosure.fibers().image) cells += r.size();
  EXPECT_EQ(count(svg, "class=\"g-cell\""), cells);
  std::size_t bars = 0;
  for (const auto& node : a.report.nodes) bars += node.intervals.size();
  EXPECT_EQ(count(svg, "class=\"morse-bar\""), bars);
  std::string why;
  EXPECT_TRUE(well_formed(svg, why)) << why;
  EXPECT_NE(svg.find("xmlns=\"http://www.w3.org/2000/svg\""), std::string::npos);
  EXPECT_EQ(svg.find("href"), std::string::npos);
  EXPECT_EQ(svg.find("url("), std::string::npos);
  for (const auto& node : a.report.nodes) EXPECT_NE(svg.find(">" + node.label), std::string::npos);
}

TEST(Svg, ColumnModeAboveLimit) {
  const auto a = run(parse_config(bist_json(4)), {.timings = false});
  const auto scene = build_scene(a.report, a.enclosure, a.data, a.model, {.max_cell_rects = 10});
  EXPECT_FALSE(scene.per_cell);
  EXPECT_EQ(scene.cells.size(), a.enclosure.complex().edge_count());
  const auto svg = scene.to_svg();
  EXPECT_EQ(count(svg, "class=\"g-column\""), a.enclosure.complex().edge_count());
  std::string why;
  EXPECT_TRUE(well_formed(svg, why)) << why;
}

TEST(Svg, EmptyMorseGraphStillRenders) {
  auto a = run(parse_config(bist_json(4)), {.timings = false});
  auto rep = a.report;
  rep.nodes.clear();
  rep.conley.clear();
  rep.connections.clear();
  rep.covers.clear();
  const auto svg = render_svg(rep, a.enclosure, a.data, a.model);
  std::string why;
  EXPECT_TRUE(well_formed(svg, why)) << why;
  EXPECT_EQ(count(svg, "class=\"morse-bar\""), 0u);
}

TEST(Svg, WellFormedCheckerRejectsBrokenXml) {
  std::string why;
  EXPECT_FALSE(well_formed("<svg><g></svg>", why));
  EXPECT_FALSE(well_formed("<svg a=\"1></svg>", why));
  EXPECT_TRUE(well_formed("<svg><g/><rect x=\"1\"></rect></svg>", why));
}
