// conleygp analyze | validate

#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "conleygp/pipeline.hpp"
#include "conleygp/svg.hpp"
#include "conleygp/validation.hpp"

namespace {

using namespace conleygp;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

AnalysisConfig load(const Common& c) {
  AnalysisConfig cfg = load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

void summarize(const Report& r) {
  std::fprintf(stderr, "theta_hat %.6g  sigma2_hat %.6g  beta_hat %.6g\n", r.model.theta_hat, r.model.sigma2_hat,
               r.model.beta_hat);
  std::fprintf(stderr, "confidence_valid %s  max fiber diameter %.6g (bound %.6g)\n",
               r.confidence_valid ? "true" : "false", r.diagnostics.enclosure.max_fiber_diameter,
               r.diagnostics.enclosure.diameter_bound);
  for (const auto& c : r.conley) {
    const auto* n = r.node(c.label);
    std::string iv = n->intervals_text;
    if (iv.size() > 100) iv = iv.substr(0, 100) + " ... (" + std::to_string(n->intervals.size()) + " intervals)";
    std::fprintf(stderr, "%-4s %-22s %-18s %s\n", c.label.c_str(), c.index_string().c_str(), c.classification.c_str(),
                 iv.c_str());
  }
  for (const auto& c : r.connections) {
    std::fprintf(stderr, "%s > %s  connecting %s\n", c.upper.c_str(), c.lower.c_str(), c.connecting ? "yes" : "no");
  }
}

int analyze(const Common& common, const std::string& out, const std::string& svg, bool deterministic) {
  const AnalysisConfig cfg = load(common);
  RunOptions opt;
  opt.timings = !deterministic;
  const Analysis a = run(cfg, opt);
  const std::string text = serialize(a.report);

  std::optional<std::filesystem::path> report_path = cfg.report_path;
  if (!out.empty()) report_path = out;
  if (report_path) write_text_file(*report_path, text);
  else std::cout << text;

  std::optional<std::filesystem::path> svg_path = cfg.svg_path;
  if (!svg.empty()) svg_path = svg;
  if (svg_path) write_text_file(*svg_path, render_svg(a.report, a.enclosure, a.data, a.model));

  if (!common.quiet) summarize(a.report);
  return a.report.confidence_valid ? 0 : 2;
}

int validate_cmd(const Common& common, const ValidationOptions& opt, const std::string& out) {
  const AnalysisConfig cfg = load(common);
  const ValidationSummary s = validate(cfg, opt);
  const std::string text = to_json(s).dump(2) + "\n";
  if (!out.empty()) write_text_file(out, text);
  else std::cout << text;
  if (!common.quiet) {
    std::fprintf(stderr, "trials %zu (ok %zu, errors %zu, confidence_valid %zu)\n", s.trials, s.ok_trials,
                 s.error_trials, s.valid_trials);
    std::fprintf(stderr, "mean posterior coverage %.4f  min %.4f  truth coverage %.4f  (%.1f s)\n",
                 s.mean_posterior_coverage, s.min_posterior_coverage, s.truth_coverage, s.seconds);
  }
  return s.ok_trials ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Conley index analysis of GP surrogates of 1D maps"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", common.seed, "override the config seed");
    sub->add_flag("--quiet", common.quiet, "no summary on stderr");
  };

  std::string out, svg;
  bool deterministic = false;
  auto* an = app.add_subcommand("analyze", "run the pipeline and write a report");
  add_common(an);
  an->add_option("--out", out, "report path (default: config outputs.report, else stdout)");
  an->add_option("--svg", svg, "figure path");
  an->add_flag("--deterministic", deterministic, "zero the timings so reports are byte-reproducible");

  ValidationOptions vopt;
  auto* va = app.add_subcommand("validate", "Monte Carlo coverage of the enclosure");
  add_common(va);
  va->add_option("--trials", vopt.trials, "independent fits")->required()->check(CLI::PositiveNumber);
  va->add_option("--paths", vopt.paths_per_trial, "posterior paths per fit")->required()->check(CLI::PositiveNumber);
  va->add_option("--threads", vopt.threads, "worker threads (0 = all cores)");
  va->add_option("--out", out, "summary path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 1);
  }

  try {
    if (*an) return analyze(common, out, svg, deterministic);
    return validate_cmd(common, vopt, out);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
