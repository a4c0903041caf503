#include "conleygp/validation.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

#include "conleygp/rng.hpp"

namespace conleygp {

std::vector<double> validation_grid(const Domain& domain, int B) {
  const std::size_t n = std::size_t{1} << (B + 1);
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    g[i] = domain.lower + domain.length() * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  g.back() = domain.upper;
  return g;
}

namespace {

TrialResult run_trial(const AnalysisConfig& config, const ValidationOptions& opt, const std::vector<double>& grid,
                      std::size_t t) {
  TrialResult tr;
  tr.trial = t;
  Rng seeds = Rng::stream(config.seed, t);
  tr.data_seed = seeds.next();
  const std::uint64_t path_master = seeds.next();
  try {
    AnalysisConfig cfg = config;
    cfg.seed = tr.data_seed;
    const TrainingData data = load_data(cfg);
    const auto es = build_enclosure(cfg, data, opt.z_scale);
    const Enclosure& enc = es.assembly.enclosure;
    tr.confidence_valid = enc.g_tilde_contained();
    tr.diameter_bound_holds = diameter_bound_holds(es.assembly.diagnostics);
    tr.theta_hat = es.model.theta_hat();

    const FiberProbe probe(enc, grid);
    if (const auto* f = cfg.truth()) {
      std::vector<Point> pts(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) pts[i] = {grid[i], evaluate(*f, grid[i])};
      const auto check = graph_inside(enc, pts);
      tr.truth_checked = true;
      tr.truth_inside = check.inside;
      tr.truth_violation = check.violation;
    }

    const PosteriorSampler sampler(es.model, grid);
    tr.sampler_rank = sampler.rank();
    const std::size_t batches = (opt.paths_per_trial + opt.batch - 1) / opt.batch;
    for (std::size_t b = 0; b < batches; ++b) {
      Rng rng = Rng::stream(path_master, b);
      const std::size_t count = std::min(opt.batch, opt.paths_per_trial - b * opt.batch);
      const Eigen::MatrixXd paths = sampler.draw_batch(rng, count);
      for (Eigen::Index c = 0; c < paths.cols(); ++c) {
        if (probe.contains(std::span<const double>(paths.col(c).data(), grid.size()))) ++tr.paths_inside;
      }
    }
    tr.posterior_coverage = static_cast<double>(tr.paths_inside) / static_cast<double>(opt.paths_per_trial);
    tr.ok = true;
  } catch (const std::exception& e) {
    tr.ok = false;
    tr.error = e.what();
  }
  return tr;
}

}  // namespace

ValidationSummary validate(const AnalysisConfig& config, const ValidationOptions& options) {
  if (options.trials == 0 || options.paths_per_trial == 0 || options.batch == 0) {
    throw ConfigError("validation needs positive trials, paths and batch size");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const auto grid = validation_grid(config.domain, config.B);

  ValidationSummary s;
  s.trials = options.trials;
  s.paths_per_trial = options.paths_per_trial;
  s.grid_points = grid.size();
  s.per_trial.resize(options.trials);

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, options.trials));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < options.trials;) s.per_trial[t] = run_trial(config, options, grid, t);
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  double sum = 0.0;
  s.min_posterior_coverage = 1.0;
  std::size_t truth_n = 0, truth_in = 0;
  for (const auto& tr : s.per_trial) {
    if (!tr.ok) {
      ++s.error_trials;
      continue;
    }
    ++s.ok_trials;
    if (tr.confidence_valid) ++s.valid_trials;
    sum += tr.posterior_coverage;
    s.min_posterior_coverage = std::min(s.min_posterior_coverage, tr.posterior_coverage);
    if (tr.truth_checked) {
      ++truth_n;
      if (tr.truth_inside) ++truth_in;
    }
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  s.mean_posterior_coverage = s.ok_trials ? sum / static_cast<double>(s.ok_trials) : nan;
  if (!s.ok_trials) s.min_posterior_coverage = nan;
  s.truth_coverage = truth_n ? static_cast<double>(truth_in) / static_cast<double>(truth_n) : nan;
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

nlohmann::json to_json(const ValidationSummary& s) {
  using nlohmann::json;
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json trials = json::array();
  for (const auto& t : s.per_trial) {
    json j = {{"trial", t.trial}, {"data_seed", t.data_seed}, {"ok", t.ok}};
    if (!t.ok) {
      j["error"] = t.error;
    } else {
      j["confidence_valid"] = t.confidence_valid;
      j["diameter_bound_holds"] = t.diameter_bound_holds;
      j["paths_inside"] = t.paths_inside;
      j["posterior_coverage"] = t.posterior_coverage;
      j["theta_hat"] = t.theta_hat;
      j["sampler_rank"] = t.sampler_rank;
      if (t.truth_checked) {
        j["truth_inside"] = t.truth_inside;
        if (t.truth_violation) j["truth_violation"] = {t.truth_violation->x, t.truth_violation->y};
      }
    }
    trials.push_back(std::move(j));
  }
  return {{"trials", s.trials},
          {"paths_per_trial", s.paths_per_trial},
          {"grid_points", s.grid_points},
          {"ok_trials", s.ok_trials},
          {"error_trials", s.error_trials},
          {"valid_trials", s.valid_trials},
          {"mean_posterior_coverage", num(s.mean_posterior_coverage)},
          {"min_posterior_coverage", num(s.min_posterior_coverage)},
          {"truth_coverage", num(s.truth_coverage)},
          {"seconds", s.seconds},
          {"per_trial", trials}};
}

}  // namespace conleygp
