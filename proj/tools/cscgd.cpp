// Command-line front end: run, oracle, ratefit, scan-hessian, check.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cscgd/errors.hpp"
#include "cscgd/harness/config.hpp"
#include "cscgd/harness/experiment.hpp"
#include "cscgd/harness/statistics.hpp"
#include "cscgd/oracles/finite_difference.hpp"
#include "cscgd/oracles/hessian_scan.hpp"
#include "cscgd/queuing/presets.hpp"

namespace h = cscgd::harness;

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  // "N" means seeds 1..N; "a,b,c" lists them.
  std::vector<std::uint64_t> out;
  if (text.find(',') == std::string::npos) {
    const auto n = std::stoull(text);
    for (std::uint64_t s = 1; s <= n; ++s) out.push_back(s);
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

std::string fmt(double v) { return h::format_double(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constrained stochastic compositional gradient descent for queuing design"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a multi-seed experiment");
  std::string config_path, preset, seeds, out_dir;
  std::int64_t horizon = 0;
  int threads = 0;
  bool no_gap = false;
  std::string cache_dir;
  run->add_option("config", config_path, "JSON config file");
  run->add_option("--preset", preset, "Preset name");
  run->add_option("--seeds", seeds, "Seed count N (seeds 1..N) or a comma-separated list");
  run->add_option("--horizon", horizon, "Iterations T");
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--threads", threads, "Worker threads (0: all cores)");
  run->add_option("--oracle-cache", cache_dir, "Oracle cache directory");
  run->add_flag("--no-gap", no_gap, "Do not report the optimality gap");

  auto* oracle = app.add_subcommand("oracle", "Compute and cache F* for a preset");
  std::string oracle_preset = "paper-ex1", oracle_cache = ".cscgd-cache";
  oracle->add_option("--preset", oracle_preset, "Preset name");
  oracle->add_option("--cache", oracle_cache, "Cache directory");

  auto* ratefit = app.add_subcommand("ratefit", "Fit gap and violation decay across horizons");
  std::string rf_config, rf_preset = "toy-quadratic", rf_horizons = "1000,10000,100000,1000000", rf_seeds = "10";
  double rf_a = 0.75, rf_b = 0.5, rf_c = 0.75;
  std::string rf_regime = "constant";
  ratefit->add_option("config", rf_config, "JSON config file (preset and steps)");
  ratefit->add_option("--preset", rf_preset, "Preset name");
  ratefit->add_option("--horizons", rf_horizons, "Comma-separated horizons");
  ratefit->add_option("--seeds", rf_seeds, "Seed count or list");
  ratefit->add_option("-a", rf_a);
  ratefit->add_option("-b", rf_b);
  ratefit->add_option("-c", rf_c);
  ratefit->add_option("--regime", rf_regime, "constant or diminishing");

  auto* scan = app.add_subcommand("scan-hessian", "Minimum Hessian eigenvalue of the ergodic summand over a grid");
  int dof = 10, nx = 51, ny = 51;
  double bandwidth = 10, floor = 0.25;
  std::string scan_out;
  scan->add_option("--dof", dof, "Chi-squared degrees of freedom");
  scan->add_option("--bandwidth", bandwidth);
  scan->add_option("--floor", floor, "Channel truncation point");
  scan->add_option("--nx", nx);
  scan->add_option("--ny", ny);
  scan->add_option("--out", scan_out, "Heatmap CSV path");

  auto* check = app.add_subcommand("check", "Shape and finite-difference gradient checks");
  std::vector<std::string> check_presets;
  int check_points = 100;
  check->add_option("--preset", check_presets, "Preset names (default: all)");
  check->add_option("--points", check_points, "Random interior points per preset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      h::ExperimentConfig cfg = config_path.empty() ? h::ExperimentConfig{} : h::load_config(config_path);
      nlohmann::json j = h::config_to_json(cfg);
      if (!preset.empty()) j["preset"] = preset;
      if (!seeds.empty()) j["seeds"] = parse_seeds(seeds);
      if (horizon) j["horizon"] = horizon;
      if (!out_dir.empty()) j["output_dir"] = out_dir;
      if (!cache_dir.empty()) j["oracle_cache"] = cache_dir;
      if (no_gap) j["gap"] = false;
      cfg = h::config_from_json(j);
      const auto res = h::run_experiment(cfg, {threads, true});
      std::vector<double> gap, viol;
      for (const auto& r : res.runs) {
        if (r.gap) gap.push_back(*r.gap);
        viol.push_back(r.max_Q);
      }
      std::cout << "preset " << cfg.preset << "  config " << res.hash << "  seeds " << cfg.seeds.size() << '\n';
      if (res.oracle) std::cout << "F* " << fmt(res.oracle->f_star) << " (" << res.oracle->method << ")\n";
      if (!gap.empty()) std::cout << "gap mean " << fmt(h::mean(gap)) << " std " << fmt(h::sample_std(gap)) << '\n';
      std::cout << "max violation mean " << fmt(h::mean(viol)) << " std " << fmt(h::sample_std(viol)) << '\n';
      std::cout << "wrote " << cfg.output_dir << '\n';
    } else if (*oracle) {
      const auto built = cscgd::queuing::build_preset(oracle_preset);
      const auto v = h::compute_oracle(built);
      const auto path = h::oracle_cache_path(oracle_cache, built);
      h::store_oracle(path, v);
      std::cout << "F* " << fmt(v.f_star) << " (" << v.method << ")\nx* ";
      for (Eigen::Index i = 0; i < v.x_star.size(); ++i) std::cout << fmt(v.x_star[i]) << ' ';
      std::cout << "\ncached " << path << '\n';
    } else if (*ratefit) {
      h::ExperimentConfig cfg = rf_config.empty() ? h::ExperimentConfig{} : h::load_config(rf_config);
      if (rf_config.empty()) {
        cfg.preset = rf_preset;
        cfg.a = rf_a;
        cfg.b = rf_b;
        cfg.c = rf_c;
        cfg.regime = cscgd::parse_regime(rf_regime);
        cfg.eval_batch = 2;
      }
      cfg.seeds = parse_seeds(rf_seeds);
      std::vector<std::int64_t> hz;
      for (auto v : parse_seeds(rf_horizons + ",")) hz.push_back(static_cast<std::int64_t>(v));
      const auto ladder = h::rate_ladder(cfg, hz);
      for (const auto& [name, data] : {std::pair{"gap", &ladder.gap}, std::pair{"violation", &ladder.violation}}) {
        const auto fit = h::rate_fit(ladder.horizons, *data);
        std::cout << name << " slope " << fmt(fit.slope) << " 95% CI [" << fmt(fit.ci_low) << ", "
                  << fmt(fit.ci_high) << "]" << (fit.floored ? " (floored at 1e-12)" : "") << '\n';
      }
    } else if (*scan) {
      const cscgd::oracles::ErgodicSummand fn(bandwidth, dof, floor);
      const auto res = cscgd::oracles::hessian_psd_scan(fn, {0.1, 15.0, nx, 14.0, 100.0, ny});
      std::cout << "min eigenvalue " << fmt(res.min_eigenvalue) << " at (" << fmt(res.argmin_x) << ", "
                << fmt(res.argmin_y) << ")  " << (res.psd ? "PSD" : "not PSD") << '\n';
      if (!scan_out.empty()) {
        std::ofstream out(scan_out, std::ios::binary | std::ios::trunc);
        out << res.heatmap_csv();
      }
    } else if (*check) {
      if (check_presets.empty()) check_presets = cscgd::queuing::preset_names();
      bool ok = true;
      cscgd::RngStream rng(2024, 3);
      for (const auto& name : check_presets) {
        const auto built = cscgd::queuing::build_preset(name);
        cscgd::check_shapes(built.problem, rng);
        for (const auto& r : cscgd::oracles::gradient_suite(built.problem, check_points, rng)) {
          const bool pass = r.max_rel_err < 1e-5;
          ok = ok && pass;
          std::cout << (pass ? "[ok]   " : "[FAIL] ") << name << ' ' << r.map << " max rel err " << fmt(r.max_rel_err)
                    << " (" << r.points << " points, " << r.skipped << " skipped)\n";
        }
      }
      return ok ? 0 : 1;
    }
  } catch (const cscgd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
