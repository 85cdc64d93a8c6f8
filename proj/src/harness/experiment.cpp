#include "cscgd/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "cscgd/errors.hpp"
#include "cscgd/harness/evaluation.hpp"
#include "cscgd/harness/statistics.hpp"
#include "cscgd/oracles/fstar.hpp"
#include "cscgd/oracles/local_baseline.hpp"

namespace cscgd::harness {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

/// Runs fn(i) for i in [0, count) on a small pool; rethrows the first error.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex m;
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(m);
        if (!error) error = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double max_violation(const TrajectoryRecord& r) {
  return r.constraint_estimates.size() ? r.constraint_estimates.maxCoeff() : 0.0;
}

}  // namespace

std::optional<OracleValue> inline_oracle(const queuing::BuiltPreset& preset) {
  return std::visit(
      Overloaded{
          [](const queuing::Mg1WiredInstance& i) -> std::optional<OracleValue> {
            const auto o = oracles::example1_fstar(i);
            return OracleValue{o.f_star, o.x_star, "deterministic-program", false};
          },
          [](const queuing::Mm1Instance& i) -> std::optional<OracleValue> {
            const double mu = queuing::mm1_optimal_mu(i.lambda, i.r, i.h);
            return OracleValue{-queuing::mm1_utility(mu, i.lambda, i.r, i.h), Vector::Constant(1, mu), "closed-form",
                               false};
          },
          [](const queuing::ToyQuadraticInstance& i) -> std::optional<OracleValue> {
            const auto o = queuing::toy_quadratic_optimum(i);
            return OracleValue{o.value, o.x, "closed-form", false};
          },
          [](const auto&) -> std::optional<OracleValue> { return std::nullopt; },
      },
      preset.instance);
}

OracleValue compute_oracle(const queuing::BuiltPreset& preset) {
  if (auto v = inline_oracle(preset)) return *v;
  if (const auto* i = std::get_if<queuing::Mg1ErgodicInstance>(&preset.instance)) {
    const auto g = oracles::example2_fstar(*i, 100000, 13);
    return OracleValue{g.best_value, g.best_point, "grid-search", true};
  }
  oracles::LocalBaselineOptions opt;
  opt.penalty.c_ell = preset.default_c_ell;
  const auto b = oracles::local_baseline(preset.problem, opt);
  return OracleValue{b.value, b.x, "local-baseline", true};
}

std::string oracle_cache_path(const std::string& dir, const queuing::BuiltPreset& preset) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(queuing::instance_to_json(preset.instance).dump())));
  return (fs::path(dir) / (preset.name + "-" + buf + ".json")).string();
}

std::optional<OracleValue> load_oracle(const std::string& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  const json j = json::parse(in);
  OracleValue v;
  v.f_star = j.at("f_star").get<double>();
  const auto xs = j.at("x_star").get<std::vector<double>>();
  v.x_star = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  v.method = j.at("method").get<std::string>();
  v.mc_based = j.at("mc_based").get<bool>();
  return v;
}

void store_oracle(const std::string& path, const OracleValue& v) {
  fs::create_directories(fs::path(path).parent_path());
  const json j = {{"f_star", v.f_star}, {"x_star", to_std(v.x_star)}, {"method", v.method}, {"mc_based", v.mc_based}};
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path);
}

SolverConfig solver_config(const ExperimentConfig& config, const queuing::BuiltPreset& preset, std::uint64_t seed,
                           std::int64_t horizon) {
  SolverConfig s;
  s.schedule = StepSchedule(config.a, config.b, config.c, config.regime, horizon);
  s.penalty.gamma = config.gamma;
  s.penalty.c_ell = config.c_ell.value_or(preset.default_c_ell);
  s.penalty.validate();
  s.seed = seed;
  s.cadence = config.full_trajectory ? LogCadence::Every : LogCadence::Auto;
  return s;
}

CsvWriter trajectory_csv(const std::vector<TrajectoryRecord>& traj, Eigen::Index constraints) {
  std::vector<std::string> header{"t", "alpha", "beta", "delta", "obj"};
  for (Eigen::Index j = 0; j < constraints; ++j) header.push_back("viol_" + std::to_string(j + 1));
  header.push_back("step_sq");
  CsvWriter w(header);
  for (const auto& r : traj) {
    std::vector<std::string> cells{std::to_string(r.t), format_double(r.alpha), format_double(r.beta),
                                   format_double(r.delta), format_double(r.objective_estimate)};
    for (Eigen::Index j = 0; j < constraints; ++j) cells.push_back(format_double(r.constraint_estimates[j]));
    cells.push_back(format_double(r.step_sq_norm));
    w.row(cells);
  }
  return w;
}

CsvWriter summary_csv(const std::vector<std::vector<TrajectoryRecord>>& trajs) {
  CsvWriter w({"t", "mean_obj", "std_obj", "mean_viol", "std_viol", "mean_step_sq", "std_step_sq"});
  if (trajs.empty()) return w;
  for (std::size_t k = 0; k < trajs.front().size(); ++k) {
    std::vector<double> obj, viol, step;
    for (const auto& tr : trajs) {
      obj.push_back(tr[k].objective_estimate);
      viol.push_back(max_violation(tr[k]));
      step.push_back(tr[k].step_sq_norm);
    }
    w.row({std::to_string(trajs.front()[k].t), format_double(mean(obj)), format_double(sample_std(obj)),
           format_double(mean(viol)), format_double(sample_std(viol)), format_double(mean(step)),
           format_double(sample_std(step))});
  }
  return w;
}

std::vector<std::size_t> log_subsample(const std::vector<std::int64_t>& ts, int max_points) {
  std::vector<std::size_t> out;
  if (ts.empty()) return out;
  if (static_cast<int>(ts.size()) <= max_points || max_points < 2) {
    for (std::size_t i = 0; i < ts.size(); ++i) out.push_back(i);
    return out;
  }
  const double l0 = std::log(static_cast<double>(ts.front()));
  const double l1 = std::log(static_cast<double>(ts.back()));
  for (int k = 0; k < max_points; ++k) {
    const double target = std::exp(l0 + (l1 - l0) * k / (max_points - 1));
    auto it = std::lower_bound(ts.begin(), ts.end(), target);
    std::size_t i = static_cast<std::size_t>(it - ts.begin());
    if (i == ts.size()) i = ts.size() - 1;
    if (i > 0 && target - static_cast<double>(ts[i - 1]) < static_cast<double>(ts[i]) - target) --i;
    if (out.empty() || out.back() != i) out.push_back(i);
  }
  out.front() = 0;
  if (out.back() != ts.size() - 1) out.push_back(ts.size() - 1);
  return out;
}

CsvWriter plot_csv(const std::vector<std::vector<TrajectoryRecord>>& trajs, std::optional<double> f_star,
                   int max_points) {
  CsvWriter w({"t", f_star ? "mean_gap" : "mean_obj", f_star ? "std_gap" : "std_obj", "mean_violation",
               "std_violation"});
  if (trajs.empty()) return w;
  std::vector<std::int64_t> ts;
  for (const auto& r : trajs.front()) ts.push_back(r.t);
  for (std::size_t k : log_subsample(ts, max_points)) {
    std::vector<double> gap, viol;
    for (const auto& tr : trajs) {
      gap.push_back(tr[k].objective_estimate - f_star.value_or(0.0));
      viol.push_back(max_violation(tr[k]));
    }
    w.row({std::to_string(ts[k]), format_double(mean(gap)), format_double(sample_std(gap)), format_double(mean(viol)),
           format_double(sample_std(viol))});
  }
  return w;
}

namespace {

std::optional<OracleValue> resolve_oracle(const ExperimentConfig& config, const queuing::BuiltPreset& preset) {
  if (!config.gap) return std::nullopt;
  if (auto v = inline_oracle(preset)) return v;
  if (auto v = load_oracle(oracle_cache_path(config.oracle_cache, preset))) return v;
  throw ConfigError("no oracle value for preset '" + config.preset + "' in cache '" + config.oracle_cache +
                    "'; run `cscgd oracle --preset " + config.preset + "` first or set \"gap\": false");
}

RunSummary summarize(const ExperimentConfig& config, const queuing::BuiltPreset& preset,
                     const std::optional<OracleValue>& oracle, std::uint64_t seed, const RunResult& res) {
  RunSummary s;
  s.seed = seed;
  s.x_hat = res.x_hat;
  RngStream rng(seed, kEvaluationStream);
  const Evaluation e = evaluate(preset.problem, res.x_hat, config.eval_batch, rng);
  s.F = e.F;
  s.F_se = e.F_se;
  s.max_Q = preset.problem.num_constraints ? e.max_Q : 0.0;
  s.max_Q_se = e.max_Q_se;
  s.f_tracked = res.trajectory.back().objective_estimate;
  if (oracle) {
    if (oracle->mc_based) {
      RngStream paired(seed, kEvaluationStream);
      const Evaluation b = evaluate(preset.problem, oracle->x_star, config.eval_batch, paired);
      s.gap = e.F - b.F;
      s.gap_se = std::hypot(e.F_se, b.F_se);
    } else {
      s.gap = e.F - oracle->f_star;
      s.gap_se = e.F_se;
    }
  }
  return s;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  ExperimentResult out;
  out.config = config;
  out.hash = config_hash(config);
  out.preset = queuing::build_preset(config.preset, config.instance);
  out.oracle = resolve_oracle(config, out.preset);
  const std::size_t n = config.seeds.size();
  out.runs.resize(n);
  out.trajectories.resize(n);
  parallel_for(n, options.threads, [&](std::size_t k) {
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t seed = config.seeds[k];
    RunResult res = run(out.preset.problem, solver_config(config, out.preset, seed, config.horizon));
    out.runs[k] = summarize(config, out.preset, out.oracle, seed, res);
    out.runs[k].config_hash = out.hash;
    out.runs[k].wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.trajectories[k] = std::move(res.trajectory);
  });

  if (!options.write_files) return out;
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json", std::ios::binary | std::ios::trunc);
    cfg << content_config(config) << '\n';
  }
  const Eigen::Index j = out.preset.problem.num_constraints;
  for (std::size_t k = 0; k < n; ++k) {
    trajectory_csv(out.trajectories[k], j).save((dir / ("trajectory_seed" + std::to_string(config.seeds[k]) + ".csv")).string());
  }
  std::vector<std::string> header{"seed", "F", "F_se", "max_Q", "max_Q_se", "gap", "gap_se", "f_tracked"};
  for (Eigen::Index i = 0; i < out.preset.problem.dim_x; ++i) header.push_back("x_hat_" + std::to_string(i + 1));
  header.push_back("config_hash");
  CsvWriter runs(header);
  for (const auto& s : out.runs) {
    std::vector<std::string> cells{std::to_string(s.seed), format_double(s.F), format_double(s.F_se),
                                   format_double(s.max_Q), format_double(s.max_Q_se),
                                   s.gap ? format_double(*s.gap) : "", s.gap_se ? format_double(*s.gap_se) : "",
                                   format_double(s.f_tracked)};
    for (Eigen::Index i = 0; i < s.x_hat.size(); ++i) cells.push_back(format_double(s.x_hat[i]));
    cells.push_back(s.config_hash);
    runs.row(cells);
  }
  runs.save((dir / "runs.csv").string());
  summary_csv(out.trajectories).save((dir / "summary.csv").string());
  std::optional<double> f_star;
  if (out.oracle) f_star = out.oracle->f_star;
  plot_csv(out.trajectories, f_star).save((dir / "plot.csv").string());
  return out;
}

RateLadder rate_ladder(const ExperimentConfig& base, const std::vector<std::int64_t>& horizons, int threads) {
  const auto preset = queuing::build_preset(base.preset, base.instance);
  const auto oracle = inline_oracle(preset);
  if (!oracle) throw ConfigError("rate_ladder needs a preset with a closed-form or deterministic oracle");
  RateLadder out;
  const std::size_t ns = base.seeds.size();
  out.gap.assign(horizons.size(), std::vector<double>(ns));
  out.violation.assign(horizons.size(), std::vector<double>(ns));
  out.trajectories.assign(horizons.size(), std::vector<std::vector<TrajectoryRecord>>(ns));
  for (auto h : horizons) out.horizons.push_back(static_cast<double>(h));
  parallel_for(horizons.size() * ns, threads, [&](std::size_t idx) {
    const std::size_t k = idx / ns;
    const std::size_t s = idx % ns;
    RunResult res = run(preset.problem, solver_config(base, preset, base.seeds[s], horizons[k]));
    RngStream rng(base.seeds[s], kEvaluationStream);
    const Evaluation e = evaluate(preset.problem, res.x_hat, base.eval_batch, rng);
    out.gap[k][s] = std::abs(e.F - oracle->f_star);
    out.violation[k][s] = preset.problem.num_constraints ? e.max_Q : 0.0;
    out.trajectories[k][s] = std::move(res.trajectory);
  });
  return out;
}

}  // namespace cscgd::harness
