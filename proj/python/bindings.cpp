// Python module: presets, single runs, experiments and the oracles.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "cscgd/errors.hpp"
#include "cscgd/harness/config.hpp"
#include "cscgd/harness/evaluation.hpp"
#include "cscgd/harness/experiment.hpp"
#include "cscgd/harness/statistics.hpp"
#include "cscgd/oracles/fstar.hpp"
#include "cscgd/oracles/hessian_scan.hpp"
#include "cscgd/queuing/mm1.hpp"
#include "cscgd/queuing/presets.hpp"
#include "cscgd/solver.hpp"

namespace py = pybind11;
using namespace cscgd;

namespace {

nlohmann::json parse(const std::string& text) {
  return text.empty() ? nlohmann::json::object() : nlohmann::json::parse(text);
}

py::dict constants_dict(const ProblemConstants& k) {
  py::dict d;
  d["C_f"] = k.C_f;
  d["L_f"] = k.L_f;
  d["C_g"] = k.C_g;
  d["V_g"] = k.V_g;
  d["C_h"] = k.C_h;
  d["V_h"] = k.V_h;
  d["C_q"] = k.C_q;
  d["L_q"] = k.L_q;
  d["D_x"] = k.D_x;
  return d;
}

py::dict record_dict(const TrajectoryRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["alpha"] = r.alpha;
  d["beta"] = r.beta;
  d["delta"] = r.delta;
  d["x"] = r.x;
  d["obj"] = r.objective_estimate;
  d["viol"] = r.constraint_estimates;
  d["step_sq"] = r.step_sq_norm;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Constrained stochastic compositional gradient descent";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def("preset_names", &queuing::preset_names);

  m.def(
      "preset_info",
      [](const std::string& name, const std::string& overrides) {
        const auto built = queuing::build_preset(name, parse(overrides));
        const auto& p = built.problem;
        py::dict d;
        d["name"] = built.name;
        d["instance"] = queuing::instance_to_json(built.instance).dump();
        d["dim_x"] = p.dim_x;
        d["num_constraints"] = p.num_constraints;
        d["lower"] = Vector(p.feasible_set.lower());
        d["upper"] = Vector(p.feasible_set.upper());
        d["default_c_ell"] = built.default_c_ell;
        d["constants"] = constants_dict(built.constants);
        return d;
      },
      py::arg("name"), py::arg("overrides") = "",
      "Dimensions, bounds, default C_ell and documented constants of a preset. Overrides are a JSON string.");

  m.def(
      "solve",
      [](const std::string& name, const std::string& overrides, double a, double b, double c,
         const std::string& regime, std::int64_t horizon, double gamma, std::optional<double> c_ell,
         std::uint64_t seed, std::optional<Vector> x0) {
        const auto built = queuing::build_preset(name, parse(overrides));
        SolverConfig cfg;
        cfg.schedule = StepSchedule(a, b, c, parse_regime(regime), horizon);
        cfg.penalty = PenaltyParams{gamma, c_ell.value_or(built.default_c_ell)};
        cfg.seed = seed;
        cfg.initial_x = x0;
        RunResult res;
        {
          py::gil_scoped_release release;
          res = run(built.problem, cfg);
        }
        py::list traj;
        for (const auto& r : res.trajectory) traj.append(record_dict(r));
        py::dict d;
        d["x_hat"] = res.x_hat;
        d["x_last"] = res.final_state.x;
        d["trajectory"] = traj;
        return d;
      },
      py::arg("preset"), py::arg("overrides") = "", py::arg("a") = 0.9167, py::arg("b") = 0.5,
      py::arg("c") = 0.75, py::arg("regime") = "constant", py::arg("horizon") = 10000, py::arg("gamma") = 0.0,
      py::arg("c_ell") = py::none(), py::arg("seed") = 0, py::arg("x0") = py::none(),
      "One solver run on a preset; returns the tail average and the logged trajectory.");

  m.def(
      "evaluate",
      [](const std::string& name, const std::string& overrides, const Vector& x, std::int64_t batch,
         std::uint64_t seed) {
        const auto built = queuing::build_preset(name, parse(overrides));
        RngStream rng(seed, harness::kEvaluationStream);
        const auto e = harness::evaluate(built.problem, x, batch, rng);
        py::dict d;
        d["F"] = e.F;
        d["F_se"] = e.F_se;
        d["Q"] = e.Q;
        d["max_Q"] = e.max_Q;
        return d;
      },
      py::arg("preset"), py::arg("overrides") = "", py::arg("x"), py::arg("batch") = 100000, py::arg("seed") = 1);

  m.def(
      "run_experiment",
      [](const std::string& config_json, bool write_files) {
        const auto cfg = harness::config_from_json(nlohmann::json::parse(config_json));
        harness::ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = harness::run_experiment(cfg, {0, write_files});
        }
        py::list runs;
        for (const auto& r : res.runs) {
          py::dict d;
          d["seed"] = r.seed;
          d["x_hat"] = r.x_hat;
          d["F"] = r.F;
          d["F_se"] = r.F_se;
          d["max_Q"] = r.max_Q;
          d["gap"] = r.gap ? py::cast(*r.gap) : py::none();
          d["f_tracked"] = r.f_tracked;
          runs.append(d);
        }
        py::dict out;
        out["hash"] = res.hash;
        out["f_star"] = res.oracle ? py::cast(res.oracle->f_star) : py::none();
        out["runs"] = runs;
        return out;
      },
      py::arg("config_json"), py::arg("write_files") = false,
      "Runs a configuration given as JSON text, the same keys as the CLI config file.");

  m.def("config_hash", [](const std::string& config_json) {
    return harness::config_hash(harness::config_from_json(nlohmann::json::parse(config_json)));
  });

  m.def("mm1_optimal_mu", &queuing::mm1_optimal_mu, py::arg("lam"), py::arg("r"), py::arg("h"));

  m.def("example1_fstar", [](const std::string& overrides) {
    const auto inst = std::get<queuing::Mg1WiredInstance>(queuing::make_instance("paper-ex1", parse(overrides)));
    const auto o = oracles::example1_fstar(inst);
    return py::make_tuple(o.f_star, o.x_star);
  }, py::arg("overrides") = "");

  m.def(
      "hessian_min_eigenvalue",
      [](int dof, double bandwidth, double floor, int nx, int ny) {
        const oracles::ErgodicSummand fn(bandwidth, dof, floor);
        const auto s = oracles::hessian_psd_scan(fn, {0.1, 15.0, nx, 14.0, 100.0, ny});
        return py::make_tuple(s.min_eigenvalue, s.argmin_x, s.argmin_y);
      },
      py::arg("dof") = 10, py::arg("bandwidth") = 10.0, py::arg("floor") = 0.25, py::arg("nx") = 51,
      py::arg("ny") = 51);

  m.def(
      "rate_fit",
      [](const std::vector<double>& horizons, const std::vector<std::vector<double>>& values, int min_seeds) {
        const auto f = harness::rate_fit(horizons, values, min_seeds);
        return py::make_tuple(f.slope, f.ci_low, f.ci_high);
      },
      py::arg("horizons"), py::arg("values"), py::arg("min_seeds") = 10,
      "Slope of log mean value against log T with its 95% interval.");

  m.def("mann_kendall", [](const std::vector<double>& series) {
    const auto mk = harness::mann_kendall(series);
    return py::make_tuple(mk.s, mk.z, mk.p_value);
  });
}
