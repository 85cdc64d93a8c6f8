#include "cscgd/queuing/presets.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cscgd/distributions.hpp"
#include "cscgd/errors.hpp"

namespace cscgd::queuing {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

json vec(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vec(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector rep(double v, Eigen::Index n) { return Vector::Constant(n, v); }

Vector list(std::initializer_list<double> v) {
  return Eigen::Map<const Vector>(v.begin(), static_cast<Eigen::Index>(v.size()));
}

// Reads a field, with a message that names it.
template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing instance field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad instance field '") + key + "': " + e.what());
  }
}

Vector vfield(const json& j, const char* key) { return vec(json(field<std::vector<double>>(j, key))); }

json to_json_impl(const Mg1WiredInstance& i) {
  return {{"kind", "mg1-wired"},
          {"capacity", vec(i.capacity)},
          {"lambda_min", i.lambda_min},
          {"lambda_max", vec(i.lambda_max)},
          {"lambda_lim", i.lambda_lim},
          {"d_max", i.d_max},
          {"psi_bar", vec(i.psi_bar)},
          {"phi_bar", vec(i.phi_bar)},
          {"mean_length", vec(i.mean_length)},
          {"max_length", vec(i.max_length)},
          {"capacity_margin", i.capacity_margin},
          {"strict_capacity_margin", i.strict_capacity_margin},
          {"denominator_margin", i.denominator_margin},
          {"log_floor", i.log_floor}};
}

Mg1WiredInstance wired_from(const json& j) {
  Mg1WiredInstance i;
  i.capacity = vfield(j, "capacity");
  i.lambda_min = field<double>(j, "lambda_min");
  i.lambda_max = vfield(j, "lambda_max");
  i.lambda_lim = field<double>(j, "lambda_lim");
  i.d_max = field<double>(j, "d_max");
  i.psi_bar = vfield(j, "psi_bar");
  i.phi_bar = vfield(j, "phi_bar");
  i.mean_length = vfield(j, "mean_length");
  i.max_length = vfield(j, "max_length");
  i.capacity_margin = field<double>(j, "capacity_margin");
  i.strict_capacity_margin = field<bool>(j, "strict_capacity_margin");
  i.denominator_margin = field<double>(j, "denominator_margin");
  i.log_floor = field<double>(j, "log_floor");
  return i;
}

json to_json_impl(const Mg1ErgodicInstance& i) {
  return {{"kind", "mg1-ergodic"},
          {"bandwidth", vec(i.bandwidth)},
          {"p_min", i.p_min},
          {"p_max", i.p_max},
          {"lambda_min", i.lambda_min},
          {"lambda_max", i.lambda_max},
          {"lambda_lim", i.lambda_lim},
          {"r_min", i.r_min},
          {"dof", i.dof},
          {"channel_floor", i.channel_floor},
          {"knee_margin", i.knee_margin},
          {"psi_bar", vec(i.psi_bar)},
          {"phi_bar", vec(i.phi_bar)},
          {"log_floor", i.log_floor}};
}

Mg1ErgodicInstance ergodic_from(const json& j) {
  Mg1ErgodicInstance i;
  i.bandwidth = vfield(j, "bandwidth");
  i.p_min = field<double>(j, "p_min");
  i.p_max = field<double>(j, "p_max");
  i.lambda_min = field<double>(j, "lambda_min");
  i.lambda_max = field<double>(j, "lambda_max");
  i.lambda_lim = field<double>(j, "lambda_lim");
  i.r_min = field<double>(j, "r_min");
  i.dof = field<int>(j, "dof");
  i.channel_floor = field<double>(j, "channel_floor");
  i.knee_margin = field<double>(j, "knee_margin");
  i.psi_bar = vfield(j, "psi_bar");
  i.phi_bar = vfield(j, "phi_bar");
  i.log_floor = field<double>(j, "log_floor");
  return i;
}

json to_json_impl(const OutageInstance& i) {
  return {{"kind", "outage"},
          {"bandwidth", vec(i.bandwidth)},
          {"rate", vec(i.rate)},
          {"p_min", i.p_min},
          {"p_max", i.p_max},
          {"lambda_min", i.lambda_min},
          {"lambda_max", i.lambda_max},
          {"lambda_lim", i.lambda_lim},
          {"eta", i.eta},
          {"channel_mean", i.channel_mean},
          {"channel_floor", i.channel_floor},
          {"capacity_margin", i.capacity_margin},
          {"psi_bar", vec(i.psi_bar)},
          {"phi_bar", vec(i.phi_bar)},
          {"denominator_margin", i.denominator_margin},
          {"log_floor", i.log_floor}};
}

OutageInstance outage_from(const json& j) {
  OutageInstance i;
  i.bandwidth = vfield(j, "bandwidth");
  i.rate = vfield(j, "rate");
  i.p_min = field<double>(j, "p_min");
  i.p_max = field<double>(j, "p_max");
  i.lambda_min = field<double>(j, "lambda_min");
  i.lambda_max = field<double>(j, "lambda_max");
  i.lambda_lim = field<double>(j, "lambda_lim");
  i.eta = field<double>(j, "eta");
  i.channel_mean = field<double>(j, "channel_mean");
  i.channel_floor = field<double>(j, "channel_floor");
  i.capacity_margin = field<double>(j, "capacity_margin");
  i.psi_bar = vfield(j, "psi_bar");
  i.phi_bar = vfield(j, "phi_bar");
  i.denominator_margin = field<double>(j, "denominator_margin");
  i.log_floor = field<double>(j, "log_floor");
  return i;
}

json to_json_impl(const EffectiveCapacityInstance& i) {
  return {{"kind", "effective-capacity"},
          {"bandwidth", vec(i.bandwidth)},
          {"p_min", i.p_min},
          {"p_max", i.p_max},
          {"delay_target", i.delay_target},
          {"arrival_mean", vec(i.arrival_mean)},
          {"arrival_var", vec(i.arrival_var)},
          {"channel_mean", vec(i.channel_mean)},
          {"tail_normalizer", i.tail_normalizer},
          {"psi_bar", vec(i.psi_bar)},
          {"phi_bar", vec(i.phi_bar)},
          {"denominator_margin", i.denominator_margin},
          {"log_floor", i.log_floor}};
}

EffectiveCapacityInstance effcap_from(const json& j) {
  EffectiveCapacityInstance i;
  i.bandwidth = vfield(j, "bandwidth");
  i.p_min = field<double>(j, "p_min");
  i.p_max = field<double>(j, "p_max");
  i.delay_target = field<double>(j, "delay_target");
  i.arrival_mean = vfield(j, "arrival_mean");
  i.arrival_var = vfield(j, "arrival_var");
  i.channel_mean = vfield(j, "channel_mean");
  i.tail_normalizer = field<double>(j, "tail_normalizer");
  i.psi_bar = vfield(j, "psi_bar");
  i.phi_bar = vfield(j, "phi_bar");
  i.denominator_margin = field<double>(j, "denominator_margin");
  i.log_floor = field<double>(j, "log_floor");
  return i;
}

json to_json_impl(const CloudInstance& i) {
  std::vector<double> means;
  for (const auto& d : i.load) {
    if (!std::holds_alternative<ExponentialMean>(d)) throw ConfigError("cloud: only exponential loads serialize");
    means.push_back(std::get<ExponentialMean>(d).mean);
  }
  return {{"kind", "cloud"},
          {"price", vec(i.price)},
          {"subscribers", vec(i.subscribers)},
          {"maintenance", i.maintenance},
          {"tier_lower", i.tier_lower},
          {"tier_upper", i.tier_upper},
          {"load_mean", means},
          {"r1_min", i.r1_min},
          {"r1_max", i.r1_max},
          {"capacity_min", i.capacity_min},
          {"capacity_max", i.capacity_max},
          {"eta", i.eta},
          {"denominator_margin", i.denominator_margin}};
}

CloudInstance cloud_from(const json& j) {
  CloudInstance i;
  i.price = vfield(j, "price");
  i.subscribers = vfield(j, "subscribers");
  i.maintenance = field<double>(j, "maintenance");
  i.tier_lower = field<double>(j, "tier_lower");
  i.tier_upper = field<double>(j, "tier_upper");
  for (double m : field<std::vector<double>>(j, "load_mean")) i.load.emplace_back(ExponentialMean{m});
  i.r1_min = field<double>(j, "r1_min");
  i.r1_max = field<double>(j, "r1_max");
  i.capacity_min = field<double>(j, "capacity_min");
  i.capacity_max = field<double>(j, "capacity_max");
  i.eta = field<double>(j, "eta");
  i.denominator_margin = field<double>(j, "denominator_margin");
  return i;
}

json to_json_impl(const Mm1Instance& i) {
  return {{"kind", "mm1"},
          {"lambda", i.lambda},
          {"r", i.r},
          {"h", i.h},
          {"lower_offset", i.lower_offset},
          {"upper_offset", i.upper_offset}};
}

Mm1Instance mm1_from(const json& j) {
  Mm1Instance i;
  i.lambda = field<double>(j, "lambda");
  i.r = field<double>(j, "r");
  i.h = field<double>(j, "h");
  i.lower_offset = field<double>(j, "lower_offset");
  i.upper_offset = field<double>(j, "upper_offset");
  return i;
}

json to_json_impl(const ToyQuadraticInstance& i) {
  json j = {{"kind", "toy-quadratic"}, {"target", vec(i.target)}, {"lower", vec(i.lower)}, {"upper", vec(i.upper)}};
  j["level"] = i.level ? json(*i.level) : json(nullptr);
  return j;
}

ToyQuadraticInstance toy_from(const json& j) {
  ToyQuadraticInstance i;
  i.target = vfield(j, "target");
  i.lower = vfield(j, "lower");
  i.upper = vfield(j, "upper");
  if (j.contains("level") && !j.at("level").is_null()) i.level = field<double>(j, "level");
  return i;
}

Instance from_json_impl(const json& j) {
  const auto kind = field<std::string>(j, "kind");
  if (kind == "mg1-wired") return wired_from(j);
  if (kind == "mg1-ergodic") return ergodic_from(j);
  if (kind == "outage") return outage_from(j);
  if (kind == "effective-capacity") return effcap_from(j);
  if (kind == "cloud") return cloud_from(j);
  if (kind == "mm1") return mm1_from(j);
  if (kind == "toy-quadratic") return toy_from(j);
  throw ConfigError("unknown instance kind '" + kind + "'");
}

Instance base_instance(const std::string& name) {
  const Vector psi = list({1.0, 1.5, 2.0});
  const Vector phi = list({10.0, 15.0, 20.0});
  if (name == "paper-ex1") {
    Mg1WiredInstance i;
    i.capacity = list({100, 200, 500});
    i.max_length = list({20, 30, 60});
    i.lambda_min = 0.1;
    i.lambda_lim = 15;
    i.lambda_max = list({5, 7, 9});
    i.mean_length = list({15, 20, 35});
    i.d_max = 0.05;
    i.psi_bar = psi;
    i.phi_bar = phi;
    i.strict_capacity_margin = false;
    return i;
  }
  if (name == "paper-ex2-k5" || name == "paper-ex2-k10") {
    Mg1ErgodicInstance i;
    i.bandwidth = rep(10, 3);
    i.lambda_lim = 37;
    i.knee_margin = 0.95;
    i.channel_floor = 0.25;
    i.r_min = 35;
    i.p_min = 14;
    i.p_max = 100;
    i.lambda_min = 0.1;
    i.lambda_max = 15;
    i.dof = name == "paper-ex2-k5" ? 10 : 20;
    i.psi_bar = psi;
    i.phi_bar = phi;
    return i;
  }
  if (name == "paper-ex3") {
    OutageInstance i;
    i.bandwidth = rep(100, 3);
    i.lambda_lim = 45;
    i.capacity_margin = 0.95;
    i.channel_floor = 0.25;
    i.rate = list({30, 35, 40});
    i.p_min = 10;
    i.p_max = 100;
    i.lambda_min = 0.1;
    i.lambda_max = 25;
    i.psi_bar = psi;
    i.phi_bar = phi;
    return i;
  }
  if (name == "paper-ex4") {
    EffectiveCapacityInstance i;
    i.bandwidth = rep(100, 3);
    i.p_min = 0.1;
    i.p_max = 0.9;
    i.delay_target = 0.5;
    i.channel_mean = list({0.8, 0.9, 1.0});
    i.arrival_mean = list({10, 12, 14});
    i.arrival_var = list({20, 25, 30});
    i.psi_bar = psi;
    i.phi_bar = phi;
    return i;
  }
  if (name == "ex5-demo") {
    CloudInstance i;
    i.price = list({1, 2, 3});
    i.subscribers = rep(10, 3);
    i.load = {ExponentialMean{2.0}, ExponentialMean{1.5}, ExponentialMean{1.0}};
    return i;
  }
  if (name == "mm1") return Mm1Instance{};
  if (name == "toy-quadratic") {
    ToyQuadraticInstance i;
    i.target = rep(0.3, 3);
    i.lower = rep(0.0, 3);
    i.upper = rep(1.0, 3);
    return i;
  }
  throw ConfigError("unknown preset '" + name + "'");
}

// Largest constraint value over the corners of the bounding box.
double max_corner_constraint(const Instance& inst, const CompositionalProblem& problem) {
  const Vector lo = problem.feasible_set.lower();
  const Vector hi = problem.feasible_set.upper();
  const Eigen::Index n = lo.size();
  auto corners = [&](auto&& eval) {
    double best = -std::numeric_limits<double>::infinity();
    for (long mask = 0; mask < (1L << n); ++mask) {
      Vector x(n);
      for (Eigen::Index k = 0; k < n; ++k) x[k] = (mask >> k) & 1 ? hi[k] : lo[k];
      best = std::max(best, eval(x));
    }
    return best;
  };
  return std::visit(
      Overloaded{
          [&](const Mg1WiredInstance& i) -> double {
            const Vector el = mg1_wired_length_moment(i, 1);
            const Vector el2 = mg1_wired_length_moment(i, 2);
            return corners([&](const Vector& x) {
              Vector y(2 * n);
              y.head(n) = x.cwiseProduct(el);
              y.tail(n) = x.cwiseProduct(el2);
              return problem.outer_q(y)[0];
            });
          },
          [&](const Mg1ErgodicInstance& i) -> double {
            // Q = R_min - E[min_i b_i] is largest where every power sits at P_min.
            RngStream rng(0xc0de, 7);
            const Vector x = (Vector(2 * i.queues()) << Vector::Constant(i.queues(), i.lambda_min),
                              Vector::Constant(i.queues(), i.p_min))
                                 .finished();
            const auto est = monte_carlo_mean([&](const Vector& z) { return problem.inner_h(x, z); },
                                              problem.sample, 20000, rng);
            return problem.outer_q(est.mean)[0];
          },
          [&](const ToyQuadraticInstance& i) -> double { return i.level ? hi.sum() - *i.level : -INFINITY; },
          [](const auto&) -> double { return -INFINITY; },
      },
      inst);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-ex1", "paper-ex2-k5", "paper-ex2-k10", "paper-ex3", "paper-ex4", "ex5-demo", "mm1", "toy-quadratic"};
}

nlohmann::json instance_to_json(const Instance& inst) {
  return std::visit([](const auto& i) { return to_json_impl(i); }, inst);
}

Instance make_instance(const std::string& name, const nlohmann::json& overrides) {
  Instance inst = base_instance(name);
  if (overrides.is_null() || overrides.empty()) return inst;
  if (!overrides.is_object()) throw ConfigError("instance overrides must be an object");
  json j = instance_to_json(inst);
  for (const auto& [key, value] : overrides.items()) {
    if (!j.contains(key)) throw ConfigError("unknown instance field '" + key + "' for preset " + name);
    if (key == "kind") throw ConfigError("the instance kind cannot be overridden");
  }
  j.merge_patch(overrides);
  return from_json_impl(j);
}

BuiltPreset build_instance(const std::string& name, const Instance& inst) {
  BuiltPreset out;
  out.name = name;
  out.instance = inst;
  std::visit(Overloaded{
                 [&](const Mg1WiredInstance& i) {
                   out.problem = mg1_wired_build(i);
                   out.constants = mg1_wired_constants(i);
                 },
                 [&](const Mg1ErgodicInstance& i) {
                   out.problem = mg1_ergodic_build(i);
                   out.constants = mg1_ergodic_constants(i);
                 },
                 [&](const OutageInstance& i) {
                   out.problem = outage_build(i);
                   out.constants = outage_constants(i);
                 },
                 [&](const EffectiveCapacityInstance& i) {
                   out.problem = effective_capacity_build(i);
                   out.constants = effective_capacity_constants(i);
                 },
                 [&](const CloudInstance& i) {
                   out.problem = cloud_build(i);
                   out.constants = cloud_constants(i);
                 },
                 [&](const Mm1Instance& i) {
                   out.problem = mm1_build(i);
                   out.constants.D_x = out.problem.feasible_set.diameter_sq();
                 },
                 [&](const ToyQuadraticInstance& i) {
                   out.problem = toy_quadratic_build(i);
                   out.constants = toy_quadratic_constants(i);
                 },
             },
             inst);
  const double q = max_corner_constraint(inst, out.problem);
  out.default_c_ell = q > 0 ? 2.0 * q : 1.0;
  return out;
}

BuiltPreset build_preset(const std::string& name, const nlohmann::json& overrides) {
  return build_instance(name, make_instance(name, overrides));
}

}  // namespace cscgd::queuing
