#pragma once

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "cscgd/problem.hpp"
#include "cscgd/queuing/cloud.hpp"
#include "cscgd/queuing/effective_capacity.hpp"
#include "cscgd/queuing/mg1_ergodic.hpp"
#include "cscgd/queuing/mg1_wired.hpp"
#include "cscgd/queuing/mm1.hpp"
#include "cscgd/queuing/outage.hpp"
#include "cscgd/queuing/toy.hpp"

namespace cscgd::queuing {

using Instance = std::variant<Mg1WiredInstance, Mg1ErgodicInstance, OutageInstance, EffectiveCapacityInstance,
                              CloudInstance, Mm1Instance, ToyQuadraticInstance>;

/// Names accepted by `make_instance`.
std::vector<std::string> preset_names();

/// Parameter pack of a named preset with `overrides` merged in (JSON merge
/// patch over the instance's field names). Unknown names or keys raise ConfigError.
Instance make_instance(const std::string& name, const nlohmann::json& overrides = nlohmann::json::object());

nlohmann::json instance_to_json(const Instance& inst);

struct BuiltPreset {
  std::string name;
  Instance instance;
  CompositionalProblem problem;
  ProblemConstants constants;
  /// Twice the largest constraint value over the corners of the bounding box,
  /// or 1 when the constraints hold at every corner.
  double default_c_ell = 1.0;
};

BuiltPreset build_instance(const std::string& name, const Instance& inst);

BuiltPreset build_preset(const std::string& name, const nlohmann::json& overrides = nlohmann::json::object());

}  // namespace cscgd::queuing
