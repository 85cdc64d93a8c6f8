#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cscgd/step_schedule.hpp"

namespace cscgd::harness {

/// One experiment: a preset (with optional instance overrides), the solver
/// settings, the seed list and where results go.
struct ExperimentConfig {
  std::string preset = "paper-ex1";
  nlohmann::json instance = nlohmann::json::object();  ///< merge patch over the preset's fields
  double a = 0.9167;
  double b = 0.5;
  double c = 0.75;
  StepRegime regime = StepRegime::Constant;
  std::int64_t horizon = 10000;
  double gamma = 0.0;
  std::optional<double> c_ell;  ///< defaults to the preset's value
  std::vector<std::uint64_t> seeds{1};
  std::int64_t eval_batch = 100000;
  std::string output_dir = "out";
  std::string oracle_cache = ".cscgd-cache";
  bool gap = true;              ///< report the optimality gap against the oracle
  bool full_trajectory = false; ///< log every iteration regardless of T
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);

/// Sorted-key compact JSON. parse(canonical(c)) reproduces c exactly.
std::string canonical_config(const ExperimentConfig& config);

/// Canonical form without the output and cache locations: what determines the results.
std::string content_config(const ExperimentConfig& config);

/// FNV-1a 64 of `content_config`, as 16 lowercase hex digits.
std::string config_hash(const ExperimentConfig& config);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace cscgd::harness
