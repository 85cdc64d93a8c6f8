#include "cscgd/harness/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "cscgd/errors.hpp"

namespace cscgd::harness {

using nlohmann::json;

namespace {

template <class T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::set<std::string> known{"preset", "instance", "a", "b", "c", "regime", "horizon", "gamma",
                                           "c_ell", "seeds", "eval_batch", "output_dir", "oracle_cache", "gap",
                                           "full_trajectory"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw ConfigError("unknown config field '" + key + "'");
  }
  ExperimentConfig c;
  c.preset = field<std::string>(j, "preset", c.preset);
  if (j.contains("instance")) {
    if (!j["instance"].is_object()) throw ConfigError("config field 'instance' must be an object");
    c.instance = j["instance"];
  }
  c.a = field<double>(j, "a", c.a);
  c.b = field<double>(j, "b", c.b);
  c.c = field<double>(j, "c", c.c);
  c.regime = parse_regime(field<std::string>(j, "regime", to_string(c.regime)));
  c.horizon = field<std::int64_t>(j, "horizon", c.horizon);
  c.gamma = field<double>(j, "gamma", c.gamma);
  if (j.contains("c_ell") && !j["c_ell"].is_null()) c.c_ell = field<double>(j, "c_ell", 0.0);
  c.seeds = field<std::vector<std::uint64_t>>(j, "seeds", c.seeds);
  c.eval_batch = field<std::int64_t>(j, "eval_batch", c.eval_batch);
  c.output_dir = field<std::string>(j, "output_dir", c.output_dir);
  c.oracle_cache = field<std::string>(j, "oracle_cache", c.oracle_cache);
  c.gap = field<bool>(j, "gap", c.gap);
  c.full_trajectory = field<bool>(j, "full_trajectory", c.full_trajectory);

  if (c.horizon < 2) throw ConfigError("horizon must be at least 2");
  if (c.seeds.empty()) throw ConfigError("seeds must not be empty");
  if (std::set<std::uint64_t>(c.seeds.begin(), c.seeds.end()).size() != c.seeds.size()) {
    throw ConfigError("seeds must be distinct");
  }
  if (c.eval_batch < 2) throw ConfigError("eval_batch must be at least 2");
  StepSchedule(c.a, c.b, c.c, c.regime, c.horizon);  // validates the exponents
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j = {{"preset", c.preset},
            {"instance", c.instance},
            {"a", c.a},
            {"b", c.b},
            {"c", c.c},
            {"regime", to_string(c.regime)},
            {"horizon", c.horizon},
            {"gamma", c.gamma},
            {"seeds", c.seeds},
            {"eval_batch", c.eval_batch},
            {"output_dir", c.output_dir},
            {"oracle_cache", c.oracle_cache},
            {"gap", c.gap},
            {"full_trajectory", c.full_trajectory}};
  j["c_ell"] = c.c_ell ? json(*c.c_ell) : json(nullptr);
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return config_from_json(json::parse(in, nullptr, true, true));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
}

std::string canonical_config(const ExperimentConfig& config) { return config_to_json(config).dump(); }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string content_config(const ExperimentConfig& config) {
  json j = config_to_json(config);
  j.erase("output_dir");
  j.erase("oracle_cache");
  return j.dump();
}

std::string config_hash(const ExperimentConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(content_config(config))));
  return buf;
}

}  // namespace cscgd::harness
