#include "cscgd/step_schedule.hpp"

#include <cmath>

#include "cscgd/errors.hpp"

namespace cscgd {

StepRegime parse_regime(const std::string& name) {
  if (name == "diminishing") return StepRegime::Diminishing;
  if (name == "constant") return StepRegime::Constant;
  throw ConfigError("unknown step regime '" + name + "' (expected diminishing|constant)");
}

std::string to_string(StepRegime regime) {
  return regime == StepRegime::Diminishing ? "diminishing" : "constant";
}

StepSchedule::StepSchedule(double a, double b, double c, StepRegime regime, std::int64_t horizon)
    : a_(a), b_(b), c_(c), regime_(regime), horizon_(horizon) {
  if (!(1.0 > a && a >= c && c >= b && b > 0.0)) {
    throw ConfigError("step exponents must satisfy 1 > a >= c >= b > 0");
  }
  if (horizon < 1) throw ConfigError("horizon must be positive");
}

StepSizes StepSchedule::at(std::int64_t t) const {
  if (t < 1 || t > horizon_) throw ConfigError("step index outside [1, T]");
  const double s = static_cast<double>(regime_ == StepRegime::Diminishing ? t : horizon_);
  return {std::pow(s, -a_), std::pow(s, -b_), std::pow(s, -c_)};
}

}  // namespace cscgd
