#pragma once

#include <cstdint>
#include <string>

namespace cscgd {

enum class StepRegime { Diminishing, Constant };

StepRegime parse_regime(const std::string& name);
std::string to_string(StepRegime regime);

struct StepSizes {
  double alpha;  ///< objective step
  double beta;   ///< tracking step
  double delta;  ///< penalty step
};

/// Power-law step sizes alpha = s^-a, beta = s^-b, delta = s^-c where s = t
/// (diminishing) or s = T (constant). Construction enforces 1 > a >= c >= b > 0.
class StepSchedule {
 public:
  StepSchedule(double a, double b, double c, StepRegime regime, std::int64_t horizon);

  StepSizes at(std::int64_t t) const;

  double a() const { return a_; }
  double b() const { return b_; }
  double c() const { return c_; }
  StepRegime regime() const { return regime_; }
  std::int64_t horizon() const { return horizon_; }

  /// First index of the tail average, ceil(T/2).
  std::int64_t tail_start() const { return (horizon_ + 1) / 2; }

 private:
  double a_;
  double b_;
  double c_;
  StepRegime regime_;
  std::int64_t horizon_;
};

inline StepSizes step_sizes(const StepSchedule& schedule, std::int64_t t) { return schedule.at(t); }

}  // namespace cscgd
