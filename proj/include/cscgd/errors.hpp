#pragma once

#include <stdexcept>
#include <string>

namespace cscgd {

/// Invalid parameters or an inconsistent configuration, detected before any work is done.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A function was evaluated outside of its mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A non-finite value appeared during a computation.
///
/// `source()` names the map that produced it (e.g. "outer_f_gradient") and
/// `iteration()` the solver iteration, or 0 when raised outside the solver.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, std::string source, long iteration = 0)
      : std::runtime_error(what), source_(std::move(source)), iteration_(iteration) {}

  const std::string& source() const noexcept { return source_; }
  long iteration() const noexcept { return iteration_; }

 private:
  std::string source_;
  long iteration_;
};

}  // namespace cscgd
