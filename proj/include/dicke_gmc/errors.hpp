#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

/// Precondition violation on a numeric argument (out-of-range N, k, n_e, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dense oracle asked for a Hilbert space beyond its memory guard.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Adaptive integration could not proceed (step size underflow).
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double failing_time)
      : std::runtime_error(what), failing_time_(failing_time) {}

  double failing_time() const noexcept { return failing_time_; }

 private:
  double failing_time_;
};

/// A computed quantity broke an identity it must satisfy (dual-form weaving,
/// non-negativity of S^(k->N) beyond round-off).
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace dicke
