#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>

namespace dicke {

/// Natural logarithm of a non-negative quantity. `zero()` stores -inf and encodes log(0).
struct LogValue {
  double value = -std::numeric_limits<double>::infinity();

  static constexpr LogValue zero() noexcept { return {}; }
  static constexpr LogValue from_log(double v) noexcept { return {v}; }

  bool is_zero() const noexcept { return value == -std::numeric_limits<double>::infinity(); }

  /// exp(value); exactly 0 for zero().
  double exp() const noexcept { return is_zero() ? 0.0 : std::exp(value); }

  friend LogValue operator*(LogValue a, LogValue b) noexcept {
    if (a.is_zero() || b.is_zero()) return zero();
    return {a.value + b.value};
  }
  friend LogValue operator/(LogValue a, LogValue b) noexcept {
    if (a.is_zero()) return zero();
    return {a.value - b.value};
  }
};

/// Entropy summands below this after exponentiation are flushed to exactly 0.
inline constexpr double kFlushThreshold = 1e-300;

/// Slack tolerated below zero by h() before it reports an upstream bug.
inline constexpr double kNegativeSlack = 1e-12;

/// ln Gamma(n + 1) for integer n >= 0.
double log_factorial(std::int64_t n);

/// ln C(n, m). Returns LogValue::zero() when m < 0 or m > n.
/// Symmetric bit-for-bit: log_binomial(n, m) == log_binomial(n, n - m).
LogValue log_binomial(std::int64_t n, std::int64_t m);

/// x ln x with h(0) = 0. Throws DomainError for x < -1e-12.
double h(double x);

/// C(k, i) C(N - k, n_e - i) / C(N, n_e): probability of i excitations in a
/// k-qubit cluster of |N, n_e>.
double hypergeometric_weight(std::int64_t n, std::int64_t excitations, std::int64_t k, std::int64_t i);

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double compensated_sum(std::span<const double> terms) noexcept;

}  // namespace dicke
