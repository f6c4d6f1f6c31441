#include "dicke_gmc/stable_math.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "dicke_gmc/errors.hpp"

namespace dicke {
namespace {

constexpr std::int64_t kTableSize = std::int64_t{1} << 17;

const std::vector<double>& factorial_table() {
  static const std::vector<double> table = [] {
    std::vector<double> t(static_cast<std::size_t>(kTableSize));
    for (std::int64_t n = 0; n < kTableSize; ++n) t[static_cast<std::size_t>(n)] = std::lgamma(static_cast<double>(n) + 1.0);
    return t;
  }();
  return table;
}

double lgamma_reentrant(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

}  // namespace

double log_factorial(std::int64_t n) {
  if (n < 0) throw DomainError("log_factorial: negative argument " + std::to_string(n));
  if (n < kTableSize) return factorial_table()[static_cast<std::size_t>(n)];
  return lgamma_reentrant(static_cast<double>(n) + 1.0);
}

LogValue log_binomial(std::int64_t n, std::int64_t m) {
  if (n < 0) throw DomainError("log_binomial: n must be non-negative, got " + std::to_string(n));
  if (m < 0 || m > n) return LogValue::zero();
  const std::int64_t lo = std::min(m, n - m);
  if (lo == 0) return LogValue::from_log(0.0);
  return LogValue::from_log(log_factorial(n) - log_factorial(lo) - log_factorial(n - lo));
}

double h(double x) {
  if (x < -kNegativeSlack) throw DomainError("h: argument " + std::to_string(x) + " is negative beyond round-off");
  if (x <= 0.0) return 0.0;
  return x * std::log(x);
}

double hypergeometric_weight(std::int64_t n, std::int64_t excitations, std::int64_t k, std::int64_t i) {
  if (n < 1 || excitations < 0 || excitations > n || k < 1 || k > n) {
    throw DomainError("hypergeometric_weight: require 0 <= n_e <= N and 1 <= k <= N (N=" + std::to_string(n) +
                      ", n_e=" + std::to_string(excitations) + ", k=" + std::to_string(k) + ")");
  }
  const LogValue w = log_binomial(k, i) * log_binomial(n - k, excitations - i) / log_binomial(n, excitations);
  const double value = w.exp();
  return value < kFlushThreshold ? 0.0 : value;
}

double compensated_sum(std::span<const double> terms) noexcept {
  CompensatedSum acc;
  for (double t : terms) acc += t;
  return acc.value();
}

}  // namespace dicke
