#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "dicke_gmc/errors.hpp"
#include "dicke_gmc/stable_math.hpp"

using namespace dicke;
namespace mp = boost::multiprecision;

namespace {

mp::cpp_int exact_binomial(int n, int m) {
  mp::cpp_int c = 1;
  for (int j = 1; j <= m; ++j) c = c * (n - m + j) / j;
  return c;
}

}  // namespace

TEST_CASE("log_binomial small values") {
  CHECK(log_binomial(4, 2).value == doctest::Approx(std::log(6.0)).epsilon(1e-15));
  CHECK(log_binomial(5, 7).is_zero());
  CHECK(log_binomial(5, -1).is_zero());
  CHECK(log_binomial(5, 7).exp() == 0.0);
  CHECK(log_binomial(0, 0).value == 0.0);
  CHECK_THROWS_AS(log_binomial(-1, 0), DomainError);
}

TEST_CASE("log_binomial(1000, 500) against exact big integer") {
  using Float = mp::cpp_bin_float_50;
  const Float exact_log = mp::log(Float(exact_binomial(1000, 500)));
  const double got = log_binomial(1000, 500).value;
  const double want = exact_log.convert_to<double>();
  CHECK(std::abs(got - want) / want <= 1e-12);
}

TEST_CASE("log_binomial matches exact integers up to 60") {
  for (int n = 0; n <= 60; ++n) {
    for (int m = 0; m <= n; ++m) {
      const double exact = exact_binomial(n, m).convert_to<double>();
      const double got = log_binomial(n, m).exp();
      INFO("n=" << n << " m=" << m);
      CHECK(std::abs(got - exact) / exact <= 1e-12);
      CHECK(log_binomial(n, m).value == log_binomial(n, n - m).value);
    }
  }
}

TEST_CASE("log_binomial beyond the factorial table") {
  using Float = mp::cpp_bin_float_50;
  for (std::int64_t n : {200'000, 1'000'000}) {
    for (std::int64_t m : {1, 2, 17, 1000}) {
      const double want = mp::log(Float(exact_binomial(static_cast<int>(n), static_cast<int>(m)))).convert_to<double>();
      // differences of ln Gamma values near ln Gamma(n + 1) carry their absolute error
      CHECK(std::abs(log_binomial(n, m).value - want) <= 1e-13 * log_factorial(n));
    }
  }
}

TEST_CASE("h") {
  CHECK(h(1.0) == 0.0);
  CHECK(h(0.0) == 0.0);
  CHECK(h(-1e-13) == 0.0);
  CHECK(h(-1e-12) == 0.0);
  CHECK(h(0.5) == doctest::Approx(-std::log(2.0) / 2).epsilon(1e-15));
  CHECK_THROWS_AS(h(-1e-11), DomainError);
  CHECK_THROWS_AS(h(-0.5), DomainError);
}

TEST_CASE("h is continuous at zero") {
  double previous = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= 300; ++p) {
    const double x = std::pow(10.0, -p);
    const double value = std::abs(h(x));
    CHECK(value <= x * std::abs(std::log(x)) * (1 + 1e-14));
    if (p >= 2) CHECK(value < previous);
    previous = value;
  }
}

TEST_CASE("hypergeometric_weight examples") {
  CHECK(hypergeometric_weight(4, 2, 2, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(hypergeometric_weight(9, 0, 4, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hypergeometric_weight(1000, 0, 1000, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(hypergeometric_weight(1000, 500, 3, 5) == 0.0);
  CHECK_THROWS_AS(hypergeometric_weight(4, 5, 2, 1), DomainError);
  CHECK_THROWS_AS(hypergeometric_weight(4, 2, 0, 0), DomainError);
  CHECK_THROWS_AS(hypergeometric_weight(4, 2, 5, 0), DomainError);
}

TEST_CASE("hypergeometric weights are normalized for N <= 200") {
  for (int n = 1; n <= 200; n += (n < 40 ? 1 : 7)) {
    for (int ne = 0; ne <= n; ++ne) {
      for (int k = 1; k <= n; k += (n < 40 ? 1 : 5)) {
        CompensatedSum total;
        for (int i = 0; i <= k; ++i) total += hypergeometric_weight(n, ne, k, i);
        INFO("N=" << n << " ne=" << ne << " k=" << k);
        CHECK(std::abs(total.value() - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("hypergeometric weight symmetry under n_e -> N - n_e") {
  for (int n : {5, 17, 64, 200, 1000}) {
    for (int ne : {0, 1, n / 3, n / 2}) {
      for (int k : {1, 2, n / 2, n}) {
        for (int i = 0; i <= k; ++i) {
          CHECK(hypergeometric_weight(n, ne, k, i) == hypergeometric_weight(n, n - ne, k, k - i));
        }
      }
    }
  }
}

TEST_CASE("weights below the flush threshold are exactly zero") {
  // 1 / C(2000, 1000) is about 1e-600
  CHECK(hypergeometric_weight(2000, 1000, 1000, 0) == 0.0);
  // 1 / C(1000, 500) is about 4e-300, just above the threshold
  CHECK(hypergeometric_weight(1000, 500, 500, 0) > kFlushThreshold);
}

TEST_CASE("compensated_sum") {
  std::vector<double> terms{1.0};
  terms.insert(terms.end(), 10000, 1e-16);
  CHECK(std::abs(compensated_sum(terms) - (1.0 + 1e-12)) <= 1e-15 * (1.0 + 1e-12));
  CHECK(compensated_sum({}) == 0.0);
  const std::vector<double> tenths(10, 0.1);
  CHECK(std::abs(compensated_sum(tenths) - 1.0) <= 1e-15);
  const std::vector<double> cancel{1e16, 1.0, -1e16};
  CHECK(compensated_sum(cancel) == 1.0);
}
