#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dicke_gmc/dicke_core.hpp"
#include "dicke_gmc/errors.hpp"
#include "dicke_gmc/oracle.hpp"
#include "dicke_gmc/stable_math.hpp"
#include "dicke_gmc/superradiance.hpp"

using namespace dicke;

namespace {

std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

std::vector<double> nonzero_sorted(std::vector<double> v, double floor = 1e-9) {
  std::erase_if(v, [&](double x) { return x <= floor; });
  std::sort(v.begin(), v.end());
  return v;
}

void check_same_multiset(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  const auto x = nonzero_sorted(a);
  const auto y = nonzero_sorted(b);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) <= tol);
}

DickeMixture rate_mixture(int n, double gamma_t) {
  return DickeMixture(oracle::rate_matrix_exponential(RateModel(n, 1.0), gamma_t));
}

}  // namespace

TEST_CASE("DickeLabel validation") {
  CHECK_NOTHROW(DickeLabel(1, 0));
  CHECK_NOTHROW(DickeLabel(5, 5));
  CHECK_THROWS_AS(DickeLabel(0, 0), DomainError);
  CHECK_THROWS_AS(DickeLabel(3, 4), DomainError);
  CHECK_THROWS_AS(DickeLabel(3, -1), DomainError);
}

TEST_CASE("DickeMixture construction rules") {
  const DickeMixture clamped({-5e-13, 0.5, 0.5 + 5e-13});
  CHECK(clamped.population(0) == 0.0);
  CHECK(std::abs(clamped.population(1) + clamped.population(2) - 1.0) <= 1e-15);
  CHECK_THROWS_AS(DickeMixture({-1e-11, 0.5, 0.5}), DomainError);
  CHECK_THROWS_AS(DickeMixture({0.5, 0.5 + 1e-9}), DomainError);
  CHECK_THROWS_AS(DickeMixture({1.0}), DomainError);
  CHECK_THROWS_AS(DickeMixture({std::nan(""), 1.0}), DomainError);
  const auto p = DickeMixture::pure(DickeLabel(4, 3));
  CHECK(p.qubits() == 4);
  CHECK(p.population(3) == 1.0);
}

TEST_CASE("reduced_spectrum_pure examples") {
  const auto a = reduced_spectrum_pure(DickeLabel(2, 1), 1);
  CHECK(to_vector(a.weights()) == std::vector<double>{0.5, 0.5});

  const DickeLabel s42(4, 2);
  const auto b = reduced_spectrum_pure(s42, 2);
  REQUIRE(b.weights().size() == 3);
  const auto eig = oracle::eigenvalues(oracle::dense_partial_trace(oracle::dense_dicke_state(s42), 4, 2));
  check_same_multiset(to_vector(b.weights()), eig, 1e-12);
  CHECK(b.weights()[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));

  for (int n : {1, 7, 300}) {
    for (int k : {1, n}) {
      const auto c = reduced_spectrum_pure(DickeLabel(n, 0), k);
      CHECK(c.weights()[0] == 1.0);
      for (std::size_t i = 1; i < c.weights().size(); ++i) CHECK(c.weights()[i] == 0.0);
    }
  }
  CHECK_THROWS_AS(reduced_spectrum_pure(s42, 0), DomainError);
  CHECK_THROWS_AS(reduced_spectrum_pure(s42, 5), DomainError);
}

TEST_CASE("full cluster of a pure state is the degenerate spectrum") {
  for (int n = 1; n <= 30; ++n) {
    for (int ne = 0; ne <= n; ++ne) {
      const auto s = reduced_spectrum_pure(DickeLabel(n, ne), n);
      CHECK(s.weights()[static_cast<std::size_t>(ne)] == doctest::Approx(1.0).epsilon(1e-13));
      CHECK(entropy_of_spectrum(s) <= 1e-12);
    }
  }
}

TEST_CASE("pure spectrum symmetry under n_e -> N - n_e") {
  for (int n : {3, 10, 99, 500}) {
    for (int ne = 0; ne <= n; ne += std::max(1, n / 13)) {
      for (int k : {1, 2, n / 3 + 1, n}) {
        const auto a = reduced_spectrum_pure(DickeLabel(n, ne), k);
        const auto b = reduced_spectrum_pure(DickeLabel(n, n - ne), k);
        for (int i = 0; i <= k; ++i) {
          CHECK(a.weights()[static_cast<std::size_t>(i)] == b.weights()[static_cast<std::size_t>(k - i)]);
        }
        CHECK(entropy_of_spectrum(a) == doctest::Approx(entropy_of_spectrum(b)).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("reduced_spectrum_mixture examples") {
  for (int n : {3, 12, 200}) {
    for (int ne : {0, n / 2, n}) {
      const DickeLabel label(n, ne);
      for (int k : {1, n / 2 + 1, n}) {
        const auto a = reduced_spectrum_mixture(DickeMixture::pure(label), k);
        const auto b = reduced_spectrum_pure(label, k);
        for (std::size_t i = 0; i < a.weights().size(); ++i) {
          CHECK(std::abs(a.weights()[i] - b.weights()[i]) <= 1e-14);
        }
      }
    }
  }

  const DickeMixture half({0.5, 0.0, 0.5});
  const auto two = reduced_spectrum_mixture(half, 1);
  const auto eig = oracle::eigenvalues(oracle::dense_partial_trace(oracle::dense_mixture(half), 2, 1));
  check_same_multiset(to_vector(two.weights()), eig, 1e-14);
  CHECK(two.weights()[0] == doctest::Approx(0.5).epsilon(1e-15));

  const DickeMixture mix = rate_mixture(8, 0.1);
  const auto spec = reduced_spectrum_mixture(mix, 3);
  const auto eig8 = oracle::eigenvalues(oracle::dense_partial_trace(oracle::dense_mixture(mix), 8, 3));
  check_same_multiset(to_vector(spec.weights()), eig8, 1e-10);
  CHECK_THROWS_AS(reduced_spectrum_mixture(mix, 9), DomainError);
}

TEST_CASE("mixture spectra match the dense oracle for N <= 10") {
  for (int n = 2; n <= 10; ++n) {
    for (double gt : {0.01, 0.1, 1.0}) {
      const DickeMixture mix = rate_mixture(n, gt);
      const auto rho = oracle::dense_mixture(mix);
      for (int k = 1; k < n; ++k) {
        INFO("N=" << n << " k=" << k << " gt=" << gt);
        const auto spec = reduced_spectrum_mixture(mix, k);
        check_same_multiset(to_vector(spec.weights()), oracle::eigenvalues(oracle::dense_partial_trace(rho, n, k)),
                            1e-9);
        CompensatedSum total;
        for (double w : spec.weights()) {
          CHECK(w >= 0.0);
          total += w;
        }
        CHECK(std::abs(total.value() - 1.0) <= 1e-10);
        CHECK(entropy_of_spectrum(spec) <= std::log(k + 1.0) + 1e-12);
      }
    }
  }
}

TEST_CASE("entropy_of_spectrum examples") {
  CHECK(entropy_of_spectrum(ReducedSpectrum(1, {1.0, 0.0})) == 0.0);
  CHECK(entropy_of_spectrum(ReducedSpectrum(1, {0.5, 0.5})) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  const DickeLabel s42(4, 2);
  const double oracle_value =
      oracle::eigen_entropy(oracle::dense_partial_trace(oracle::dense_dicke_state(s42), 4, 2));
  const double got = entropy_of_spectrum(reduced_spectrum_pure(s42, 2));
  CHECK(std::abs(got - oracle_value) <= 1e-12);
  CHECK(got == doctest::Approx(0.867563).epsilon(1e-6));
}

TEST_CASE("mixture_entropy examples") {
  CHECK(mixture_entropy(DickeMixture::pure(DickeLabel(6, 6))) == 0.0);
  CHECK(mixture_entropy(DickeMixture(std::vector<double>(10, 0.1))) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
  const DickeMixture mix = rate_mixture(8, 0.1);
  CHECK(std::abs(mixture_entropy(mix) - oracle::eigen_entropy(oracle::dense_mixture(mix))) <= 1e-10);
}
