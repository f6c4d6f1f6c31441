#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "dicke_gmc/errors.hpp"
#include "dicke_gmc/gmc.hpp"
#include "dicke_gmc/oracle.hpp"
#include "dicke_gmc/superradiance.hpp"

using namespace dicke;

TEST_CASE("RateModel validation") {
  CHECK_THROWS_AS(RateModel(0, 1.0), DomainError);
  CHECK_THROWS_AS(RateModel(3, 0.0), DomainError);
  CHECK_THROWS_AS(RateModel(3, 1.0, -1.0), DomainError);
  const RateModel m(5, 0.5);
  CHECK(m.decay_rate(0) == 0.0);
  CHECK(m.decay_rate(6) == 0.0);
  CHECK(m.decay_rate(3) == 2 * 0.5 * 3 * 3);
}

TEST_CASE("rate_derivative examples") {
  const double g = 0.7;
  CHECK(rate_derivative(RateModel(1, g), std::vector<double>{0, 1}) == std::vector<double>{2 * g, -2 * g});
  CHECK(rate_derivative(RateModel(2, g), std::vector<double>{0, 0, 1}) == std::vector<double>{0, 4 * g, -4 * g});
  for (int n : {1, 5, 40}) {
    std::vector<double> ground(static_cast<std::size_t>(n + 1), 0.0);
    ground[0] = 1.0;
    for (double d : rate_derivative(RateModel(n, g), ground)) CHECK(d == 0.0);
  }
  CHECK_THROWS_AS(rate_derivative(RateModel(3, g), std::vector<double>{1, 0}), DomainError);
}

TEST_CASE("derivative conserves probability") {
  const RateModel m(30, 1.3);
  std::vector<double> p(31);
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = 1.0 / (1.0 + i * i);
  const auto d = rate_derivative(m, p);
  double sum = 0.0, scale = 0.0;
  for (int n = 0; n <= 30; ++n) {
    sum += d[static_cast<std::size_t>(n)];
    scale += std::abs(m.decay_rate(n) * p[static_cast<std::size_t>(n)]);
  }
  CHECK(std::abs(sum) <= 1e-14 * scale);
}

TEST_CASE("radiated_power examples") {
  const double g = 0.3, w = 2.5;
  for (int n : {1, 8, 1000}) {
    const RateModel m(n, g, w);
    std::vector<double> top(static_cast<std::size_t>(n + 1), 0.0), ground = top;
    top.back() = 1.0;
    ground[0] = 1.0;
    CHECK(radiated_power(m, top) == doctest::Approx(2 * g * w * n).epsilon(1e-15));
    CHECK(radiated_power(m, ground) == 0.0);
  }
}

TEST_CASE("single atom decays exponentially") {
  const RateModel m(1, 0.8);
  const auto traj = evolve(m, 10.0 / 0.8, 50);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    CHECK(std::abs(traj.populations[i][1] - std::exp(-2 * 0.8 * traj.times[i])) <= 1e-9);
  }
}

TEST_CASE("populations match the matrix exponential") {
  const RateModel three(3, 1.0);
  const std::vector<double> t{0.05};
  const auto got = evolve_at(three, t).populations[0];
  const auto want = oracle::rate_matrix_exponential(three, 0.05);
  for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(got[i] - want[i]) <= 1e-9);

  for (int n = 1; n <= 6; ++n) {
    for (double gamma : {1.0, 0.25}) {
      const RateModel m(n, gamma);
      std::vector<double> times;
      for (int i = 0; i < 20; ++i) times.push_back(std::pow(10.0, -3.0 + 4.0 * i / 19.0) / gamma);
      const auto traj = evolve_at(m, times);
      for (std::size_t r = 0; r < times.size(); ++r) {
        const auto exact = oracle::rate_matrix_exponential(m, times[r]);
        for (std::size_t i = 0; i < exact.size(); ++i) {
          INFO("N=" << n << " t=" << times[r] << " i=" << i);
          CHECK(std::abs(traj.populations[r][i] - exact[i]) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("conservation, positivity and energy decay") {
  for (int n : {2, 7, 50, 300, 1000}) {
    const RateModel m(n, 1.0);
    const auto traj = evolve(m, 10.0, 200);
    INFO("N=" << n);
    CHECK(traj.max_norm_drift <= 1e-9);
    CHECK(traj.min_raw_population >= -1e-10);
    CHECK(traj.times.front() == 0.0);
    CHECK(std::is_sorted(traj.times.begin(), traj.times.end()));
    CHECK(std::adjacent_find(traj.times.begin(), traj.times.end()) == traj.times.end());
    double previous = n + 1.0;
    for (std::size_t r = 0; r < traj.times.size(); ++r) {
      double energy = 0.0;
      for (int j = 0; j <= n; ++j) energy += j * traj.populations[r][static_cast<std::size_t>(j)];
      // slack: each level is controlled to an absolute 1e-14, weighted by j in the energy
      CHECK(energy <= previous * (1 + 1e-12) + 0.5 * n * (n + 1) * 1e-14);
      previous = energy;
      CHECK(traj.power[r] >= 0.0);
    }
  }
}

TEST_CASE("sample grids") {
  const RateModel m(10, 2.0);
  const auto lin = sample_times(m, 4.0, 5, TimeGrid::linear);
  CHECK(lin == std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});
  const auto lg = sample_times(m, 5.0, 400);
  CHECK(lg.size() == 400);
  CHECK(lg.front() == 0.0);
  CHECK(lg[1] == doctest::Approx(1e-3 / 20.0));
  CHECK(lg.back() == 5.0);
  CHECK_THROWS_AS(sample_times(m, 1.0, 1), DomainError);
  CHECK_THROWS_AS(sample_times(m, -1.0, 10), DomainError);
}

TEST_CASE("gmc time series") {
  const RateModel m(7, 1.0);
  const auto traj = evolve(m, 10.0, 120);
  const auto series = gmc_time_series(m, traj, {3, 5});
  // k = 3 and k = 5 pull in 2 and 4; S^2 needs k = 1, which was not requested
  CHECK(series.clusters == std::vector<int>{2, 3, 4, 5});
  for (std::size_t j = 0; j < series.clusters.size(); ++j) CHECK(series.higher[0][j] == 0.0);
  for (std::size_t j = 1; j < series.clusters.size(); ++j) CHECK(series.genuine[0][j] == 0.0);
  CHECK(std::isnan(series.genuine[5][0]));
  for (std::size_t r = 0; r < traj.times.size(); r += 17) {
    const auto mix = traj.mixture(r);
    for (std::size_t j = 0; j < series.clusters.size(); ++j) {
      CHECK(series.higher[r][j] == gmc_higher_mixture(mix, series.clusters[j]));
    }
  }
  CHECK_THROWS_AS(gmc_time_series(m, traj, {8}), DomainError);
}

TEST_CASE("correlations vanish at both ends of the window") {
  for (int n : {2, 5, 10, 25, 50}) {
    const RateModel m(n, 1.0);
    const auto traj = evolve(m, 10.0, 40);
    std::vector<int> all(static_cast<std::size_t>(n));
    std::iota(all.begin(), all.end(), 1);
    const auto series = gmc_time_series(m, traj, all);
    REQUIRE(series.clusters == all);
    for (std::size_t j = 0; j < series.clusters.size(); ++j) {
      INFO("N=" << n << " k=" << series.clusters[j]);
      CHECK(series.higher.front()[j] == 0.0);
      CHECK(std::abs(series.higher.back()[j]) <= 1e-6);
      if (series.clusters[j] >= 2) CHECK(std::abs(series.genuine.back()[j]) <= 1e-6);
    }
  }
}

TEST_CASE("time of maximum power") {
  const RateModel m(50, 1.0);
  const auto rep = find_time_of_max(m, Quantity::power());
  CHECK_FALSE(rep.boundary);
  CHECK(rep.t_lo < rep.t_max);
  CHECK(rep.t_max < rep.t_hi);
  CHECK(rep.refinement_iterations > 0);
  // the refined maximum beats the bracket ends
  const std::vector<double> ends{rep.t_lo, rep.t_hi};
  const auto at_ends = evolve_at(m, ends);
  CHECK(rep.value >= at_ends.power[0]);
  CHECK(rep.value >= at_ends.power[1]);
  // reported value is the quantity at t_max
  const auto at_max = population_snapshot(m, rep.t_max);
  CHECK(rep.value == doctest::Approx(radiated_power(m, at_max.populations())).epsilon(1e-9));
}

TEST_CASE("time of maximum power agrees with a matrix-exponential scan") {
  const RateModel m(40, 1.0);
  const auto rep = find_time_of_max(m, Quantity::power());
  auto power_at = [&](double t) { return radiated_power(m, oracle::rate_matrix_exponential(m, t)); };
  // golden section on the oracle, independent of the integrator and the coarse scan
  double a = 0.2 / 40, b = 5.0 / 40;
  const double r = (std::sqrt(5.0) - 1) / 2;
  while (b - a > 1e-9) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (power_at(c) >= power_at(d)) b = d; else a = c;
  }
  CHECK(std::abs(rep.t_max - (a + b) / 2) <= 1e-6 * rep.t_max);
}

TEST_CASE("power maximum lies within [0.5, 2] / (N gamma) at N = 50") {
  const auto rep = find_time_of_max(RateModel(50, 1.0), Quantity::power());
  CHECK(rep.t_max * 50 >= 0.5);
  CHECK(rep.t_max * 50 <= 2.0);
}

TEST_CASE("power maximum scales with gamma") {
  const auto a = find_time_of_max(RateModel(20, 1.0), Quantity::power());
  const auto b = find_time_of_max(RateModel(20, 4.0, 3.0), Quantity::power());
  CHECK(b.t_max * 4.0 == doctest::Approx(a.t_max).epsilon(1e-5));
  CHECK(b.value == doctest::Approx(a.value * 12.0).epsilon(1e-8));
}

TEST_CASE("single atom has a boundary power maximum") {
  const auto rep = find_time_of_max(RateModel(1, 1.0), Quantity::power());
  CHECK(rep.boundary);
  CHECK(rep.refinement_iterations == 0);
}

TEST_CASE("correlation maximum follows the power maximum") {
  for (int n : {10, 1000}) {
    const RateModel m(n, 1.0);
    const auto tp = find_time_of_max(m, Quantity::power());
    const auto tc = find_time_of_max(m, Quantity::gmc_higher(2));
    CHECK(tc.t_max > tp.t_max);
  }
  CHECK_THROWS_AS(find_time_of_max(RateModel(1, 1.0), Quantity::gmc_higher(2)), DomainError);
}

TEST_CASE("population snapshot") {
  const RateModel m(100, 1.0);
  const auto start = population_snapshot(m, 0.0);
  CHECK(start.population(100) == 1.0);
  const auto tc = find_time_of_max(m, Quantity::gmc_higher(2));
  const auto mix = population_snapshot(m, tc.t_max);
  const auto pops = mix.populations();
  const auto peak = std::max_element(pops.begin(), pops.end()) - pops.begin();
  CHECK(peak >= 100 / 3 - 10);
  CHECK(peak <= 100 / 3 + 10);
  CHECK_THROWS_AS(population_snapshot(m, -1.0), DomainError);
}

TEST_CASE("checkpointed propagation agrees with a single pass") {
  const RateModel m(64, 1.0);
  auto state = PopulationState::initial(m);
  propagate(m, state, 0.01);
  const auto resumed = propagate(m, state, 0.05);
  const std::vector<double> t{0.05};
  const auto direct = evolve_at(m, t).populations[0];
  for (std::size_t i = 0; i < direct.size(); ++i) CHECK(std::abs(resumed[i] - direct[i]) <= 1e-10);
}
