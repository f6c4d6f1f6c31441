#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "dicke_gmc/cli.hpp"
#include "dicke_gmc/gmc.hpp"
#include "dicke_gmc/oracle.hpp"
#include "dicke_gmc/superradiance.hpp"

namespace dicke::cli {
namespace {

struct Check {
  std::string name;
  double tolerance;
  long cases = 0;
  double max_error = 0.0;
  std::optional<std::string> first_failure;

  Check(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

  void record(double error, const std::string& where) {
    ++cases;
    max_error = std::max(max_error, error);
    if (!(error <= tolerance) && !first_failure) first_failure = where;
  }
  bool passed() const { return !first_failure; }
};

std::vector<double> nonzero_sorted(std::vector<double> v, double floor) {
  std::erase_if(v, [&](double x) { return x <= floor; });
  std::sort(v.begin(), v.end());
  return v;
}

double multiset_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

constexpr double kEigenFloor = 1e-9;

}  // namespace

int cmd_verify(const RunConfig& config, std::ostream& report, std::ostream& log) {
  const int max_n = config.max_qubits;
  if (max_n < 1) throw std::invalid_argument("--max-n must be at least 1");
  const int vector_n = std::min(max_n, oracle::kMaxVectorQubits);
  const int matrix_n = std::min(max_n, oracle::kMaxMatrixQubits);
  if (max_n > oracle::kMaxVectorQubits) {
    log << fmt::format("warning: capacity guard limits vector paths to N <= {}\n", oracle::kMaxVectorQubits);
  }
  if (max_n > oracle::kMaxMatrixQubits) {
    log << fmt::format("warning: capacity guard limits matrix (mixture) paths to N <= {}; N={}..{} skipped there\n",
                       oracle::kMaxMatrixQubits, oracle::kMaxMatrixQubits + 1, max_n);
  }

  Check spectrum_pure{"reduced spectrum, pure", 1e-10};
  Check higher_pure{"S^(k->N), pure", 1e-9};
  Check populations{"populations vs matrix exponential", 1e-9};
  Check spectrum_mix{"reduced spectrum, mixture", 1e-9};
  Check higher_mix{"S^(k->N), mixture", 1e-9};

  for (int n = 1; n <= vector_n; ++n) {
    for (int ne = 0; ne <= n; ++ne) {
      const DickeLabel label(n, ne);
      const auto psi = oracle::dense_dicke_state(label);
      for (int k = 1; k < n; ++k) {
        const auto spectrum = reduced_spectrum_pure(label, k);
        const auto weights = spectrum.weights();
        const double err =
            multiset_distance(nonzero_sorted({weights.begin(), weights.end()}, kEigenFloor),
                              nonzero_sorted(oracle::reduced_eigenvalues_pure(psi, n, k), kEigenFloor));
        spectrum_pure.record(err, fmt::format("(N={}, n_e={}, k={})", n, ne, k));
      }
      const auto entropies = oracle::dense_cluster_entropies(label);
      for (int k = 1; k <= n; ++k) {
        double value = gmc_higher_pure(label, k);
        if (config.inject_fault && n == 4 && ne == 2 && k == 2) value += 1e-6;
        const double err = std::abs(value - oracle::homogeneous_partition_distance(entropies, k));
        higher_pure.record(err, fmt::format("(N={}, n_e={}, k={})", n, ne, k));
      }
    }
  }

  std::vector<double> gamma_times(5);
  for (int i = 0; i < 5; ++i) gamma_times[static_cast<std::size_t>(i)] = std::pow(10.0, -2.0 + 0.5 * i);
  for (int n = 1; n <= max_n; ++n) {
    const RateModel model(n, config.gamma, config.omega_freq);
    std::vector<double> times;
    for (double gt : gamma_times) times.push_back(gt / config.gamma);
    const Trajectory traj = evolve_at(model, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      const auto exact = oracle::rate_matrix_exponential(model, times[i]);
      double err = 0.0;
      for (std::size_t m = 0; m < exact.size(); ++m) err = std::max(err, std::abs(exact[m] - traj.populations[i][m]));
      populations.record(err, fmt::format("(N={}, gamma t={:g})", n, gamma_times[i]));

      if (n < 2 || n > matrix_n) continue;
      const DickeMixture mix = traj.mixture(i);
      const auto rho = oracle::dense_mixture(mix);
      std::vector<double> entropies(static_cast<std::size_t>(n));
      for (int c = 1; c < n; ++c) {
        const auto lambda = oracle::eigenvalues(oracle::dense_partial_trace(rho, n, c));
        const auto spectrum = reduced_spectrum_mixture(mix, c);
        const auto weights = spectrum.weights();
        spectrum_mix.record(multiset_distance(nonzero_sorted({weights.begin(), weights.end()}, kEigenFloor),
                                              nonzero_sorted(lambda, kEigenFloor)),
                            fmt::format("(N={}, k={}, gamma t={:g})", n, c, gamma_times[i]));
        entropies[static_cast<std::size_t>(c - 1)] = oracle::entropy_of_eigenvalues(lambda);
      }
      entropies.back() = oracle::eigen_entropy(rho);
      for (int k = 1; k <= n; ++k) {
        const double err =
            std::abs(gmc_higher_mixture(mix, k) - oracle::homogeneous_partition_distance(entropies, k));
        higher_mix.record(err, fmt::format("(N={}, k={}, gamma t={:g})", n, k, gamma_times[i]));
      }
    }
  }

  bool all = true;
  report << fmt::format("{:<36} {:>7} {:>12} {:>10}  {}\n", "check", "cases", "max_error", "tolerance", "status");
  for (const Check* c : {&spectrum_pure, &higher_pure, &populations, &spectrum_mix, &higher_mix}) {
    report << fmt::format("{:<36} {:>7} {:>12.3e} {:>10.0e}  {}\n", c->name, c->cases, c->max_error, c->tolerance,
                          c->passed() ? "PASS" : "FAIL");
    if (!c->passed()) {
      report << fmt::format("  first mismatch at {}\n", *c->first_failure);
      all = false;
    }
  }
  report << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
  return all ? kSuccess : kFailure;
}

}  // namespace dicke::cli
