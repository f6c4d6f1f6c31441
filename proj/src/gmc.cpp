#include "dicke_gmc/gmc.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dicke_gmc/errors.hpp"
#include "dicke_gmc/parallel.hpp"
#include "dicke_gmc/stable_math.hpp"

namespace dicke {
namespace {

void check_cluster(int k, int qubits) {
  if (k < 1 || k > qubits) {
    throw DomainError("cluster size k=" + std::to_string(k) + " outside [1, " + std::to_string(qubits) + "]");
  }
}

// floor(N/k) S(rho_k) - S(rho_N) + [N mod k != 0] S(rho_{N mod k}), for the
// homogeneous partition. Shared by the single-k and profile paths so both agree bitwise.
double assemble_higher(int n, int k, double cluster_entropy, double remainder_entropy, double global_entropy) {
  if (k == n) return 0.0;
  double value = static_cast<double>(n / k) * cluster_entropy - global_entropy;
  if (n % k != 0) value += remainder_entropy;
  return value;
}

template <typename EntropyOf>
GmcProfile assemble_profile(int n, double global_entropy, EntropyOf&& entropy_of_cluster) {
  // Every remainder N mod k is itself a cluster size < k, so one entropy per size suffices.
  std::vector<double> entropy(static_cast<std::size_t>(n) + 1, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t idx) {
    const int c = static_cast<int>(idx) + 1;
    entropy[static_cast<std::size_t>(c)] = entropy_of_cluster(c);
  });
  std::vector<double> higher(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    higher[static_cast<std::size_t>(k - 1)] = assemble_higher(
        n, k, entropy[static_cast<std::size_t>(k)], entropy[static_cast<std::size_t>(n % k)], global_entropy);
  }
  return GmcProfile(std::move(higher));
}

}  // namespace

GmcProfile::GmcProfile(std::vector<double> higher) : higher_(std::move(higher)) {
  if (higher_.empty()) throw DomainError("GMC profile needs N >= 1");
  if (higher_.back() != 0.0) throw InvariantViolation("S^(N->N) must be exactly 0");
  for (std::size_t i = 0; i < higher_.size(); ++i) {
    if (!(higher_[i] >= -kCorrelationSlack)) {
      throw InvariantViolation("S^(" + std::to_string(i + 1) + "->N) = " + std::to_string(higher_[i]) +
                               " is negative beyond round-off");
    }
  }
  genuine_.resize(higher_.size() > 1 ? higher_.size() - 1 : 0);
  for (std::size_t i = 1; i < higher_.size(); ++i) {
    genuine_[i - 1] = higher_[i - 1] - higher_[i];
    if (higher_[i] > higher_[i - 1] + kCorrelationSlack) violations_.push_back(static_cast<int>(i));
  }
}

double GmcProfile::higher(int k) const {
  check_cluster(k, qubits());
  return higher_[static_cast<std::size_t>(k - 1)];
}

double GmcProfile::reported_higher(int k) const {
  const double v = higher(k);
  return v < 0.0 ? 0.0 : v;
}

double GmcProfile::genuine(int k) const {
  if (k < 2 || k > qubits()) {
    throw DomainError("S^k defined for 2 <= k <= N, got k=" + std::to_string(k));
  }
  return genuine_[static_cast<std::size_t>(k - 2)];
}

WeightScheme::WeightScheme(std::vector<double> big_omega, std::vector<double> small_omega)
    : big_omega_(std::move(big_omega)), small_omega_(std::move(small_omega)) {
  for (std::size_t i = 0; i < small_omega_.size(); ++i) {
    if (!(small_omega_[i] >= 0.0) || !std::isfinite(small_omega_[i])) {
      throw DomainError("weaving weight omega_" + std::to_string(i + 2) + " must be finite and non-negative");
    }
  }
}

WeightScheme WeightScheme::from_big_omega(std::vector<double> big_omega) {
  std::vector<double> small(big_omega.size());
  CompensatedSum running;
  for (std::size_t i = 0; i < big_omega.size(); ++i) {
    running += big_omega[i];
    small[i] = running.value();
  }
  return WeightScheme(std::move(big_omega), std::move(small));
}

WeightScheme WeightScheme::from_small_omega(std::vector<double> small_omega) {
  std::vector<double> big(small_omega.size());
  for (std::size_t i = 0; i < small_omega.size(); ++i) {
    big[i] = i == 0 ? small_omega[0] : small_omega[i] - small_omega[i - 1];
  }
  return WeightScheme(std::move(big), std::move(small_omega));
}

WeightScheme WeightScheme::k_minus_one(int qubits) {
  if (qubits < 1) throw DomainError("weight scheme needs N >= 1");
  return from_big_omega(std::vector<double>(static_cast<std::size_t>(qubits - 1), 1.0));
}

WeightScheme WeightScheme::uniform(int qubits) {
  if (qubits < 1) throw DomainError("weight scheme needs N >= 1");
  return from_small_omega(std::vector<double>(static_cast<std::size_t>(qubits - 1), 1.0));
}

WeightScheme WeightScheme::delta(int qubits, int l) {
  if (qubits < 2 || l < 2 || l > qubits) {
    throw DomainError("delta weights need 2 <= l <= N, got l=" + std::to_string(l));
  }
  std::vector<double> small(static_cast<std::size_t>(qubits - 1), 0.0);
  small[static_cast<std::size_t>(l - 2)] = 1.0;
  return from_small_omega(std::move(small));
}

double gmc_higher_pure(const DickeLabel& state, int k) {
  const int n = state.qubits();
  check_cluster(k, n);
  const double cluster = entropy_of_spectrum(reduced_spectrum_pure(state, k));
  const double remainder = n % k != 0 ? entropy_of_spectrum(reduced_spectrum_pure(state, n % k)) : 0.0;
  return assemble_higher(n, k, cluster, remainder, 0.0);
}

double gmc_higher_mixture(const DickeMixture& mix, int k) {
  const int n = mix.qubits();
  check_cluster(k, n);
  if (k == n) return 0.0;
  const double cluster = entropy_of_spectrum(reduced_spectrum_mixture(mix, k));
  const double remainder = n % k != 0 ? entropy_of_spectrum(reduced_spectrum_mixture(mix, n % k)) : 0.0;
  return assemble_higher(n, k, cluster, remainder, mixture_entropy(mix));
}

GmcProfile gmc_profile(const DickeLabel& state) {
  return assemble_profile(state.qubits(), 0.0,
                          [&](int c) { return entropy_of_spectrum(reduced_spectrum_pure(state, c)); });
}

GmcProfile gmc_profile(const DickeMixture& mix) {
  const int n = mix.qubits();
  return assemble_profile(n, mixture_entropy(mix), [&](int c) {
    // The k = N cluster entropy never enters a value (S^(N->N) is pinned to 0).
    return c == n ? 0.0 : entropy_of_spectrum(reduced_spectrum_mixture(mix, c));
  });
}

double total_correlations(const DickeLabel& state) { return gmc_higher_pure(state, 1); }

double total_correlations(const DickeMixture& mix) { return gmc_higher_mixture(mix, 1); }

double weaving(const GmcProfile& profile, const WeightScheme& weights) {
  const int n = profile.qubits();
  if (weights.qubits() != n) {
    throw DomainError("weight scheme sized for N=" + std::to_string(weights.qubits()) + " applied to N=" +
                      std::to_string(n));
  }
  CompensatedSum by_genuine, by_higher, scale;
  for (int k = 2; k <= n; ++k) {
    const double term = weights.small_omega(k) * profile.genuine(k);
    by_genuine += term;
    scale += std::abs(term);
  }
  for (int k = 1; k <= n - 1; ++k) {
    const double term = weights.big_omega(k) * profile.higher(k);
    by_higher += term;
    scale += std::abs(term);
  }
  const double w = by_genuine.value();
  if (std::abs(w - by_higher.value()) > kCorrelationSlack * std::max(1.0, scale.value())) {
    throw InvariantViolation("weaving forms disagree: " + std::to_string(w) + " vs " +
                             std::to_string(by_higher.value()));
  }
  return w;
}

}  // namespace dicke
