#pragma once

#include <span>
#include <vector>

#include "dicke_gmc/dicke_core.hpp"

namespace dicke {

/// Tolerance on round-off in S^(k->N): values in [-tol, 0) are reported as 0,
/// anything lower throws InvariantViolation. Also the slack for monotonicity in k.
inline constexpr double kCorrelationSlack = 1e-9;

/// S^(k->N) for k = 1..N together with the genuine k-partite parts S^k, k = 2..N.
class GmcProfile {
 public:
  /// `higher[k-1]` holds S^(k->N). The last entry must be 0.
  explicit GmcProfile(std::vector<double> higher);

  int qubits() const noexcept { return static_cast<int>(higher_.size()); }

  /// Raw S^(k->N), 1 <= k <= N.
  double higher(int k) const;
  /// S^(k->N) with round-off negatives in [-1e-9, 0) clamped to 0.
  double reported_higher(int k) const;
  /// S^k = S^(k-1->N) - S^(k->N), 2 <= k <= N.
  double genuine(int k) const;
  /// T = S^(1->N).
  double total() const { return higher(1); }

  /// Values of k where S^((k+1)->N) exceeds S^(k->N) by more than 1e-9.
  const std::vector<int>& monotonicity_violations() const noexcept { return violations_; }

 private:
  std::vector<double> higher_;
  std::vector<double> genuine_;
  std::vector<int> violations_;
};

/// Weights for the weaving sum. Stored as Omega_k (k = 1..N-1); omega_k = sum_{i<k} Omega_i.
/// Only omega_k >= 0 is required, so delta-type schemes with a negative Omega are allowed.
class WeightScheme {
 public:
  static WeightScheme from_big_omega(std::vector<double> big_omega);
  /// omega_k for k = 2..N, i.e. `small_omega[k-2]`.
  static WeightScheme from_small_omega(std::vector<double> small_omega);

  /// omega_k = k - 1 (Omega_k = 1). Default scheme.
  static WeightScheme k_minus_one(int qubits);
  /// omega_k = 1: weaving equals total correlations.
  static WeightScheme uniform(int qubits);
  /// omega_k = delta_{k,l}: weaving equals S^l.
  static WeightScheme delta(int qubits, int l);

  int qubits() const noexcept { return static_cast<int>(big_omega_.size()) + 1; }
  double big_omega(int k) const { return big_omega_.at(static_cast<std::size_t>(k - 1)); }
  double small_omega(int k) const { return small_omega_.at(static_cast<std::size_t>(k - 2)); }

 private:
  WeightScheme(std::vector<double> big_omega, std::vector<double> small_omega);

  std::vector<double> big_omega_;
  std::vector<double> small_omega_;
};

double gmc_higher_pure(const DickeLabel& state, int k);
double gmc_higher_mixture(const DickeMixture& mix, int k);

GmcProfile gmc_profile(const DickeLabel& state);
GmcProfile gmc_profile(const DickeMixture& mix);

double total_correlations(const DickeLabel& state);
double total_correlations(const DickeMixture& mix);

/// sum_{k=2}^N omega_k S^k. The equivalent sum_{k=1}^{N-1} Omega_k S^(k->N) is computed
/// too; a relative mismatch above 1e-9 throws InvariantViolation.
double weaving(const GmcProfile& profile, const WeightScheme& weights);

}  // namespace dicke
