#pragma once

#include <span>
#include <vector>

namespace dicke {

/// The pure symmetric state |N, n_e>: N qubits with n_e excitations.
class DickeLabel {
 public:
  /// Throws DomainError unless N >= 1 and 0 <= n_e <= N.
  DickeLabel(int qubits, int excitations);

  int qubits() const noexcept { return qubits_; }
  int excitations() const noexcept { return excitations_; }

  friend bool operator==(const DickeLabel&, const DickeLabel&) = default;

 private:
  int qubits_;
  int excitations_;
};

/// Incoherent mixture sum_n P_n |N, n><N, n|, diagonal in the Dicke basis.
///
/// Construction absorbs integrator round-off: entries in [-1e-12, 0) are clamped
/// to 0 and a total within 1e-10 of one is renormalized. Anything worse throws.
class DickeMixture {
 public:
  explicit DickeMixture(std::vector<double> populations);

  static DickeMixture pure(const DickeLabel& state);

  int qubits() const noexcept { return static_cast<int>(populations_.size()) - 1; }
  std::span<const double> populations() const noexcept { return populations_; }
  double population(int excitations) const { return populations_.at(static_cast<std::size_t>(excitations)); }

 private:
  std::vector<double> populations_;
};

/// Eigenvalues of a k-qubit reduced state, indexed by local excitation number 0..k.
class ReducedSpectrum {
 public:
  ReducedSpectrum(int cluster, std::vector<double> weights);

  int cluster() const noexcept { return cluster_; }
  std::span<const double> weights() const noexcept { return weights_; }

 private:
  int cluster_;
  std::vector<double> weights_;
};

ReducedSpectrum reduced_spectrum_pure(const DickeLabel& state, int cluster);
ReducedSpectrum reduced_spectrum_mixture(const DickeMixture& mix, int cluster);

/// Von Neumann entropy in nats.
double entropy_of_spectrum(const ReducedSpectrum& spectrum);
double mixture_entropy(const DickeMixture& mix);

}  // namespace dicke
