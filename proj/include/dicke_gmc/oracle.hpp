#pragma once

// Brute-force reference in the full 2^N-dimensional qubit space. Deliberately naive and
// independent of the closed-form Dicke-basis formulas; only tests and `verify` use it.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dicke_gmc/dicke_core.hpp"
#include "dicke_gmc/superradiance.hpp"

namespace dicke::oracle {

/// Amplitude vectors are built for N up to this size.
inline constexpr int kMaxVectorQubits = 14;
/// Density matrices are built for N up to this size.
inline constexpr int kMaxMatrixQubits = 10;
/// Reduced matrices materialized from a pure vector stay below 2^12 on a side.
inline constexpr int kMaxReducedQubits = 12;
/// Generator size limit for the matrix-exponential propagator.
inline constexpr int kMaxRateQubits = 64;

using DenseVector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;

/// Qubit q (0-based, q = 0 first) is bit N-1-q of the basis index.
DenseVector dense_dicke_state(const DickeLabel& label);

DenseMatrix dense_projector(const DenseVector& state);

/// sum_n P_n |N, n><N, n| as a 2^N x 2^N matrix.
DenseMatrix dense_mixture(const DickeMixture& mix);

/// Keeps the first k qubits, tracing out the last N-k by index contraction. 1 <= k < N.
DenseMatrix dense_partial_trace(const DenseMatrix& rho, int qubits, int keep);
DenseMatrix dense_partial_trace(const DenseVector& psi, int qubits, int keep);

/// Keeps an arbitrary subset of qubits (bit q of `keep_mask` set = keep qubit q).
DenseMatrix dense_partial_trace_subset(const DenseMatrix& rho, int qubits, std::uint32_t keep_mask);

/// Eigenvalues of a Hermitian matrix, ascending. Throws DomainError if non-Hermitian beyond 1e-10.
std::vector<double> eigenvalues(const DenseMatrix& rho);

/// Spectrum of the Gram matrix of the 2^k x 2^(N-k) reshaped amplitude vector: the spectrum of
/// the first-k-qubit reduced state without forming it.
std::vector<double> reduced_eigenvalues_pure(const DenseVector& psi, int qubits, int keep);

/// -sum h(lambda) with eigenvalues below 1e-12 floored to 0.
double eigen_entropy(const DenseMatrix& rho);
double entropy_of_eigenvalues(const std::vector<double>& lambda);

/// exp(G t) applied to P_N(0) = 1, G the (N+1) x (N+1) rate generator.
/// Uniformized scaling-and-squaring: all intermediate matrices are entrywise non-negative.
std::vector<double> rate_matrix_exponential(const RateModel& model, double t);

/// Entry c-1 holds S(rho_c) of the first c qubits, c = 1..N (the last entry is the
/// global entropy, 0 for a pure state).
std::vector<double> dense_cluster_entropies(const DickeLabel& label);
std::vector<double> dense_cluster_entropies(const DickeMixture& mix);

/// sum over the homogeneous partition minus the global entropy, from dense entropies.
double homogeneous_partition_distance(const std::vector<double>& cluster_entropies, int k);

/// S^(k->N) assembled from dense entropies over the homogeneous partition.
double oracle_higher_pure(const DickeLabel& label, int k);
double oracle_higher_mixture(const DickeMixture& mix, int k);

}  // namespace dicke::oracle
