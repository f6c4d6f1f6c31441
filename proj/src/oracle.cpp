#include "dicke_gmc/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "dicke_gmc/errors.hpp"

namespace dicke::oracle {
namespace {

void guard(int qubits, int limit, const char* what) {
  if (qubits > limit) {
    throw CapacityError(std::string(what) + ": N=" + std::to_string(qubits) + " exceeds the guard N <= " +
                        std::to_string(limit));
  }
}

void check_keep(int qubits, int keep) {
  if (keep < 1 || keep >= qubits) {
    throw DomainError("partial trace keeps k=" + std::to_string(keep) + " qubits; need 1 <= k < N=" +
                      std::to_string(qubits));
  }
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

DenseVector dense_dicke_state(const DickeLabel& label) {
  const int n = label.qubits();
  guard(n, kMaxVectorQubits, "dense_dicke_state");
  const std::size_t dim = std::size_t{1} << n;
  std::size_t count = 0;
  for (std::size_t b = 0; b < dim; ++b) {
    if (std::popcount(b) == label.excitations()) ++count;
  }
  DenseVector psi = DenseVector::Zero(static_cast<Eigen::Index>(dim));
  const double amp = 1.0 / std::sqrt(static_cast<double>(count));
  for (std::size_t b = 0; b < dim; ++b) {
    if (std::popcount(b) == label.excitations()) psi(static_cast<Eigen::Index>(b)) = amp;
  }
  return psi;
}

DenseMatrix dense_projector(const DenseVector& state) { return state * state.adjoint(); }

DenseMatrix dense_mixture(const DickeMixture& mix) {
  const int n = mix.qubits();
  guard(n, kMaxMatrixQubits, "dense_mixture");
  const Eigen::Index dim = Eigen::Index{1} << n;
  DenseMatrix rho = DenseMatrix::Zero(dim, dim);
  for (int m = 0; m <= n; ++m) {
    const double p = mix.population(m);
    if (p == 0.0) continue;
    const DenseVector psi = dense_dicke_state(DickeLabel(n, m));
    rho += p * dense_projector(psi);
  }
  return rho;
}

DenseMatrix dense_partial_trace(const DenseMatrix& rho, int qubits, int keep) {
  guard(qubits, kMaxMatrixQubits, "dense_partial_trace");
  check_keep(qubits, keep);
  const Eigen::Index kept = Eigen::Index{1} << keep;
  const Eigen::Index traced = Eigen::Index{1} << (qubits - keep);
  DenseMatrix out = DenseMatrix::Zero(kept, kept);
  for (Eigen::Index a = 0; a < kept; ++a) {
    for (Eigen::Index b = 0; b < kept; ++b) {
      std::complex<double> acc = 0.0;
      for (Eigen::Index c = 0; c < traced; ++c) acc += rho(a * traced + c, b * traced + c);
      out(a, b) = acc;
    }
  }
  return out;
}

DenseMatrix dense_partial_trace(const DenseVector& psi, int qubits, int keep) {
  guard(qubits, kMaxVectorQubits, "dense_partial_trace");
  check_keep(qubits, keep);
  if (keep > kMaxReducedQubits) {
    throw CapacityError("reduced matrix on " + std::to_string(keep) + " qubits exceeds the guard");
  }
  const Eigen::Index kept = Eigen::Index{1} << keep;
  const Eigen::Index traced = Eigen::Index{1} << (qubits - keep);
  // psi reshaped row-major: row = kept index, column = traced index.
  const Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
      psi.data(), kept, traced);
  return m * m.adjoint();
}

DenseMatrix dense_partial_trace_subset(const DenseMatrix& rho, int qubits, std::uint32_t keep_mask) {
  guard(qubits, kMaxMatrixQubits, "dense_partial_trace_subset");
  std::vector<int> kept_bits, traced_bits;
  for (int q = 0; q < qubits; ++q) {
    const int bit = qubits - 1 - q;
    ((keep_mask >> q) & 1u ? kept_bits : traced_bits).push_back(bit);
  }
  if (kept_bits.empty() || traced_bits.empty()) throw DomainError("subset must keep and trace at least one qubit");
  auto scatter = [](std::size_t packed, const std::vector<int>& bits) {
    std::size_t full = 0;
    for (std::size_t j = 0; j < bits.size(); ++j) {
      if ((packed >> (bits.size() - 1 - j)) & 1u) full |= std::size_t{1} << bits[j];
    }
    return full;
  };
  const std::size_t kept = std::size_t{1} << kept_bits.size();
  const std::size_t traced = std::size_t{1} << traced_bits.size();
  DenseMatrix out = DenseMatrix::Zero(static_cast<Eigen::Index>(kept), static_cast<Eigen::Index>(kept));
  for (std::size_t a = 0; a < kept; ++a) {
    for (std::size_t b = 0; b < kept; ++b) {
      std::complex<double> acc = 0.0;
      for (std::size_t c = 0; c < traced; ++c) {
        const auto tc = scatter(c, traced_bits);
        acc += rho(static_cast<Eigen::Index>(scatter(a, kept_bits) | tc),
                   static_cast<Eigen::Index>(scatter(b, kept_bits) | tc));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = acc;
    }
  }
  return out;
}

std::vector<double> eigenvalues(const DenseMatrix& rho) {
  if (rho.rows() != rho.cols()) throw DomainError("density matrix must be square");
  const double skew = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (skew > 1e-10) throw DomainError("matrix is not Hermitian (deviation " + std::to_string(skew) + ")");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(rho, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> reduced_eigenvalues_pure(const DenseVector& psi, int qubits, int keep) {
  guard(qubits, kMaxVectorQubits, "reduced_eigenvalues_pure");
  check_keep(qubits, keep);
  const Eigen::Index kept = Eigen::Index{1} << keep;
  const Eigen::Index traced = Eigen::Index{1} << (qubits - keep);
  const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m =
      Eigen::Map<const Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
          psi.data(), kept, traced);
  // Gram matrix on the smaller side; the iterative SVD drivers lose eigenvalues on wide complex inputs here.
  const DenseMatrix gram = kept <= traced ? DenseMatrix(m * m.adjoint()) : DenseMatrix(m.adjoint() * m);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(gram, Eigen::EigenvaluesOnly);
  std::vector<double> out(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(out.begin(), out.end());
  return out;
}

double entropy_of_eigenvalues(const std::vector<double>& lambda) {
  double s = 0.0;
  for (double l : lambda) s -= xlogx(l < 1e-12 ? 0.0 : l);
  return s;
}

double eigen_entropy(const DenseMatrix& rho) { return entropy_of_eigenvalues(eigenvalues(rho)); }

std::vector<double> rate_matrix_exponential(const RateModel& model, double t) {
  const int n = model.qubits();
  guard(n, kMaxRateQubits, "rate_matrix_exponential");
  if (!(t >= 0.0)) throw DomainError("time must be non-negative");
  const Eigen::Index dim = n + 1;
  std::vector<double> p0(static_cast<std::size_t>(dim), 0.0);
  p0.back() = 1.0;
  if (t == 0.0) return p0;

  // G = B - q I with B >= 0 entrywise. exp(G tau) = e^{-q tau} exp(B tau) has a Taylor
  // series of non-negative terms, and squaring non-negative matrices never cancels.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(dim, dim);
  double q = 0.0;
  for (int m = 0; m <= n; ++m) q = std::max(q, 2.0 * model.gamma() * m * (n - m + 1));
  for (int m = 0; m <= n; ++m) {
    const double nu = 2.0 * model.gamma() * m * (n - m + 1);
    b(m, m) = q - nu;
    if (m + 1 <= n) b(m, m + 1) = 2.0 * model.gamma() * (m + 1) * (n - m);
  }
  int squarings = 0;
  double tau = t;
  while (q * tau > 0.5) {
    tau *= 0.5;
    ++squarings;
  }
  const Eigen::MatrixXd bt = b * tau;
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd sum = term;
  for (int j = 1; j <= 40; ++j) {
    term = term * bt / static_cast<double>(j);
    sum += term;
    if (term.maxCoeff() <= 1e-18 * sum.maxCoeff()) break;
  }
  Eigen::MatrixXd e = std::exp(-q * tau) * sum;
  for (int s = 0; s < squarings; ++s) e = e * e;

  const Eigen::VectorXd p = e.col(dim - 1);
  return {p.data(), p.data() + p.size()};
}

std::vector<double> dense_cluster_entropies(const DickeLabel& label) {
  const int n = label.qubits();
  const DenseVector psi = dense_dicke_state(label);
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  for (int c = 1; c < n; ++c) s[static_cast<std::size_t>(c - 1)] = entropy_of_eigenvalues(reduced_eigenvalues_pure(psi, n, c));
  return s;
}

std::vector<double> dense_cluster_entropies(const DickeMixture& mix) {
  const int n = mix.qubits();
  const DenseMatrix rho = dense_mixture(mix);
  std::vector<double> s(static_cast<std::size_t>(n), 0.0);
  for (int c = 1; c < n; ++c) s[static_cast<std::size_t>(c - 1)] = eigen_entropy(dense_partial_trace(rho, n, c));
  s.back() = eigen_entropy(rho);
  return s;
}

double homogeneous_partition_distance(const std::vector<double>& cluster_entropies, int k) {
  const int n = static_cast<int>(cluster_entropies.size());
  if (k < 1 || k > n) throw DomainError("cluster size out of range");
  auto entropy = [&](int c) { return cluster_entropies[static_cast<std::size_t>(c - 1)]; };
  double value = (n / k) * entropy(k) - entropy(n);
  if (n % k != 0) value += entropy(n % k);
  return value;
}

double oracle_higher_pure(const DickeLabel& label, int k) {
  return homogeneous_partition_distance(dense_cluster_entropies(label), k);
}

double oracle_higher_mixture(const DickeMixture& mix, int k) {
  return homogeneous_partition_distance(dense_cluster_entropies(mix), k);
}

}  // namespace dicke::oracle
