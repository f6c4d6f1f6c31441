#include "dicke_gmc/dicke_core.hpp"

#include <cmath>
#include <string>

#include "dicke_gmc/errors.hpp"
#include "dicke_gmc/stable_math.hpp"

namespace dicke {
namespace {

constexpr double kPopulationSlack = 1e-12;
constexpr double kNormSlack = 1e-10;

void check_cluster(int cluster, int qubits) {
  if (cluster < 1 || cluster > qubits) {
    throw DomainError("cluster size k=" + std::to_string(cluster) + " outside [1, " + std::to_string(qubits) + "]");
  }
}

double entropy_of(std::span<const double> probabilities) {
  CompensatedSum acc;
  for (double p : probabilities) acc += -h(p);
  return acc.value();
}

}  // namespace

DickeLabel::DickeLabel(int qubits, int excitations) : qubits_(qubits), excitations_(excitations) {
  if (qubits < 1) throw DomainError("Dicke state needs N >= 1, got " + std::to_string(qubits));
  if (excitations < 0 || excitations > qubits) {
    throw DomainError("Dicke state |" + std::to_string(qubits) + "," + std::to_string(excitations) +
                      "> has n_e outside [0, N]");
  }
}

DickeMixture::DickeMixture(std::vector<double> populations) : populations_(std::move(populations)) {
  if (populations_.size() < 2) throw DomainError("Dicke mixture needs N >= 1 (at least two populations)");
  CompensatedSum total;
  for (std::size_t n = 0; n < populations_.size(); ++n) {
    double& p = populations_[n];
    if (!std::isfinite(p) || p < -kPopulationSlack) {
      throw DomainError("population P_" + std::to_string(n) + " = " + std::to_string(p) + " is not a probability");
    }
    if (p < 0.0) p = 0.0;
    total += p;
  }
  const double sum = total.value();
  if (std::abs(sum - 1.0) > kNormSlack) {
    throw DomainError("populations sum to " + std::to_string(sum) + ", not 1");
  }
  if (sum != 1.0) {
    for (double& p : populations_) p /= sum;
  }
}

DickeMixture DickeMixture::pure(const DickeLabel& state) {
  std::vector<double> p(static_cast<std::size_t>(state.qubits()) + 1, 0.0);
  p[static_cast<std::size_t>(state.excitations())] = 1.0;
  return DickeMixture(std::move(p));
}

ReducedSpectrum::ReducedSpectrum(int cluster, std::vector<double> weights)
    : cluster_(cluster), weights_(std::move(weights)) {
  if (cluster < 1 || weights_.size() != static_cast<std::size_t>(cluster) + 1) {
    throw DomainError("reduced spectrum of a " + std::to_string(cluster) + "-qubit cluster needs k+1 weights");
  }
}

ReducedSpectrum reduced_spectrum_pure(const DickeLabel& state, int cluster) {
  check_cluster(cluster, state.qubits());
  std::vector<double> w(static_cast<std::size_t>(cluster) + 1);
  for (int i = 0; i <= cluster; ++i) {
    w[static_cast<std::size_t>(i)] = hypergeometric_weight(state.qubits(), state.excitations(), cluster, i);
  }
  return ReducedSpectrum(cluster, std::move(w));
}

ReducedSpectrum reduced_spectrum_mixture(const DickeMixture& mix, int cluster) {
  const int n = mix.qubits();
  check_cluster(cluster, n);
  const int rest = n - cluster;
  const auto pops = mix.populations();

  // ln P_m - ln C(N, m), shared by every (j, l) with j + l = m.
  std::vector<double> level(static_cast<std::size_t>(n) + 1);
  for (int m = 0; m <= n; ++m) {
    const double p = pops[static_cast<std::size_t>(m)];
    level[static_cast<std::size_t>(m)] =
        p > 0.0 ? std::log(p) - log_binomial(n, m).value : LogValue::zero().value;
  }
  std::vector<double> rest_binomial(static_cast<std::size_t>(rest) + 1);
  for (int l = 0; l <= rest; ++l) rest_binomial[static_cast<std::size_t>(l)] = log_binomial(rest, l).value;

  std::vector<double> w(static_cast<std::size_t>(cluster) + 1, 0.0);
  for (int j = 0; j <= cluster; ++j) {
    const double local = log_binomial(cluster, j).value;
    CompensatedSum acc;
    for (int l = 0; l <= rest; ++l) {
      const double lv = level[static_cast<std::size_t>(j + l)];
      if (lv == LogValue::zero().value) continue;
      acc += std::exp(local + rest_binomial[static_cast<std::size_t>(l)] + lv);
    }
    const double value = acc.value();
    w[static_cast<std::size_t>(j)] = value < kFlushThreshold ? 0.0 : value;
  }
  return ReducedSpectrum(cluster, std::move(w));
}

double entropy_of_spectrum(const ReducedSpectrum& spectrum) { return entropy_of(spectrum.weights()); }

double mixture_entropy(const DickeMixture& mix) { return entropy_of(mix.populations()); }

}  // namespace dicke
