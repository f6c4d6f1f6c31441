#pragma once

#include <span>
#include <vector>

#include "dicke_gmc/dicke_core.hpp"

namespace dicke {

/// N two-level atoms decaying collectively at rate gamma, transition frequency omega_freq.
class RateModel {
 public:
  RateModel(int qubits, double gamma, double omega_freq = 1.0);

  int qubits() const noexcept { return qubits_; }
  double gamma() const noexcept { return gamma_; }
  double omega_freq() const noexcept { return omega_freq_; }

  /// nu_n = 2 gamma n (N - n + 1); zero outside 1..N.
  double decay_rate(int excitations) const noexcept;

 private:
  int qubits_;
  double gamma_;
  double omega_freq_;
};

/// dP_n/dt = nu_{n+1} P_{n+1} - nu_n P_n. Throws DomainError on a length mismatch.
std::vector<double> rate_derivative(const RateModel& model, std::span<const double> populations);

/// 2 gamma omega sum_n n (1 + N - n) P_n.
double radiated_power(const RateModel& model, std::span<const double> populations);

enum class TimeGrid { log, linear };

/// Sample times on [0, t_end]. The log grid is {0} followed by samples-1 points
/// log-spaced from 1e-3/(N gamma) (or t_end/1e4 if that is smaller) to t_end.
std::vector<double> sample_times(const RateModel& model, double t_end, int samples, TimeGrid grid = TimeGrid::log);

struct Trajectory {
  std::vector<double> times;
  /// Row i holds P_0..P_N at times[i], renormalized.
  std::vector<std::vector<double>> populations;
  std::vector<double> power;

  /// Worst |sum_n P_n - 1| and most negative entry seen before renormalization.
  double max_norm_drift = 0.0;
  double min_raw_population = 0.0;

  DickeMixture mixture(std::size_t row) const { return DickeMixture(populations.at(row)); }
};

/// Integrates from P_N(0) = 1 with an adaptive Dormand-Prince 5(4) pair
/// (rtol 1e-10, atol 1e-14) and reads the samples off its dense output.
Trajectory evolve(const RateModel& model, double t_end, int samples, TimeGrid grid = TimeGrid::log);

/// Same, at caller-supplied non-decreasing times >= 0.
Trajectory evolve_at(const RateModel& model, std::span<const double> times);

/// Raw integrator state. Used to restart integration from a checkpoint.
struct PopulationState {
  double time = 0.0;
  std::vector<double> populations;
  /// Last accepted step size; 0 lets the integrator pick one.
  double step_hint = 0.0;

  static PopulationState initial(const RateModel& model);
};

/// Advances `state` to `t_target` (>= state.time) and returns the raw populations there.
std::vector<double> propagate(const RateModel& model, PopulationState& state, double t_target);

DickeMixture population_snapshot(const RateModel& model, double t);

/// S^(k->N)(t) and S^k(t) on a trajectory's time grid.
struct GmcSeries {
  std::vector<double> times;
  /// Sorted cluster sizes; closed so that k-1 is present whenever k >= 2 is.
  std::vector<int> clusters;
  /// higher[row][j] is S^(clusters[j]->N) at times[row].
  std::vector<std::vector<double>> higher;
  /// genuine[row][j] is S^(clusters[j]) at times[row]; NaN for k = 1.
  std::vector<std::vector<double>> genuine;
};

GmcSeries gmc_time_series(const RateModel& model, const Trajectory& trajectory, std::vector<int> clusters);

struct Quantity {
  enum class Kind { power, gmc_higher, entropy };
  Kind kind = Kind::power;
  int cluster = 2;

  static Quantity power() { return {Kind::power, 0}; }
  static Quantity gmc_higher(int k) { return {Kind::gmc_higher, k}; }
  static Quantity entropy() { return {Kind::entropy, 0}; }

  double evaluate(const RateModel& model, std::span<const double> populations) const;
};

struct ExtremumReport {
  double t_max = 0.0;
  double value = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  int refinement_iterations = 0;
  /// The coarse maximum sat on the end of the scan window; no refinement was done.
  bool boundary = false;
  /// Time span of coarse points tied with the maximum (0 when the maximum is sharp).
  double flat_width = 0.0;
};

struct ScanOptions {
  int coarse_points = 200;
  double relative_tolerance = 1e-6;
};

/// Coarse log scan over [1e-3/(N gamma), 10/gamma], then golden-section refinement in the
/// bracket around the leftmost coarse maximum. Each probe integrates afresh from the
/// bracket's lower end.
ExtremumReport find_time_of_max(const RateModel& model, const Quantity& quantity, const ScanOptions& options = {});

}  // namespace dicke
