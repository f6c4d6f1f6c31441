#include "dicke_gmc/superradiance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "dicke_gmc/errors.hpp"
#include "dicke_gmc/gmc.hpp"
#include "dicke_gmc/parallel.hpp"
#include "dicke_gmc/stable_math.hpp"

namespace dicke {
namespace {

constexpr double kRelTol = 1e-10;
constexpr double kAbsTol = 1e-14;

// Dormand-Prince 5(4) tableau, error weights and dense-output coefficients
// (Hairer, Norsett & Wanner, DOPRI5).
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0, a75 = -2187.0 / 6784.0,
                 a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// A level whose population falls this low while nothing above it is populated is
// removed from the active window. Discarded mass is at most N * 1e-30, far below atol;
// the level's rate then no longer limits the explicit step.
constexpr double kDropThreshold = 1e-30;

using Sink = std::function<void(std::size_t, std::span<const double>)>;

class DormandPrince {
 public:
  DormandPrince(const RateModel& model, PopulationState& state) : model_(model), state_(state) {
    const int n = model.qubits();
    rates_.resize(static_cast<std::size_t>(n) + 2, 0.0);
    for (int m = 0; m <= n; ++m) rates_[static_cast<std::size_t>(m)] = model.decay_rate(m);
    for (auto* v : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &stage_, &next_, &r1_, &r2_, &r3_, &r4_, &r5_, &out_}) {
      v->assign(static_cast<std::size_t>(n) + 1, 0.0);
    }
    top_ = n;
    while (top_ > 0 && state_.populations[static_cast<std::size_t>(top_)] == 0.0) --top_;
  }

  // Emits populations at each target (non-decreasing, >= state.time) and leaves the
  // state exactly at the last target.
  void run(std::span<const double> targets, const Sink& sink) {
    if (targets.empty()) return;
    auto& y = state_.populations;
    const double t_final = targets.back();
    std::size_t next_target = 0;
    auto emit_current = [&] {
      while (next_target < targets.size() && targets[next_target] <= state_.time) {
        sink(next_target++, y);
      }
    };
    emit_current();
    if (next_target == targets.size()) return;

    double h = initial_step(t_final - state_.time);
    double err_old = 1e-4;
    derivative(y, k1_);
    while (next_target < targets.size()) {
      const double t = state_.time;
      bool last = false;
      if (t + h >= t_final) {
        h = t_final - t;
        last = true;
      }
      if (h <= std::max(std::abs(t), 1e-300) * 1e-14) {
        throw IntegrationError("step size underflow at t=" + std::to_string(t), t);
      }
      const double err = attempt(h);
      if (!(err <= 1.0)) {
        const double shrink = std::isfinite(err) ? std::min(5.0, std::pow(err, 0.2) / kSafety) : 10.0;
        h /= shrink;
        continue;
      }
      // Accepted: build dense output over [t, t + h] before overwriting y.
      const std::size_t w = window();
      for (std::size_t i = 0; i < w; ++i) {
        const double diff = next_[i] - y[i];
        const double spline = h * k1_[i] - diff;
        r1_[i] = y[i];
        r2_[i] = diff;
        r3_[i] = spline;
        r4_[i] = diff - h * k7_[i] - spline;
        r5_[i] = h * (d1 * k1_[i] + d3 * k3_[i] + d4 * k4_[i] + d5 * k5_[i] + d6 * k6_[i] + d7 * k7_[i]);
      }
      const double t_new = last ? t_final : t + h;
      while (next_target < targets.size() && targets[next_target] < t_new) {
        const double theta = (targets[next_target] - t) / h;
        const double theta1 = 1.0 - theta;
        std::fill(out_.begin(), out_.end(), 0.0);
        for (std::size_t i = 0; i < w; ++i) {
          out_[i] = r1_[i] + theta * (r2_[i] + theta1 * (r3_[i] + theta * (r4_[i] + theta1 * r5_[i])));
        }
        sink(next_target++, out_);
      }
      std::copy(next_.begin(), next_.begin() + static_cast<std::ptrdiff_t>(w), y.begin());
      std::swap(k1_, k7_);
      state_.time = t_new;
      if (shrink_window()) derivative(y, k1_);
      emit_current();

      const double fac11 = std::pow(err, 0.2 - kBeta * 0.75);
      double fac = fac11 / std::pow(err_old, kBeta);
      fac = std::clamp(fac / kSafety, 0.1, 5.0);
      err_old = std::max(err, 1e-4);
      h /= fac;
      state_.step_hint = h;
    }
  }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kBeta = 0.04;

  std::size_t window() const { return static_cast<std::size_t>(top_) + 1; }

  void derivative(const std::vector<double>& y, std::vector<double>& dy) const {
    const std::size_t w = window();
    for (std::size_t i = 0; i < w; ++i) {
      const double inflow = i + 1 < w ? rates_[i + 1] * y[i + 1] : 0.0;
      dy[i] = inflow - rates_[i] * y[i];
    }
  }

  double initial_step(double span) const {
    if (state_.step_hint > 0.0) return std::min(state_.step_hint, span);
    double fastest = model_.gamma();
    for (std::size_t i = 0; i < window(); ++i) fastest = std::max(fastest, rates_[i]);
    return std::min(span, 1e-3 / fastest);
  }

  // One trial step from state_.time; fills next_ and k2..k7, returns the scaled error norm.
  double attempt(double h) {
    const auto& y = state_.populations;
    const std::size_t w = window();
    auto combine = [&](auto&& coeffs) {
      for (std::size_t i = 0; i < w; ++i) stage_[i] = y[i] + h * coeffs(i);
    };
    combine([&](std::size_t i) { return a21 * k1_[i]; });
    derivative(stage_, k2_);
    combine([&](std::size_t i) { return a31 * k1_[i] + a32 * k2_[i]; });
    derivative(stage_, k3_);
    combine([&](std::size_t i) { return a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]; });
    derivative(stage_, k4_);
    combine([&](std::size_t i) { return a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]; });
    derivative(stage_, k5_);
    combine([&](std::size_t i) {
      return a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i];
    });
    derivative(stage_, k6_);
    for (std::size_t i = 0; i < w; ++i) {
      next_[i] = y[i] + h * (a71 * k1_[i] + a73 * k3_[i] + a74 * k4_[i] + a75 * k5_[i] + a76 * k6_[i]);
    }
    derivative(next_, k7_);

    double sq = 0.0;
    for (std::size_t i = 0; i < w; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double scale = kAbsTol + kRelTol * std::max(std::abs(y[i]), std::abs(next_[i]));
      sq += (e / scale) * (e / scale);
    }
    return std::sqrt(sq / static_cast<double>(w));
  }

  bool shrink_window() {
    bool changed = false;
    auto& y = state_.populations;
    while (top_ > 0 && std::abs(y[static_cast<std::size_t>(top_)]) <= kDropThreshold) {
      y[static_cast<std::size_t>(top_)] = 0.0;
      --top_;
      changed = true;
    }
    return changed;
  }

  const RateModel& model_;
  PopulationState& state_;
  std::vector<double> rates_;
  std::vector<double> k1_, k2_, k3_, k4_, k5_, k6_, k7_, stage_, next_;
  std::vector<double> r1_, r2_, r3_, r4_, r5_, out_;
  int top_ = 0;
};

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    t[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  t.front() = lo;
  t.back() = hi;
  return t;
}

void check_length(const RateModel& model, std::span<const double> populations) {
  if (populations.size() != static_cast<std::size_t>(model.qubits()) + 1) {
    throw DomainError("population vector has length " + std::to_string(populations.size()) + ", expected N+1=" +
                      std::to_string(model.qubits() + 1));
  }
}

}  // namespace

RateModel::RateModel(int qubits, double gamma, double omega_freq)
    : qubits_(qubits), gamma_(gamma), omega_freq_(omega_freq) {
  if (qubits < 1) throw DomainError("rate model needs N >= 1");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw DomainError("decay rate gamma must be positive");
  if (!(omega_freq > 0.0) || !std::isfinite(omega_freq)) throw DomainError("transition frequency must be positive");
}

double RateModel::decay_rate(int excitations) const noexcept {
  if (excitations < 1 || excitations > qubits_) return 0.0;
  return 2.0 * gamma_ * static_cast<double>(excitations) * static_cast<double>(qubits_ - excitations + 1);
}

std::vector<double> rate_derivative(const RateModel& model, std::span<const double> populations) {
  check_length(model, populations);
  const int n = model.qubits();
  std::vector<double> d(populations.size());
  for (int m = 0; m <= n; ++m) {
    const double inflow = m < n ? model.decay_rate(m + 1) * populations[static_cast<std::size_t>(m + 1)] : 0.0;
    d[static_cast<std::size_t>(m)] = inflow - model.decay_rate(m) * populations[static_cast<std::size_t>(m)];
  }
  return d;
}

double radiated_power(const RateModel& model, std::span<const double> populations) {
  check_length(model, populations);
  const int n = model.qubits();
  CompensatedSum acc;
  for (int m = 1; m <= n; ++m) {
    acc += static_cast<double>(m) * static_cast<double>(1 + n - m) * populations[static_cast<std::size_t>(m)];
  }
  return std::max(0.0, 2.0 * model.gamma() * model.omega_freq() * acc.value());
}

std::vector<double> sample_times(const RateModel& model, double t_end, int samples, TimeGrid grid) {
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("t_end must be positive");
  if (samples < 2) throw DomainError("need at least two samples");
  if (grid == TimeGrid::linear) {
    std::vector<double> t(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = t_end * i / (samples - 1);
    t.back() = t_end;
    return t;
  }
  const double start = std::min(1e-3 / (model.qubits() * model.gamma()), t_end * 1e-4);
  std::vector<double> t{0.0};
  if (samples == 2) {
    t.push_back(t_end);
    return t;
  }
  const auto rest = log_spaced(start, t_end, samples - 1);
  t.insert(t.end(), rest.begin(), rest.end());
  return t;
}

PopulationState PopulationState::initial(const RateModel& model) {
  PopulationState s;
  s.populations.assign(static_cast<std::size_t>(model.qubits()) + 1, 0.0);
  s.populations.back() = 1.0;
  return s;
}

std::vector<double> propagate(const RateModel& model, PopulationState& state, double t_target) {
  check_length(model, state.populations);
  if (!(t_target >= state.time)) throw DomainError("cannot propagate backwards in time");
  const double target[] = {t_target};
  std::vector<double> out;
  DormandPrince(model, state).run(target, [&](std::size_t, std::span<const double> p) { out.assign(p.begin(), p.end()); });
  return out;
}

Trajectory evolve_at(const RateModel& model, std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      throw DomainError("sample times must be non-negative and non-decreasing");
    }
  }
  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.populations.resize(times.size());
  traj.power.resize(times.size());
  PopulationState state = PopulationState::initial(model);
  DormandPrince(model, state).run(times, [&](std::size_t i, std::span<const double> raw) {
    CompensatedSum total;
    for (double p : raw) {
      total += p;
      traj.min_raw_population = std::min(traj.min_raw_population, p);
    }
    traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(total.value() - 1.0));
    DickeMixture mix{std::vector<double>(raw.begin(), raw.end())};
    traj.populations[i].assign(mix.populations().begin(), mix.populations().end());
    traj.power[i] = radiated_power(model, traj.populations[i]);
  });
  return traj;
}

Trajectory evolve(const RateModel& model, double t_end, int samples, TimeGrid grid) {
  const auto times = sample_times(model, t_end, samples, grid);
  return evolve_at(model, times);
}

DickeMixture population_snapshot(const RateModel& model, double t) {
  if (!(t >= 0.0)) throw DomainError("snapshot time must be non-negative");
  PopulationState state = PopulationState::initial(model);
  return DickeMixture(propagate(model, state, t));
}

GmcSeries gmc_time_series(const RateModel& model, const Trajectory& trajectory, std::vector<int> clusters) {
  const int n = model.qubits();
  for (int k : clusters) {
    if (k < 1 || k > n) throw DomainError("cluster size k=" + std::to_string(k) + " outside [1, N]");
  }
  const std::size_t requested = clusters.size();
  for (std::size_t i = 0; i < requested; ++i) {
    if (clusters[i] >= 2) clusters.push_back(clusters[i] - 1);
  }
  std::sort(clusters.begin(), clusters.end());
  clusters.erase(std::unique(clusters.begin(), clusters.end()), clusters.end());

  GmcSeries series;
  series.times = trajectory.times;
  series.clusters = clusters;
  const std::size_t rows = trajectory.times.size();
  series.higher.assign(rows, std::vector<double>(clusters.size()));
  series.genuine.assign(rows, std::vector<double>(clusters.size(), std::numeric_limits<double>::quiet_NaN()));
  const bool full = clusters.size() == static_cast<std::size_t>(n);

  parallel_for(rows, [&](std::size_t row) {
    const DickeMixture mix = trajectory.mixture(row);
    auto& higher = series.higher[row];
    if (full) {
      const GmcProfile profile = gmc_profile(mix);
      for (std::size_t j = 0; j < clusters.size(); ++j) higher[j] = profile.higher(clusters[j]);
    } else {
      for (std::size_t j = 0; j < clusters.size(); ++j) higher[j] = gmc_higher_mixture(mix, clusters[j]);
    }
    for (std::size_t j = 1; j < clusters.size(); ++j) {
      if (clusters[j - 1] == clusters[j] - 1) series.genuine[row][j] = higher[j - 1] - higher[j];
    }
  });
  return series;
}

double Quantity::evaluate(const RateModel& model, std::span<const double> populations) const {
  switch (kind) {
    case Kind::power:
      return radiated_power(model, populations);
    case Kind::gmc_higher:
      return gmc_higher_mixture(DickeMixture(std::vector<double>(populations.begin(), populations.end())), cluster);
    case Kind::entropy:
      return mixture_entropy(DickeMixture(std::vector<double>(populations.begin(), populations.end())));
  }
  return 0.0;
}

ExtremumReport find_time_of_max(const RateModel& model, const Quantity& quantity, const ScanOptions& options) {
  if (options.coarse_points < 3) throw DomainError("extremum scan needs at least three points");
  if (quantity.kind == Quantity::Kind::gmc_higher && (quantity.cluster < 1 || quantity.cluster > model.qubits())) {
    throw DomainError("cluster size k=" + std::to_string(quantity.cluster) + " outside [1, N]");
  }
  const double g = model.gamma();
  const auto grid = log_spaced(1e-3 / (model.qubits() * g), 10.0 / g, options.coarse_points);

  // Keep the state at each grid point so refinement can restart from the bracket's left end.
  std::vector<PopulationState> checkpoints(grid.size());
  {
    PopulationState state = PopulationState::initial(model);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      propagate(model, state, grid[i]);
      checkpoints[i] = state;
    }
  }
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), [&](std::size_t i) { values[i] = quantity.evaluate(model, checkpoints[i].populations); });

  const auto best = static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
  ExtremumReport report;
  {
    const double tie = values[best] - 1e-12 * std::abs(values[best]);
    std::size_t lo = best, hi = best;
    while (lo > 0 && values[lo - 1] >= tie) --lo;
    while (hi + 1 < grid.size() && values[hi + 1] >= tie) ++hi;
    report.flat_width = grid[hi] - grid[lo];
  }
  if (best == 0 || best + 1 == grid.size()) {
    report.boundary = true;
    report.t_max = report.t_lo = report.t_hi = grid[best];
    report.value = values[best];
    return report;
  }

  const PopulationState& anchor = checkpoints[best - 1];
  double best_t = grid[best], best_value = values[best];
  auto probe = [&](double t) {
    PopulationState state = anchor;
    const double f = quantity.evaluate(model, propagate(model, state, t));
    if (f > best_value) {
      best_value = f;
      best_t = t;
    }
    return f;
  };

  constexpr double kInvPhi = 0.6180339887498949;
  double a = grid[best - 1], b = grid[best + 1];
  double x1 = b - kInvPhi * (b - a), x2 = a + kInvPhi * (b - a);
  double f1 = probe(x1), f2 = probe(x2);
  int iterations = 0;
  while (b - a > options.relative_tolerance * 0.5 * (a + b)) {
    ++iterations;
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = probe(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = probe(x2);
    }
  }
  report.t_max = best_t;
  report.value = best_value;
  report.t_lo = grid[best - 1];
  report.t_hi = grid[best + 1];
  report.refinement_iterations = iterations;
  return report;
}

}  // namespace dicke
