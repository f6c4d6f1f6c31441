#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "dicke_gmc/cli.hpp"
#include "dicke_gmc/errors.hpp"
#include "dicke_gmc/gmc.hpp"
#include "dicke_gmc/superradiance.hpp"
#include "table.hpp"

namespace dicke::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

long parse_long(const std::string& s) {
  long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

int single_qubits(const RunConfig& config) {
  if (config.qubits.size() != 1) throw std::invalid_argument("this subcommand takes a single --n");
  return config.qubits.front();
}

void report_monotonicity(const GmcProfile& profile, const std::string& what, Table& table, std::ostream& log) {
  for (int k : profile.monotonicity_violations()) {
    const std::string msg = fmt::format("monotonicity violation in {}: S^({}->N) = {} < S^({}->N) = {}", what, k,
                                        format_real(profile.higher(k)), k + 1, format_real(profile.higher(k + 1)));
    log << "warning: " << msg << '\n';
    table.note(msg);
  }
}

Cell genuine_cell(const GmcProfile& profile, int k) { return k >= 2 ? Cell::of(profile.genuine(k)) : Cell::none(); }

WeightScheme weights_for(const std::string& spec, int qubits) {
  if (spec == "k-minus-1") return WeightScheme::k_minus_one(qubits);
  if (spec == "uniform") return WeightScheme::uniform(qubits);
  if (spec.rfind("delta:", 0) == 0) return WeightScheme::delta(qubits, static_cast<int>(parse_long(spec.substr(6))));
  if (spec.rfind("file:", 0) == 0) {
    std::ifstream in(spec.substr(5));
    if (!in) throw std::invalid_argument("cannot read weight file '" + spec.substr(5) + "'");
    std::vector<double> omega;
    std::string line;
    while (std::getline(in, line)) {
      line = line.substr(0, line.find('#'));
      std::istringstream fields(line);
      double v = 0.0;
      while (fields >> v) omega.push_back(v);
    }
    if (omega.size() + 1 < static_cast<std::size_t>(qubits)) {
      throw DomainError(fmt::format("weight file lists {} values of Omega_k; N={} needs {}", omega.size(), qubits,
                                    qubits - 1));
    }
    omega.resize(static_cast<std::size_t>(qubits - 1));
    return WeightScheme::from_big_omega(std::move(omega));
  }
  throw std::invalid_argument("unknown weight scheme '" + spec + "' (k-minus-1 | uniform | delta:l | file:PATH)");
}

std::vector<int> resolve_clusters(const RunConfig& config, int qubits) {
  if (!config.clusters) {
    std::vector<int> all(static_cast<std::size_t>(qubits));
    for (int k = 1; k <= qubits; ++k) all[static_cast<std::size_t>(k - 1)] = k;
    return all;
  }
  auto ks = *config.clusters;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  return ks;
}

}  // namespace

int ExcitationSpec::resolve(int qubits) const noexcept {
  if (!is_fraction()) return fixed;
  return static_cast<int>(static_cast<long long>(qubits) * numerator / denominator);
}

bool ExcitationSpec::exact_for(int qubits) const noexcept {
  return !is_fraction() || (static_cast<long long>(qubits) * numerator) % denominator == 0;
}

std::string ExcitationSpec::text() const {
  return is_fraction() ? fmt::format("N*{}/{}", numerator, denominator) : std::to_string(fixed);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const auto& token : split(text, ',')) {
    if (const auto dots = token.find(".."); dots != std::string::npos) {
      const long lo = parse_long(token.substr(0, dots)), hi = parse_long(token.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument("empty range '" + token + "'");
      for (long v = lo; v <= hi; ++v) out.push_back(static_cast<int>(v));
    } else {
      out.push_back(static_cast<int>(parse_long(token)));
    }
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + text + "'");
  return out;
}

std::vector<ExcitationSpec> parse_excitations(const std::string& text) {
  std::vector<ExcitationSpec> out;
  for (auto token : split(text, ',')) {
    if (token.rfind("N/", 0) == 0) token = "1/" + token.substr(2);
    ExcitationSpec spec;
    if (const auto slash = token.find('/'); slash != std::string::npos) {
      spec.numerator = parse_long(token.substr(0, slash));
      spec.denominator = parse_long(token.substr(slash + 1));
    } else if (const auto dot = token.find('.'); dot != std::string::npos) {
      const std::string digits = token.substr(dot + 1);
      spec.numerator = parse_long(token.substr(0, dot) + digits);
      spec.denominator = 1;
      for (std::size_t i = 0; i < digits.size(); ++i) spec.denominator *= 10;
    } else {
      spec.fixed = static_cast<int>(parse_long(token));
      if (spec.fixed < 0) throw std::invalid_argument("negative excitation count '" + token + "'");
      out.push_back(spec);
      continue;
    }
    if (spec.numerator < 0 || spec.denominator <= 0 || spec.numerator > spec.denominator) {
      throw std::invalid_argument("excitation fraction must lie in [0, 1]: '" + token + "'");
    }
    out.push_back(spec);
  }
  if (out.empty()) throw std::invalid_argument("empty excitation list");
  return out;
}

int cmd_gmc_pure(const RunConfig& config, std::ostream& log) {
  const int n = single_qubits(config);
  if (config.excitations.empty()) throw std::invalid_argument("gmc-pure needs --ne");
  if (n < 1) throw std::invalid_argument("--n must be at least 1");
  for (const auto& spec : config.excitations) {
    if (spec.resolve(n) > n) throw std::invalid_argument(fmt::format("n_e = {} exceeds N = {}", spec.text(), n));
  }
  for (const auto& spec : config.excitations) {
    const DickeLabel state(n, spec.resolve(n));
    const GmcProfile profile = gmc_profile(state);
    Table table({"k", "s_higher", "s_k"});
    if (!spec.exact_for(n)) {
      table.note(fmt::format("n_e = {} rounded down to {}", spec.text(), state.excitations()));
    }
    if (config.mod_zero) table.note("rows restricted to k with N mod k = 0");
    report_monotonicity(profile, fmt::format("|{},{}>", n, state.excitations()), table, log);
    for (int k = 1; k <= n; ++k) {
      if (config.mod_zero && n % k != 0) continue;
      table.add_row({Cell::of(k), Cell::of(profile.reported_higher(k)), genuine_cell(profile, k)});
    }
    table.write(config, fmt::format("gmc_pure_N{}_ne{}", n, state.excitations()));
  }
  return kSuccess;
}

int cmd_weaving(const RunConfig& config, std::ostream& log) {
  if (config.qubits.empty() || config.excitations.empty()) throw std::invalid_argument("weaving needs --n and --ne");
  Table table({"N", "ne", "W"});
  table.note("weights " + config.weights);
  for (int n : config.qubits) {
    const WeightScheme weights = weights_for(config.weights, n);
    for (const auto& spec : config.excitations) {
      const int ne = spec.resolve(n);
      if (ne > n) {
        table.note(fmt::format("skipped N={} n_e={} (more excitations than qubits)", n, ne));
        continue;
      }
      if (!spec.exact_for(n)) table.note(fmt::format("N={}: n_e = {} rounded down to {}", n, spec.text(), ne));
      const GmcProfile profile = gmc_profile(DickeLabel(n, ne));
      report_monotonicity(profile, fmt::format("|{},{}>", n, ne), table, log);
      table.add_row({Cell::of(n), Cell::of(ne), Cell::of(weaving(profile, weights))});
    }
  }
  table.write(config, "weaving");
  return kSuccess;
}

int cmd_evolve(const RunConfig& config, std::ostream& log) {
  const int n = single_qubits(config);
  const RateModel model(n, config.gamma, config.omega_freq);
  const auto times = sample_times(model, config.t_end / config.gamma, config.samples,
                                  config.linear_grid ? TimeGrid::linear : TimeGrid::log);
  const Trajectory traj = evolve_at(model, times);
  const auto requested = resolve_clusters(config, n);
  const GmcSeries series = gmc_time_series(model, traj, requested);

  const std::string gamma_note = "gamma " + format_real(config.gamma);
  const std::string omega_note = "omega " + format_real(config.omega_freq);

  std::vector<std::string> pop_columns{"gamma_t"};
  for (int m = 0; m <= n; ++m) pop_columns.push_back(fmt::format("P_{}", m));
  Table populations(pop_columns), power({"gamma_t", "power"}), gmc({"gamma_t", "k", "s_higher", "s_k"});
  for (Table* t : {&populations, &power, &gmc}) t->note(gamma_note);
  power.note(omega_note);
  for (std::size_t row = 0; row < traj.times.size(); ++row) {
    const double gt = traj.times[row] * config.gamma;
    std::vector<Cell> cells{Cell::of(gt)};
    for (double p : traj.populations[row]) cells.push_back(Cell::of(p));
    populations.add_row(std::move(cells));
    power.add_row({Cell::of(gt), Cell::of(traj.power[row])});
    for (std::size_t j = 0; j < series.clusters.size(); ++j) {
      const int k = series.clusters[j];
      if (!std::binary_search(requested.begin(), requested.end(), k)) continue;
      const double higher = series.higher[row][j];
      if (higher < -kCorrelationSlack) {
        throw InvariantViolation(fmt::format("S^({}->N) = {} at gamma t = {}", k, higher, gt));
      }
      gmc.add_row({Cell::of(gt), Cell::of(k), Cell::of(std::max(0.0, higher)),
                   k >= 2 ? Cell::of(series.genuine[row][j]) : Cell::none()});
    }
  }
  log << fmt::format("evolve: N={} samples={} max |sum P - 1| = {:.3g}\n", n, traj.times.size(), traj.max_norm_drift);
  populations.write(config, "populations");
  power.write(config, "power");
  gmc.write(config, "gmc_t");
  return kSuccess;
}

int cmd_times(const RunConfig& config, std::ostream& log) {
  if (config.qubits.empty()) throw std::invalid_argument("times needs --n");
  Table table({"N", "t_power_max", "t_corr_max", "t_entropy_max"});
  table.note("gamma " + format_real(config.gamma));
  table.note("times in units of 1/gamma; t_corr_max is the argmax of S^(2->N)");
  for (int n : config.qubits) {
    const RateModel model(n, config.gamma, config.omega_freq);
    auto time_cell = [&](const Quantity& q, const char* name) {
      const ExtremumReport r = find_time_of_max(model, q);
      if (r.boundary) table.note(fmt::format("N={}: {} maximum on the scan boundary", n, name));
      return Cell::of(r.t_max * config.gamma);
    };
    const Cell power = time_cell(Quantity::power(), "power");
    const Cell corr = n >= 2 ? time_cell(Quantity::gmc_higher(2), "correlation") : Cell::none();
    const Cell entropy = time_cell(Quantity::entropy(), "entropy");
    table.add_row({Cell::of(n), power, corr, entropy});
    log << fmt::format("times: N={} done\n", n);
  }
  table.write(config, "times");
  return kSuccess;
}

int cmd_snapshot(const RunConfig& config, std::ostream& log) {
  const int n = single_qubits(config);
  if (n < 2) throw DomainError("snapshot needs N >= 2 (t_corr_max is defined through S^(2->N))");
  const RateModel model(n, config.gamma, config.omega_freq);
  const ExtremumReport peak = find_time_of_max(model, Quantity::gmc_higher(2));
  const DickeMixture mix = population_snapshot(model, peak.t_max);
  const std::string when = "t_corr_max (gamma t) " + format_real(peak.t_max * config.gamma);

  Table pops({"ne", "P"});
  pops.note(when);
  for (int m = 0; m <= n; ++m) pops.add_row({Cell::of(m), Cell::of(mix.population(m))});

  const GmcProfile mixed = gmc_profile(mix);
  const GmcProfile half = gmc_profile(DickeLabel(n, n / 2));
  const GmcProfile one = gmc_profile(DickeLabel(n, 1));
  Table gmc({"k", "s_higher_mix", "s_higher_half", "s_higher_one", "s_k_mix", "s_k_half", "s_k_one"});
  gmc.note(when);
  gmc.note(fmt::format("half = |{},{}>, one = |{},1>", n, n / 2, n));
  report_monotonicity(mixed, "mixture", gmc, log);
  for (int k = 1; k <= n; ++k) {
    gmc.add_row({Cell::of(k), Cell::of(mixed.reported_higher(k)), Cell::of(half.reported_higher(k)),
                 Cell::of(one.reported_higher(k)), genuine_cell(mixed, k), genuine_cell(half, k),
                 genuine_cell(one, k)});
  }
  pops.write(config, "snapshot_populations");
  gmc.write(config, "snapshot_gmc");
  log << "snapshot: " << when << '\n';
  return kSuccess;
}

}  // namespace dicke::cli
