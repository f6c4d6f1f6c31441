#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dicke::cli {

inline constexpr const char* kToolName = "dicke_gmc";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int { kSuccess = 0, kFailure = 1, kUsage = 2 };

enum class Format { csv, json };

/// Excitation number as a fixed count or as a fraction p/q of N (rounded down).
struct ExcitationSpec {
  int fixed = -1;
  long numerator = 0;
  long denominator = 1;

  bool is_fraction() const noexcept { return fixed < 0; }
  int resolve(int qubits) const noexcept;
  bool exact_for(int qubits) const noexcept;
  std::string text() const;
};

struct RunConfig {
  std::vector<int> qubits;  // single entry for gmc-pure, evolve, snapshot
  std::vector<ExcitationSpec> excitations;
  double gamma = 1.0;
  double omega_freq = 1.0;
  std::optional<std::vector<int>> clusters;  // nullopt = all
  double t_end = 10.0;                       // in units of 1/gamma
  int samples = 400;
  bool linear_grid = false;
  std::string weights = "k-minus-1";
  bool mod_zero = false;
  int max_qubits = 10;
  bool inject_fault = false;
  std::filesystem::path out_dir = ".";
  Format format = Format::csv;
  std::string command_line;
};

std::vector<int> parse_int_list(const std::string& text);
std::vector<ExcitationSpec> parse_excitations(const std::string& text);

/// Each writes its files into config.out_dir and returns an exit code.
int cmd_gmc_pure(const RunConfig& config, std::ostream& log);
int cmd_weaving(const RunConfig& config, std::ostream& log);
int cmd_evolve(const RunConfig& config, std::ostream& log);
int cmd_times(const RunConfig& config, std::ostream& log);
int cmd_snapshot(const RunConfig& config, std::ostream& log);
/// Prints the pass/fail table to `report`.
int cmd_verify(const RunConfig& config, std::ostream& report, std::ostream& log);

/// Full command-line entry point: parses flags, dispatches, maps exceptions to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dicke::cli
