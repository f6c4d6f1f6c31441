#include <fmt/format.h>

#include <ostream>

#include "CLI11.hpp"
#include "dicke_gmc/cli.hpp"
#include "dicke_gmc/errors.hpp"

namespace dicke::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Genuine multipartite correlations of Dicke states and superradiant mixtures", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", fmt::format("{} {}", kToolName, kToolVersion));

  RunConfig config;
  std::string qubits_text, excitations_text, clusters_text = "all", grid = "log", format = "csv";
  std::string out_dir = ".";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "Output directory")->capture_default_str();
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--gamma", config.gamma, "Spontaneous decay rate gamma")->capture_default_str();
    sub->add_option("--omega", config.omega_freq, "Transition frequency omega")->capture_default_str();
  };

  auto* pure = app.add_subcommand("gmc-pure", "S^(k->N) and S^k profiles of pure Dicke states");
  pure->add_option("--n", qubits_text, "Number of qubits N")->required();
  pure->add_option("--ne", excitations_text, "Excitations: list of counts or fractions (1,5,50 | 1/2 | N/3)")
      ->required();
  pure->add_flag("--mod-zero", config.mod_zero, "Only rows with N mod k = 0");
  common(pure);

  auto* weave = app.add_subcommand("weaving", "Weaving W(N) for fixed or N-proportional excitations");
  weave->add_option("--n", qubits_text, "List of N (comma list and a..b ranges)")->required();
  weave->add_option("--ne", excitations_text, "Excitations: counts or fractions of N")->required();
  weave->add_option("--weights", config.weights, "k-minus-1 | uniform | delta:l | file:PATH (Omega_k per line)")
      ->capture_default_str();
  common(weave);

  auto* evolve = app.add_subcommand("evolve", "Superradiant populations, power and GMC time series");
  evolve->add_option("--n", qubits_text, "Number of qubits N")->required();
  evolve->add_option("--k", clusters_text, "Cluster sizes: 'all' or a list")->capture_default_str();
  evolve->add_option("--t-end", config.t_end, "End of the window in units of 1/gamma")->capture_default_str();
  evolve->add_option("--samples", config.samples, "Number of sample times")->capture_default_str();
  evolve->add_option("--grid", grid, "Sample spacing")->check(CLI::IsMember({"log", "linear"}))->capture_default_str();
  common(evolve);

  auto* times = app.add_subcommand("times", "Times of maximum power, correlation and entropy");
  qubits_text = "10,20,50,100,200,500,1000";
  times->add_option("--n", qubits_text, "List of N")->capture_default_str();
  common(times);

  auto* snapshot = app.add_subcommand("snapshot", "Populations and GMC profile at the time of maximum correlation");
  snapshot->add_option("--n", qubits_text, "Number of qubits N")->required();
  common(snapshot);

  auto* verify = app.add_subcommand("verify", "Check closed forms against the dense 2^N oracle");
  verify->add_option("--max-n", config.max_qubits, "Largest N to sweep")->capture_default_str();
  verify->add_flag("--inject-fault", config.inject_fault, "Corrupt one value (self-test of the checker)")->group("");
  common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  config.command_line = kToolName;
  for (int i = 1; i < argc; ++i) config.command_line += std::string(" ") + argv[i];
  config.out_dir = out_dir;
  config.format = format == "json" ? Format::json : Format::csv;
  config.linear_grid = grid == "linear";

  try {
    if (!(config.gamma > 0.0) || !(config.omega_freq > 0.0)) throw std::invalid_argument("--gamma and --omega must be positive");
    if (!verify->parsed()) config.qubits = parse_int_list(qubits_text);
    if (!excitations_text.empty()) config.excitations = parse_excitations(excitations_text);
    if (clusters_text != "all") config.clusters = parse_int_list(clusters_text);

    if (pure->parsed()) return cmd_gmc_pure(config, err);
    if (weave->parsed()) return cmd_weaving(config, err);
    if (evolve->parsed()) return cmd_evolve(config, err);
    if (times->parsed()) return cmd_times(config, err);
    if (snapshot->parsed()) return cmd_snapshot(config, err);
    return cmd_verify(config, out, err);
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IntegrationError& e) {
    err << "integration failed at t = " << fmt::format("{:.17g}", e.failing_time()) << ": " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace dicke::cli
