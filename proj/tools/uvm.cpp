// Command-line front end: uvm <price|simulate|sweep|corrector|check2bsde> [options]

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "uvm/error.hpp"
#include "uvm/io/commands.hpp"
#include "uvm/io/config.hpp"

int main(int argc, char** argv) {
  using namespace uvm::io;

  CLI::App app{"Worst-case pricing under uncertain alpha-hypergeometric volatility"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  bool print_defaults = false;

  app.add_flag("--print-default-config", print_defaults, "Print the built-in configuration and exit");

  const std::vector<std::pair<const char*, const char*>> commands{
      {"price", "Solve the worst-case surface (and the limit surface) and report P(0, x0, v0)"},
      {"simulate", "Simulate (X, V) paths under a fixed or worst-case volatility policy"},
      {"sweep", "Tabulate P_delta - P_0 over a delta grid and fit the log-log slope"},
      {"corrector", "Solve the first-order corrector and check E_delta / delta"},
      {"check2bsde", "Integrate the second-order BSDE along Brownian paths and report residuals"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "Output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "Seed for simulation and 2BSDE paths");
    sub->add_option("--set", overrides, "Override a value: dotted.key=value (repeatable)");
  }

  // A bare --print-default-config should not demand a subcommand.
  if (argc == 2 && std::string(argv[1]) == "--print-default-config") {
    std::cout << default_config_json() << '\n';
    return kExitOk;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  if (print_defaults) {
    std::cout << default_config_json() << '\n';
    return kExitOk;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const auto command = parse_command(chosen->get_name());

  if (seed) {
    overrides.push_back("simulation.seed=" + std::to_string(*seed));
    overrides.push_back("bsde.seed=" + std::to_string(*seed));
  }
  if (!out_dir.empty()) overrides.push_back("output.dir=\"" + out_dir + "\"");

  RunConfig cfg;
  try {
    cfg = load_config(config_path, overrides);
  } catch (const uvm::ValidationError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitValidation;
  }
  if (cfg.sigma_assumed)
    std::cerr << "note: model.sigma not given; using the assumed vol-of-vol "
              << uvm::kAssumedVolOfVol << '\n';
  return run_command(*command, cfg, std::cout, std::cerr);
}
