#include <iostream>

#include <CLI11.hpp>

#include "liouville/version.hpp"
#include "liouville_cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace liouville::cli;
  CLI::App app{"Block-diagonal open-system generators", "liouville-blocks"};
  app.set_version_flag("--version", liouville::kVersion);
  app.require_subcommand(1);

  Options options;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", options.config, "Scenario configuration (JSON)")->required();
    cmd->add_option("--seed", seed, "Seed for the random_graded system");
    cmd->add_option("--tol", tol, "Symmetry tolerance override");
  };

  CLI::App* run = app.add_subcommand("run", "Build the generator and write report.json and requested tables");
  add_common(run);
  run->add_option("--out", options.out, "Output directory")->default_str(".");

  CLI::App* check = app.add_subcommand("check-symmetry", "Commutator norms, condition report and verdict");
  add_common(check);

  int modes = 2;
  CLI::App* dims = app.add_subcommand("block-dims", "Fermionic sector and block dimensions");
  dims->add_option("--modes", modes, "Number of fermionic modes")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  options.seed = seed;
  options.tolerance = tol;

  if (*run) return run_command(options, std::cout, std::cerr);
  if (*check) return check_symmetry_command(options, std::cout, std::cerr);
  return block_dims_command(modes, std::cout, std::cerr);
}
