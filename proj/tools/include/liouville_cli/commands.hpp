#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liouville/gaussian.hpp"
#include "liouville/quadratic.hpp"
#include "liouville/redfield.hpp"
#include "liouville_cli/config.hpp"

namespace liouville::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3 };

struct Options {
  std::filesystem::path config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

/// Everything the commands need from one scenario.
struct Model {
  BasisPtr basis;
  Operator hamiltonian;
  JumpDecomposition jumps;
  CoefficientFn coefficients;
  std::vector<double> mode_energies;
  Liouvillian liouvillian;
  std::string description;
  /// Whether the condition report applies (generic Redfield assembly).
  bool has_conditions = false;
  bool number_predicted = true;
  bool parity_predicted = true;
  bool two_spin_columns = false;
  std::optional<TwoSpinDiagonalization> two_spin;
  std::optional<GaussianCoefficients> gaussian;
};

/// Applies --seed and --tol overrides.
void apply_overrides(ScenarioConfig& cfg, const Options& options);

/// Throws ConfigError for inconsistencies only visible once the basis
/// exists, and liouville::Error from the library.
Model build_model(const ScenarioConfig& cfg);

Operator initial_density(const ScenarioConfig& cfg, const Model& model);

/// Output file name to contents; nothing touches the disk.
using OutputFiles = std::map<std::string, std::string>;

/// Computes every requested output. Throws NumericalError on a singular
/// solve that has no degeneracy handling.
OutputFiles run_scenario(const ScenarioConfig& cfg, const Model& model, const std::string& command);

int run_command(const Options& options, std::ostream& out, std::ostream& err);
int check_symmetry_command(const Options& options, std::ostream& out, std::ostream& err);
/// Fermionic sector table for M modes: number states per excitation count
/// and the dimension of every block.
int block_dims_command(int modes, std::ostream& out, std::ostream& err);

}  // namespace liouville::cli
