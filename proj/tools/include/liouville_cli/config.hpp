#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "liouville/fock.hpp"
#include "liouville/redfield.hpp"

namespace liouville::cli {

/// Invalid configuration. `where` is "line L, column C" for syntax errors
/// and a field path such as "baths[1].temperature" otherwise.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string where, const std::string& message)
      : std::runtime_error(where + ": " + message), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct TwoSpinsSystem {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double lambda = 0.0;
  bool local = false;
};

struct SpinChainSystem {
  std::vector<double> omegas;
  std::vector<double> couplings;
};

/// Channels A_α = Σ_k (g_αk a_k + g_αk* a_k†), named "A1", "A2", ...
struct BosonSystem {
  std::vector<double> energies;
  int n_max = 2;
  Matrix couplings;
};

struct CustomSystem {
  Statistics statistics = Statistics::fermionic;
  int modes = 1;
  int n_max = 1;
  Matrix hamiltonian;
  std::vector<std::pair<std::string, Matrix>> couplings;
};

struct SqueezedSystem {
  double omega = 1.0;
  double gamma = 0.1;
  double n_thermal = 0.0;
  Complex squeezing{0.0, 0.0};
  int n_max = 4;
};

struct RandomGradedSystem {
  std::uint64_t seed = 0;
};

using SystemConfig =
    std::variant<TwoSpinsSystem, SpinChainSystem, BosonSystem, CustomSystem, SqueezedSystem, RandomGradedSystem>;

struct ChannelAssignment {
  std::string name;
  double weight = 1.0;
};

struct BathConfig {
  BathSpec spec;
  std::vector<ChannelAssignment> channels;
};

struct InitialState {
  enum class Kind { basis_state, thermal, matrix };
  Kind kind = Kind::basis_state;
  std::vector<int> occupation;
  double temperature = 0.0;
  Matrix matrix;
};

struct ScenarioConfig {
  std::string units = "omega1";
  SystemConfig system;
  std::vector<BathConfig> baths;
  PsaPolicy policy;
  CrossRule rule = CrossRule::arithmetic_mean;
  std::optional<InitialState> initial_state;
  std::vector<double> times;
  std::vector<std::string> outputs;
  double tolerance = 1e-12;

  bool wants(const std::string& output) const;
  const char* system_name() const;
};

/// Parses and validates a configuration document. Relative file references
/// are resolved against `base_dir`. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace liouville::cli
