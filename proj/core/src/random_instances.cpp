#include "liouville/random_instances.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <tuple>

namespace liouville {

CoefficientFn random_coefficients(std::uint64_t seed, double scale) {
  struct Table {
    std::mutex mutex;
    std::mt19937_64 rng;
    std::map<std::tuple<std::size_t, std::size_t, double, double>, Coefficient> values;
  };
  auto table = std::make_shared<Table>();
  table->rng.seed(seed);
  return [table, scale](std::size_t a, std::size_t b, double w, double wp) -> Coefficient {
    std::lock_guard lock(table->mutex);
    const auto key = std::make_tuple(a, b, w, wp);
    if (auto it = table->values.find(key); it != table->values.end()) return it->second;
    const auto mirror = std::make_tuple(b, a, wp, w);
    if (auto it = table->values.find(mirror); it != table->values.end()) {
      Coefficient c{std::conj(it->second.gamma), std::conj(it->second.shift)};
      table->values.emplace(key, c);
      return c;
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Coefficient c;
    if (key == mirror) {
      c = {Complex(scale * (1.0 + u(table->rng)), 0.0), Complex(scale * u(table->rng), 0.0)};
    } else {
      c = {scale * Complex(u(table->rng), u(table->rng)), scale * Complex(u(table->rng), u(table->rng))};
    }
    table->values.emplace(key, c);
    return c;
  };
}

GradedInstance random_graded_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool fermionic = u(rng) < 0.5;
  const int modes = fermionic ? 1 + static_cast<int>(rng() % 3) : 1 + static_cast<int>(rng() % 2);
  const int n_max = fermionic ? 1 : 2 + static_cast<int>(rng() % 2);
  BasisPtr basis = build_basis(modes, fermionic ? Statistics::fermionic : Statistics::bosonic, n_max);

  // energies in [2, 3] with weak number-conserving hopping keep every
  // emission frequency far from absorption and dephasing frequencies
  Operator H = Operator::zero(basis);
  for (int k = 0; k < modes; ++k) H += Complex(2.0 + u(rng)) * mode_number(basis, k);
  for (int i = 0; i < modes; ++i) {
    for (int j = i + 1; j < modes; ++j) {
      const Complex h = 0.1 * Complex(u(rng) - 0.5, u(rng) - 0.5);
      const Operator hop = creation(basis, i) * annihilation(basis, j);
      H += h * hop + std::conj(h) * hop.adjoint();
    }
  }

  JumpDecomposition jumps;
  const int channels = 1 + static_cast<int>(rng() % 3);
  for (int c = 0; c < channels; ++c) {
    Operator A = Operator::zero(basis);
    if (c % 2 == 0) {
      for (int k = 0; k < modes; ++k) {
        const Complex g(u(rng) - 0.5, u(rng) - 0.5);
        A += g * annihilation(basis, k) + std::conj(g) * creation(basis, k);
      }
    } else {
      for (int k = 0; k < modes; ++k) A += Complex(u(rng) - 0.5) * mode_number(basis, k);
    }
    jumps.push_back(jump_decompose(H, A, 1e-9, "channel" + std::to_string(c)));
  }

  PsaPolicy policy;
  policy.tau_R = 10.0 + 1000.0 * u(rng);
  policy.chi = 2.0 + 100.0 * u(rng);
  const double r = u(rng);
  policy.mode = r < 0.6 ? SecularMode::partial : SecularMode::full_secular;
  if (policy.threshold() > 0.5) policy.chi = 0.5 * policy.tau_R;

  CoefficientFn coefficients = random_coefficients(seed ^ 0x9e3779b97f4a7c15ULL);
  Liouvillian L = assemble_liouvillian(H, jumps, coefficients, policy, "random");
  std::string description = std::string(fermionic ? "fermionic" : "bosonic") +
                            " M=" + std::to_string(modes) + " n_max=" + std::to_string(n_max) +
                            " channels=" + std::to_string(channels);
  return {basis, std::move(H), std::move(jumps), policy, std::move(coefficients), std::move(L),
          std::move(description)};
}

}  // namespace liouville
