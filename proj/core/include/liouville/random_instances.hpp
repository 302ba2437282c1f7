#pragma once

#include <cstdint>
#include <string>

#include "liouville/fock.hpp"
#include "liouville/redfield.hpp"

namespace liouville {

/// Number-graded GKLS generator built from random data.
struct GradedInstance {
  BasisPtr basis;
  Operator hamiltonian;
  JumpDecomposition jumps;
  PsaPolicy policy;
  CoefficientFn coefficients;
  Liouvillian liouvillian;
  std::string description;
};

/// Random M ≤ 3 system: number-conserving H, linear and dephasing channels,
/// and a Hermitian random coefficient table over the kept pairs.
/// Deterministic in `seed`.
GradedInstance random_graded_instance(std::uint64_t seed);

/// γ_αβ(ω,ω′) drawn per key with γ_βα(ω′,ω) = conj(γ_αβ(ω,ω′)) so the
/// generator preserves Hermiticity. Safe to call from several threads.
CoefficientFn random_coefficients(std::uint64_t seed, double scale = 0.05);

}  // namespace liouville
