#pragma once

#include <vector>

#include "liouville/fock.hpp"

namespace liouville {

/// Free-fermion form of two XX-coupled spins
/// H = ω₁/2 σ₁ᶻ + ω₂/2 σ₂ᶻ + λ σ₁ˣσ₂ˣ.
///
/// In the fermionic eigenbasis H = E₁(2n₁−1) + E₂(2n₂−1).
struct TwoSpinDiagonalization {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double lambda = 0.0;
  double theta = 0.0;
  double phi = 0.0;
  double E1 = 0.0;
  double E2 = 0.0;
  /// Row r holds fermionic state r (|00⟩_f, |01⟩_f, |10⟩_f, |11⟩_f) in the
  /// canonical spin basis, index 2·s₁ + s₂ with s = 1 for spin up.
  RealMatrix eigenbasis_map;
};

/// θ = ½ arctan(2λ/ω₊); φ = ½ atan2(2λ, ω₋), which equals the principal
/// branch for ω₋ > 0 and gives π/4·sign(λ) on resonance.
/// Throws DomainError unless ω₁, ω₂ > 0.
TwoSpinDiagonalization diagonalize_two_spin(double omega1, double omega2, double lambda);

/// Spin Hamiltonian in the canonical spin basis, σᶻ = diag(−1, +1) per spin.
RealMatrix two_spin_hamiltonian_spin_basis(double omega1, double omega2, double lambda);

/// E₁(2n₁−1) + E₂(2n₂−1) on a two-mode fermionic basis.
Operator two_spin_hamiltonian(const TwoSpinDiagonalization& d, const BasisPtr& basis);

struct SpinCouplings {
  Operator sigma1x;
  Operator sigma2x;
  Operator sigma1z;
  Operator sigma2z;
  Operator parity;
};

/// Spin operators written in the fermionic eigenmodes. Throws BasisError
/// unless `basis` is two-mode fermionic.
SpinCouplings spin_coupling_operators(const TwoSpinDiagonalization& d, const BasisPtr& basis);

struct SpinChainSpec {
  int modes = 0;
  std::vector<double> omegas;
  std::vector<double> couplings;
};

/// Excitation-preserving chain Σ ω_k/2 (n_k − ½) + Σ J_k (c†_{k+1}c_k + h.c.).
/// Throws DimensionError on length mismatch, BasisError on a basis that is
/// not fermionic with `spec.modes` modes.
Operator jordan_wigner_chain(const SpinChainSpec& spec, const BasisPtr& basis);

/// Jordan-Wigner image of σ_kˣ = σ_k⁺ + σ_k⁻ with its sign string.
Operator jw_sigma_x(const BasisPtr& basis, int mode);

}  // namespace liouville
