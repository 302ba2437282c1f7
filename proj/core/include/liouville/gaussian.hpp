#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "liouville/linalg.hpp"
#include "liouville/redfield.hpp"

namespace liouville {

/// One second moment: ⟨a_i†a_j†⟩ (δ=+2), ⟨a_i†a_j⟩ (δ=0) or ⟨a_i a_j⟩ (δ=−2).
struct MomentLabel {
  enum class Kind { create_create, create_annihilate, annihilate_annihilate };
  Kind kind;
  int i;
  int j;

  int delta() const;
  std::string name() const;
  bool operator==(const MomentLabel&) const = default;
};

/// Linear moment equations dx/dt = Bx + b.
struct MomentSystem {
  int modes = 0;
  std::vector<MomentLabel> labels;
  std::vector<int> deltas;
  Matrix B;
  Vector b;

  /// Positions of the moments with grading δ, in label order.
  std::vector<std::size_t> indices_of(int delta) const;
  std::optional<std::size_t> index_of(const MomentLabel& label) const;
};

/// Labels ordered δ=+2 (i≤j), δ=0 (all i, j), δ=−2 (i≤j), each
/// lexicographic in (i, j), 0-based modes. Throws DimensionError for M < 1.
MomentSystem moment_basis(int modes);

/// Data of the adjoint generator
/// ℒ†[O] = i[H', O] + Σ γ↓_ij(a_i†Oa_j − ½{a_i†a_j, O}) + Σ γ↑_ij(a_iOa_j† − ½{a_ia_j†, O})
/// with H' = Σ E_k a_k†a_k + Σ s_ij a_i†a_j.
struct GaussianCoefficients {
  std::vector<double> energies;
  Matrix lamb;
  Matrix gamma_down;
  Matrix gamma_up;

  int modes() const { return static_cast<int>(energies.size()); }
  /// Throws DimensionError on size mismatch and DomainError unless the three
  /// tables are Hermitian within tol.
  void validate(double tol = 1e-12) const;
};

/// Closes ℒ† over the quadratic monomials. Throws NumericalError when a
/// monomial outside the moment basis appears.
MomentSystem build_moment_eom(const GaussianCoefficients& coefficients);

struct GaussianSteadyState {
  std::optional<Vector> x;
  /// δ values whose block has an eigenvalue with |Re λ| below tolerance.
  std::vector<int> singular_blocks;
};

/// Solves B_δ x_δ = −b_δ per block. Blocks with δ ≠ 0 are set to exactly 0
/// since b_δ vanishes there. A singular block is reported, never
/// pseudo-inverted; x is absent when the δ = 0 block is singular.
GaussianSteadyState gaussian_steady(const MomentSystem& sys);

/// x(t) = e^{Bt}x₀ + ∫₀ᵗ e^{Bs}ds·b per δ block, via the exponential of the
/// augmented matrix [[B, b], [0, 0]], which stays valid for singular B.
std::vector<Vector> evolve_covariance(const MomentSystem& sys, const Vector& x0,
                                      const std::vector<double>& times);

/// Rates and shifts for H = Σ E_k a_k†a_k coupled through
/// A_α = Σ_k (g_αk a_k + g_αk* a_k†), keeping only pairs allowed by `policy`.
/// `couplings` is channels × modes.
GaussianCoefficients coefficients_from_linear_coupling(const std::vector<double>& energies,
                                                       const Matrix& couplings,
                                                       const CoefficientFn& coefficients,
                                                       const PsaPolicy& policy);

/// Moment vector Tr(ρ O) of a Fock-space state, ordered as in `sys`.
Vector moments_of(const MomentSystem& sys, const Operator& rho);

}  // namespace liouville
