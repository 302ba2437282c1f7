#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "liouville/fock.hpp"
#include "liouville/redfield.hpp"

namespace liouville {

/// Diagonal superoperator stored by its diagonal.
struct DiagonalSuperoperator {
  Eigen::VectorXd diagonal;

  Superoperator dense() const;
};

/// 𝒩 = N̂⊗I − I⊗N̂ᵀ, entries d = n(e_j) − n(e_k).
DiagonalSuperoperator number_superoperator(const FockBasis& basis);
/// 𝒫 = exp(iπ𝒩), entries (−1)^d.
DiagonalSuperoperator parity_superoperator(const FockBasis& basis);

/// ‖SL − LS‖_max. Throws DimensionError on mismatched sizes.
double commutator_norm(const Superoperator& S, const Superoperator& L);
/// Same norm without forming S: entries (s_i − s_j)·L_ij.
double commutator_norm(const DiagonalSuperoperator& S, const Superoperator& L);

struct BlockDecomposition {
  BasisPtr basis;
  std::vector<int> d_values;
  /// Vectorized indices of each sector, ascending.
  std::map<int, std::vector<std::size_t>> index_sets;
  std::map<int, Matrix> blocks;
  /// Largest |ℒ_ij| with i and j in different sectors.
  double offblock_norm = 0.0;

  /// Sector order 0, 1, −1, 2, −2, ... restricted to occurring values.
  std::vector<int> canonical_order() const;
  std::vector<std::size_t> block_sizes() const;
};

BlockDecomposition block_decompose(const Liouvillian& L);

/// Largest |ℒ_ij| coupling sector d1 to sector d2 in either direction.
double offblock_norm_between(const Liouvillian& L, const BlockDecomposition& dec, int d1, int d2);

/// Σ_{k=|d|}^{M} C(M,k)·C(M,k−|d|). Throws DomainError when |d| > M.
std::size_t block_dim_fermionic(int modes, int d);

/// max over d ≥ 0 of ‖ℒ_d − conj(ℒ_{−d})‖_max with ℒ_{−d} read in the
/// swapped basis (j,k) → (k,j).
double verify_conjugate_blocks(const BlockDecomposition& dec);

std::map<int, Vector> block_spectrum(const BlockDecomposition& dec);

struct SteadyStateReport {
  std::optional<Operator> rho_ss;
  bool unique = false;
  std::size_t zero_modes = 0;
  std::map<int, std::size_t> zero_modes_per_block;
  double zero_tolerance = 0.0;
  double residual = 0.0;
  double min_eigenvalue = 0.0;
  /// Largest |ρ_jk| with n(e_j) ≠ n(e_k).
  double off_grading_max = 0.0;
  std::vector<std::string> warnings;
};

/// Steady state from the null space of ℒ₀ alone; the zero-eigenvalue census
/// runs over every block with tolerance 1e-9·max(1, ‖ℒ‖_max) and the
/// residual is measured against the full generator.
SteadyStateReport steady_state(const Liouvillian& L, const BlockDecomposition& dec);

struct EvolveOptions {
  /// Compare against exp(ℒt) on the full generator.
  bool cross_check = true;
  /// Skip the cross-check above this superoperator dimension.
  std::size_t cross_check_limit = 256;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Operator> states;
  /// max_t ‖ρ_blocks(t) − ρ_full(t)‖_max when the cross-check ran.
  std::optional<double> cross_check_deviation;
};

/// ρ(t) = exp(ℒt)ρ₀ propagated sector by sector. Throws DomainError unless
/// |Tr ρ₀ − 1| < 1e-10.
Trajectory evolve(const Liouvillian& L, const BlockDecomposition& dec, const Operator& rho0,
                  const std::vector<double>& times, const EvolveOptions& options = {});

struct TwoSpinObservables {
  double t = 0.0;
  double P11 = 0.0;
  double P00 = 0.0;
  double C0 = 0.0;
  double C1 = 0.0;
  double C2 = 0.0;
};

/// Two-mode fermionic observables on the eigenbasis |00⟩, |01⟩, |10⟩, |11⟩.
std::vector<TwoSpinObservables> two_spin_observables(const Trajectory& traj);

/// Smallest eigenvalue of the Hermitian part of ρ.
double min_eigenvalue(const Operator& rho);

/// Projector |e_i⟩⟨e_i| onto basis state i.
Operator basis_projector(const BasisPtr& basis, std::size_t index);

}  // namespace liouville
