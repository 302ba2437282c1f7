#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "liouville/linalg.hpp"

namespace liouville {

enum class Statistics { fermionic, bosonic };

/// Occupation numbers (n_1, ..., n_M) of one basis state.
using Occupation = std::vector<int>;

/// Excitation basis of M modes, each truncated at n_max quanta.
///
/// States are ordered lexicographically with mode 0 the most significant
/// digit, so the index of (n_0, ..., n_{M-1}) is sum_k n_k (n_max+1)^(M-1-k).
/// Fermionic bases always have n_max = 1.
class FockBasis {
 public:
  FockBasis(int modes, Statistics statistics, int n_max);

  int mode_count() const { return modes_; }
  Statistics statistics() const { return statistics_; }
  int truncation() const { return n_max_; }
  std::size_t size() const { return states_.size(); }

  const Occupation& state(std::size_t index) const { return states_.at(index); }
  std::span<const Occupation> states() const { return states_; }
  std::optional<std::size_t> index_of(std::span<const int> occupation) const;

  /// Total excitation number of basis state `index`.
  int excitations(std::size_t index) const { return totals_.at(index); }

  bool operator==(const FockBasis& other) const {
    return modes_ == other.modes_ && statistics_ == other.statistics_ &&
           n_max_ == other.n_max_;
  }

 private:
  int modes_;
  Statistics statistics_;
  int n_max_;
  std::vector<Occupation> states_;
  std::vector<int> totals_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

/// Throws DimensionError when modes < 1 or n_max < 1. Fermionic bases
/// ignore n_max beyond validation and use a single quantum per mode.
BasisPtr build_basis(int modes, Statistics statistics, int n_max = 1);

/// Throws BasisError unless both bases describe the same space.
void require_same_basis(const FockBasis& a, const FockBasis& b);

/// A dense matrix over a FockBasis.
class Operator {
 public:
  Operator(BasisPtr basis, Matrix matrix);

  static Operator identity(BasisPtr basis);
  static Operator zero(BasisPtr basis);
  /// Verifies ‖A − A†‖_max < tol, throwing DomainError otherwise.
  static Operator hermitian(BasisPtr basis, Matrix matrix, double tol = 1e-12);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dimension() const { return basis_->size(); }

  Operator adjoint() const;
  bool is_hermitian(double tol = 1e-12) const;

  Operator& operator+=(const Operator& rhs);
  Operator& operator-=(const Operator& rhs);
  Operator& operator*=(Complex scale);

  friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
  friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
  friend Operator operator*(Operator lhs, Complex scale) { return lhs *= scale; }
  friend Operator operator*(Complex scale, Operator rhs) { return rhs *= scale; }
  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  BasisPtr basis_;
  Matrix matrix_;
};

Operator commutator(const Operator& a, const Operator& b);
Operator anticommutator(const Operator& a, const Operator& b);

/// Operator flattened row-major: entry (j, k) lands at index j·N + k.
struct VectorizedOperator {
  BasisPtr basis;
  Vector vector;
};

/// Annihilation operator of `mode` (0-based). Bosonic: truncated ladder
/// operator. Fermionic: Jordan-Wigner string over modes < `mode`, so the
/// canonical anticommutation relations hold exactly.
Operator annihilation(const BasisPtr& basis, int mode);
Operator creation(const BasisPtr& basis, int mode);
Operator mode_number(const BasisPtr& basis, int mode);

/// Total excitation number N̂ = Σ_k n̂_k.
Operator number_operator(const BasisPtr& basis);
/// Parity P̂ = exp(iπN̂), diagonal entries (−1)^n.
Operator parity_operator(const BasisPtr& basis);

VectorizedOperator vectorize(const Operator& op);
Operator devectorize(const VectorizedOperator& v);
Operator devectorize(const BasisPtr& basis, const Vector& v);

/// Hilbert-Schmidt product Tr(A†B) computed on the vectorized forms.
Complex hilbert_schmidt(const VectorizedOperator& a, const VectorizedOperator& b);

/// O ⊗ I: maps |R⟩⟩ to |OR⟩⟩.
Superoperator left_super(const Operator& op);
/// I ⊗ Oᵀ: maps |R⟩⟩ to |RO⟩⟩.
Superoperator right_super(const Operator& op);
/// [O, ·] = O ⊗ I − I ⊗ Oᵀ.
Superoperator commutator_super(const Operator& op);

}  // namespace liouville
