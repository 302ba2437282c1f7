#include "liouville/fock.hpp"

#include <cmath>
#include <string>

#include "liouville/errors.hpp"

namespace liouville {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

FockBasis::FockBasis(int modes, Statistics statistics, int n_max)
    : modes_(modes), statistics_(statistics), n_max_(n_max) {
  if (modes < 1) {
    throw DimensionError("FockBasis: mode count must be >= 1, got " + std::to_string(modes));
  }
  if (n_max < 1) {
    throw DimensionError("FockBasis: truncation must be >= 1, got " + std::to_string(n_max));
  }
  if (statistics == Statistics::fermionic) n_max_ = 1;

  const std::size_t levels = static_cast<std::size_t>(n_max_) + 1;
  std::size_t count = 1;
  for (int k = 0; k < modes_; ++k) count *= levels;

  states_.reserve(count);
  totals_.reserve(count);
  Occupation current(static_cast<std::size_t>(modes_), 0);
  for (std::size_t index = 0; index < count; ++index) {
    std::size_t rest = index;
    int total = 0;
    for (int k = modes_ - 1; k >= 0; --k) {
      current[static_cast<std::size_t>(k)] = static_cast<int>(rest % levels);
      total += current[static_cast<std::size_t>(k)];
      rest /= levels;
    }
    states_.push_back(current);
    totals_.push_back(total);
  }
}

std::optional<std::size_t> FockBasis::index_of(std::span<const int> occupation) const {
  if (occupation.size() != static_cast<std::size_t>(modes_)) return std::nullopt;
  std::size_t index = 0;
  for (int n : occupation) {
    if (n < 0 || n > n_max_) return std::nullopt;
    index = index * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(n);
  }
  return index;
}

BasisPtr build_basis(int modes, Statistics statistics, int n_max) {
  return std::make_shared<const FockBasis>(modes, statistics, n_max);
}

void require_same_basis(const FockBasis& a, const FockBasis& b) {
  if (!(a == b)) throw BasisError("operands live on different Fock bases");
}

Operator::Operator(BasisPtr basis, Matrix matrix) : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  if (!basis_) throw BasisError("Operator: null basis");
  const auto n = static_cast<Eigen::Index>(basis_->size());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("Operator: matrix is " + std::to_string(matrix_.rows()) + "x" +
                         std::to_string(matrix_.cols()) + ", basis has " + std::to_string(n) +
                         " states");
  }
}

Operator Operator::identity(BasisPtr basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  return {std::move(basis), Matrix::Identity(n, n)};
}

Operator Operator::zero(BasisPtr basis) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  return {std::move(basis), Matrix::Zero(n, n)};
}

Operator Operator::hermitian(BasisPtr basis, Matrix matrix, double tol) {
  Operator op(std::move(basis), std::move(matrix));
  if (!op.is_hermitian(tol)) throw DomainError("operator asserted Hermitian is not");
  return op;
}

Operator Operator::adjoint() const { return {basis_, matrix_.adjoint()}; }

bool Operator::is_hermitian(double tol) const {
  return max_abs(matrix_ - matrix_.adjoint()) < tol;
}

Operator& Operator::operator+=(const Operator& rhs) {
  require_same_basis(*basis_, *rhs.basis_);
  matrix_ += rhs.matrix_;
  return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
  require_same_basis(*basis_, *rhs.basis_);
  matrix_ -= rhs.matrix_;
  return *this;
}

Operator& Operator::operator*=(Complex scale) {
  matrix_ *= scale;
  return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_basis(*lhs.basis_, *rhs.basis_);
  return {lhs.basis_, lhs.matrix_ * rhs.matrix_};
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }
Operator anticommutator(const Operator& a, const Operator& b) { return a * b + b * a; }

namespace {

void require_mode(const FockBasis& basis, int mode) {
  if (mode < 0 || mode >= basis.mode_count()) {
    throw IndexError("mode index " + std::to_string(mode) + " outside [0, " +
                     std::to_string(basis.mode_count()) + ")");
  }
}

}  // namespace

Operator annihilation(const BasisPtr& basis, int mode) {
  require_mode(*basis, mode);
  const std::size_t n = basis->size();
  const auto k = static_cast<std::size_t>(mode);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t col = 0; col < n; ++col) {
    const Occupation& occ = basis->state(col);
    if (occ[k] == 0) continue;
    Occupation lowered = occ;
    lowered[k] -= 1;
    const std::size_t row = *basis->index_of(lowered);
    double amplitude = 0.0;
    if (basis->statistics() == Statistics::bosonic) {
      amplitude = std::sqrt(static_cast<double>(occ[k]));
    } else {
      int before = 0;
      for (std::size_t l = 0; l < k; ++l) before += occ[l];
      amplitude = (before % 2 == 0) ? 1.0 : -1.0;
    }
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = amplitude;
  }
  return {basis, std::move(m)};
}

Operator creation(const BasisPtr& basis, int mode) { return annihilation(basis, mode).adjoint(); }

Operator mode_number(const BasisPtr& basis, int mode) {
  require_mode(*basis, mode);
  const std::size_t n = basis->size();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
        basis->state(i)[static_cast<std::size_t>(mode)];
  }
  return {basis, std::move(m)};
}

Operator number_operator(const BasisPtr& basis) {
  const std::size_t n = basis->size();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = basis->excitations(i);
  }
  return {basis, std::move(m)};
}

Operator parity_operator(const BasisPtr& basis) {
  const std::size_t n = basis->size();
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
        (basis->excitations(i) % 2 == 0) ? 1.0 : -1.0;
  }
  return {basis, std::move(m)};
}

VectorizedOperator vectorize(const Operator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  Vector v(n * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) v(j * n + k) = op.matrix()(j, k);
  }
  return {op.basis_ptr(), std::move(v)};
}

Operator devectorize(const BasisPtr& basis, const Vector& v) {
  const auto n = static_cast<Eigen::Index>(basis->size());
  if (v.size() != n * n) {
    throw BasisError("devectorize: vector of length " + std::to_string(v.size()) +
                     " does not match basis of size " + std::to_string(n));
  }
  Matrix m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = 0; k < n; ++k) m(j, k) = v(j * n + k);
  }
  return {basis, std::move(m)};
}

Operator devectorize(const VectorizedOperator& v) { return devectorize(v.basis, v.vector); }

Complex hilbert_schmidt(const VectorizedOperator& a, const VectorizedOperator& b) {
  require_same_basis(*a.basis, *b.basis);
  return a.vector.dot(b.vector);  // Eigen's dot conjugates the left operand
}

Superoperator left_super(const Operator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  return kron(op.matrix(), Matrix::Identity(n, n));
}

Superoperator right_super(const Operator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  return kron(Matrix::Identity(n, n), op.matrix().transpose());
}

Superoperator commutator_super(const Operator& op) { return left_super(op) - right_super(op); }

}  // namespace liouville
