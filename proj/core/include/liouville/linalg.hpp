#pragma once

#include <complex>

#include <Eigen/Dense>

namespace liouville {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;

/// Dense N²×N² matrix acting on vectorized operators.
using Superoperator = Eigen::MatrixXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Largest absolute entry; zero for empty matrices.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

/// Dense Kronecker product a ⊗ b.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace liouville
