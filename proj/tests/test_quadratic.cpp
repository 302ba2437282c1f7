#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "liouville/errors.hpp"
#include "liouville/quadratic.hpp"

using namespace liouville;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<double> sorted_eigenvalues(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.begin(), v.end());
  return v;
}

// spin-basis Pauli operators, index 2·s₁ + s₂, σᶻ = diag(−1, +1)
Matrix spin_op(const Matrix& first, const Matrix& second) { return kron(first, second); }

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}

}  // namespace

TEST_CASE("paper two-spin energies", "[quadratic]") {
  const auto d = diagonalize_two_spin(1.0, 1.0, 0.01);
  CHECK_THAT(2.0 * d.E1, WithinAbs(1.01005, 1e-5));
  CHECK_THAT(2.0 * d.E2, WithinAbs(0.99005, 1e-5));
  CHECK_THAT(d.phi, WithinAbs(std::numbers::pi / 4.0, 1e-15));
}

TEST_CASE("decoupled spins", "[quadratic]") {
  const auto d = diagonalize_two_spin(2.0, 1.0, 0.0);
  CHECK(d.theta == 0.0);
  CHECK(d.phi == 0.0);
  CHECK_THAT(d.E1, WithinAbs(1.0, 1e-15));
  CHECK_THAT(d.E2, WithinAbs(0.5, 1e-15));
  for (Eigen::Index r = 0; r < 4; ++r) {
    int nonzero = 0;
    for (Eigen::Index c = 0; c < 4; ++c) {
      const double v = d.eigenbasis_map(r, c);
      if (v != 0.0) {
        ++nonzero;
        CHECK(std::abs(v) == 1.0);
      }
    }
    CHECK(nonzero == 1);
  }
}

TEST_CASE("frequencies must be positive", "[quadratic]") {
  CHECK_THROWS_AS(diagonalize_two_spin(0.0, 1.0, 0.1), DomainError);
  CHECK_THROWS_AS(diagonalize_two_spin(1.0, -1.0, 0.1), DomainError);
}

TEST_CASE("two-spin spectrum against dense eigensolve", "[quadratic]") {
  for (auto [w1, w2, lam] : {std::tuple{1.0, 0.8, 0.3}, std::tuple{0.8, 1.0, 0.3}, std::tuple{1.0, 1.0, -0.2},
                             std::tuple{1.3, 0.4, 0.05}, std::tuple{0.5, 2.0, -0.7}}) {
    const auto d = diagonalize_two_spin(w1, w2, lam);
    const RealMatrix H = two_spin_hamiltonian_spin_basis(w1, w2, lam);
    const auto dense = sorted_eigenvalues(H.cast<Complex>());
    std::vector<double> closed{-d.E1 - d.E2, -d.E1 + d.E2, d.E1 - d.E2, d.E1 + d.E2};
    std::sort(closed.begin(), closed.end());
    for (int i = 0; i < 4; ++i) CHECK_THAT(closed[static_cast<std::size_t>(i)], WithinAbs(dense[static_cast<std::size_t>(i)], 1e-12));
    CHECK(d.E1 >= d.E2);
    CHECK(d.E1 * d.E2 >= 0.0);

    const RealMatrix& U = d.eigenbasis_map;
    CHECK(max_abs(U * U.transpose() - RealMatrix::Identity(4, 4)) < 1e-14);
    RealMatrix expected = RealMatrix::Zero(4, 4);
    expected.diagonal() << -d.E1 - d.E2, -d.E1 + d.E2, d.E1 - d.E2, d.E1 + d.E2;
    CHECK(max_abs(U * H * U.transpose() - expected) < 1e-12);

    const auto basis = build_basis(2, Statistics::fermionic);
    CHECK(max_abs(two_spin_hamiltonian(d, basis).matrix() - expected.cast<Complex>()) < 1e-12);
  }
}

TEST_CASE("spin operators match conjugated Paulis", "[quadratic]") {
  const auto basis = build_basis(2, Statistics::fermionic);
  const Matrix id2 = Matrix::Identity(2, 2);
  for (auto [w1, w2, lam] : {std::tuple{1.0, 1.0, 0.01}, std::tuple{1.0, 0.8, 0.3}, std::tuple{0.7, 1.1, -0.4}}) {
    const auto d = diagonalize_two_spin(w1, w2, lam);
    const auto ops = spin_coupling_operators(d, basis);
    const Matrix U = d.eigenbasis_map.cast<Complex>();
    auto conj = [&](const Matrix& m) -> Matrix { return U * m * U.transpose(); };
    CHECK(max_abs(ops.sigma1x.matrix() - conj(spin_op(pauli_x(), id2))) < 1e-12);
    CHECK(max_abs(ops.sigma2x.matrix() - conj(spin_op(id2, pauli_x()))) < 1e-12);
    CHECK(max_abs(ops.sigma1z.matrix() - conj(spin_op(pauli_z(), id2))) < 1e-12);
    CHECK(max_abs(ops.sigma2z.matrix() - conj(spin_op(id2, pauli_z()))) < 1e-12);

    CHECK(max_abs((ops.sigma1x * ops.sigma1x).matrix() - Matrix::Identity(4, 4)) < 1e-12);
    CHECK(max_abs((ops.sigma2x * ops.sigma2x).matrix() - Matrix::Identity(4, 4)) < 1e-12);
    CHECK(max_abs(commutator(ops.sigma1x, ops.sigma2x).matrix()) < 1e-12);
    const Operator H = two_spin_hamiltonian(d, basis);
    CHECK(max_abs(commutator(H, ops.parity).matrix()) < 1e-14);
    CHECK(max_abs(ops.parity.matrix() - parity_operator(basis).matrix()) == 0.0);
  }
}

TEST_CASE("uncoupled sigma x is the bare Majorana", "[quadratic]") {
  const auto basis = build_basis(2, Statistics::fermionic);
  const auto d = diagonalize_two_spin(1.0, 0.7, 0.0);
  const auto ops = spin_coupling_operators(d, basis);
  const Operator f1 = annihilation(basis, 0);
  CHECK(max_abs(ops.sigma1x.matrix() - (f1 + f1.adjoint()).matrix()) == 0.0);
  CHECK_THROWS_AS(spin_coupling_operators(d, build_basis(3, Statistics::fermionic)), BasisError);
}

TEST_CASE("Bogoliubov and rotation keep anticommutation", "[quadratic]") {
  const auto basis = build_basis(2, Statistics::fermionic);
  const auto d = diagonalize_two_spin(1.0, 0.6, 0.25);
  const Operator f1 = annihilation(basis, 0);
  const Operator f2 = annihilation(basis, 1);
  const Complex ct = std::cos(d.theta), st = std::sin(d.theta);
  const Complex cp = std::cos(d.phi), sp = std::sin(d.phi);
  const Operator xi1 = cp * f1.adjoint() + sp * f2.adjoint();
  const Operator xi2 = cp * f2.adjoint() - sp * f1.adjoint();
  const Operator c1 = ct * xi1 + st * xi2.adjoint();
  const Operator c2 = ct * xi2 - st * xi1.adjoint();
  const Operator id = Operator::identity(basis);
  CHECK(max_abs((anticommutator(c1, c1.adjoint()) - id).matrix()) < 1e-14);
  CHECK(max_abs((anticommutator(c2, c2.adjoint()) - id).matrix()) < 1e-14);
  CHECK(max_abs(anticommutator(c1, c2.adjoint()).matrix()) < 1e-14);
  CHECK(max_abs(anticommutator(c1, c2).matrix()) < 1e-14);
  CHECK(max_abs(anticommutator(c1, c1).matrix()) < 1e-14);
}

namespace {

// spin chain in the spin basis with S^z = diag(−½, ½) and σ⁺ = |1⟩⟨0|
Matrix spin_chain_dense(const SpinChainSpec& spec) {
  const int M = spec.modes;
  Matrix sz(2, 2), sp(2, 2);
  sz << -0.5, 0, 0, 0.5;
  sp << 0, 0, 1, 0;
  auto site = [&](const Matrix& op, int k) {
    Matrix out = Matrix::Identity(1, 1);
    for (int l = 0; l < M; ++l) out = kron(out, l == k ? op : Matrix::Identity(2, 2));
    return out;
  };
  const auto dim = static_cast<Eigen::Index>(1) << M;
  Matrix H = Matrix::Zero(dim, dim);
  for (int k = 0; k < M; ++k) H += spec.omegas[static_cast<std::size_t>(k)] / 2.0 * site(sz, k);
  for (int k = 0; k + 1 < M; ++k) {
    const Matrix hop = site(sp, k + 1) * site(sp.adjoint(), k);
    H += spec.couplings[static_cast<std::size_t>(k)] * (hop + hop.adjoint());
  }
  return H;
}

}  // namespace

TEST_CASE("Jordan-Wigner chain spectrum", "[quadratic]") {
  const SpinChainSpec spec{3, {1.0, 1.0, 1.0}, {0.2, 0.2}};
  const auto basis = build_basis(3, Statistics::fermionic);
  const Operator H = jordan_wigner_chain(spec, basis);
  const auto ours = sorted_eigenvalues(H.matrix());
  const auto dense = sorted_eigenvalues(spin_chain_dense(spec));
  for (std::size_t i = 0; i < ours.size(); ++i) CHECK_THAT(ours[i], WithinAbs(dense[i], 1e-12));
  CHECK(max_abs(commutator(H, number_operator(basis)).matrix()) < 1e-14);
  // the string-free form equals the spin matrix exactly in this basis
  CHECK(max_abs(H.matrix() - spin_chain_dense(spec)) < 1e-14);

  const SpinChainSpec uneven{4, {1.0, 0.9, 1.2, 0.7}, {0.3, -0.1, 0.25}};
  const auto b4 = build_basis(4, Statistics::fermionic);
  CHECK(max_abs(jordan_wigner_chain(uneven, b4).matrix() - spin_chain_dense(uneven)) < 1e-14);
}

TEST_CASE("uncoupled chain is diagonal", "[quadratic]") {
  const auto basis = build_basis(2, Statistics::fermionic);
  const Operator H = jordan_wigner_chain({2, {1.0, 0.5}, {0.0}}, basis);
  Matrix off = H.matrix();
  off.diagonal().setZero();
  CHECK(max_abs(off) == 0.0);
  CHECK_THAT(H.matrix()(3, 3).real(), WithinAbs(0.5 * 0.5 + 0.25 * 0.5, 1e-15));
  CHECK_THROWS_AS(jordan_wigner_chain({2, {1.0}, {0.0}}, basis), DimensionError);
  CHECK_THROWS_AS(jordan_wigner_chain({3, {1.0, 1.0, 1.0}, {0.1, 0.1}}, basis), BasisError);
}

TEST_CASE("Jordan-Wigner sigma x keeps Pauli algebra", "[quadratic]") {
  const auto basis = build_basis(3, Statistics::fermionic);
  for (int j = 0; j < 3; ++j) {
    const Operator sj = jw_sigma_x(basis, j);
    CHECK(max_abs((sj * sj).matrix() - Matrix::Identity(8, 8)) < 1e-14);
    for (int k = 0; k < 3; ++k) CHECK(max_abs(commutator(sj, jw_sigma_x(basis, k)).matrix()) < 1e-14);
  }
}
