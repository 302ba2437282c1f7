#include "liouville/quadratic.hpp"

#include <cmath>
#include <string>

#include "liouville/errors.hpp"

namespace liouville {

TwoSpinDiagonalization diagonalize_two_spin(double omega1, double omega2, double lambda) {
  if (!(omega1 > 0.0) || !(omega2 > 0.0)) {
    throw DomainError("diagonalize_two_spin: frequencies must be positive");
  }
  TwoSpinDiagonalization d;
  d.omega1 = omega1;
  d.omega2 = omega2;
  d.lambda = lambda;
  const double wp = omega1 + omega2;
  const double wm = omega1 - omega2;
  d.theta = 0.5 * std::atan(2.0 * lambda / wp);
  d.phi = (wm == 0.0 && lambda == 0.0) ? 0.0 : 0.5 * std::atan2(2.0 * lambda, wm);

  const double rp = std::sqrt(lambda * lambda + wp * wp / 4.0);
  const double rm = std::sqrt(lambda * lambda + wm * wm / 4.0);
  d.E1 = 0.5 * (rp + rm);
  d.E2 = 0.5 * (rp - rm);

  const double ct = std::cos(d.theta), st = std::sin(d.theta);
  const double cp = std::cos(d.phi), sp = std::sin(d.phi);
  // columns: |00⟩, |01⟩, |10⟩, |11⟩ in the spin basis
  d.eigenbasis_map = RealMatrix::Zero(4, 4);
  d.eigenbasis_map(0, 0) = -ct;
  d.eigenbasis_map(0, 3) = st;
  d.eigenbasis_map(1, 1) = cp;
  d.eigenbasis_map(1, 2) = -sp;
  d.eigenbasis_map(2, 1) = -sp;
  d.eigenbasis_map(2, 2) = -cp;
  d.eigenbasis_map(3, 0) = st;
  d.eigenbasis_map(3, 3) = ct;
  return d;
}

RealMatrix two_spin_hamiltonian_spin_basis(double omega1, double omega2, double lambda) {
  RealMatrix sz(2, 2), sx(2, 2), id = RealMatrix::Identity(2, 2);
  sz << -1, 0, 0, 1;
  sx << 0, 1, 1, 0;
  auto k = [](const RealMatrix& a, const RealMatrix& b) {
    RealMatrix out(4, 4);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out.block(2 * i, 2 * j, 2, 2) = a(i, j) * b;
    return out;
  };
  return 0.5 * omega1 * k(sz, id) + 0.5 * omega2 * k(id, sz) + lambda * k(sx, sx);
}

namespace {

void require_two_fermions(const FockBasis& basis) {
  if (basis.statistics() != Statistics::fermionic || basis.mode_count() != 2) {
    throw BasisError("two-spin operators need a two-mode fermionic basis");
  }
}

}  // namespace

Operator two_spin_hamiltonian(const TwoSpinDiagonalization& d, const BasisPtr& basis) {
  require_two_fermions(*basis);
  const Operator id = Operator::identity(basis);
  return Complex(2.0 * d.E1) * mode_number(basis, 0) + Complex(2.0 * d.E2) * mode_number(basis, 1) -
         Complex(d.E1 + d.E2) * id;
}

SpinCouplings spin_coupling_operators(const TwoSpinDiagonalization& d, const BasisPtr& basis) {
  require_two_fermions(*basis);
  const Operator f1 = annihilation(basis, 0);
  const Operator f2 = annihilation(basis, 1);
  const Operator f1d = f1.adjoint();
  const Operator f2d = f2.adjoint();
  const Operator n1 = f1d * f1;
  const Operator n2 = f2d * f2;
  const Operator id = Operator::identity(basis);
  const Operator parity = (Complex(2.0) * n1 - id) * (Complex(2.0) * n2 - id);

  const double tp = d.theta + d.phi;
  const double tm = d.theta - d.phi;
  Operator s1x = Complex(std::cos(tp)) * (f1d + f1) + Complex(std::sin(tp)) * (f2d + f2);
  Operator s2x = Complex(std::cos(tm)) * (parity * (f2d - f2)) +
                 Complex(std::sin(tm)) * (parity * (f1d - f1));

  const double c2t = std::cos(2.0 * d.theta);
  const double c2p = std::cos(2.0 * d.phi);
  const double cs_t = std::cos(d.theta) * std::sin(d.theta);
  const double cs_p = std::cos(d.phi) * std::sin(d.phi);
  const Operator pair = f1 * f2 + (f1 * f2).adjoint();
  const Operator hop12 = f1 * f2d + (f1 * f2d).adjoint();
  const Operator hop21 = f1d * f2 + (f1d * f2).adjoint();
  Operator s1z = Complex(c2t + c2p) * n1 + Complex(c2t - c2p) * n2 - Complex(c2t) * id -
                 Complex(2.0) * (Complex(cs_p) * hop12 + Complex(cs_t) * pair);
  Operator s2z = Complex(c2t + c2p) * n2 + Complex(c2t - c2p) * n1 - Complex(c2t) * id -
                 Complex(2.0) * (Complex(cs_p) * hop21 + Complex(cs_t) * pair);

  return {std::move(s1x), std::move(s2x), std::move(s1z), std::move(s2z), parity};
}

Operator jordan_wigner_chain(const SpinChainSpec& spec, const BasisPtr& basis) {
  if (spec.modes < 1 || spec.omegas.size() != static_cast<std::size_t>(spec.modes) ||
      spec.couplings.size() + 1 != static_cast<std::size_t>(spec.modes)) {
    throw DimensionError("spin chain: need " + std::to_string(spec.modes) + " frequencies and " +
                         std::to_string(spec.modes - 1) + " couplings");
  }
  if (basis->statistics() != Statistics::fermionic || basis->mode_count() != spec.modes) {
    throw BasisError("spin chain: basis must be fermionic with matching mode count");
  }
  const Operator id = Operator::identity(basis);
  Operator h = Operator::zero(basis);
  for (int k = 0; k < spec.modes; ++k) {
    h += Complex(spec.omegas[static_cast<std::size_t>(k)] / 2.0) *
         (mode_number(basis, k) - Complex(0.5) * id);
  }
  for (int k = 0; k + 1 < spec.modes; ++k) {
    const Operator hop = creation(basis, k + 1) * annihilation(basis, k);
    h += Complex(spec.couplings[static_cast<std::size_t>(k)]) * (hop + hop.adjoint());
  }
  return h;
}

Operator jw_sigma_x(const BasisPtr& basis, int mode) {
  if (basis->statistics() != Statistics::fermionic) {
    throw BasisError("jw_sigma_x: basis must be fermionic");
  }
  Operator string = Operator::identity(basis);
  for (int l = 0; l < mode; ++l) string = string * (Operator::identity(basis) - Complex(2.0) * mode_number(basis, l));
  const Operator c = annihilation(basis, mode);
  return string * (c + c.adjoint());
}

}  // namespace liouville
