#include "scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace liouville::testing {

TwoSpinScenario two_spin_reference(SecularMode mode) {
  TwoSpinScenario s;
  s.omega1 = 1.0;
  s.omega2 = 1.0;
  s.lambda = 0.01;
  const double mu = std::pow(10.0, -1.5);
  s.bath1 = {mu, 1.0, 10.0};
  s.bath2 = {mu, 0.1, 10.0};
  s.policy = PsaPolicy::from_coupling(mu, 100.0, mode);
  return s;
}

Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Matrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
  const Matrix m = random_matrix(rng, n, n);
  return 0.5 * (m + m.adjoint());
}

Matrix random_density(std::mt19937_64& rng, Eigen::Index n) {
  const Matrix g = random_matrix(rng, n, n);
  Matrix rho = g * g.adjoint();
  return rho / rho.trace();
}


namespace {

using K = MomentLabel::Kind;

Complex entry(const MomentSystem& sys, MomentLabel row, MomentLabel col) {
  return sys.B(static_cast<Eigen::Index>(*sys.index_of(row)), static_cast<Eigen::Index>(*sys.index_of(col)));
}

}  // namespace

TwoBosonReference two_boson_reference(const GaussianCoefficients& c) {
  const Matrix& s = c.lamb;
  const Matrix& gd = c.gamma_down;
  const Matrix& gu = c.gamma_up;
  const Complex i(0.0, 1.0);
  const Complex E1 = c.energies[0] + s(0, 0), E2 = c.energies[1] + s(1, 1);
  const Complex dw = E1 - E2;
  const Complex gb1 = gd(0, 0) - gu(0, 0), gb2 = gd(1, 1) - gu(1, 1);
  const Complex x12 = -gd(0, 1) + gu(1, 0), x21 = -gd(1, 0) + gu(0, 1);

  TwoBosonReference r;
  r.B0.resize(4, 4);
  r.B0 << -gb1, 0.0, (-2.0 * i * s(0, 1) + x12) / 2.0, (2.0 * i * s(1, 0) + x21) / 2.0,
      0.0, -gb2, (2.0 * i * s(0, 1) + x12) / 2.0, (-2.0 * i * s(1, 0) + x21) / 2.0,
      (-2.0 * i * s(1, 0) + x21) / 2.0, (2.0 * i * s(1, 0) + x21) / 2.0, i * dw - (gb1 + gb2) / 2.0, 0.0,
      (2.0 * i * s(0, 1) + x12) / 2.0, (-2.0 * i * s(0, 1) + x12) / 2.0, 0.0, -i * dw - (gb1 + gb2) / 2.0;
  r.Bm2.resize(3, 3);
  r.Bm2 << -2.0 * i * E1 - gb1, -2.0 * i * s(0, 1) + x12, 0.0,
      -i * s(1, 0) + x21 / 2.0, -i * (E1 + E2) - (gb1 + gb2) / 2.0, -i * s(0, 1) + x12 / 2.0,
      0.0, -2.0 * i * s(1, 0) + x21, -2.0 * i * E2 - gb2;
  r.b0 = Eigen::Vector4cd(gu(0, 0), gu(1, 1), gu(0, 1), gu(1, 0));
  return r;
}

double two_boson_placement_error(const GaussianCoefficients& c) {
  const MomentSystem sys = build_moment_eom(c);
  const TwoBosonReference ref = two_boson_reference(c);
  const MomentLabel rows0[] = {{K::create_annihilate, 0, 0}, {K::create_annihilate, 1, 1},
                               {K::create_annihilate, 0, 1}, {K::create_annihilate, 1, 0}};
  const MomentLabel rows2[] = {{K::annihilate_annihilate, 0, 0}, {K::annihilate_annihilate, 0, 1},
                               {K::annihilate_annihilate, 1, 1}};
  double worst = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int q = 0; q < 4; ++q) worst = std::max(worst, std::abs(entry(sys, rows0[r], rows0[q]) - ref.B0(r, q)));
    worst = std::max(worst, std::abs(sys.b(static_cast<Eigen::Index>(*sys.index_of(rows0[r]))) - ref.b0(r)));
  }
  for (int r = 0; r < 3; ++r) {
    for (int q = 0; q < 3; ++q) {
      worst = std::max(worst, std::abs(entry(sys, rows2[r], rows2[q]) - ref.Bm2(r, q)));
      const MomentLabel pr{K::create_create, rows2[r].i, rows2[r].j};
      const MomentLabel pq{K::create_create, rows2[q].i, rows2[q].j};
      worst = std::max(worst, std::abs(entry(sys, pr, pq) - std::conj(ref.Bm2(r, q))));
    }
  }
  for (std::size_t r = 0; r < sys.labels.size(); ++r) {
    if (sys.deltas[r] != 0) worst = std::max(worst, std::abs(sys.b(static_cast<Eigen::Index>(r))));
    for (std::size_t q = 0; q < sys.labels.size(); ++q)
      if (sys.deltas[r] != sys.deltas[q])
        worst = std::max(worst, std::abs(sys.B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(q))));
  }
  return worst;
}

GaussianCoefficients random_gaussian_tables(std::mt19937_64& rng, int modes) {
  GaussianCoefficients c;
  std::uniform_real_distribution<double> u(0.5, 1.5);
  for (int k = 0; k < modes; ++k) c.energies.push_back(u(rng));
  c.lamb = 0.05 * random_hermitian(rng, modes);
  const Matrix gd = random_matrix(rng, modes, modes);
  const Matrix gu = random_matrix(rng, modes, modes);
  c.gamma_down = 0.1 * gd * gd.adjoint();
  c.gamma_up = 0.02 * gu * gu.adjoint();
  return c;
}

CrossFormalismResult cross_formalism_check() {
  const double mu = 0.05;
  const BathSpec bath{mu, 0.1, 10.0};
  const PsaPolicy policy = PsaPolicy::from_coupling(mu);
  const std::vector<double> E{1.0, 0.98};
  const auto basis = build_basis(2, Statistics::bosonic, 4);
  const Operator H = Complex(E[0]) * mode_number(basis, 0) + Complex(E[1]) * mode_number(basis, 1);
  Operator A = Operator::zero(basis);
  for (int k = 0; k < 2; ++k) A += annihilation(basis, k) + creation(basis, k);
  const auto coeffs = bath_coefficients({bath}, {{0, 1.0}});
  const Liouvillian L = assemble_liouvillian(H, {jump_decompose(H, A)}, coeffs, policy);
  const auto dec = block_decompose(L);

  // populates every δ sector with a few excitations per mode
  Vector psi = Vector::Zero(static_cast<Eigen::Index>(basis->size()));
  auto at = [&](int n1, int n2) { return static_cast<Eigen::Index>(*basis->index_of(std::vector<int>{n1, n2})); };
  psi(at(0, 0)) = 1.0;
  psi(at(0, 1)) = 0.3;
  psi(at(1, 0)) = Complex(0.2, 0.2);
  psi(at(1, 1)) = 0.2;
  psi(at(2, 0)) = 0.15;
  psi(at(0, 2)) = Complex(0.0, 0.1);
  psi.normalize();
  const Operator rho0(basis, psi * psi.adjoint());

  Matrix g(1, 2);
  g << 1.0, 1.0;
  const auto sys = build_moment_eom(coefficients_from_linear_coupling(E, g, coeffs, policy));
  std::vector<double> times;
  for (int i = 0; i <= 20; ++i) times.push_back(10.0 * i);
  const auto traj = evolve(L, dec, rho0, times, {false});
  const auto xs = evolve_covariance(sys, moments_of(sys, rho0), times);

  CrossFormalismResult r;
  r.total = times.size();
  for (std::size_t t = 0; t < times.size(); ++t) {
    double top = 0.0;
    for (std::size_t s = 0; s < basis->size(); ++s) {
      const auto& occ = basis->state(s);
      if (occ[0] == 4 || occ[1] == 4)
        top += traj.states[t].matrix()(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)).real();
    }
    if (top >= 1e-8) break;
    ++r.validated;
    r.window_end = times[t];
    r.worst = std::max(r.worst, max_abs(moments_of(sys, traj.states[t]) - xs[t]));
  }
  return r;
}

}  // namespace liouville::testing
