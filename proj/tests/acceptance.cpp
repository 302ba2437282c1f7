// Acceptance run: one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "liouville/blocks.hpp"
#include "liouville/gaussian.hpp"
#include "liouville/quadratic.hpp"
#include "liouville/redfield.hpp"
#include "support/scenarios.hpp"

using namespace liouville;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Outcome diagonalization() {
  const auto d = diagonalize_two_spin(1.0, 1.0, 0.01);
  const double e1 = std::abs(2.0 * d.E1 - 1.01005), e2 = std::abs(2.0 * d.E2 - 0.99005);
  return {e1 < 1e-5 && e2 < 1e-5, "2E1=" + std::to_string(2.0 * d.E1) + " 2E2=" + std::to_string(2.0 * d.E2)};
}

Outcome census() {
  const auto model = assemble_global_two_spin(testing::two_spin_reference());
  const auto dec = block_decompose(model.liouvillian);
  const auto sizes = dec.block_sizes();
  const bool ok = sizes == std::vector<std::size_t>{6, 4, 4, 1, 1} && dec.offblock_norm < 1e-12;
  std::string s;
  for (auto n : sizes) s += (s.empty() ? "" : ",") + std::to_string(n);
  return {ok, "sizes [" + s + "], off-block " + sci(dec.offblock_norm)};
}

Outcome symmetry_suite() {
  double worst_n = 0.0, worst_p = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const auto inst = testing::random_graded_instance(seed);
    worst_n = std::max(worst_n, commutator_norm(number_superoperator(*inst.basis), inst.liouvillian.matrix));
    worst_p = std::max(worst_p, commutator_norm(parity_superoperator(*inst.basis), inst.liouvillian.matrix));
  }
  return {worst_n < 1e-12 && worst_p < 1e-12, "50 instances, max N-norm " + sci(worst_n) + ", max P-norm " + sci(worst_p)};
}

Outcome conjugate_blocks() {
  double worst = verify_conjugate_blocks(block_decompose(assemble_global_two_spin(testing::two_spin_reference()).liouvillian));
  for (std::uint64_t seed = 101; seed <= 120; ++seed)
    worst = std::max(worst, verify_conjugate_blocks(block_decompose(testing::random_graded_instance(seed).liouvillian)));
  return {worst < 1e-12, "two-spin + 20 random instances, max " + sci(worst)};
}

Outcome steady_oracle() {
  const auto model = assemble_global_two_spin(testing::two_spin_reference());
  const Liouvillian& L = model.liouvillian;
  const auto dec = block_decompose(L);
  const auto ss = steady_state(L, dec);
  if (!ss.rho_ss) return {false, "no steady state from the zero block"};

  Eigen::JacobiSVD<Matrix> svd(L.matrix, Eigen::ComputeFullV);
  const Vector v = svd.matrixV().col(svd.matrixV().cols() - 1);
  Matrix full = devectorize(L.basis, v).matrix();
  full /= full.trace();
  full = 0.5 * (full + full.adjoint());
  const double gap = max_abs(ss.rho_ss->matrix() - full);

  const Eigen::ComplexEigenSolver<Matrix> es(L.matrix);
  std::size_t zeros = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) < ss.zero_tolerance) ++zeros;
  const bool ok = gap < 1e-10 && zeros == 1 && ss.zero_modes == 1 && ss.off_grading_max < 1e-10;
  return {ok, "max gap " + sci(gap) + ", zero eigenvalues " + std::to_string(zeros) + ", off-grading " +
                  sci(ss.off_grading_max)};
}

Outcome selection_rules() {
  constexpr double tol = 1e-10;
  std::vector<double> times;
  for (int i = 0; i <= 200; ++i) times.push_back(50.0 * i);
  auto run = [&](SecularMode mode, double& c0, double& c1, double& c2, double& c0_inf) {
    const auto model = assemble_global_two_spin(testing::two_spin_reference(mode));
    const auto dec = block_decompose(model.liouvillian);
    const auto traj = evolve(model.liouvillian, dec, basis_projector(model.basis, 3), times);
    c0 = c1 = c2 = 0.0;
    for (const auto& r : two_spin_observables(traj)) {
      c0 = std::max(c0, std::abs(r.C0));
      c1 = std::max(c1, std::abs(r.C1));
      c2 = std::max(c2, std::abs(r.C2));
    }
    const auto ss = steady_state(model.liouvillian, dec);
    c0_inf = ss.rho_ss ? 2.0 * std::abs(ss.rho_ss->matrix()(1, 2).real()) : 0.0;
  };
  double p0, p1, p2, pinf, f0, f1, f2, finf;
  run(SecularMode::partial, p0, p1, p2, pinf);
  run(SecularMode::full_secular, f0, f1, f2, finf);
  const bool ok = p1 < tol && p2 < tol && pinf > 10.0 * tol && f0 < tol && f1 < tol && f2 < tol;
  return {ok, "partial: max|C1| " + sci(p1) + ", max|C2| " + sci(p2) + ", |C0(inf)| " + sci(pinf) +
                  "; full secular: max|C0| " + sci(f0)};
}

Outcome local_control() {
  const Liouvillian L = assemble_local_two_spin(testing::two_spin_reference());
  const auto dec = block_decompose(L);
  const double up = std::max(offblock_norm_between(L, dec, 0, 2), offblock_norm_between(L, dec, 2, 0));
  const double down = std::max(offblock_norm_between(L, dec, 0, -2), offblock_norm_between(L, dec, -2, 0));
  return {up > 1e-6 && down > 1e-6, "leak 0<->2 " + sci(up) + ", 0<->-2 " + sci(down)};
}

Outcome gaussian_structure() {
  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) worst = std::max(worst, testing::two_boson_placement_error(testing::random_gaussian_tables(rng, 2)));

  const BathSpec bath{0.05, 0.5, 10.0};
  const PsaPolicy policy = PsaPolicy::from_coupling(0.05);
  Matrix g(1, 2);
  g << 1.0, 1.0;
  const auto sys = build_moment_eom(coefficients_from_linear_coupling({1.0, 0.98}, g, bath_coefficients({bath}, {{0, 1.0}}), policy));
  const auto ss = gaussian_steady(sys);
  if (!ss.x) return {false, "steady solve failed"};
  bool exact_zero = true;
  for (int d : {2, -2})
    for (auto i : sys.indices_of(d)) exact_zero = exact_zero && (*ss.x)(static_cast<Eigen::Index>(i)) == 0.0;
  const double coherence =
      std::abs((*ss.x)(static_cast<Eigen::Index>(*sys.index_of({MomentLabel::Kind::create_annihilate, 0, 1}))));
  return {worst < 1e-12 && exact_zero && coherence > 0.0,
          "placement error " + sci(worst) + ", delta!=0 exactly zero: " + (exact_zero ? "yes" : "no") +
              ", |<a1^dag a2>_ss| " + sci(coherence)};
}

Outcome cross_formalism() {
  const auto r = testing::cross_formalism_check();
  return {r.validated == r.total && r.worst < 1e-6,
          "max moment gap " + sci(r.worst) + " over t in [0, " + std::to_string(static_cast<int>(r.window_end)) + "] (" +
              std::to_string(r.validated) + "/" + std::to_string(r.total) + " samples)"};
}

Outcome squeezed() {
  const auto basis = build_basis(1, Statistics::bosonic, 6);
  const Liouvillian L = squeezed_bath_liouvillian(basis, 1.0, 0.05, 0.2, Complex(0.3, 0.1));
  const double n = commutator_norm(number_superoperator(*basis), L.matrix);
  const double p = commutator_norm(parity_superoperator(*basis), L.matrix);
  return {n > 1e-3 && p < 1e-12, "N-norm " + sci(n) + ", P-norm " + sci(p)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"diagonalization regression", diagonalization},
      {"block census", census},
      {"symmetry suite", symmetry_suite},
      {"conjugate-block identity", conjugate_blocks},
      {"steady-state oracle equivalence", steady_oracle},
      {"selection rules along the trajectory", selection_rules},
      {"local master equation control", local_control},
      {"gaussian structural regression", gaussian_structure},
      {"cross-formalism oracle", cross_formalism},
      {"squeezed-bath discriminator", squeezed},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(), secs);
  }
  return failures == 0 ? 0 : 1;
}
