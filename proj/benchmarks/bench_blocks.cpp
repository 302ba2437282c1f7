// Block-wise against full-generator steady states and propagation.
#include <benchmark/benchmark.h>

#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

#include "liouville/blocks.hpp"
#include "liouville/quadratic.hpp"
#include "liouville/redfield.hpp"

using namespace liouville;

namespace {

// linear plus dephasing couplings on a spin chain of M sites, M ≤ 5
Liouvillian chain(int sites) {
  const auto basis = build_basis(sites, Statistics::fermionic);
  std::vector<double> omegas, couplings;
  for (int k = 0; k < sites; ++k) omegas.push_back(1.0 + 0.15 * k);
  for (int k = 0; k + 1 < sites; ++k) couplings.push_back(0.02);
  const Operator H = jordan_wigner_chain({sites, omegas, couplings}, basis);
  JumpDecomposition jumps{jump_decompose(H, jw_sigma_x(basis, 0), 1e-9, "first"),
                          jump_decompose(H, jw_sigma_x(basis, sites - 1), 1e-9, "last")};
  const BathSpec hot{0.03, 0.5, 10.0}, cold{0.03, 0.1, 10.0};
  return assemble_liouvillian(H, jumps, bath_coefficients({hot, cold}, {{0, 1.0}, {1, 1.0}}),
                              PsaPolicy::from_coupling(0.03));
}

Liouvillian bosons(int n_max) {
  const auto basis = build_basis(2, Statistics::bosonic, n_max);
  const Operator H = Complex(1.0) * mode_number(basis, 0) + Complex(0.98) * mode_number(basis, 1);
  Operator A = Operator::zero(basis);
  for (int k = 0; k < 2; ++k) A += annihilation(basis, k) + creation(basis, k);
  return assemble_liouvillian(H, {jump_decompose(H, A)}, bath_coefficients({{0.05, 0.3, 10.0}}, {{0, 1.0}}),
                              PsaPolicy::from_coupling(0.05));
}

Liouvillian scenario(int id) { return id < 10 ? chain(id) : bosons(id - 10); }

void label(benchmark::State& state, const Liouvillian& L) {
  state.counters["liouville_dim"] = static_cast<double>(L.dimension());
}

void BM_SteadyBlocks(benchmark::State& state) {
  const Liouvillian L = scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    const auto dec = block_decompose(L);
    benchmark::DoNotOptimize(steady_state(L, dec));
  }
  label(state, L);
}

void BM_SteadyFull(benchmark::State& state) {
  const Liouvillian L = scenario(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    Eigen::BDCSVD<Matrix> svd(L.matrix, Eigen::ComputeFullV);
    benchmark::DoNotOptimize(svd.matrixV().col(svd.matrixV().cols() - 1).eval());
  }
  label(state, L);
}

void BM_EvolveBlocks(benchmark::State& state) {
  const Liouvillian L = scenario(static_cast<int>(state.range(0)));
  const Operator rho0 = basis_projector(L.basis, 0);
  const std::vector<double> times{10.0, 100.0, 1000.0};
  for (auto _ : state) {
    const auto dec = block_decompose(L);
    benchmark::DoNotOptimize(evolve(L, dec, rho0, times, {false}));
  }
  label(state, L);
}

void BM_EvolveFull(benchmark::State& state) {
  const Liouvillian L = scenario(static_cast<int>(state.range(0)));
  const Vector x0 = vectorize(basis_projector(L.basis, 0)).vector;
  const std::vector<double> times{10.0, 100.0, 1000.0};
  for (auto _ : state) {
    for (double t : times) benchmark::DoNotOptimize(((L.matrix * t).exp() * x0).eval());
  }
  label(state, L);
}

// chains of 2..4 sites and two bosonic modes truncated at 2 and 3
#define LIOUVILLE_SCENARIOS ->Arg(2)->Arg(3)->Arg(4)->Arg(12)->Arg(13)->Unit(benchmark::kMillisecond)

BENCHMARK(BM_SteadyBlocks) LIOUVILLE_SCENARIOS;
BENCHMARK(BM_SteadyFull) LIOUVILLE_SCENARIOS;
BENCHMARK(BM_EvolveBlocks) LIOUVILLE_SCENARIOS;
BENCHMARK(BM_EvolveFull) LIOUVILLE_SCENARIOS;

}  // namespace

BENCHMARK_MAIN();
