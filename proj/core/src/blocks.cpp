#include "liouville/blocks.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "liouville/errors.hpp"
#include "liouville/parallel.hpp"

namespace liouville {

Superoperator DiagonalSuperoperator::dense() const {
  return diagonal.cast<Complex>().asDiagonal();
}

DiagonalSuperoperator number_superoperator(const FockBasis& basis) {
  const std::size_t n = basis.size();
  DiagonalSuperoperator out{Eigen::VectorXd(static_cast<Eigen::Index>(n * n))};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      out.diagonal(static_cast<Eigen::Index>(j * n + k)) = basis.excitations(j) - basis.excitations(k);
  return out;
}

DiagonalSuperoperator parity_superoperator(const FockBasis& basis) {
  DiagonalSuperoperator out = number_superoperator(basis);
  for (Eigen::Index i = 0; i < out.diagonal.size(); ++i) {
    out.diagonal(i) = (static_cast<long>(std::lround(out.diagonal(i))) % 2 == 0) ? 1.0 : -1.0;
  }
  return out;
}

double commutator_norm(const Superoperator& S, const Superoperator& L) {
  if (S.rows() != L.rows() || S.cols() != L.cols() || S.rows() != S.cols()) {
    throw DimensionError("commutator_norm: dimension mismatch");
  }
  return max_abs(S * L - L * S);
}

double commutator_norm(const DiagonalSuperoperator& S, const Superoperator& L) {
  if (S.diagonal.size() != L.rows() || L.rows() != L.cols()) {
    throw DimensionError("commutator_norm: dimension mismatch");
  }
  double worst = 0.0;
  for (Eigen::Index j = 0; j < L.cols(); ++j)
    for (Eigen::Index i = 0; i < L.rows(); ++i)
      worst = std::max(worst, std::abs((S.diagonal(i) - S.diagonal(j)) * L(i, j)));
  return worst;
}

std::vector<int> BlockDecomposition::canonical_order() const {
  std::vector<int> out;
  int reach = 0;
  for (int d : d_values) reach = std::max(reach, std::abs(d));
  for (int m = 0; m <= reach; ++m) {
    for (int d : m == 0 ? std::vector<int>{0} : std::vector<int>{m, -m}) {
      if (index_sets.count(d)) out.push_back(d);
    }
  }
  return out;
}

std::vector<std::size_t> BlockDecomposition::block_sizes() const {
  std::vector<std::size_t> out;
  for (int d : canonical_order()) out.push_back(index_sets.at(d).size());
  return out;
}

BlockDecomposition block_decompose(const Liouvillian& L) {
  BlockDecomposition dec;
  dec.basis = L.basis;
  for (std::size_t i = 0; i < L.d_labels.size(); ++i) dec.index_sets[L.d_labels[i]].push_back(i);
  for (const auto& [d, idx] : dec.index_sets) {
    dec.d_values.push_back(d);
    const auto m = static_cast<Eigen::Index>(idx.size());
    Matrix block(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b)
        block(a, b) = L.matrix(static_cast<Eigen::Index>(idx[a]), static_cast<Eigen::Index>(idx[b]));
    dec.blocks.emplace(d, std::move(block));
  }
  double worst = 0.0;
  for (Eigen::Index j = 0; j < L.matrix.cols(); ++j) {
    const int dj = L.d_labels[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < L.matrix.rows(); ++i) {
      if (L.d_labels[static_cast<std::size_t>(i)] != dj) worst = std::max(worst, std::abs(L.matrix(i, j)));
    }
  }
  dec.offblock_norm = worst;
  return dec;
}

double offblock_norm_between(const Liouvillian& L, const BlockDecomposition& dec, int d1, int d2) {
  const auto a = dec.index_sets.find(d1);
  const auto b = dec.index_sets.find(d2);
  if (a == dec.index_sets.end() || b == dec.index_sets.end()) return 0.0;
  double worst = 0.0;
  for (std::size_t i : a->second) {
    for (std::size_t j : b->second) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      worst = std::max({worst, std::abs(L.matrix(ii, jj)), std::abs(L.matrix(jj, ii))});
    }
  }
  return worst;
}

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

}  // namespace

std::size_t block_dim_fermionic(int modes, int d) {
  if (modes < 1) throw DimensionError("block_dim_fermionic: modes must be >= 1");
  const int ad = std::abs(d);
  if (ad > modes) {
    throw DomainError("block_dim_fermionic: |d| = " + std::to_string(ad) + " exceeds M = " +
                      std::to_string(modes));
  }
  double total = 0.0;
  for (int k = ad; k <= modes; ++k) total += binomial(modes, k) * binomial(modes, k - ad);
  return static_cast<std::size_t>(total);
}

double verify_conjugate_blocks(const BlockDecomposition& dec) {
  const std::size_t n = dec.basis->size();
  double worst = 0.0;
  for (const auto& [d, idx] : dec.index_sets) {
    if (d < 0) continue;
    const auto mirror = dec.index_sets.find(-d);
    if (mirror == dec.index_sets.end()) continue;
    const auto& midx = mirror->second;
    // position in the −d block of the swapped label (k, j)
    std::vector<Eigen::Index> swapped(idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a) {
      const std::size_t j = idx[a] / n;
      const std::size_t k = idx[a] % n;
      const auto it = std::lower_bound(midx.begin(), midx.end(), k * n + j);
      swapped[a] = static_cast<Eigen::Index>(it - midx.begin());
    }
    const Matrix& Ld = dec.blocks.at(d);
    const Matrix& Lm = dec.blocks.at(-d);
    for (Eigen::Index a = 0; a < Ld.rows(); ++a)
      for (Eigen::Index b = 0; b < Ld.cols(); ++b)
        worst = std::max(worst, std::abs(Ld(a, b) - std::conj(Lm(swapped[static_cast<std::size_t>(a)],
                                                                 swapped[static_cast<std::size_t>(b)]))));
  }
  return worst;
}

std::map<int, Vector> block_spectrum(const BlockDecomposition& dec) {
  std::vector<Vector> values(dec.d_values.size());
  parallel_for(dec.d_values.size(), [&](std::size_t i) {
    Eigen::ComplexEigenSolver<Matrix> es(dec.blocks.at(dec.d_values[i]), false);
    if (es.info() != Eigen::Success) throw NumericalError("block eigensolver did not converge");
    values[i] = es.eigenvalues();
  });
  std::map<int, Vector> out;
  for (std::size_t i = 0; i < values.size(); ++i) out.emplace(dec.d_values[i], std::move(values[i]));
  return out;
}

double min_eigenvalue(const Operator& rho) {
  const Matrix h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

SteadyStateReport steady_state(const Liouvillian& L, const BlockDecomposition& dec) {
  SteadyStateReport r;
  r.zero_tolerance = 1e-9 * std::max(1.0, max_abs(L.matrix));

  const auto spectrum = block_spectrum(dec);
  for (const auto& [d, vals] : spectrum) {
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      if (std::abs(vals(i)) < r.zero_tolerance) ++count;
    r.zero_modes_per_block[d] = count;
    r.zero_modes += count;
  }
  r.unique = r.zero_modes == 1 && r.zero_modes_per_block[0] == 1;
  if (r.zero_modes == 0) r.warnings.push_back("no zero eigenvalue found within tolerance");
  if (r.zero_modes > 1) {
    r.warnings.push_back("degenerate steady state: " + std::to_string(r.zero_modes) + " zero modes");
  }

  const auto it0 = dec.blocks.find(0);
  if (it0 == dec.blocks.end()) throw NumericalError("steady_state: decomposition has no d = 0 block");
  const Matrix& L0 = it0->second;
  const auto& idx0 = dec.index_sets.at(0);
  Eigen::BDCSVD<Matrix> svd(L0, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Matrix& V = svd.matrixV();

  const BasisPtr& basis = dec.basis;
  const std::size_t n = basis->size();
  const Eigen::Index last = sv.size() - 1;
  // candidates: the smallest singular vector and any others inside the null tolerance
  std::optional<Operator> best;
  double best_trace = 0.0;
  for (Eigen::Index c = last; c >= 0; --c) {
    if (c != last && sv(c) >= r.zero_tolerance) break;
    Vector full = Vector::Zero(static_cast<Eigen::Index>(n * n));
    for (std::size_t a = 0; a < idx0.size(); ++a) full(static_cast<Eigen::Index>(idx0[a])) = V(static_cast<Eigen::Index>(a), c);
    const Operator raw = devectorize(basis, full);
    const Complex tr = raw.matrix().trace();
    if (std::abs(tr) > best_trace) {
      best_trace = std::abs(tr);
      Matrix h = raw.matrix() / tr;
      h = 0.5 * (h + h.adjoint()).eval();
      h /= h.trace();
      best.emplace(basis, std::move(h));
    }
  }
  if (!best || best_trace < 1e-12) {
    r.warnings.push_back("null vector of the d = 0 block has vanishing trace");
    r.unique = false;
    return r;
  }
  r.residual = max_abs(L.matrix * vectorize(*best).vector);
  r.min_eigenvalue = min_eigenvalue(*best);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      if (basis->excitations(j) != basis->excitations(k))
        r.off_grading_max = std::max(
            r.off_grading_max, std::abs(best->matrix()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k))));
  r.rho_ss = std::move(best);
  return r;
}

Trajectory evolve(const Liouvillian& L, const BlockDecomposition& dec, const Operator& rho0,
                  const std::vector<double>& times, const EvolveOptions& options) {
  require_same_basis(*L.basis, rho0.basis());
  if (std::abs(rho0.matrix().trace() - Complex(1.0)) > 1e-10) {
    throw DomainError("evolve: initial state must have unit trace");
  }
  const BasisPtr& basis = L.basis;
  const Vector x0 = vectorize(rho0).vector;
  const std::size_t nt = times.size();
  std::vector<Vector> out(nt, Vector::Zero(x0.size()));

  // each task owns one sector and writes only its own indices
  parallel_for(dec.d_values.size(), [&](std::size_t b) {
    const int d = dec.d_values[b];
    const auto& idx = dec.index_sets.at(d);
    const Matrix& Ld = dec.blocks.at(d);
    Vector xd(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t a = 0; a < idx.size(); ++a) xd(static_cast<Eigen::Index>(a)) = x0(static_cast<Eigen::Index>(idx[a]));
    if (xd.cwiseAbs().maxCoeff() == 0.0) return;
    for (std::size_t t = 0; t < nt; ++t) {
      const Matrix prop = (Ld * times[t]).exp();
      const Vector y = prop * xd;
      for (std::size_t a = 0; a < idx.size(); ++a) out[t](static_cast<Eigen::Index>(idx[a])) = y(static_cast<Eigen::Index>(a));
    }
  });

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(nt);
  for (auto& v : out) traj.states.push_back(devectorize(basis, v));

  if (options.cross_check && L.dimension() <= options.cross_check_limit) {
    double worst = 0.0;
    for (std::size_t t = 0; t < nt; ++t) {
      const Matrix prop = (L.matrix * times[t]).exp();
      worst = std::max(worst, max_abs(prop * x0 - out[t]));
    }
    traj.cross_check_deviation = worst;
  }
  return traj;
}

std::vector<TwoSpinObservables> two_spin_observables(const Trajectory& traj) {
  std::vector<TwoSpinObservables> rows;
  rows.reserve(traj.states.size());
  for (std::size_t i = 0; i < traj.states.size(); ++i) {
    const Operator& rho = traj.states[i];
    if (rho.basis().statistics() != Statistics::fermionic || rho.basis().mode_count() != 2) {
      throw BasisError("two_spin_observables: need a two-mode fermionic basis");
    }
    const Matrix& m = rho.matrix();
    rows.push_back({traj.times[i], m(3, 3).real(), m(0, 0).real(), 2.0 * m(1, 2).real(),
                    2.0 * m(3, 1).real() + 2.0 * m(2, 0).real(), 2.0 * m(3, 0).real()});
  }
  return rows;
}

Operator basis_projector(const BasisPtr& basis, std::size_t index) {
  if (index >= basis->size()) throw IndexError("basis_projector: index out of range");
  Operator p = Operator::zero(basis);
  Matrix m = p.matrix();
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return {basis, std::move(m)};
}

}  // namespace liouville
