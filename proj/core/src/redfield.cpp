#include "liouville/redfield.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>

#include "liouville/errors.hpp"

namespace liouville {

void BathSpec::validate() const {
  if (!(mu > 0.0)) throw DomainError("bath: mu must be > 0");
  if (!(temperature >= 0.0)) throw DomainError("bath: temperature must be >= 0");
  if (!(omega_c > 0.0)) throw DomainError("bath: omega_c must be > 0");
}

double thermal_occupation(double omega, double temperature) {
  if (temperature <= 0.0) return 0.0;
  return 1.0 / std::expm1(omega / temperature);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ohmic(double omega, double omega_c) { return omega * std::exp(-omega / omega_c); }

double decay_rate(const BathSpec& spec, double omega) {
  const double pref = kTwoPi * spec.mu * spec.mu;
  if (omega == 0.0) return pref * spec.temperature;
  const double w = std::abs(omega);
  const double n = thermal_occupation(w, spec.temperature);
  return pref * ohmic(w, spec.omega_c) * (omega > 0.0 ? n + 1.0 : n);
}

double lamb_shift(const BathSpec& spec, double omega) {
  struct Ctx {
    const BathSpec* spec;
  } ctx{&spec};
  gsl_function f;
  f.function = [](double nu, void* p) { return decay_rate(*static_cast<Ctx*>(p)->spec, nu); };
  f.params = &ctx;

  const double reach = std::abs(omega) + 60.0 * std::max(spec.omega_c, spec.temperature);
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(2000), gsl_integration_workspace_free);
  double result = 0.0;
  double abserr = 0.0;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  const int status =
      gsl_integration_qawc(&f, -reach, reach, omega, 1e-13, 1e-9, 2000, ws.get(), &result, &abserr);
  gsl_set_error_handler(old);
  if (status != GSL_SUCCESS && status != GSL_EROUND) {
    throw NumericalError(std::string("lamb shift quadrature failed: ") + gsl_strerror(status));
  }
  // qawc returns P∫ f(ν)/(ν−ω) dν
  return -result / kTwoPi;
}

}  // namespace

BathRate bath_rate(const BathSpec& spec, double omega) {
  BathRate r;
  r.gamma = decay_rate(spec, omega);
  if (spec.lamb_shift == LambShiftMode::numeric) r.shift = lamb_shift(spec, omega);
  return r;
}

namespace {

struct Eigenspace {
  double energy;
  Matrix projector;
};

std::vector<Eigenspace> eigenspaces(const Operator& H, double freq_tol) {
  const FockBasis& basis = H.basis();
  const auto n = static_cast<Eigen::Index>(basis.size());
  const Operator N = number_operator(H.basis_ptr());
  const bool conserves = max_abs(commutator(H, N).matrix()) < 1e-12 * std::max(1.0, max_abs(H.matrix()));

  std::vector<std::vector<Eigen::Index>> sectors;
  if (conserves) {
    int top = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) top = std::max(top, basis.excitations(i));
    sectors.resize(static_cast<std::size_t>(top) + 1);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      sectors[static_cast<std::size_t>(basis.excitations(i))].push_back(static_cast<Eigen::Index>(i));
    }
  } else {
    sectors.emplace_back();
    for (Eigen::Index i = 0; i < n; ++i) sectors.back().push_back(i);
  }

  std::vector<Eigenspace> out;
  for (const auto& idx : sectors) {
    if (idx.empty()) continue;
    const auto m = static_cast<Eigen::Index>(idx.size());
    Matrix sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
      for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = H.matrix()(idx[a], idx[b]);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sub);
    const auto& vals = es.eigenvalues();
    const auto& vecs = es.eigenvectors();
    Eigen::Index start = 0;
    while (start < m) {
      Eigen::Index stop = start + 1;
      while (stop < m && vals(stop) - vals(stop - 1) <= freq_tol) ++stop;
      Matrix v = Matrix::Zero(n, stop - start);
      for (Eigen::Index a = 0; a < m; ++a) v.row(idx[a]) = vecs.block(a, start, 1, stop - start);
      out.push_back({vals.segment(start, stop - start).mean(), v * v.adjoint()});
      start = stop;
    }
  }
  return out;
}

}  // namespace

JumpChannel jump_decompose(const Operator& H, const Operator& A, double freq_tol, std::string name) {
  require_same_basis(H.basis(), A.basis());
  if (!H.is_hermitian(1e-10 * std::max(1.0, max_abs(H.matrix())))) {
    throw DomainError("jump_decompose: Hamiltonian is not Hermitian");
  }
  if (freq_tol < 0.0) throw DomainError("jump_decompose: freq_tol must be >= 0");

  const auto spaces = eigenspaces(H, freq_tol);
  const double cutoff = 1e-14 * std::max(1.0, max_abs(A.matrix()));

  struct Piece {
    double gap;
    Matrix op;
  };
  std::vector<Piece> pieces;
  for (const auto& in : spaces) {
    for (const auto& outsp : spaces) {
      Matrix piece = outsp.projector * A.matrix() * in.projector;
      if (max_abs(piece) <= cutoff) continue;
      pieces.push_back({in.energy - outsp.energy, std::move(piece)});
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) { return a.gap < b.gap; });

  JumpChannel channel{std::move(name), {}};
  std::size_t start = 0;
  while (start < pieces.size()) {
    std::size_t stop = start + 1;
    while (stop < pieces.size() && pieces[stop].gap - pieces[stop - 1].gap <= freq_tol) ++stop;
    Matrix sum = pieces[start].op;
    double mean = pieces[start].gap;
    for (std::size_t i = start + 1; i < stop; ++i) {
      sum += pieces[i].op;
      mean += pieces[i].gap;
    }
    mean /= static_cast<double>(stop - start);
    if (std::abs(mean) <= freq_tol) mean = 0.0;
    if (max_abs(sum) > cutoff) channel.components.push_back({mean, Operator(A.basis_ptr(), std::move(sum))});
    start = stop;
  }
  return channel;
}

PsaPolicy PsaPolicy::from_coupling(double mu, double chi, SecularMode mode) {
  if (!(mu > 0.0)) throw DomainError("PSA: coupling must be > 0");
  PsaPolicy p;
  p.tau_R = 1.0 / (mu * mu);
  p.chi = chi;
  p.mode = mode;
  p.validate();
  return p;
}

bool PsaPolicy::keeps(double omega, double omega_p) const {
  switch (mode) {
    case SecularMode::partial:
      return std::abs(omega - omega_p) <= threshold();
    case SecularMode::full_secular:
      return std::abs(omega - omega_p) <= freq_tol;
    case SecularMode::none:
      return true;
  }
  return true;
}

void PsaPolicy::validate() const {
  if (!(tau_R > 0.0)) throw DomainError("PSA: tau_R must be > 0");
  if (!(chi > 1.0)) throw DomainError("PSA: chi must be > 1");
  if (!(freq_tol >= 0.0)) throw DomainError("PSA: freq_tol must be >= 0");
}

std::vector<std::pair<double, double>> psa_pairs(std::span<const double> frequencies,
                                                 const PsaPolicy& policy) {
  std::vector<std::pair<double, double>> out;
  for (double w : frequencies)
    for (double wp : frequencies)
      if (policy.keeps(w, wp)) out.emplace_back(w, wp);
  return out;
}

const char* to_string(CrossRule rule) {
  switch (rule) {
    case CrossRule::arithmetic_mean:
      return "arithmetic_mean";
    case CrossRule::geometric_mean:
      return "geometric_mean";
  }
  return "unknown";
}

CoefficientFn bath_coefficients(std::vector<BathSpec> baths, std::vector<ChannelCoupling> channels,
                                CrossRule rule) {
  for (const auto& b : baths) b.validate();
  for (const auto& c : channels) {
    if (c.bath >= baths.size()) throw IndexError("channel refers to bath " + std::to_string(c.bath));
  }
  return [baths = std::move(baths), channels = std::move(channels), rule](
             std::size_t alpha, std::size_t beta, double omega, double omega_p) -> Coefficient {
    const ChannelCoupling& a = channels.at(alpha);
    const ChannelCoupling& b = channels.at(beta);
    if (a.bath != b.bath) return {};
    const BathSpec& bath = baths[a.bath];
    const double w = a.weight * b.weight;
    const BathRate r = bath_rate(bath, omega);
    const BathRate rp = omega == omega_p ? r : bath_rate(bath, omega_p);
    const double g = rule == CrossRule::arithmetic_mean ? 0.5 * (r.gamma + rp.gamma)
                                                        : std::sqrt(r.gamma * rp.gamma);
    return {Complex(w * g), Complex(w * 0.5 * (r.shift + rp.shift))};
  };
}

Liouvillian::Liouvillian(BasisPtr b, Superoperator m, Provenance p)
    : basis(std::move(b)), matrix(std::move(m)), provenance(std::move(p)) {
  if (!basis) throw BasisError("Liouvillian: null basis");
  const std::size_t n = basis->size();
  const auto n2 = static_cast<Eigen::Index>(n * n);
  if (matrix.rows() != n2 || matrix.cols() != n2) {
    throw DimensionError("Liouvillian: matrix must be " + std::to_string(n2) + " square");
  }
  d_labels.resize(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) d_labels[j * n + k] = basis->excitations(j) - basis->excitations(k);
}

Operator Liouvillian::apply(const Operator& rho) const {
  require_same_basis(*basis, rho.basis());
  return devectorize(basis, matrix * vectorize(rho).vector);
}

namespace {

Superoperator coherent_part(const Operator& H) { return Complex(0.0, -1.0) * commutator_super(H); }

Superoperator anticommutator_half(const Operator& K) {
  return 0.5 * (left_super(K) + right_super(K));
}

}  // namespace

Liouvillian assemble_liouvillian(const Operator& H, const JumpDecomposition& jumps,
                                 const CoefficientFn& coefficients, const PsaPolicy& policy,
                                 std::string rule_name) {
  if (jumps.empty()) throw DimensionError("assemble_liouvillian: no jump channels");
  if (!coefficients) throw DomainError("assemble_liouvillian: missing coefficient function");
  policy.validate();
  for (const auto& ch : jumps)
    for (const auto& c : ch.components) require_same_basis(H.basis(), c.op.basis());

  const BasisPtr& basis = H.basis_ptr();
  const auto n = static_cast<Eigen::Index>(basis->size());
  Superoperator jump = Superoperator::Zero(n * n, n * n);
  Operator K = Operator::zero(basis);
  Operator lamb = Operator::zero(basis);

  Provenance prov;
  prov.coefficient_rule = std::move(rule_name);
  prov.policy = policy;
  for (std::size_t alpha = 0; alpha < jumps.size(); ++alpha) {
    for (std::size_t beta = 0; beta < jumps.size(); ++beta) {
      for (const auto& ca : jumps[alpha].components) {
        for (const auto& cb : jumps[beta].components) {
          if (!policy.keeps(cb.frequency, ca.frequency)) {
            ++prov.dropped;
            continue;
          }
          const Coefficient c = coefficients(alpha, beta, cb.frequency, ca.frequency);
          if (c.gamma == 0.0 && c.shift == 0.0) continue;
          prov.kept.push_back({alpha, beta, cb.frequency, ca.frequency, c.gamma, c.shift});
          const Operator prod = ca.op.adjoint() * cb.op;
          if (c.gamma != 0.0) {
            jump += c.gamma * kron(cb.op.matrix(), ca.op.matrix().conjugate());
            K += c.gamma * prod;
          }
          if (c.shift != 0.0) lamb += c.shift * prod;
        }
      }
    }
  }
  Superoperator m = coherent_part(H + lamb) + jump - anticommutator_half(K);
  return {basis, std::move(m), std::move(prov)};
}

Liouvillian hamiltonian_liouvillian(const Operator& H) {
  Provenance prov;
  prov.coefficient_rule = "none";
  return {H.basis_ptr(), coherent_part(H), std::move(prov)};
}

Liouvillian gkls_liouvillian(const Operator& H, std::span<const LindbladTerm> terms) {
  const BasisPtr& basis = H.basis_ptr();
  Superoperator m = coherent_part(H);
  Operator K = Operator::zero(basis);
  for (const auto& t : terms) {
    require_same_basis(H.basis(), t.L.basis());
    require_same_basis(H.basis(), t.R.basis());
    m += t.rate * kron(t.L.matrix(), t.R.matrix().conjugate());
    K += t.rate * (t.R.adjoint() * t.L);
  }
  m -= anticommutator_half(K);
  Provenance prov;
  prov.coefficient_rule = "explicit";
  return {basis, std::move(m), std::move(prov)};
}

TwoSpinModel assemble_global_two_spin(const TwoSpinScenario& s) {
  TwoSpinDiagonalization d = diagonalize_two_spin(s.omega1, s.omega2, s.lambda);
  BasisPtr basis = build_basis(2, Statistics::fermionic);
  Operator H = two_spin_hamiltonian(d, basis);
  const SpinCouplings sc = spin_coupling_operators(d, basis);
  JumpDecomposition jumps;
  jumps.push_back(jump_decompose(H, sc.sigma1x, s.policy.freq_tol, "sigma1x"));
  jumps.push_back(jump_decompose(H, sc.sigma2x, s.policy.freq_tol, "sigma2x"));
  const CoefficientFn coeffs = bath_coefficients({s.bath1, s.bath2}, {{0, 1.0}, {1, 1.0}}, s.rule);
  Liouvillian L = assemble_liouvillian(H, jumps, coeffs, s.policy, to_string(s.rule));
  return {d, basis, std::move(H), std::move(jumps), std::move(L)};
}

Liouvillian assemble_local_two_spin(const TwoSpinScenario& s) {
  s.bath1.validate();
  s.bath2.validate();
  const TwoSpinDiagonalization d = diagonalize_two_spin(s.omega1, s.omega2, s.lambda);
  const BasisPtr basis = build_basis(2, Statistics::fermionic);
  const Matrix U = d.eigenbasis_map.cast<Complex>();
  auto to_f = [&](const Matrix& spin) { return Operator(basis, U * spin * U.transpose()); };

  Matrix lower = Matrix::Zero(2, 2);
  lower(0, 1) = 1.0;
  const Matrix id2 = Matrix::Identity(2, 2);
  const Operator s1m = to_f(kron(lower, id2));
  const Operator s2m = to_f(kron(id2, lower));
  Operator H = to_f(two_spin_hamiltonian_spin_basis(s.omega1, s.omega2, s.lambda).cast<Complex>());

  std::vector<LindbladTerm> terms;
  const std::pair<const Operator*, std::pair<const BathSpec*, double>> sites[] = {
      {&s1m, {&s.bath1, s.omega1}}, {&s2m, {&s.bath2, s.omega2}}};
  for (const auto& [op, bw] : sites) {
    const auto& [bath, w] = bw;
    const Operator raise = op->adjoint();
    const BathRate down = bath_rate(*bath, w);
    const BathRate up = bath_rate(*bath, -w);
    terms.push_back({*op, *op, Complex(down.gamma)});
    terms.push_back({raise, raise, Complex(up.gamma)});
    H += Complex(down.shift) * (raise * *op) + Complex(up.shift) * (*op * raise);
  }
  Liouvillian L = gkls_liouvillian(H, terms);
  L.provenance.coefficient_rule = "local";
  return L;
}

Liouvillian squeezed_bath_liouvillian(const BasisPtr& basis, double omega, double gamma,
                                      double n_thermal, Complex squeezing) {
  if (basis->mode_count() != 1 || basis->statistics() != Statistics::bosonic) {
    throw BasisError("squeezed bath: need a single bosonic mode");
  }
  const Operator a = annihilation(basis, 0);
  const Operator ad = a.adjoint();
  const Operator H = Complex(omega) * (ad * a);
  const LindbladTerm terms[] = {
      {a, a, Complex(gamma * (n_thermal + 1.0))},
      {ad, ad, Complex(gamma * n_thermal)},
      {ad, a, -gamma * squeezing},
      {a, ad, -gamma * std::conj(squeezing)},
  };
  Liouvillian L = gkls_liouvillian(H, terms);
  L.provenance.coefficient_rule = "squeezed";
  return L;
}

std::optional<int> grading_of(const Operator& A, double tol) {
  const double scale = max_abs(A.matrix());
  if (scale == 0.0) return std::nullopt;
  const FockBasis& basis = A.basis();
  std::optional<int> delta;
  for (Eigen::Index j = 0; j < A.matrix().rows(); ++j) {
    for (Eigen::Index k = 0; k < A.matrix().cols(); ++k) {
      if (std::abs(A.matrix()(j, k)) <= tol * scale) continue;
      const int dj = basis.excitations(static_cast<std::size_t>(j)) -
                     basis.excitations(static_cast<std::size_t>(k));
      if (delta && *delta != dj) return std::nullopt;
      delta = dj;
    }
  }
  return delta;
}

ConditionReport check_conditions(std::span<const double> mode_energies, const JumpDecomposition& jumps,
                                 const PsaPolicy& policy, const CoefficientFn& coefficients) {
  ConditionReport r;
  std::vector<std::vector<std::optional<int>>> grades(jumps.size());
  for (std::size_t a = 0; a < jumps.size(); ++a) {
    for (const auto& c : jumps[a].components) {
      const auto g = grading_of(c.op);
      grades[a].push_back(g);
      if (!g) {
        r.all_homogeneous = false;
        r.condition_one = false;
        r.notes.push_back(jumps[a].name + ": component at " + std::to_string(c.frequency) +
                          " mixes excitation numbers");
      } else if (std::abs(*g) > 1) {
        r.condition_one = false;
        r.notes.push_back(jumps[a].name + ": component at " + std::to_string(c.frequency) +
                          " changes " + std::to_string(*g) + " excitations");
      }
    }
  }

  for (std::size_t alpha = 0; alpha < jumps.size(); ++alpha) {
    for (std::size_t beta = 0; beta < jumps.size(); ++beta) {
      const auto& ca = jumps[alpha].components;
      const auto& cb = jumps[beta].components;
      for (std::size_t i = 0; i < ca.size(); ++i) {
        for (std::size_t j = 0; j < cb.size(); ++j) {
          if (!policy.keeps(cb[j].frequency, ca[i].frequency)) continue;
          if (coefficients) {
            const Coefficient c = coefficients(alpha, beta, cb[j].frequency, ca[i].frequency);
            if (c.gamma == 0.0 && c.shift == 0.0) continue;
          }
          const auto& ga = grades[alpha][i];
          const auto& gb = grades[beta][j];
          if (!ga || !gb || *ga != *gb) {
            if (r.condition_two) {
              r.notes.push_back("kept pair (" + std::to_string(cb[j].frequency) + ", " +
                                std::to_string(ca[i].frequency) + ") joins different gradings");
            }
            r.condition_two = false;
          }
        }
      }
    }
  }

  const double resolution =
      policy.mode == SecularMode::partial ? policy.threshold() : policy.freq_tol;
  for (double e : mode_energies) {
    if (policy.mode == SecularMode::none || !(std::abs(e) > resolution)) r.energies_resolved = false;
  }
  r.symmetry_predicted = r.condition_two;
  return r;
}

}  // namespace liouville
