#include "liouville/gaussian.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <string>

#include "boson_algebra.hpp"
#include "liouville/errors.hpp"

namespace liouville {

using detail::Monomial;
using detail::Polynomial;

int MomentLabel::delta() const {
  switch (kind) {
    case Kind::create_create:
      return 2;
    case Kind::create_annihilate:
      return 0;
    case Kind::annihilate_annihilate:
      return -2;
  }
  return 0;
}

std::string MomentLabel::name() const {
  const std::string a = std::to_string(i + 1);
  const std::string b = std::to_string(j + 1);
  switch (kind) {
    case Kind::create_create:
      return "a" + a + "^dag a" + b + "^dag";
    case Kind::create_annihilate:
      return "a" + a + "^dag a" + b;
    case Kind::annihilate_annihilate:
      return "a" + a + " a" + b;
  }
  return {};
}

std::vector<std::size_t> MomentSystem::indices_of(int delta) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < deltas.size(); ++i)
    if (deltas[i] == delta) out.push_back(i);
  return out;
}

std::optional<std::size_t> MomentSystem::index_of(const MomentLabel& label) const {
  const auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

MomentSystem moment_basis(int modes) {
  if (modes < 1) throw DimensionError("moment_basis: need at least one mode");
  using K = MomentLabel::Kind;
  MomentSystem sys;
  sys.modes = modes;
  for (int i = 0; i < modes; ++i)
    for (int j = i; j < modes; ++j) sys.labels.push_back({K::create_create, i, j});
  for (int i = 0; i < modes; ++i)
    for (int j = 0; j < modes; ++j) sys.labels.push_back({K::create_annihilate, i, j});
  for (int i = 0; i < modes; ++i)
    for (int j = i; j < modes; ++j) sys.labels.push_back({K::annihilate_annihilate, i, j});
  for (const auto& l : sys.labels) sys.deltas.push_back(l.delta());
  const auto n = static_cast<Eigen::Index>(sys.labels.size());
  sys.B = Matrix::Zero(n, n);
  sys.b = Vector::Zero(n);
  return sys;
}

void GaussianCoefficients::validate(double tol) const {
  const auto m = static_cast<Eigen::Index>(energies.size());
  if (m < 1) throw DimensionError("gaussian: need at least one mode");
  const std::pair<const Matrix*, const char*> tables[] = {
      {&lamb, "lamb"}, {&gamma_down, "gamma_down"}, {&gamma_up, "gamma_up"}};
  for (const auto& [t, name] : tables) {
    if (t->rows() != m || t->cols() != m) {
      throw DimensionError(std::string("gaussian: table ") + name + " must be " +
                           std::to_string(m) + "x" + std::to_string(m));
    }
    if (max_abs(*t - t->adjoint()) > tol) {
      throw DomainError(std::string("gaussian: table ") + name + " is not Hermitian");
    }
  }
}

namespace {

Polynomial monomial_of(int modes, const MomentLabel& l) {
  using K = MomentLabel::Kind;
  switch (l.kind) {
    case K::create_create:
      return Polynomial::create(modes, l.i) * Polynomial::create(modes, l.j);
    case K::create_annihilate:
      return Polynomial::create(modes, l.i) * Polynomial::annihilate(modes, l.j);
    case K::annihilate_annihilate:
      return Polynomial::annihilate(modes, l.i) * Polynomial::annihilate(modes, l.j);
  }
  return Polynomial(modes);
}

Polynomial adjoint_action(const GaussianCoefficients& c, const Polynomial& O) {
  const int M = c.modes();
  Polynomial H(M);
  for (int k = 0; k < M; ++k) {
    H += Complex(c.energies[static_cast<std::size_t>(k)]) *
         (Polynomial::create(M, k) * Polynomial::annihilate(M, k));
  }
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j)
      H += c.lamb(i, j) * (Polynomial::create(M, i) * Polynomial::annihilate(M, j));

  Polynomial out = kI * (H * O - O * H);
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const Polynomial ci = Polynomial::create(M, i), ai = Polynomial::annihilate(M, i);
      const Polynomial cj = Polynomial::create(M, j), aj = Polynomial::annihilate(M, j);
      if (c.gamma_down(i, j) != 0.0) {
        const Polynomial k = ci * aj;
        out += c.gamma_down(i, j) * (ci * O * aj - Complex(0.5) * (k * O + O * k));
      }
      if (c.gamma_up(i, j) != 0.0) {
        const Polynomial k = ai * cj;
        out += c.gamma_up(i, j) * (ai * O * cj - Complex(0.5) * (k * O + O * k));
      }
    }
  }
  return out;
}

}  // namespace

MomentSystem build_moment_eom(const GaussianCoefficients& coefficients) {
  coefficients.validate();
  const int M = coefficients.modes();
  MomentSystem sys = moment_basis(M);
  const auto um = static_cast<std::size_t>(M);

  for (std::size_t row = 0; row < sys.labels.size(); ++row) {
    const Polynomial d = adjoint_action(coefficients, monomial_of(M, sys.labels[row]));
    for (const auto& [m, c] : d.terms()) {
      int creations = 0, annihilations = 0;
      std::vector<int> cre, ann;
      for (std::size_t k = 0; k < um; ++k) {
        creations += m[k];
        annihilations += m[um + k];
        for (int r = 0; r < m[k]; ++r) cre.push_back(static_cast<int>(k));
        for (int r = 0; r < m[um + k]; ++r) ann.push_back(static_cast<int>(k));
      }
      const auto r = static_cast<Eigen::Index>(row);
      if (creations == 0 && annihilations == 0) {
        sys.b(r) += c;
        continue;
      }
      std::optional<MomentLabel> target;
      using K = MomentLabel::Kind;
      if (creations == 2 && annihilations == 0) target = MomentLabel{K::create_create, cre[0], cre[1]};
      if (creations == 1 && annihilations == 1) target = MomentLabel{K::create_annihilate, cre[0], ann[0]};
      if (creations == 0 && annihilations == 2) target = MomentLabel{K::annihilate_annihilate, ann[0], ann[1]};
      const auto col = target ? sys.index_of(*target) : std::nullopt;
      if (!col) {
        if (std::abs(c) > 1e-12) {
          throw NumericalError("build_moment_eom: generator leaves the quadratic moment space");
        }
        continue;
      }
      sys.B(r, static_cast<Eigen::Index>(*col)) += c;
    }
  }
  return sys;
}

namespace {

Matrix sub_matrix(const Matrix& m, const std::vector<std::size_t>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Matrix out(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      out(a, b) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(a)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(b)]));
  return out;
}

Vector sub_vector(const Vector& v, const std::vector<std::size_t>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a) out(static_cast<Eigen::Index>(a)) = v(static_cast<Eigen::Index>(idx[a]));
  return out;
}

}  // namespace

GaussianSteadyState gaussian_steady(const MomentSystem& sys) {
  GaussianSteadyState out;
  Vector x = Vector::Zero(sys.b.size());
  const double scale = std::max(1.0, max_abs(sys.B));
  bool zero_block_ok = true;
  for (int delta : {2, 0, -2}) {
    const auto idx = sys.indices_of(delta);
    if (idx.empty()) continue;
    const Matrix Bd = sub_matrix(sys.B, idx);
    Eigen::ComplexEigenSolver<Matrix> es(Bd, false);
    bool singular = false;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (std::abs(es.eigenvalues()(i).real()) < 1e-12 * scale) singular = true;
    if (singular) {
      out.singular_blocks.push_back(delta);
      if (delta == 0) zero_block_ok = false;
      continue;
    }
    if (delta != 0) continue;
    const Vector xd = Bd.partialPivLu().solve(-sub_vector(sys.b, idx));
    for (std::size_t a = 0; a < idx.size(); ++a) x(static_cast<Eigen::Index>(idx[a])) = xd(static_cast<Eigen::Index>(a));
  }
  if (zero_block_ok) out.x = std::move(x);
  return out;
}

std::vector<Vector> evolve_covariance(const MomentSystem& sys, const Vector& x0,
                                      const std::vector<double>& times) {
  if (x0.size() != static_cast<Eigen::Index>(sys.labels.size())) {
    throw DimensionError("evolve_covariance: initial vector has " + std::to_string(x0.size()) +
                         " entries, system has " + std::to_string(sys.labels.size()));
  }
  std::vector<Vector> out(times.size(), Vector::Zero(x0.size()));
  for (int delta : {2, 0, -2}) {
    const auto idx = sys.indices_of(delta);
    if (idx.empty()) continue;
    const auto n = static_cast<Eigen::Index>(idx.size());
    Matrix aug = Matrix::Zero(n + 1, n + 1);
    aug.topLeftCorner(n, n) = sub_matrix(sys.B, idx);
    aug.topRightCorner(n, 1) = sub_vector(sys.b, idx);
    Vector start(n + 1);
    start.head(n) = sub_vector(x0, idx);
    start(n) = 1.0;
    for (std::size_t t = 0; t < times.size(); ++t) {
      const Vector y = (aug * times[t]).exp() * start;
      for (std::size_t a = 0; a < idx.size(); ++a) out[t](static_cast<Eigen::Index>(idx[a])) = y(static_cast<Eigen::Index>(a));
    }
  }
  return out;
}

GaussianCoefficients coefficients_from_linear_coupling(const std::vector<double>& energies,
                                                       const Matrix& couplings,
                                                       const CoefficientFn& coefficients,
                                                       const PsaPolicy& policy) {
  const auto M = static_cast<Eigen::Index>(energies.size());
  if (M < 1 || couplings.cols() != M) {
    throw DimensionError("linear coupling: coupling matrix must have one column per mode");
  }
  GaussianCoefficients out;
  out.energies = energies;
  out.lamb = Matrix::Zero(M, M);
  out.gamma_down = Matrix::Zero(M, M);
  out.gamma_up = Matrix::Zero(M, M);
  const auto channels = static_cast<std::size_t>(couplings.rows());
  for (Eigen::Index i = 0; i < M; ++i) {
    for (Eigen::Index j = 0; j < M; ++j) {
      const double Ei = energies[static_cast<std::size_t>(i)];
      const double Ej = energies[static_cast<std::size_t>(j)];
      const bool down = policy.keeps(Ej, Ei);
      const bool up = policy.keeps(-Ej, -Ei);
      for (std::size_t alpha = 0; alpha < channels; ++alpha) {
        for (std::size_t beta = 0; beta < channels; ++beta) {
          const Complex ga = couplings(static_cast<Eigen::Index>(alpha), i);
          const Complex gb = couplings(static_cast<Eigen::Index>(beta), j);
          if (down) {
            const Coefficient c = coefficients(alpha, beta, Ej, Ei);
            out.gamma_down(i, j) += c.gamma * gb * std::conj(ga);
            out.lamb(i, j) += c.shift * gb * std::conj(ga);
          }
          if (up) {
            const Coefficient c = coefficients(alpha, beta, -Ej, -Ei);
            out.gamma_up(i, j) += c.gamma * std::conj(gb) * ga;
            out.lamb(j, i) += c.shift * std::conj(gb) * ga;
          }
        }
      }
    }
  }
  return out;
}

Vector moments_of(const MomentSystem& sys, const Operator& rho) {
  if (rho.basis().statistics() != Statistics::bosonic || rho.basis().mode_count() != sys.modes) {
    throw BasisError("moments_of: state must live on a bosonic basis with matching modes");
  }
  const BasisPtr& basis = rho.basis_ptr();
  Vector out(static_cast<Eigen::Index>(sys.labels.size()));
  using K = MomentLabel::Kind;
  for (std::size_t r = 0; r < sys.labels.size(); ++r) {
    const auto& l = sys.labels[r];
    Operator op = Operator::zero(basis);
    switch (l.kind) {
      case K::create_create:
        op = creation(basis, l.i) * creation(basis, l.j);
        break;
      case K::create_annihilate:
        op = creation(basis, l.i) * annihilation(basis, l.j);
        break;
      case K::annihilate_annihilate:
        op = annihilation(basis, l.i) * annihilation(basis, l.j);
        break;
    }
    out(static_cast<Eigen::Index>(r)) = (rho.matrix() * op.matrix()).trace();
  }
  return out;
}

}  // namespace liouville
