#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/Eigenvalues>

#include "liouville/blocks.hpp"
#include "liouville/errors.hpp"
#include "liouville/random_instances.hpp"
#include "liouville_cli/commands.hpp"

namespace liouville::cli {

namespace {

using NamedOperators = std::map<std::string, Operator>;

// channels enter in bath order, then in the order listed under each bath
std::pair<JumpDecomposition, CoefficientFn> redfield_inputs(const ScenarioConfig& cfg, const Operator& H,
                                                            const NamedOperators& ops,
                                                            std::vector<std::string>* order = nullptr) {
  JumpDecomposition jumps;
  std::vector<BathSpec> specs;
  std::vector<ChannelCoupling> channels;
  for (std::size_t b = 0; b < cfg.baths.size(); ++b) {
    specs.push_back(cfg.baths[b].spec);
    for (const auto& c : cfg.baths[b].channels) {
      jumps.push_back(jump_decompose(H, ops.at(c.name), cfg.policy.freq_tol, c.name));
      channels.push_back({b, c.weight});
      if (order) order->push_back(c.name);
    }
  }
  return {std::move(jumps), bath_coefficients(std::move(specs), std::move(channels), cfg.rule)};
}

const JumpComponent* component_at(const JumpChannel& ch, double omega) {
  for (const auto& c : ch.components)
    if (c.frequency == omega) return &c;
  return nullptr;
}

bool parity_predicted(const Liouvillian& L, const JumpDecomposition& jumps) {
  for (const auto& k : L.provenance.kept) {
    if (k.gamma == 0.0 && k.shift == 0.0) continue;
    const JumpComponent* a = component_at(jumps[k.alpha], k.omega_p);
    const JumpComponent* b = component_at(jumps[k.beta], k.omega);
    if (!a || !b) return false;
    const auto ga = grading_of(a->op);
    const auto gb = grading_of(b->op);
    if (!ga || !gb || (*ga - *gb) % 2 != 0) return false;
  }
  return true;
}

Model generic_model(const ScenarioConfig& cfg, BasisPtr basis, Operator H, const NamedOperators& ops,
                    std::vector<double> mode_energies, std::string description,
                    std::vector<std::string>* order = nullptr) {
  auto [jumps, coeffs] = redfield_inputs(cfg, H, ops, order);
  Liouvillian L = assemble_liouvillian(H, jumps, coeffs, cfg.policy, to_string(cfg.rule));
  const ConditionReport report = check_conditions(mode_energies, jumps, cfg.policy, coeffs);
  const bool parity = parity_predicted(L, jumps);
  return Model{.basis = std::move(basis),
               .hamiltonian = std::move(H),
               .jumps = std::move(jumps),
               .coefficients = std::move(coeffs),
               .mode_energies = std::move(mode_energies),
               .liouvillian = std::move(L),
               .description = std::move(description),
               .has_conditions = true,
               .number_predicted = report.symmetry_predicted,
               .parity_predicted = parity};
}

Model two_spins_model(const ScenarioConfig& cfg, const TwoSpinsSystem& s) {
  const TwoSpinDiagonalization d = diagonalize_two_spin(s.omega1, s.omega2, s.lambda);
  BasisPtr basis = build_basis(2, Statistics::fermionic);
  Operator H = two_spin_hamiltonian(d, basis);
  const std::string base = "two spins, omega1=" + std::to_string(s.omega1) + " omega2=" +
                           std::to_string(s.omega2) + " lambda=" + std::to_string(s.lambda);
  if (s.local) {
    for (const auto& b : cfg.baths)
      if (b.channels.front().weight != 1.0)
        throw ConfigError("baths", "channel weights are not supported by the local equation");
    TwoSpinScenario sc{s.omega1, s.omega2, s.lambda, cfg.baths[0].spec, cfg.baths[1].spec, cfg.policy, cfg.rule};
    Liouvillian L = assemble_local_two_spin(sc);
    return Model{.basis = basis,
                 .hamiltonian = std::move(H),
                 .jumps = {},
                 .coefficients = {},
                 .mode_energies = {2.0 * d.E1, 2.0 * d.E2},
                 .liouvillian = std::move(L),
                 .description = base + ", local master equation",
                 .has_conditions = false,
                 .number_predicted = s.lambda == 0.0,
                 .parity_predicted = true,
                 .two_spin_columns = true,
                 .two_spin = d};
  }
  const SpinCouplings sc = spin_coupling_operators(d, basis);
  const NamedOperators ops{{"sigma1x", sc.sigma1x}, {"sigma2x", sc.sigma2x}, {"sigma1z", sc.sigma1z}, {"sigma2z", sc.sigma2z}};
  Model m = generic_model(cfg, basis, std::move(H), ops, {2.0 * d.E1, 2.0 * d.E2}, base + ", global master equation");
  m.two_spin_columns = true;
  m.two_spin = d;
  return m;
}

Model spin_chain_model(const ScenarioConfig& cfg, const SpinChainSystem& s) {
  const int M = static_cast<int>(s.omegas.size());
  BasisPtr basis = build_basis(M, Statistics::fermionic);
  Operator H = jordan_wigner_chain({M, s.omegas, s.couplings}, basis);
  NamedOperators ops;
  for (int k = 0; k < M; ++k) ops.emplace("sigma" + std::to_string(k + 1) + "x", jw_sigma_x(basis, k));
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(M, M);
  for (int k = 0; k < M; ++k) h(k, k) = s.omegas[static_cast<std::size_t>(k)] / 2.0;
  for (int k = 0; k + 1 < M; ++k) h(k, k + 1) = h(k + 1, k) = s.couplings[static_cast<std::size_t>(k)];
  const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues();
  return generic_model(cfg, basis, std::move(H), ops, std::vector<double>(e.data(), e.data() + e.size()),
                       "spin chain, " + std::to_string(M) + " sites mapped to free fermions");
}

Model boson_model(const ScenarioConfig& cfg, const BosonSystem& s) {
  const int M = static_cast<int>(s.energies.size());
  BasisPtr basis = build_basis(M, Statistics::bosonic, s.n_max);
  Operator H = Operator::zero(basis);
  for (int k = 0; k < M; ++k) H += Complex(s.energies[static_cast<std::size_t>(k)]) * mode_number(basis, k);
  NamedOperators ops;
  for (Eigen::Index a = 0; a < s.couplings.rows(); ++a) {
    Operator A = Operator::zero(basis);
    for (int k = 0; k < M; ++k) {
      const Complex g = s.couplings(a, k);
      A += g * annihilation(basis, k) + std::conj(g) * creation(basis, k);
    }
    ops.emplace("A" + std::to_string(a + 1), std::move(A));
  }
  std::vector<std::string> order;
  Model m = generic_model(cfg, basis, std::move(H), ops, s.energies,
                          std::to_string(M) + " bosonic modes truncated at n_max=" + std::to_string(s.n_max), &order);
  Matrix rows(static_cast<Eigen::Index>(order.size()), M);
  for (std::size_t r = 0; r < order.size(); ++r)
    rows.row(static_cast<Eigen::Index>(r)) = s.couplings.row(std::stoi(order[r].substr(1)) - 1);
  m.gaussian = coefficients_from_linear_coupling(s.energies, rows, m.coefficients, cfg.policy);
  return m;
}

Model custom_model(const ScenarioConfig& cfg, const CustomSystem& s) {
  BasisPtr basis = build_basis(s.modes, s.statistics, s.n_max);
  Operator H = Operator::hermitian(basis, s.hamiltonian);
  NamedOperators ops;
  for (const auto& [name, m] : s.couplings) ops.emplace(name, Operator(basis, m));
  return generic_model(cfg, basis, std::move(H), ops, {}, "custom system with " + std::to_string(s.modes) + " modes");
}

Model squeezed_model(const SqueezedSystem& s) {
  BasisPtr basis = build_basis(1, Statistics::bosonic, s.n_max);
  Operator H = Complex(s.omega) * mode_number(basis, 0);
  Liouvillian L = squeezed_bath_liouvillian(basis, s.omega, s.gamma, s.n_thermal, s.squeezing);
  return Model{.basis = basis,
               .hamiltonian = std::move(H),
               .jumps = {},
               .coefficients = {},
               .mode_energies = {s.omega},
               .liouvillian = std::move(L),
               .description = "single mode in a squeezed thermal bath, n_max=" + std::to_string(s.n_max),
               .has_conditions = false,
               .number_predicted = s.squeezing == 0.0,
               .parity_predicted = true};
}

Model random_model(const RandomGradedSystem& s) {
  GradedInstance inst = random_graded_instance(s.seed);
  const ConditionReport report = check_conditions({}, inst.jumps, inst.policy, inst.coefficients);
  const bool parity = parity_predicted(inst.liouvillian, inst.jumps);
  return Model{.basis = inst.basis,
               .hamiltonian = std::move(inst.hamiltonian),
               .jumps = std::move(inst.jumps),
               .coefficients = std::move(inst.coefficients),
               .mode_energies = {},
               .liouvillian = std::move(inst.liouvillian),
               .description = "random graded instance (seed " + std::to_string(s.seed) + "): " + inst.description,
               .has_conditions = true,
               .number_predicted = report.symmetry_predicted,
               .parity_predicted = parity};
}

}  // namespace

void apply_overrides(ScenarioConfig& cfg, const Options& options) {
  if (options.tolerance) {
    if (!(*options.tolerance > 0.0)) throw ConfigError("--tol", "must be positive");
    cfg.tolerance = *options.tolerance;
  }
  if (options.seed) {
    auto* r = std::get_if<RandomGradedSystem>(&cfg.system);
    if (!r) throw ConfigError("--seed", "only the random_graded system takes a seed");
    r->seed = *options.seed;
  }
}

Model build_model(const ScenarioConfig& cfg) {
  return std::visit(
      [&](const auto& s) -> Model {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoSpinsSystem>) return two_spins_model(cfg, s);
        if constexpr (std::is_same_v<T, SpinChainSystem>) return spin_chain_model(cfg, s);
        if constexpr (std::is_same_v<T, BosonSystem>) return boson_model(cfg, s);
        if constexpr (std::is_same_v<T, CustomSystem>) return custom_model(cfg, s);
        if constexpr (std::is_same_v<T, SqueezedSystem>) return squeezed_model(s);
        if constexpr (std::is_same_v<T, RandomGradedSystem>) return random_model(s);
      },
      cfg.system);
}

Operator initial_density(const ScenarioConfig& cfg, const Model& model) {
  const InitialState& s = *cfg.initial_state;
  const auto n = static_cast<Eigen::Index>(model.basis->size());
  switch (s.kind) {
    case InitialState::Kind::basis_state: {
      if (static_cast<int>(s.occupation.size()) != model.basis->mode_count())
        throw ConfigError("initial_state.basis_state",
                          "expected " + std::to_string(model.basis->mode_count()) + " occupation numbers");
      const auto idx = model.basis->index_of(s.occupation);
      if (!idx) throw ConfigError("initial_state.basis_state", "not a state of the truncated basis");
      return basis_projector(model.basis, *idx);
    }
    case InitialState::Kind::thermal: {
      const Eigen::SelfAdjointEigenSolver<Matrix> es(model.hamiltonian.matrix());
      const Eigen::VectorXd& e = es.eigenvalues();
      Eigen::VectorXd w(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const double gap = e(i) - e(0);
        w(i) = s.temperature > 0.0 ? std::exp(-gap / s.temperature) : (gap < 1e-9 ? 1.0 : 0.0);
      }
      w /= w.sum();
      const Matrix V = es.eigenvectors();
      return Operator(model.basis, V * w.cast<Complex>().asDiagonal() * V.adjoint());
    }
    case InitialState::Kind::matrix:
      if (s.matrix.rows() != n)
        throw ConfigError("initial_state", "density matrix must be " + std::to_string(n) + "x" + std::to_string(n));
      return Operator(model.basis, s.matrix);
  }
  throw ConfigError("initial_state", "unsupported initial state");
}

}  // namespace liouville::cli
