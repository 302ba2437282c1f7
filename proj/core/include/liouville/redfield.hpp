#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "liouville/fock.hpp"
#include "liouville/quadratic.hpp"

namespace liouville {

enum class SpectralForm { ohmic_exponential };
enum class LambShiftMode { off, numeric };

/// Thermal bosonic bath with spectral density J(ω) = ω e^(−ω/ω_c).
struct BathSpec {
  double mu = 0.0;
  double temperature = 0.0;
  double omega_c = 1.0;
  SpectralForm spectral_form = SpectralForm::ohmic_exponential;
  LambShiftMode lamb_shift = LambShiftMode::off;

  /// Throws DomainError unless μ > 0, T ≥ 0 and ω_c > 0.
  void validate() const;
};

struct BathRate {
  double gamma = 0.0;
  double shift = 0.0;
};

/// Bose-Einstein occupation, 0 at T = 0.
double thermal_occupation(double omega, double temperature);

/// γ(ω) = 2πμ²J(|ω|)·(N_th+1) for emission (ω > 0), 2πμ²J(|ω|)·N_th for
/// absorption (ω < 0), and the continuous limit 2πμ²T at ω = 0. The shift is
/// the principal value (1/2π) P∫ γ(ν)/(ω−ν) dν when lamb_shift is numeric.
BathRate bath_rate(const BathSpec& spec, double omega);

struct JumpComponent {
  double frequency = 0.0;
  Operator op;
};

/// Components Â(ω) of one coupling operator, sorted by frequency.
struct JumpChannel {
  std::string name;
  std::vector<JumpComponent> components;
};

using JumpDecomposition = std::vector<JumpChannel>;

/// Â(ω) = Σ_{ε_m−ε_n=ω} Π_n A Π_m over the eigenprojectors Π of H. Gaps
/// within freq_tol share one component; zero components are dropped. When H
/// conserves N̂ the eigenprojectors are taken inside number sectors.
/// Throws DomainError for non-Hermitian H.
JumpChannel jump_decompose(const Operator& H, const Operator& A, double freq_tol = 1e-9,
                           std::string name = {});

enum class SecularMode { partial, full_secular, none };

struct PsaPolicy {
  double tau_R = 1.0;
  double chi = 100.0;
  SecularMode mode = SecularMode::partial;
  double freq_tol = 1e-9;

  /// τ_R = μ⁻².
  static PsaPolicy from_coupling(double mu, double chi = 100.0,
                                 SecularMode mode = SecularMode::partial);
  double threshold() const { return chi / tau_R; }
  bool keeps(double omega, double omega_p) const;
  /// Throws DomainError unless τ_R > 0, chi > 1 and freq_tol ≥ 0.
  void validate() const;
};

/// Ordered pairs (ω, ω′) over `frequencies` kept by the policy.
std::vector<std::pair<double, double>> psa_pairs(std::span<const double> frequencies,
                                                 const PsaPolicy& policy);

struct Coefficient {
  Complex gamma{0.0, 0.0};
  Complex shift{0.0, 0.0};
};

/// γ_αβ(ω, ω′) and S_αβ(ω, ω′) for channel pair (α, β).
using CoefficientFn =
    std::function<Coefficient(std::size_t alpha, std::size_t beta, double omega, double omega_p)>;

enum class CrossRule { arithmetic_mean, geometric_mean };

const char* to_string(CrossRule rule);

/// Channel α couples to baths[bath] with amplitude `weight`.
struct ChannelCoupling {
  std::size_t bath = 0;
  double weight = 1.0;
};

/// γ_αβ(ω, ω′) = w_α w_β · rule(γ(ω), γ(ω′)) when α and β share a bath,
/// else 0. Shifts use the arithmetic mean.
CoefficientFn bath_coefficients(std::vector<BathSpec> baths, std::vector<ChannelCoupling> channels,
                                CrossRule rule = CrossRule::arithmetic_mean);

struct KeptPair {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  double omega = 0.0;
  double omega_p = 0.0;
  Complex gamma;
  Complex shift;
};

struct Provenance {
  std::string coefficient_rule;
  std::optional<PsaPolicy> policy;
  std::vector<KeptPair> kept;
  std::size_t dropped = 0;
};

/// Vectorized generator: d/dt|ρ⟩⟩ = matrix·|ρ⟩⟩.
struct Liouvillian {
  BasisPtr basis;
  Superoperator matrix;
  /// n(e_j) − n(e_k) for vectorized index j·N + k.
  std::vector<int> d_labels;
  Provenance provenance;

  Liouvillian(BasisPtr basis, Superoperator matrix, Provenance provenance = {});

  std::size_t dimension() const { return static_cast<std::size_t>(matrix.rows()); }
  Operator apply(const Operator& rho) const;
};

/// Bloch-Redfield generator under the secular policy:
/// −i[H+H_LS, ·] + Σ_kept γ_αβ(ω,ω′)(Â_β(ω)ρÂ_α†(ω′) − ½{Â_α†(ω′)Â_β(ω), ρ}).
/// Throws BasisError on mixed bases, DimensionError on an empty jump set.
Liouvillian assemble_liouvillian(const Operator& H, const JumpDecomposition& jumps,
                                 const CoefficientFn& coefficients, const PsaPolicy& policy,
                                 std::string rule_name = "custom");

Liouvillian hamiltonian_liouvillian(const Operator& H);

/// rate·(L ρ R† − ½{R†L, ρ}); R = L gives an ordinary dissipator.
struct LindbladTerm {
  Operator L;
  Operator R;
  Complex rate;
};

Liouvillian gkls_liouvillian(const Operator& H, std::span<const LindbladTerm> terms);

struct TwoSpinScenario {
  double omega1 = 1.0;
  double omega2 = 1.0;
  double lambda = 0.0;
  BathSpec bath1;
  BathSpec bath2;
  PsaPolicy policy;
  CrossRule rule = CrossRule::arithmetic_mean;
};

struct TwoSpinModel {
  TwoSpinDiagonalization diag;
  BasisPtr basis;
  Operator hamiltonian;
  JumpDecomposition jumps;
  Liouvillian liouvillian;
};

/// Global master equation: σ₁ˣ couples to bath1, σ₂ˣ to bath2, both written
/// in the fermionic eigenmodes.
TwoSpinModel assemble_global_two_spin(const TwoSpinScenario& scenario);

/// Local master equation from bare σ_i^∓ at ω_i, with λσ₁ˣσ₂ˣ kept in the
/// Hamiltonian, expressed in the fermionic eigenbasis.
Liouvillian assemble_local_two_spin(const TwoSpinScenario& scenario);

/// Single bosonic mode ω a†a in a squeezed thermal bath with occupation N and
/// squeezing M.
Liouvillian squeezed_bath_liouvillian(const BasisPtr& basis, double omega, double gamma,
                                      double n_thermal, Complex squeezing);

/// Excitation change δ with [N̂, A] = δA, or nullopt when A mixes gradings.
/// The zero operator has no grading.
std::optional<int> grading_of(const Operator& A, double tol = 1e-12);

struct ConditionReport {
  bool condition_one = true;
  bool condition_two = true;
  bool all_homogeneous = true;
  bool energies_resolved = true;
  bool symmetry_predicted = true;
  std::vector<std::string> notes;
};

/// Condition I: every component moves at most one excitation. Condition II,
/// in its relaxed form: every kept pair with a nonzero coefficient joins two
/// components of equal grading. `mode_energies` are checked against the PSA
/// threshold.
ConditionReport check_conditions(std::span<const double> mode_energies,
                                 const JumpDecomposition& jumps, const PsaPolicy& policy,
                                 const CoefficientFn& coefficients = {});

}  // namespace liouville
