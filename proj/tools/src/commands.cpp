#include "liouville_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>
#include <nlohmann/json.hpp>

#include "liouville/blocks.hpp"
#include "liouville/errors.hpp"
#include "liouville/version.hpp"

namespace liouville::cli {

using ojson = nlohmann::ordered_json;

namespace {

ojson cj(Complex z) { return ojson::array({z.real(), z.imag()}); }

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cj(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

ojson vector_json(const Vector& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cj(v(i)));
  return out;
}

const char* mode_name(SecularMode m) {
  switch (m) {
    case SecularMode::partial:
      return "partial";
    case SecularMode::full_secular:
      return "full_secular";
    case SecularMode::none:
      return "none";
  }
  return "unknown";
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

ojson provenance_json(const Liouvillian& L) {
  const Provenance& p = L.provenance;
  ojson out;
  out["coefficient_rule"] = p.coefficient_rule;
  if (p.policy) {
    out["psa"] = {{"mode", mode_name(p.policy->mode)},
                  {"chi", p.policy->chi},
                  {"tau_R", p.policy->tau_R},
                  {"threshold", p.policy->threshold()},
                  {"freq_tol", p.policy->freq_tol}};
  } else {
    out["psa"] = nullptr;
  }
  ojson kept = ojson::array();
  for (const auto& k : p.kept) {
    kept.push_back({{"alpha", k.alpha},
                    {"beta", k.beta},
                    {"omega", k.omega},
                    {"omega_p", k.omega_p},
                    {"gamma", cj(k.gamma)},
                    {"shift", cj(k.shift)}});
  }
  out["kept_pairs"] = std::move(kept);
  out["dropped_pairs"] = p.dropped;
  return out;
}

struct SymmetryResult {
  double number_norm = 0.0;
  double parity_norm = 0.0;
  double offblock = 0.0;
  std::optional<ConditionReport> conditions;
};

SymmetryResult symmetry_of(const Model& model, const BlockDecomposition& dec, const ScenarioConfig& cfg) {
  SymmetryResult r;
  r.number_norm = commutator_norm(number_superoperator(*model.basis), model.liouvillian.matrix);
  r.parity_norm = commutator_norm(parity_superoperator(*model.basis), model.liouvillian.matrix);
  r.offblock = dec.offblock_norm;
  if (model.has_conditions) {
    const PsaPolicy policy = model.liouvillian.provenance.policy.value_or(cfg.policy);
    r.conditions = check_conditions(model.mode_energies, model.jumps, policy, model.coefficients);
  }
  return r;
}

ojson conditions_json(const ConditionReport& c) {
  return {{"condition_one", c.condition_one},   {"condition_two", c.condition_two},
          {"all_homogeneous", c.all_homogeneous}, {"energies_resolved", c.energies_resolved},
          {"symmetry_predicted", c.symmetry_predicted}, {"notes", c.notes}};
}

std::string format_row(const std::vector<double>& values) {
  std::string line;
  char buf[40];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12e", values[i]);
    if (i) line += ',';
    line += buf;
  }
  return line + "\n";
}

std::string population_label(const Occupation& occ) {
  std::string s = "P";
  for (int n : occ) s += "_" + std::to_string(n);
  return s;
}

Trajectory full_evolution(const Liouvillian& L, const Operator& rho0, const std::vector<double>& times) {
  Trajectory t;
  t.times = times;
  const Vector x0 = vectorize(rho0).vector;
  for (double s : times) t.states.push_back(devectorize(L.basis, (L.matrix * s).exp() * x0));
  return t;
}

std::string trajectory_csv(const Model& model, const Trajectory& traj) {
  std::string csv;
  if (model.two_spin_columns) {
    csv = "t,P11,P00,C0,C1,C2\n";
    for (const auto& r : two_spin_observables(traj)) csv += format_row({r.t, r.P11, r.P00, r.C0, r.C1, r.C2});
    return csv;
  }
  const FockBasis& basis = *model.basis;
  csv = "t,N";
  for (std::size_t i = 0; i < basis.size(); ++i) csv += "," + population_label(basis.state(i));
  csv += "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Matrix& rho = traj.states[k].matrix();
    std::vector<double> row{traj.times[k], 0.0};
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const double p = rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
      row[1] += basis.excitations(i) * p;
      row.push_back(p);
    }
    csv += format_row(row);
  }
  return csv;
}

ojson gaussian_output(const ScenarioConfig& cfg, const Model& model, std::vector<std::string>& warnings) {
  const GaussianCoefficients& c = *model.gaussian;
  const MomentSystem sys = build_moment_eom(c);
  const GaussianSteadyState ss = gaussian_steady(sys);
  if (!ss.x) throw NumericalError("gaussian: the delta=0 drift block is singular, no unique steady state");
  for (int d : ss.singular_blocks)
    warnings.push_back("gaussian: drift block delta=" + std::to_string(d) + " is singular; its steady moments are set to 0");

  ojson labels = ojson::array();
  for (std::size_t i = 0; i < sys.labels.size(); ++i)
    labels.push_back({{"name", sys.labels[i].name()}, {"delta", sys.deltas[i]}});
  ojson steady = ojson::object();
  for (std::size_t i = 0; i < sys.labels.size(); ++i) steady[sys.labels[i].name()] = cj((*ss.x)(static_cast<Eigen::Index>(i)));

  ojson out;
  out["generator"] = "liouville_blocks";
  out["version"] = kVersion;
  out["modes"] = sys.modes;
  out["energies"] = c.energies;
  out["coefficients"] = {{"lamb", matrix_json(c.lamb)},
                         {"gamma_down", matrix_json(c.gamma_down)},
                         {"gamma_up", matrix_json(c.gamma_up)}};
  out["moments"] = std::move(labels);
  out["drift"] = matrix_json(sys.B);
  out["inhomogeneity"] = vector_json(sys.b);
  out["steady_state"] = {{"moments", std::move(steady)}, {"singular_blocks", ss.singular_blocks}};
  if (!cfg.times.empty() && cfg.initial_state) {
    const Vector x0 = moments_of(sys, initial_density(cfg, model));
    const auto xs = evolve_covariance(sys, x0, cfg.times);
    ojson rows = ojson::array();
    for (std::size_t t = 0; t < xs.size(); ++t) rows.push_back({{"t", cfg.times[t]}, {"x", vector_json(xs[t])}});
    out["trajectory"] = std::move(rows);
  }
  return out;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

int report_error(std::ostream& err, int code, const std::string& kind, const std::string& what) {
  err << "liouville-blocks: " << kind << ": " << what << "\n";
  return code;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    return report_error(err, kConfigError, "config error", e.what());
  } catch (const NumericalError& e) {
    return report_error(err, kNumericalFailure, "numerical failure", e.what());
  } catch (const Error& e) {
    return report_error(err, kConfigError, "invalid model", e.what());
  } catch (const nlohmann::json::exception& e) {
    return report_error(err, kConfigError, "config error", e.what());
  } catch (const std::bad_alloc&) {
    return report_error(err, kNumericalFailure, "numerical failure", "out of memory");
  }
}

}  // namespace

OutputFiles run_scenario(const ScenarioConfig& cfg, const Model& model, const std::string& command) {
  const Liouvillian& L = model.liouvillian;
  const BlockDecomposition dec = block_decompose(L);
  const bool graded = dec.offblock_norm < cfg.tolerance;
  std::vector<std::string> warnings;
  OutputFiles files;

  ojson report;
  report["metadata"] = {{"generator", "liouville_blocks"},
                        {"version", kVersion},
                        {"command", command},
                        {"units", cfg.units},
                        {"hbar", 1},
                        {"k_B", 1}};
  report["scenario"] = {{"system", cfg.system_name()},
                        {"description", model.description},
                        {"statistics", model.basis->statistics() == Statistics::fermionic ? "fermionic" : "bosonic"},
                        {"modes", model.basis->mode_count()},
                        {"truncation", model.basis->truncation()},
                        {"hilbert_dimension", model.basis->size()},
                        {"liouville_dimension", L.dimension()},
                        {"mode_energies", model.mode_energies}};
  if (model.two_spin) {
    const auto& d = *model.two_spin;
    report["scenario"]["diagonalization"] = {{"theta", d.theta}, {"phi", d.phi}, {"2E1", 2.0 * d.E1}, {"2E2", 2.0 * d.E2}};
  }
  report["provenance"] = provenance_json(L);
  report["thresholds"] = {{"symmetry_tolerance", cfg.tolerance}, {"psa_threshold", cfg.policy.threshold()},
                          {"freq_tol", cfg.policy.freq_tol}, {"cross_check_limit", EvolveOptions{}.cross_check_limit}};

  if (cfg.wants("symmetry_report")) {
    const SymmetryResult s = symmetry_of(model, dec, cfg);
    ojson sym{{"number_commutator_norm", s.number_norm},
              {"parity_commutator_norm", s.parity_norm},
              {"offblock_norm", s.offblock},
              {"number_verdict", s.number_norm < cfg.tolerance ? "PASS" : "FAIL"},
              {"parity_verdict", s.parity_norm < cfg.tolerance ? "PASS" : "FAIL"},
              {"number_symmetry_predicted", model.number_predicted},
              {"parity_symmetry_predicted", model.parity_predicted}};
    if (graded) {
      sym["conjugate_block_norm"] = verify_conjugate_blocks(dec);
    } else {
      sym["conjugate_block_norm"] = nullptr;
    }
    ojson leaks = ojson::array();
    for (std::size_t a = 0; a < dec.d_values.size(); ++a) {
      for (std::size_t b = a + 1; b < dec.d_values.size(); ++b) {
        const int d1 = dec.d_values[a], d2 = dec.d_values[b];
        const double n = std::max(offblock_norm_between(L, dec, d1, d2), offblock_norm_between(L, dec, d2, d1));
        if (n >= cfg.tolerance) leaks.push_back({{"d1", d1}, {"d2", d2}, {"norm", n}});
      }
    }
    sym["sector_leakage"] = std::move(leaks);
    sym["conditions"] = s.conditions ? conditions_json(*s.conditions) : ojson(nullptr);
    report["symmetry"] = std::move(sym);
  }
  if (!graded) {
    warnings.push_back("generator couples different excitation sectors (off-block norm " + sci(dec.offblock_norm) +
                       "); block results use the full generator or are skipped");
  }

  if (cfg.wants("blocks")) {
    ojson blocks = ojson::array();
    for (int d : dec.canonical_order()) blocks.push_back({{"d", d}, {"size", dec.index_sets.at(d).size()}});
    report["blocks"] = std::move(blocks);
    report["block_sizes"] = dec.block_sizes();
  }

  if (cfg.wants("spectrum")) {
    if (graded) {
      ojson spec = ojson::array();
      for (auto& [d, vals] : block_spectrum(dec)) {
        std::vector<Complex> v(vals.data(), vals.data() + vals.size());
        std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
          return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
        });
        ojson ev = ojson::array();
        for (Complex z : v) ev.push_back(cj(z));
        spec.push_back({{"d", d}, {"eigenvalues", std::move(ev)}});
      }
      report["spectrum"] = std::move(spec);
    } else {
      warnings.push_back("spectrum: skipped because the generator is not block diagonal");
      report["spectrum"] = nullptr;
    }
  }

  if (cfg.wants("steady_state")) {
    if (graded) {
      const SteadyStateReport ss = steady_state(L, dec);
      ojson zeros = ojson::object();
      for (const auto& [d, n] : ss.zero_modes_per_block) zeros[std::to_string(d)] = n;
      ojson s{{"unique", ss.unique},
              {"zero_modes", ss.zero_modes},
              {"zero_modes_per_block", std::move(zeros)},
              {"zero_tolerance", ss.zero_tolerance},
              {"residual", ss.residual},
              {"min_eigenvalue", ss.min_eigenvalue},
              {"off_grading_max", ss.off_grading_max}};
      s["rho"] = ss.rho_ss ? matrix_json(ss.rho_ss->matrix()) : ojson(nullptr);
      if (ss.rho_ss && model.two_spin_columns) {
        Trajectory t{{0.0}, {*ss.rho_ss}, std::nullopt};
        const TwoSpinObservables r = two_spin_observables(t).front();
        s["observables"] = {{"P11", r.P11}, {"P00", r.P00}, {"C0", r.C0}, {"C1", r.C1}, {"C2", r.C2}};
      }
      report["steady_state"] = std::move(s);
      for (const auto& w : ss.warnings) warnings.push_back("steady state: " + w);
    } else {
      warnings.push_back("steady_state: skipped because the generator is not block diagonal");
      report["steady_state"] = nullptr;
    }
  }

  if (cfg.wants("trajectory")) {
    const Operator rho0 = initial_density(cfg, model);
    const Trajectory traj = graded ? evolve(L, dec, rho0, cfg.times) : full_evolution(L, rho0, cfg.times);
    double lowest = 0.0;
    for (const auto& s : traj.states) lowest = std::min(lowest, min_eigenvalue(s));
    ojson t{{"file", "trajectory.csv"}, {"rows", traj.times.size()}, {"min_eigenvalue", lowest}};
    t["cross_check_deviation"] = traj.cross_check_deviation ? ojson(*traj.cross_check_deviation) : ojson(nullptr);
    if (traj.cross_check_deviation && *traj.cross_check_deviation > 1e-8)
      warnings.push_back("trajectory: block and full propagation differ by " + sci(*traj.cross_check_deviation));
    if (lowest < -1e-8) warnings.push_back("trajectory: state lost positivity, minimum eigenvalue " + sci(lowest));
    report["trajectory"] = std::move(t);
    files["trajectory.csv"] = trajectory_csv(model, traj);
  }

  if (cfg.wants("gaussian")) {
    files["gaussian.json"] = dump(gaussian_output(cfg, model, warnings));
    report["gaussian"] = {{"file", "gaussian.json"}};
  }

  report["warnings"] = warnings;
  files["report.json"] = dump(report);
  return files;
}

int run_command(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = load_config(options.config);
    apply_overrides(cfg, options);
    const Model model = build_model(cfg);
    const OutputFiles files = run_scenario(cfg, model, "run");

    std::error_code ec;
    std::filesystem::create_directories(options.out, ec);
    if (ec) throw ConfigError("--out", "cannot create " + options.out.string() + ": " + ec.message());
    for (const auto& [name, body] : files) {
      const auto path = options.out / name;
      std::ofstream f(path, std::ios::binary);
      f << body;
      if (!f) throw ConfigError("--out", "cannot write " + path.string());
      out << "wrote " << path.string() << "\n";
    }
    const auto report = ojson::parse(files.at("report.json"));
    for (const auto& w : report["warnings"]) err << "warning: " << w.get<std::string>() << "\n";
    return static_cast<int>(kOk);
  });
}

int check_symmetry_command(const Options& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ScenarioConfig cfg = load_config(options.config);
    apply_overrides(cfg, options);
    const Model model = build_model(cfg);
    const BlockDecomposition dec = block_decompose(model.liouvillian);
    const SymmetryResult s = symmetry_of(model, dec, cfg);
    const bool n_ok = s.number_norm < cfg.tolerance;
    const bool p_ok = s.parity_norm < cfg.tolerance;
    auto yn = [](bool b) { return b ? "yes" : "no"; };

    out << "system: " << model.description << "\n";
    out << "tolerance: " << sci(cfg.tolerance) << "\n";
    out << "number commutator norm: " << sci(s.number_norm) << " " << (n_ok ? "PASS" : "FAIL") << "\n";
    out << "parity commutator norm: " << sci(s.parity_norm) << " " << (p_ok ? "PASS" : "FAIL") << "\n";
    out << "off-block norm: " << sci(s.offblock) << "\n";
    if (s.conditions) {
      const auto& c = *s.conditions;
      out << "condition one (components change excitations by at most one): " << yn(c.condition_one) << "\n";
      out << "condition two (kept pairs share a grading): " << yn(c.condition_two) << "\n";
      out << "energies resolved by the secular threshold: " << yn(c.energies_resolved) << "\n";
      for (const auto& n : c.notes) out << "  note: " << n << "\n";
    }
    out << "predicted: number " << (model.number_predicted ? "conserved" : "broken") << ", parity "
        << (model.parity_predicted ? "conserved" : "broken") << "\n";
    out << "matches prediction: " << yn(n_ok == model.number_predicted && p_ok == model.parity_predicted) << "\n";
    out << "verdict: " << (n_ok && p_ok ? "PASS" : "FAIL") << "\n";
    return static_cast<int>(kOk);
  });
}

int block_dims_command(int modes, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (modes < 1 || modes > 30) throw ConfigError("--modes", "must lie in [1, 30]");
    auto choose = [](int n, int k) {
      double v = 1.0;
      for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
      return static_cast<unsigned long long>(std::llround(v));
    };
    out << "modes: " << modes << "\n";
    out << "n,states\n";
    for (int n = 0; n <= modes; ++n) out << n << "," << choose(modes, n) << "\n";
    out << "d,block_dimension\n";
    unsigned long long total = 0;
    for (int d = -modes; d <= modes; ++d) {
      const auto dim = block_dim_fermionic(modes, d);
      total += dim;
      out << d << "," << dim << "\n";
    }
    out << "total," << total << "\n";
    return static_cast<int>(kOk);
  });
}

}  // namespace liouville::cli
