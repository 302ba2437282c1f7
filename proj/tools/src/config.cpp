#include "liouville_cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "liouville/errors.hpp"

namespace liouville::cli {

using json = nlohmann::json;

namespace {

std::string child(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string item(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(child(path, key), "missing required field");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const std::string& key = it.key();
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      throw ConfigError(child(path, key), "unknown field");
  }
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

double number_at(const json& obj, const std::string& key, const std::string& path, double fallback) {
  const json* f = optional_field(obj, key);
  return f ? number(*f, child(path, key)) : fallback;
}

int integer(const json& j, const std::string& path, int lo, int hi) {
  if (!j.is_number_integer()) throw ConfigError(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi)
    throw ConfigError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(v);
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

Complex complex_value(const json& j, const std::string& path) {
  if (j.is_number()) return {number(j, path), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], item(path, 0)), number(j[1], item(path, 1))};
  throw ConfigError(path, "expected a number or an [re, im] pair");
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], item(path, i)));
  return out;
}

Matrix complex_matrix(const json& j, const std::string& path, Eigen::Index rows = -1, Eigen::Index cols = -1) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a non-empty row-major nested array");
  const auto r = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw ConfigError(item(path, 0), "expected a non-empty row");
  const auto c = static_cast<Eigen::Index>(j[0].size());
  if ((rows >= 0 && r != rows) || (cols >= 0 && c != cols)) {
    throw ConfigError(path, "expected shape " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                                std::to_string(r) + "x" + std::to_string(c));
  }
  Matrix m(r, c);
  for (Eigen::Index a = 0; a < r; ++a) {
    const json& row = j[static_cast<std::size_t>(a)];
    const std::string rp = item(path, static_cast<std::size_t>(a));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != c) throw ConfigError(rp, "ragged row");
    for (Eigen::Index b = 0; b < c; ++b)
      m(a, b) = complex_value(row[static_cast<std::size_t>(b)], item(rp, static_cast<std::size_t>(b)));
  }
  return m;
}

json parse_text(const std::string& src, const std::string& origin) {
  try {
    return json::parse(src);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < src.size(); ++i) {
      if (src[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    throw ConfigError(origin + "line " + std::to_string(line) + ", column " + std::to_string(column), what);
  }
}

std::size_t dimension_of(Statistics s, int modes, int n_max) {
  std::size_t d = 1;
  for (int k = 0; k < modes; ++k) d *= static_cast<std::size_t>(s == Statistics::fermionic ? 2 : n_max + 1);
  return d;
}

void check_size(std::size_t dim, const std::string& path) {
  // dense Liouvillians beyond this no longer fit comfortably in memory
  if (dim > 128) throw ConfigError(path, "Hilbert dimension " + std::to_string(dim) + " exceeds the limit of 128");
}

SystemConfig parse_system(const json& j, const std::string& path, const std::filesystem::path& base) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  const std::string type = text(require(j, "type", path), child(path, "type"));
  if (type == "two_spins") {
    reject_unknown(j, path, {"type", "omega1", "omega2", "lambda", "equation"});
    TwoSpinsSystem s;
    s.omega1 = number_at(j, "omega1", path, 1.0);
    s.omega2 = number_at(j, "omega2", path, 1.0);
    s.lambda = number_at(j, "lambda", path, 0.0);
    if (const json* eq = optional_field(j, "equation")) {
      const std::string e = text(*eq, child(path, "equation"));
      if (e != "global" && e != "local") throw ConfigError(child(path, "equation"), "expected \"global\" or \"local\"");
      s.local = e == "local";
    }
    return s;
  }
  if (type == "spin_chain") {
    reject_unknown(j, path, {"type", "omegas", "couplings"});
    SpinChainSystem s;
    s.omegas = number_list(require(j, "omegas", path), child(path, "omegas"));
    s.couplings = number_list(require(j, "couplings", path), child(path, "couplings"));
    if (s.omegas.empty()) throw ConfigError(child(path, "omegas"), "need at least one site");
    if (s.couplings.size() + 1 != s.omegas.size())
      throw ConfigError(child(path, "couplings"), "expected one coupling per neighbouring pair of sites");
    check_size(dimension_of(Statistics::fermionic, static_cast<int>(s.omegas.size()), 1), child(path, "omegas"));
    return s;
  }
  if (type == "bosons") {
    reject_unknown(j, path, {"type", "energies", "n_max", "coupling"});
    BosonSystem s;
    s.energies = number_list(require(j, "energies", path), child(path, "energies"));
    if (s.energies.empty()) throw ConfigError(child(path, "energies"), "need at least one mode");
    s.n_max = j.contains("n_max") ? integer(j["n_max"], child(path, "n_max"), 1, 64) : 4;
    const auto M = static_cast<Eigen::Index>(s.energies.size());
    const json* c = optional_field(j, "coupling");
    const std::string cp = child(path, "coupling");
    if (!c || (c->is_string() && c->get<std::string>() == "common")) {
      s.couplings = Matrix::Ones(1, M);
    } else if (c->is_string() && c->get<std::string>() == "independent") {
      s.couplings = Matrix::Identity(M, M);
    } else if (c->is_array()) {
      s.couplings = complex_matrix(*c, cp, -1, M);
    } else {
      throw ConfigError(cp, "expected \"common\", \"independent\" or a channels x modes matrix");
    }
    check_size(dimension_of(Statistics::bosonic, static_cast<int>(M), s.n_max), child(path, "n_max"));
    return s;
  }
  if (type == "custom") {
    reject_unknown(j, path, {"type", "statistics", "modes", "n_max", "hamiltonian", "couplings"});
    CustomSystem s;
    const std::string st = text(require(j, "statistics", path), child(path, "statistics"));
    if (st == "fermionic") {
      s.statistics = Statistics::fermionic;
    } else if (st == "bosonic") {
      s.statistics = Statistics::bosonic;
    } else {
      throw ConfigError(child(path, "statistics"), "expected \"fermionic\" or \"bosonic\"");
    }
    s.modes = integer(require(j, "modes", path), child(path, "modes"), 1, 8);
    s.n_max = s.statistics == Statistics::fermionic
                  ? 1
                  : (j.contains("n_max") ? integer(j["n_max"], child(path, "n_max"), 1, 64) : 2);
    const std::size_t dim = dimension_of(s.statistics, s.modes, s.n_max);
    check_size(dim, child(path, "modes"));
    const auto n = static_cast<Eigen::Index>(dim);
    const json& h = require(j, "hamiltonian", path);
    s.hamiltonian = complex_matrix(h, child(path, "hamiltonian"), n, n);
    if ((s.hamiltonian - s.hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
      throw ConfigError(child(path, "hamiltonian"), "matrix is not Hermitian");
    const json& cs = require(j, "couplings", path);
    const std::string csp = child(path, "couplings");
    if (!cs.is_object() || cs.empty()) throw ConfigError(csp, "expected an object mapping names to matrices");
    for (auto it = cs.begin(); it != cs.end(); ++it) {
      const std::string& name = it.key();
      const json& m = it.value();
      Matrix A = complex_matrix(m, child(csp, name), n, n);
      if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw ConfigError(child(csp, name), "coupling operator is not Hermitian");
      s.couplings.emplace_back(name, std::move(A));
    }
    return s;
  }
  if (type == "squeezed_mode") {
    reject_unknown(j, path, {"type", "omega", "gamma", "n_thermal", "squeezing", "n_max"});
    SqueezedSystem s;
    s.omega = number_at(j, "omega", path, 1.0);
    s.gamma = number_at(j, "gamma", path, 0.1);
    s.n_thermal = number_at(j, "n_thermal", path, 0.0);
    if (const json* sq = optional_field(j, "squeezing")) s.squeezing = complex_value(*sq, child(path, "squeezing"));
    s.n_max = j.contains("n_max") ? integer(j["n_max"], child(path, "n_max"), 1, 127) : 4;
    if (s.gamma < 0.0) throw ConfigError(child(path, "gamma"), "must be non-negative");
    if (s.n_thermal < 0.0) throw ConfigError(child(path, "n_thermal"), "must be non-negative");
    if (std::norm(s.squeezing) > s.n_thermal * (s.n_thermal + 1.0) + 1e-15)
      throw ConfigError(child(path, "squeezing"), "|M|^2 must not exceed N(N+1)");
    return s;
  }
  if (type == "random_graded") {
    reject_unknown(j, path, {"type", "seed"});
    RandomGradedSystem s;
    if (const json* seed = optional_field(j, "seed")) {
      if (!seed->is_number_unsigned()) throw ConfigError(child(path, "seed"), "expected a non-negative integer");
      s.seed = seed->get<std::uint64_t>();
    }
    return s;
  }
  (void)base;
  throw ConfigError(child(path, "type"), "unknown system type \"" + type + "\"");
}

BathConfig parse_bath(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  reject_unknown(j, path, {"mu", "temperature", "omega_c", "spectral_form", "lamb_shift", "channels"});
  BathConfig b;
  b.spec.mu = number(require(j, "mu", path), child(path, "mu"));
  b.spec.temperature = number(require(j, "temperature", path), child(path, "temperature"));
  b.spec.omega_c = number_at(j, "omega_c", path, 1.0);
  if (const json* f = optional_field(j, "spectral_form")) {
    if (text(*f, child(path, "spectral_form")) != "ohmic_exponential")
      throw ConfigError(child(path, "spectral_form"), "only \"ohmic_exponential\" is supported");
  }
  if (const json* f = optional_field(j, "lamb_shift")) {
    const std::string m = text(*f, child(path, "lamb_shift"));
    if (m == "off") {
      b.spec.lamb_shift = LambShiftMode::off;
    } else if (m == "numeric") {
      b.spec.lamb_shift = LambShiftMode::numeric;
    } else {
      throw ConfigError(child(path, "lamb_shift"), "expected \"off\" or \"numeric\"");
    }
  }
  try {
    b.spec.validate();
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  const json& ch = require(j, "channels", path);
  const std::string cp = child(path, "channels");
  if (!ch.is_array()) throw ConfigError(cp, "expected an array");
  for (std::size_t i = 0; i < ch.size(); ++i) {
    const std::string ip = item(cp, i);
    if (ch[i].is_string()) {
      b.channels.push_back({ch[i].get<std::string>(), 1.0});
    } else if (ch[i].is_object()) {
      reject_unknown(ch[i], ip, {"name", "weight"});
      b.channels.push_back({text(require(ch[i], "name", ip), child(ip, "name")), number_at(ch[i], "weight", ip, 1.0)});
    } else {
      throw ConfigError(ip, "expected a channel name or {\"name\", \"weight\"}");
    }
  }
  return b;
}

PsaPolicy parse_policy(const json* j, const std::vector<BathConfig>& baths, const std::string& path) {
  PsaPolicy p;
  if (!baths.empty() && baths.front().spec.mu > 0.0) p.tau_R = 1.0 / (baths.front().spec.mu * baths.front().spec.mu);
  if (j) {
    if (!j->is_object()) throw ConfigError(path, "expected an object");
    reject_unknown(*j, path, {"mode", "chi", "tau_R", "freq_tol"});
    if (const json* m = optional_field(*j, "mode")) {
      const std::string mode = text(*m, child(path, "mode"));
      if (mode == "partial") {
        p.mode = SecularMode::partial;
      } else if (mode == "full_secular") {
        p.mode = SecularMode::full_secular;
      } else if (mode == "none") {
        p.mode = SecularMode::none;
      } else {
        throw ConfigError(child(path, "mode"), "expected \"partial\", \"full_secular\" or \"none\"");
      }
    }
    p.chi = number_at(*j, "chi", path, p.chi);
    p.tau_R = number_at(*j, "tau_R", path, p.tau_R);
    p.freq_tol = number_at(*j, "freq_tol", path, p.freq_tol);
  }
  try {
    p.validate();
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
  return p;
}

std::vector<double> parse_times(const json& j, const std::string& path) {
  std::vector<double> t;
  if (j.is_array()) {
    t = number_list(j, path);
  } else if (j.is_object()) {
    reject_unknown(j, path, {"start", "stop", "count"});
    const double start = number_at(j, "start", path, 0.0);
    const double stop = number(require(j, "stop", path), child(path, "stop"));
    const int count = integer(require(j, "count", path), child(path, "count"), 1, 1000000);
    if (count == 1) {
      t.push_back(start);
    } else {
      for (int i = 0; i < count; ++i) t.push_back(start + (stop - start) * i / (count - 1));
    }
  } else {
    throw ConfigError(path, "expected an array or {\"start\", \"stop\", \"count\"}");
  }
  if (t.empty()) throw ConfigError(path, "no time points");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < 0.0) throw ConfigError(item(path, i), "times must be non-negative");
    if (i > 0 && !(t[i] > t[i - 1])) throw ConfigError(item(path, i), "times must be strictly increasing");
  }
  return t;
}

InitialState parse_initial(const json& j, const std::string& path, const std::filesystem::path& base) {
  if (!j.is_object() || j.size() != 1)
    throw ConfigError(path, "expected exactly one of basis_state, thermal, matrix, matrix_file");
  InitialState s;
  const std::string key = j.begin().key();
  const json& value = j.begin().value();
  const std::string vp = child(path, key);
  if (key == "basis_state") {
    s.kind = InitialState::Kind::basis_state;
    if (!value.is_array()) throw ConfigError(vp, "expected an occupation list");
    for (std::size_t i = 0; i < value.size(); ++i) s.occupation.push_back(integer(value[i], item(vp, i), 0, 1 << 20));
  } else if (key == "thermal") {
    s.kind = InitialState::Kind::thermal;
    s.temperature = number(value, vp);
    if (s.temperature < 0.0) throw ConfigError(vp, "temperature must be non-negative");
  } else if (key == "matrix") {
    s.kind = InitialState::Kind::matrix;
    s.matrix = complex_matrix(value, vp);
  } else if (key == "matrix_file") {
    s.kind = InitialState::Kind::matrix;
    const std::filesystem::path file = base / text(value, vp);
    std::ifstream in(file);
    if (!in) throw ConfigError(vp, "cannot open " + file.string());
    std::stringstream ss;
    ss << in.rdbuf();
    s.matrix = complex_matrix(parse_text(ss.str(), file.string() + ": "), vp);
  } else {
    throw ConfigError(vp, "unknown initial state kind");
  }
  if (s.kind == InitialState::Kind::matrix) {
    if (s.matrix.rows() != s.matrix.cols()) throw ConfigError(vp, "density matrix must be square");
    if ((s.matrix - s.matrix.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw ConfigError(vp, "density matrix is not Hermitian");
    if (std::abs(s.matrix.trace() - Complex(1.0)) > 1e-10) throw ConfigError(vp, "density matrix must have unit trace");
  }
  return s;
}

std::size_t system_modes(const SystemConfig& sys) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TwoSpinsSystem>) return 2;
        if constexpr (std::is_same_v<T, SpinChainSystem>) return s.omegas.size();
        if constexpr (std::is_same_v<T, BosonSystem>) return s.energies.size();
        if constexpr (std::is_same_v<T, CustomSystem>) return static_cast<std::size_t>(s.modes);
        if constexpr (std::is_same_v<T, SqueezedSystem>) return 1;
        return 0;
      },
      sys);
}

std::vector<std::string> channel_names(const SystemConfig& sys) {
  std::vector<std::string> names;
  if (std::holds_alternative<TwoSpinsSystem>(sys)) {
    names = {"sigma1x", "sigma2x", "sigma1z", "sigma2z"};
  } else if (const auto* c = std::get_if<SpinChainSystem>(&sys)) {
    for (std::size_t k = 0; k < c->omegas.size(); ++k) names.push_back("sigma" + std::to_string(k + 1) + "x");
  } else if (const auto* b = std::get_if<BosonSystem>(&sys)) {
    for (Eigen::Index a = 0; a < b->couplings.rows(); ++a) names.push_back("A" + std::to_string(a + 1));
  } else if (const auto* u = std::get_if<CustomSystem>(&sys)) {
    for (const auto& [name, m] : u->couplings) names.push_back(name);
  }
  return names;
}

const std::set<std::string> kOutputs{"symmetry_report", "blocks", "spectrum", "steady_state", "trajectory", "gaussian"};

}  // namespace

bool ScenarioConfig::wants(const std::string& output) const {
  return std::find(outputs.begin(), outputs.end(), output) != outputs.end();
}

const char* ScenarioConfig::system_name() const {
  static constexpr const char* names[] = {"two_spins", "spin_chain", "bosons", "custom", "squeezed_mode", "random_graded"};
  return names[system.index()];
}

ScenarioConfig parse_config(const std::string& src, const std::filesystem::path& base) {
  const json root = parse_text(src, "");
  if (!root.is_object()) throw ConfigError("<root>", "expected an object");
  reject_unknown(root, "",
                 {"units", "system", "baths", "psa", "coefficient_rule", "initial_state", "times", "outputs", "tolerance"});
  ScenarioConfig cfg;
  if (const json* u = optional_field(root, "units")) cfg.units = text(*u, "units");
  cfg.system = parse_system(require(root, "system", ""), "system", base);

  const bool needs_baths = !std::holds_alternative<SqueezedSystem>(cfg.system) &&
                           !std::holds_alternative<RandomGradedSystem>(cfg.system);
  if (const json* b = optional_field(root, "baths")) {
    if (!needs_baths) throw ConfigError("baths", std::string("not used by system type ") + cfg.system_name());
    if (!b->is_array()) throw ConfigError("baths", "expected an array");
    for (std::size_t i = 0; i < b->size(); ++i) cfg.baths.push_back(parse_bath((*b)[i], item("baths", i)));
  }
  if (needs_baths && cfg.baths.empty()) throw ConfigError("baths", "at least one bath is required");

  const auto names = channel_names(cfg.system);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < cfg.baths.size(); ++i) {
    for (std::size_t c = 0; c < cfg.baths[i].channels.size(); ++c) {
      const std::string& n = cfg.baths[i].channels[c].name;
      const std::string p = item(item("baths", i) + ".channels", c);
      if (std::find(names.begin(), names.end(), n) == names.end())
        throw ConfigError(p, "unknown channel \"" + n + "\"");
      if (!seen.insert(n).second) throw ConfigError(p, "channel \"" + n + "\" is assigned to more than one bath");
    }
  }
  if (const auto* ts = std::get_if<TwoSpinsSystem>(&cfg.system); ts && ts->local) {
    const bool ok = cfg.baths.size() == 2 && cfg.baths[0].channels.size() == 1 &&
                    cfg.baths[0].channels[0].name == "sigma1x" && cfg.baths[1].channels.size() == 1 &&
                    cfg.baths[1].channels[0].name == "sigma2x";
    if (!ok) throw ConfigError("baths", "the local equation needs bath 0 on sigma1x and bath 1 on sigma2x");
  }

  cfg.policy = parse_policy(optional_field(root, "psa"), cfg.baths, "psa");
  if (const json* r = optional_field(root, "coefficient_rule")) {
    const std::string rule = text(*r, "coefficient_rule");
    if (rule == "arithmetic_mean") {
      cfg.rule = CrossRule::arithmetic_mean;
    } else if (rule == "geometric_mean") {
      cfg.rule = CrossRule::geometric_mean;
    } else {
      throw ConfigError("coefficient_rule", "expected \"arithmetic_mean\" or \"geometric_mean\"");
    }
  }
  if (const json* t = optional_field(root, "tolerance")) {
    cfg.tolerance = number(*t, "tolerance");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance", "must be positive");
  }
  if (const json* t = optional_field(root, "times")) cfg.times = parse_times(*t, "times");
  if (const json* s = optional_field(root, "initial_state")) {
    cfg.initial_state = parse_initial(*s, "initial_state", base);
    if (cfg.initial_state->kind == InitialState::Kind::basis_state &&
        cfg.initial_state->occupation.size() != system_modes(cfg.system) &&
        !std::holds_alternative<RandomGradedSystem>(cfg.system)) {
      throw ConfigError("initial_state.basis_state", "expected " + std::to_string(system_modes(cfg.system)) +
                                                         " occupation numbers");
    }
  }

  if (const json* o = optional_field(root, "outputs")) {
    if (!o->is_array()) throw ConfigError("outputs", "expected an array");
    for (std::size_t i = 0; i < o->size(); ++i) {
      const std::string name = text((*o)[i], item("outputs", i));
      if (!kOutputs.count(name)) throw ConfigError(item("outputs", i), "unknown output \"" + name + "\"");
      if (!cfg.wants(name)) cfg.outputs.push_back(name);
    }
  } else {
    cfg.outputs = {"symmetry_report", "blocks", "steady_state"};
    if (!cfg.times.empty() && cfg.initial_state) cfg.outputs.push_back("trajectory");
    if (std::holds_alternative<BosonSystem>(cfg.system)) cfg.outputs.push_back("gaussian");
  }
  if (cfg.wants("trajectory")) {
    if (cfg.times.empty()) throw ConfigError("times", "required by the trajectory output");
    if (!cfg.initial_state) throw ConfigError("initial_state", "required by the trajectory output");
  }
  if (cfg.wants("gaussian") && !std::holds_alternative<BosonSystem>(cfg.system))
    throw ConfigError("outputs", "the gaussian output needs a bosons system");
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open config file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

}  // namespace liouville::cli
