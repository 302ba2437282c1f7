#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "liouville_cli/commands.hpp"
#include "liouville_cli/config.hpp"

using namespace liouville::cli;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kConfigs = LIOUVILLE_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "liouville_cli_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const fs::path& config, const fs::path& out_dir) {
  std::ostringstream out, err;
  Options o;
  o.config = config;
  o.out = out_dir;
  const int code = run_command(o, out, err);
  return {code, out.str(), err.str()};
}

Result check(const fs::path& config) {
  std::ostringstream out, err;
  Options o;
  o.config = config;
  const int code = check_symmetry_command(o, out, err);
  return {code, out.str(), err.str()};
}

json with_field(const fs::path& base, const std::string& pointer, const json& value) {
  json j = json::parse(slurp(base));
  j[json::json_pointer(pointer)] = value;
  return j;
}

}  // namespace

TEST_CASE("two-spin run writes the census, trajectory and provenance", "[cli]") {
  const fs::path out = scratch("two_spins") / "out";
  const Result r = run(kConfigs / "two_spins_fig2.json", out);
  REQUIRE(r.code == kOk);
  const json report = json::parse(slurp(out / "report.json"));
  CHECK(report["block_sizes"] == json::array({6, 4, 4, 1, 1}));
  CHECK(report["symmetry"]["number_commutator_norm"].get<double>() < 1e-12);
  CHECK(report["symmetry"]["parity_commutator_norm"].get<double>() < 1e-12);
  CHECK(report["provenance"]["psa"]["chi"] == 100.0);
  CHECK(report["provenance"]["coefficient_rule"] == "arithmetic_mean");
  CHECK(report["provenance"]["kept_pairs"].size() == 16);
  CHECK(report["metadata"]["version"].is_string());
  CHECK(report["thresholds"]["symmetry_tolerance"] == 1e-12);
  CHECK(report["steady_state"]["unique"] == true);
  CHECK(std::abs(report["steady_state"]["observables"]["C0"].get<double>()) > 1e-3);

  const std::string csv = slurp(out / "trajectory.csv");
  CHECK(csv.rfind("t,P11,P00,C0,C1,C2\n", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);
  std::size_t rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    double v[6];
    char comma;
    std::istringstream row(line);
    row >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3] >> comma >> v[4] >> comma >> v[5];
    CHECK(std::abs(v[4]) < 1e-10);
    CHECK(std::abs(v[5]) < 1e-10);
  }
  CHECK(rows == 201);

  const fs::path again = scratch("two_spins_again") / "out";
  REQUIRE(run(kConfigs / "two_spins_fig2.json", again).code == kOk);
  CHECK(slurp(out / "report.json") == slurp(again / "report.json"));
  CHECK(csv == slurp(again / "trajectory.csv"));
}

TEST_CASE("two-boson run reports the steady moments", "[cli]") {
  const fs::path out = scratch("bosons") / "out";
  REQUIRE(run(kConfigs / "two_bosons.json", out).code == kOk);
  const json g = json::parse(slurp(out / "gaussian.json"));
  const json& m = g["steady_state"]["moments"];
  for (const char* name : {"a1^dag a1^dag", "a1^dag a2^dag", "a2^dag a2^dag", "a1 a1", "a1 a2", "a2 a2"}) {
    CHECK(m[name][0].get<double>() == 0.0);
    CHECK(m[name][1].get<double>() == 0.0);
  }
  CHECK(std::hypot(m["a1^dag a2"][0].get<double>(), m["a1^dag a2"][1].get<double>()) > 1e-6);
  CHECK(g["moments"].size() == 10);
  CHECK(g["drift"].size() == 10);
}

TEST_CASE("symmetry checks follow the secular regime", "[cli]") {
  const Result psa = check(kConfigs / "two_spins_fig2.json");
  REQUIRE(psa.code == kOk);
  CHECK(psa.out.find("verdict: PASS") != std::string::npos);
  CHECK(psa.out.find("matches prediction: yes") != std::string::npos);

  const fs::path dir = scratch("redfield");
  const json cfg = with_field(kConfigs / "two_spins_fig2.json", "/psa/mode", "none");
  const Result full = check(write_config(dir, cfg.dump()));
  REQUIRE(full.code == kOk);
  CHECK(full.out.find("verdict: FAIL") != std::string::npos);
  CHECK(full.out.find("parity commutator norm: 0.000e+00 PASS") != std::string::npos);
  CHECK(full.out.find("matches prediction: yes") != std::string::npos);
  const fs::path out = dir / "out";
  REQUIRE(run(dir / "config.json", out).code == kOk);
  const json report = json::parse(slurp(out / "report.json"));
  CHECK(report["symmetry"]["number_commutator_norm"].get<double>() > 1e-6);
  CHECK(report["symmetry"]["number_verdict"] == "FAIL");

  const Result sq = check(kConfigs / "squeezed_demo.json");
  REQUIRE(sq.code == kOk);
  CHECK(sq.out.find("verdict: FAIL") != std::string::npos);
  CHECK(sq.out.find("parity commutator norm: 0.000e+00 PASS") != std::string::npos);
  CHECK(sq.out.find("predicted: number broken, parity conserved") != std::string::npos);
}

TEST_CASE("local equation leaks between sectors", "[cli]") {
  const fs::path out = scratch("local") / "out";
  const Result r = run(kConfigs / "local_vs_global.json", out);
  REQUIRE(r.code == kOk);
  const json report = json::parse(slurp(out / "report.json"));
  bool zero_two = false;
  for (const auto& leak : report["symmetry"]["sector_leakage"])
    if (leak["d1"] == 0 && leak["d2"] == 2 && leak["norm"].get<double>() > 1e-6) zero_two = true;
  CHECK(zero_two);
  CHECK_FALSE(report["warnings"].empty());
}

TEST_CASE("spin chain and random instances run", "[cli]") {
  const fs::path out = scratch("chain") / "out";
  REQUIRE(run(kConfigs / "spin_chain_m3.json", out).code == kOk);
  const json report = json::parse(slurp(out / "report.json"));
  CHECK(report["block_sizes"].size() == 7);
  CHECK(report["symmetry"]["number_verdict"] == "PASS");

  const fs::path dir = scratch("random");
  write_config(dir, R"({"system": {"type": "random_graded"}, "outputs": ["symmetry_report", "blocks"]})");
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    std::ostringstream o, e;
    Options opts;
    opts.config = dir / "config.json";
    opts.seed = seed;
    REQUIRE(check_symmetry_command(opts, o, e) == kOk);
    CHECK(o.str().find("verdict: PASS") != std::string::npos);
  }
}

TEST_CASE("configuration errors exit with code 2 and write nothing", "[cli]") {
  const fs::path dir = scratch("errors");
  const fs::path out = dir / "out";

  auto expect_error = [&](const std::string& body, const std::string& where) {
    const Result r = run(write_config(dir, body), out);
    CHECK(r.code == kConfigError);
    CHECK(r.err.find(where) != std::string::npos);
    CHECK_FALSE(fs::exists(out));
  };

  expect_error(with_field(kConfigs / "two_spins_fig2.json", "/times", json::array({0, 10, 5})).dump(), "times[2]");
  expect_error(with_field(kConfigs / "two_spins_fig2.json", "/times", "soon").dump(), "times");
  expect_error(with_field(kConfigs / "two_spins_fig2.json", "/baths/1/temperature", -1.0).dump(), "baths[1]");
  expect_error(with_field(kConfigs / "two_spins_fig2.json", "/psa/mode", "sometimes").dump(), "psa.mode");
  expect_error(with_field(kConfigs / "two_spins_fig2.json", "/system/colour", 3).dump(), "system.colour");
  expect_error(with_field(kConfigs / "two_spins_fig2.json", "/baths/0/channels/0", "sigma9x").dump(),
               "baths[0].channels[0]");
  expect_error(with_field(kConfigs / "two_spins_fig2.json", "/initial_state/basis_state", json::array({1, 2})).dump(),
               "initial_state.basis_state");
  expect_error("{\n  \"system\": {\"type\": \"two_spins\",,}\n}", "line 2");
  expect_error(R"({"system": {"type": "two_spins"}, "baths": [], "outputs": []})", "baths");
  expect_error(R"({"system": {"type": "squeezed_mode", "n_thermal": 0.1, "squeezing": [1, 0]}})", "system.squeezing");
  expect_error(R"({"system": {"type": "two_spins"},
                   "baths": [{"mu": 0.1, "temperature": 1, "channels": ["sigma1x"]}],
                   "initial_state": {"matrix_file": "missing.json"}})",
               "initial_state.matrix_file");

  const Result missing = run(dir / "nope.json", out);
  CHECK(missing.code == kConfigError);
}

TEST_CASE("singular moment equations exit with code 3", "[cli]") {
  const fs::path dir = scratch("singular");
  write_config(dir, R"({
    "system": {"type": "bosons", "energies": [1.0, 1.3], "n_max": 2, "coupling": [[0, 1]]},
    "baths": [{"mu": 0.05, "temperature": 0.5, "omega_c": 10, "channels": ["A1"]}],
    "outputs": ["gaussian"]})");
  const Result r = run(dir / "config.json", dir / "out");
  CHECK(r.code == kNumericalFailure);
  CHECK(r.err.find("numerical failure") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "out"));
}

TEST_CASE("explicit initial matrices are read from files", "[cli]") {
  const fs::path dir = scratch("matrix");
  std::ofstream(dir / "rho.json") << "[[0.5, 0], [0, 0.5]]";
  write_config(dir, R"({
    "system": {"type": "squeezed_mode", "n_max": 1, "n_thermal": 0.3, "squeezing": [0.2, 0]},
    "initial_state": {"matrix_file": "rho.json"},
    "times": [0, 1, 2],
    "outputs": ["trajectory"]})");
  const Result r = run(dir / "config.json", dir / "out");
  REQUIRE(r.code == kOk);
  const std::string csv = slurp(dir / "out" / "trajectory.csv");
  CHECK(csv.rfind("t,N,P_0,P_1\n", 0) == 0);
}

TEST_CASE("block dimension table", "[cli]") {
  std::ostringstream out, err;
  REQUIRE(block_dims_command(2, out, err) == kOk);
  const std::string s = out.str();
  CHECK(s.find("n,states\n0,1\n1,2\n2,1\n") != std::string::npos);
  CHECK(s.find("d,block_dimension\n-2,1\n-1,4\n0,6\n1,4\n2,1\ntotal,16\n") != std::string::npos);
  std::ostringstream o3;
  REQUIRE(block_dims_command(3, o3, err) == kOk);
  CHECK(o3.str().find("0,20\n") != std::string::npos);
  CHECK(block_dims_command(0, out, err) == kConfigError);
}
