#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "test_util.hpp"

using namespace qtest;
namespace fs = std::filesystem;

namespace {

fs::path tmp_root() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "qgrove_test_cli";
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

const std::string& cli_path() {
  static std::string path = [] {
    if (const char* env = std::getenv("QGROVE_CLI"); env && *env) return std::string(env);
#ifdef QGROVE_CLI_PATH
    return std::string(QGROVE_CLI_PATH);
#else
    return std::string();
#endif
  }();
  REQUIRE(!path.empty());
  REQUIRE(fs::exists(path));
  return path;
}

struct CliResult {
  int code = -1;
  std::string out, err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path so = tmp_root() / ("stdout_" + std::to_string(counter) + ".txt");
  fs::path se = tmp_root() / ("stderr_" + std::to_string(counter) + ".txt");
  ++counter;
  std::string cmd = cli_path() + " " + args + " >" + so.string() + " 2>" + se.string();
  int status = std::system(cmd.c_str());
  CliResult r;
  r.code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
  r.out = read_text_file(so.string());
  r.err = read_text_file(se.string());
  return r;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

Circuit sample_circuit() {
  Circuit c(4);
  c.roles[2] = Role::Ancilla;
  c.roles[3] = Role::Ancilla;
  c.push(Gate::h(0));
  c.push(Gate::rz(1, 0.1 + 1.0 / 3.0));
  c.push(Gate::cx(0, 1));
  c.push(Gate::gpi(2, -2.5));
  c.push(Gate::gpi2(3, kPi));
  c.push(Gate::ms(1, 2, 0.25, -0.75));
  c.push(Gate::toffoli(0, 1, 2));
  const double s = 1.0 / std::sqrt(2.0);
  c.push(Gate{GateKind::U1Q, {3}, {s, 0, s, 0, s, 0, -s, 0}});
  c.push(Gate::diag_oracle({0, 1}, {2}));
  return c;
}

void require_same_circuit(const Circuit& a, const Circuit& b) {
  REQUIRE(a.width == b.width);
  REQUIRE(a.roles == b.roles);
  REQUIRE(a.gates.size() == b.gates.size());
  for (size_t i = 0; i < a.gates.size(); ++i) {
    REQUIRE(a.gates[i].kind == b.gates[i].kind);
    REQUIRE(a.gates[i].qubits == b.gates[i].qubits);
    REQUIRE(a.gates[i].params == b.gates[i].params);  // bit-exact
  }
}

}  // namespace

TEST_CASE("circuits round-trip through json including text form") {
  Circuit c = sample_circuit();
  require_same_circuit(c, circuit_from_json(circuit_to_json(c)));
  // Through the printed form: parameter doubles must survive byte-for-byte.
  json reparsed = json::parse(circuit_to_json(c).dump(2));
  require_same_circuit(c, circuit_from_json(reparsed));

  json j = circuit_to_json(c);
  REQUIRE(j["roles"] == "ddaa");
  json bad_roles = j;
  bad_roles["roles"] = "dd";
  REQUIRE_THROWS_AS(circuit_from_json(bad_roles), std::invalid_argument);
  bad_roles["roles"] = "ddxx";
  REQUIRE_THROWS_AS(circuit_from_json(bad_roles), std::invalid_argument);
  json bad_gate = j;
  bad_gate["gates"][0]["qubits"] = {9};  // outside width
  REQUIRE_THROWS_AS(circuit_from_json(bad_gate), std::invalid_argument);
  json no_roles = j;
  no_roles.erase("roles");
  REQUIRE(circuit_from_json(no_roles).ancilla_qubits().empty());
}

TEST_CASE("oracles round-trip through json in both realizations") {
  OracleSpec ideal = OracleSpec::ideal(5, {1, 7, 30});
  OracleSpec ideal2 = oracle_from_json(oracle_to_json(ideal));
  REQUIRE(ideal2.n_data == 5);
  REQUIRE(ideal2.realization == OracleRealization::IdealDiagonal);
  REQUIRE(ideal2.marked == ideal.marked);

  OracleSpec gl = benchmark_cz_oracle();
  json j = oracle_to_json(gl);
  REQUIRE(j["realization"] == "gate_list");
  OracleSpec gl2 = oracle_from_json(j);
  REQUIRE(gl2.realization == OracleRealization::GateList);
  REQUIRE(gl2.marked == gl.marked);
  REQUIRE(gl2.terms.size() == gl.terms.size());
  for (size_t i = 0; i < gl.terms.size(); ++i) {
    REQUIRE(gl2.terms[i].qubits == gl.terms[i].qubits);
    REQUIRE(gl2.terms[i].x_mask == gl.terms[i].x_mask);
  }

  // A stored marked set that disagrees with the terms is rejected.
  json tampered = j;
  tampered["marked"][0] = uint64_t(j["marked"][0]) ^ 1ull;
  REQUIRE_THROWS_AS(oracle_from_json(tampered), std::invalid_argument);
  json badreal = j;
  badreal["realization"] = "matrix";
  REQUIRE_THROWS_AS(oracle_from_json(badreal), std::invalid_argument);
}

TEST_CASE("noise specs round-trip through json with defaulted fields") {
  NoiseSpec n = NoiseSpec::full();
  NoiseSpec n2 = noise_from_json(noise_to_json(n));
  REQUIRE(n2.en_over_rotation == n.en_over_rotation);
  REQUIRE(n2.eps1 == n.eps1);
  REQUIRE(n2.eps2 == n.eps2);
  REQUIRE(n2.en_relaxation == n.en_relaxation);
  REQUIRE(n2.t1 == n.t1);
  REQUIRE(n2.t2 == n.t2);
  REQUIRE(n2.dur1 == n.dur1);
  REQUIRE(n2.dur2 == n.dur2);
  REQUIRE(n2.en_stochastic == n.en_stochastic);
  REQUIRE(n2.p_stoch2 == n.p_stoch2);
  REQUIRE(n2.en_readout == n.en_readout);
  REQUIRE(n2.p_readout == n.p_readout);

  NoiseSpec blank = noise_from_json(json::object());
  REQUIRE(!blank.en_over_rotation);
  REQUIRE(!blank.en_relaxation);
  REQUIRE(!blank.en_stochastic);
  REQUIRE(!blank.en_readout);

  json bad = noise_to_json(NoiseSpec::over_rotation_relaxation());
  bad["t2"] = 3.0 * double(bad["t1"]);  // beyond the 2*t1 dephasing bound
  REQUIRE_THROWS_AS(noise_from_json(bad), std::invalid_argument);
}

TEST_CASE("distributions round-trip through json") {
  Distribution d = ideal_grover_distribution(4, {3, 5}, 2);
  d.retention = 0.75;
  d.shots = 123;
  Distribution d2 = distribution_from_json(distribution_to_json(d));
  REQUIRE(d2.width == d.width);
  REQUIRE(d2.exact == d.exact);
  REQUIRE(d2.shots == 123);
  REQUIRE(d2.retention == 0.75);
  REQUIRE(d2.p == d.p);

  json j = distribution_to_json(d);
  j["p"] = {0.5, 0.5};  // wrong length for the stated width
  REQUIRE_THROWS_AS(distribution_from_json(j), std::invalid_argument);
}

TEST_CASE("text files round-trip and missing files throw") {
  fs::path p = tmp_root() / "roundtrip.txt";
  std::string text = "line one\nline two\n\ttabbed, no trailing newline";
  write_text_file(p.string(), text);
  REQUIRE(read_text_file(p.string()) == text);
  REQUIRE_THROWS(read_text_file((tmp_root() / "no_such_file.txt").string()));
}

TEST_CASE("cli enumerates oracle classes") {
  CliResult counts = run_cli("oracle-enum --k 1 --solutions 16 --counts-only");
  REQUIRE(counts.code == 0);
  REQUIRE(contains(counts.out, "15 distinct oracles"));

  fs::path out = tmp_root() / "oracles_k1.json";
  CliResult dump = run_cli("oracle-enum --k 1 --out " + out.string());
  REQUIRE(dump.code == 0);
  json arr = json::parse(read_text_file(out.string()));
  REQUIRE(arr.size() == 15);
  for (const json& e : arr) {
    OracleSpec s = oracle_from_json(e);
    REQUIRE(s.n_data == 6);
    REQUIRE(s.marked.size() == 16);
  }

  REQUIRE(run_cli("oracle-enum --k 5 --counts-only").code == 1);  // k capped at 4
}

TEST_CASE("cli builds, transpiles and verifies a benchmark circuit") {
  fs::path circ = tmp_root() / "bench.json";
  CliResult build = run_cli("build --r-pow2 4 --out " + circ.string());
  REQUIRE(build.code == 0);
  REQUIRE(contains(build.err, "built:"));

  Circuit c = circuit_from_json(json::parse(read_text_file(circ.string())));
  REQUIRE(c.width == 10);
  REQUIRE(c.data_qubits().size() == 6);

  // Without --out the circuit JSON owns stdout; diagnostics go to stderr.
  CliResult piped = run_cli("build --r-pow2 4");
  REQUIRE(piped.code == 0);
  Circuit cp = circuit_from_json(json::parse(piped.out));
  REQUIRE(cp.width == 10);
  REQUIRE(contains(piped.err, "width 10"));

  fs::path native = tmp_root() / "bench_native.json";
  CliResult tr = run_cli("transpile --in " + circ.string() + " --verify --out " +
                         native.string());
  REQUIRE(tr.code == 0);
  REQUIRE(contains(tr.out, "fidelity vs input:"));
  Circuit nat = circuit_from_json(json::parse(read_text_file(native.string())));
  for (const Gate& g : nat.gates) REQUIRE(is_native(g.kind));
  REQUIRE(gate_counts(nat).of(GateKind::MS) == 26);
}

TEST_CASE("cli transpile rejects diagonal oracle blocks unless allowed") {
  fs::path circ = tmp_root() / "ideal_oracle.json";
  REQUIRE(run_cli("build --marked 3,9 --out " + circ.string()).code == 0);

  CliResult strict = run_cli("transpile --in " + circ.string());
  REQUIRE(strict.code == 1);
  REQUIRE(contains(strict.err, "error:"));

  fs::path native = tmp_root() / "ideal_native.json";
  CliResult relaxed = run_cli("transpile --in " + circ.string() + " --allow-diag --verify --out " +
                              native.string());
  REQUIRE(relaxed.code == 0);
  Circuit nat = circuit_from_json(json::parse(read_text_file(native.string())));
  int diags = 0;
  for (const Gate& g : nat.gates) diags += g.kind == GateKind::DIAG_ORACLE;
  REQUIRE(diags == 1);
}

TEST_CASE("cli simulates a noiseless circuit to the closed-form distribution") {
  fs::path circ = tmp_root() / "sim.json";
  REQUIRE(run_cli("build --r-pow2 4 --out " + circ.string()).code == 0);
  fs::path dist = tmp_root() / "sim_dist.json";
  CliResult sim = run_cli("simulate --in " + circ.string() + " --out " + dist.string());
  REQUIRE(sim.code == 0);
  REQUIRE(contains(sim.out, "mode none, exact"));
  Distribution d = distribution_from_json(json::parse(read_text_file(dist.string())));
  REQUIRE(d.width == 6);
  Distribution want = ideal_grover_distribution(6, power_of_two_oracle(6, 4).marked, 1);
  REQUIRE(tvd(d, want) < 1e-9);
}

TEST_CASE("cli sampled suppression runs are reproducible") {
  fs::path circ = tmp_root() / "rc.json";
  REQUIRE(run_cli("build --r-pow2 4 --out " + circ.string()).code == 0);
  std::string args = "simulate --in " + circ.string() +
                     " --profile or_only --mode rc+ed --sample --shots 200 --seed 9 --out ";
  fs::path d1 = tmp_root() / "rc_1.json";
  fs::path d2 = tmp_root() / "rc_2.json";
  CliResult a = run_cli(args + d1.string());
  REQUIRE(a.code == 0);
  REQUIRE(contains(a.out, "mode rc_ed"));
  REQUIRE(contains(a.out, "retention"));
  REQUIRE(run_cli(args + d2.string()).code == 0);
  REQUIRE(read_text_file(d1.string()) == read_text_file(d2.string()));
}

TEST_CASE("cli experiment preset writes deterministic files") {
  // Fresh nested paths: the command must create its own output directory.
  fs::path dir1 = tmp_root() / "exp1" / "nested";
  fs::path dir2 = tmp_root() / "exp2" / "nested";
  fs::remove_all(dir1.parent_path());
  fs::remove_all(dir2.parent_path());
  std::string base = "experiment --preset fig3 --seed 11 --oracles 3 --r-grid 4 --out ";
  CliResult a = run_cli(base + dir1.string());
  REQUIRE((a.code == 0 || a.code == 3));  // 3 = completed, some checks failed
  REQUIRE(contains(a.out, "wrote"));
  REQUIRE(contains(a.out, "check"));
  REQUIRE(fs::exists(dir1 / "fig3_or_only.csv"));
  REQUIRE(fs::exists(dir1 / "fig3_manifest.json"));

  CliResult b = run_cli(base + dir2.string());
  REQUIRE(b.code == a.code);
  REQUIRE(read_text_file((dir1 / "fig3_or_only.csv").string()) ==
          read_text_file((dir2 / "fig3_or_only.csv").string()));
  json man = json::parse(read_text_file((dir1 / "fig3_manifest.json").string()));
  REQUIRE(man["rows"] == 12);
}

TEST_CASE("cli rejects malformed invocations") {
  REQUIRE(run_cli("no-such-command").code != 0);
  REQUIRE(run_cli("transpile").code != 0);                          // --in required
  REQUIRE(run_cli("build --marked 3 --r-pow2 4").code == 1);        // oracle over-specified
  REQUIRE(run_cli("simulate --in " + (tmp_root() / "missing.json").string()).code == 1);
}
