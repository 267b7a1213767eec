#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qgrove/qgrove.hpp"

namespace {

using namespace qgrove;

json load_json(const std::string& path) { return json::parse(read_text_file(path)); }

void emit_json(const json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text_file(out_path, text);
}

// Stderr: stdout may be carrying the circuit JSON when --out is unset.
void print_gate_counts(const Circuit& c) {
  GateCounts gc = gate_counts(c);
  std::fprintf(stderr, "width %d, %zu gates:", c.width, c.gates.size());
  for (const auto& [kind, n] : gc.by_kind) std::fprintf(stderr, " %s=%d", kind_name(kind), n);
  std::fprintf(stderr, " (1q=%d 2q=%d)\n", gc.one_qubit, gc.two_qubit);
}

void print_distribution(const Distribution& d, size_t top) {
  std::vector<size_t> idx(d.p.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(),
                   [&](size_t a, size_t b) { return d.p[a] > d.p[b]; });
  size_t n = std::min(top, idx.size());
  for (size_t i = 0; i < n; ++i) {
    if (d.p[idx[i]] <= 0) break;
    std::printf("  %s  %.6f\n", bitstring(idx[i], d.width).c_str(), d.p[idx[i]]);
  }
}

OracleSpec oracle_from_options(int n, const std::vector<uint64_t>& marked,
                               const std::string& oracle_file, int r_random, int r_pow2,
                               uint64_t seed) {
  int picked = int(!marked.empty()) + int(!oracle_file.empty()) + int(r_random > 0) +
               int(r_pow2 >= 0);
  if (picked != 1)
    throw std::invalid_argument(
        "choose exactly one of --marked, --oracle, --random-r, --r-pow2");
  if (!marked.empty()) {
    auto m = marked;
    std::sort(m.begin(), m.end());
    return OracleSpec::ideal(n, m);
  }
  if (!oracle_file.empty()) return oracle_from_json(load_json(oracle_file));
  if (r_pow2 >= 0) return power_of_two_oracle(n, r_pow2);
  auto specs = random_marked_sets(n, r_random, 1, seed);
  return specs[0];
}

int cmd_oracle_enum(int n, int k, bool allow_x, int solutions, bool counts_only,
                    const std::string& out) {
  std::optional<int> sol;
  if (solutions >= 0) sol = solutions;
  auto specs = enumerate_cz_oracles(n, k, allow_x, sol);
  if (counts_only) {
    std::printf("n=%d k=%d allow_x=%d%s: %zu distinct oracles\n", n, k, int(allow_x),
                sol ? (" r=" + std::to_string(*sol)).c_str() : "", specs.size());
    return 0;
  }
  json arr = json::array();
  for (const OracleSpec& s : specs) arr.push_back(oracle_to_json(s));
  emit_json(arr, out);
  std::fprintf(stderr, "%zu oracles\n", specs.size());
  return 0;
}

int cmd_build(int n, const OracleSpec& oracle, int iterations, const std::string& style,
              bool no_share, const std::string& out) {
  GroverConfig cfg;
  cfg.n_data = n;
  cfg.oracle = oracle;
  cfg.iterations = iterations;
  cfg.style = mcz_style_from_name(style);
  cfg.share_ancillas = !no_share;
  Circuit c = build_grover(cfg);
  emit_json(circuit_to_json(c), out);
  std::fprintf(stderr, "built: ");
  print_gate_counts(c);
  return 0;
}

int cmd_transpile(const std::string& in, const std::string& out, bool elide, bool allow_diag,
                  bool verify) {
  Circuit c = circuit_from_json(load_json(in));
  TranspileOptions opts;
  opts.residual = elide ? ResidualZ::Elide : ResidualZ::Emit;
  opts.allow_diag_oracle = allow_diag;
  Circuit native = transpile(c, opts);
  if (verify) {
    if (c.width > kMaxDenseQubits)
      throw std::invalid_argument("--verify needs width <= 12");
    if (elide)
      throw std::invalid_argument("--verify requires emitted residuals (omit --elide-residual)");
    double f = circuit_fidelity(c, native);
    std::printf("fidelity vs input: %.12f\n", f);
    if (std::abs(1.0 - f) > 1e-9) {
      std::fprintf(stderr, "verification FAILED\n");
      return 3;
    }
  }
  emit_json(circuit_to_json(native), out);
  std::fprintf(stderr, "native: ");
  print_gate_counts(native);
  return 0;
}

int cmd_simulate(const std::string& in, const std::string& profile,
                 const std::string& noise_file, bool use_shots, uint64_t shots, uint64_t seed,
                 const std::string& mode_name, int n_random, const std::string& marg,
                 bool select_then_pool, bool elide, bool verbose, const std::string& out) {
  Circuit c = circuit_from_json(load_json(in));
  NoiseSpec noise =
      noise_file.empty() ? noise_profile(profile) : noise_from_json(load_json(noise_file));
  SuppressMode mode = suppress_mode_from_name(mode_name);

  TranspileOptions topt;
  topt.residual = elide ? ResidualZ::Elide : ResidualZ::Emit;
  topt.allow_diag_oracle = true;

  Distribution result;
  double retention = 1.0;
  if (mode == SuppressMode::None && marg == "all") {
    Circuit native = transpile(c, topt);
    result = use_shots ? run_shots(native, noise, shots, seed) : run_exact(native, noise);
  } else {
    if (marg == "all")
      throw std::invalid_argument("--marginal all is only meaningful with --mode none");
    SuppressOptions sopt;
    sopt.exact = !use_shots;
    sopt.shots = shots;
    sopt.seed = seed;
    sopt.n_random = n_random;
    sopt.select_then_pool = select_then_pool;
    sopt.residual = topt.residual;
    if (verbose && (mode == SuppressMode::Rc || mode == SuppressMode::RcEd) && !use_shots) {
      RCEnsemble ens = randomize(c, n_random, derive_seed(seed, {0x7263ull}), topt);
      std::vector<Distribution> fulls;
      for (const Circuit& m : ens.members) fulls.push_back(run_exact(m, noise));
      Distribution agg = rc_aggregate(fulls);
      Distribution agg_data = marginal(agg, c.data_qubits());
      for (size_t i = 0; i < fulls.size(); ++i) {
        double t = tvd(marginal(fulls[i], c.data_qubits()), agg_data);
        std::fprintf(stderr, "member %zu: tvd vs ensemble mean = %.6g\n", i, t);
      }
    }
    SuppressResult r = suppress(c, noise, mode, sopt);
    result = std::move(r.data);
    retention = r.retention;
  }

  std::printf("mode %s, %s, retention %.6g\n", suppress_mode_name(mode),
              result.exact ? "exact" : ("shots=" + std::to_string(result.shots)).c_str(),
              retention);
  print_distribution(result, 10);
  if (!out.empty()) emit_json(distribution_to_json(result), out);
  return 0;
}

int cmd_experiment(const PresetOptions& opt, const std::string& out_dir) {
  PresetResult res = run_preset(opt);
  std::filesystem::create_directories(out_dir);
  auto written = write_preset_files(res, out_dir);
  for (const std::string& f : written) std::printf("wrote %s/%s\n", out_dir.c_str(), f.c_str());
  for (const CheckResult& c : res.checks)
    std::printf("check %-36s %s  (%s)\n", c.name.c_str(), c.pass ? "PASS" : "FAIL",
                c.detail.c_str());
  for (const auto& [k, v] : res.stats) std::printf("stat %s = %.6g\n", k.c_str(), v);
  return res.all_pass() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"grover-native: search circuits, native-gate transpilation, noisy "
               "simulation and error-suppression experiments"};
  app.require_subcommand(1);

  // oracle-enum
  auto* enum_cmd = app.add_subcommand("oracle-enum", "enumerate distinct CZ-product oracles");
  int en_n = 6, en_k = 1, en_sol = -1;
  bool en_allow_x = false, en_counts = false;
  std::string en_out;
  enum_cmd->add_option("--n", en_n, "data qubits");
  enum_cmd->add_option("--k", en_k, "exact number of CZ-type gates")->required();
  enum_cmd->add_flag("--allow-x", en_allow_x, "allow X-conjugated gate variants");
  enum_cmd->add_option("--solutions", en_sol, "keep only oracles with this many solutions");
  enum_cmd->add_flag("--counts-only", en_counts, "print the count, skip JSON");
  enum_cmd->add_option("--out", en_out, "output JSON path (default stdout)");

  // build
  auto* build_cmd = app.add_subcommand("build", "build a search circuit");
  int b_n = 6, b_iter = 1, b_rrand = 0, b_rpow2 = -1;
  bool b_noshare = false;
  std::vector<uint64_t> b_marked;
  std::string b_oracle, b_style = "rp_toffoli_3cx", b_out;
  uint64_t b_seed = 1;
  build_cmd->add_option("--n", b_n, "data qubits");
  build_cmd->add_option("--marked", b_marked, "marked indices")->delimiter(',');
  build_cmd->add_option("--oracle", b_oracle, "oracle JSON path");
  build_cmd->add_option("--random-r", b_rrand, "draw one random marked set of this size");
  build_cmd->add_option("--r-pow2", b_rpow2,
                        "benchmark oracle with r = 2^J solutions (one wide phase term)");
  build_cmd->add_option("--seed", b_seed, "seed for --random-r");
  build_cmd->add_option("--iterations", b_iter, "amplification rounds");
  build_cmd->add_option("--style", b_style, "toffoli_6cx | rp_toffoli_3cx");
  build_cmd->add_flag("--no-share", b_noshare, "per-use ancillas instead of shared");
  build_cmd->add_option("--out", b_out, "output circuit JSON (default stdout)");

  // transpile
  auto* tr_cmd = app.add_subcommand("transpile", "compile a circuit to {GPI, GPI2, MS}");
  std::string t_in, t_out;
  bool t_elide = false, t_allow_diag = false, t_verify = false;
  tr_cmd->add_option("--in", t_in, "input circuit JSON")->required();
  tr_cmd->add_option("--out", t_out, "output circuit JSON (default stdout)");
  tr_cmd->add_flag("--elide-residual", t_elide, "drop terminal residual Z rotations");
  tr_cmd->add_flag("--allow-diag", t_allow_diag, "pass diagonal oracles through as barriers");
  tr_cmd->add_flag("--verify", t_verify, "check unitary equivalence (width <= 12)");

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run a circuit under a noise model");
  std::string s_in, s_profile = "none", s_noise, s_mode = "none", s_marg = "data", s_out;
  bool s_shots_flag = false, s_stp = false, s_elide = false, s_verbose = false;
  uint64_t s_shots = 1000, s_seed = 1;
  int s_nrandom = 10;
  sim_cmd->add_option("--in", s_in, "input circuit JSON")->required();
  sim_cmd->add_option("--profile", s_profile, "none | or_only | or_relax | or_relax_stoch");
  sim_cmd->add_option("--noise", s_noise, "noise JSON path (overrides --profile)");
  sim_cmd->add_flag("--sample", s_shots_flag, "shot sampling instead of exact");
  sim_cmd->add_option("--shots", s_shots, "shot budget for --sample");
  sim_cmd->add_option("--seed", s_seed, "simulation seed");
  sim_cmd->add_option("--mode", s_mode, "none | rc | ed | rc+ed");
  sim_cmd->add_option("--rc", s_nrandom, "randomized-compiling ensemble size");
  sim_cmd->add_option("--marginal", s_marg, "data (default) or all qubits");
  sim_cmd->add_flag("--select-then-pool", s_stp,
                    "sampled rc+ed: condition members before averaging");
  sim_cmd->add_flag("--elide-residual", s_elide, "drop terminal residual Z rotations");
  sim_cmd->add_flag("--verbose", s_verbose, "per-member TVD against the ensemble mean");
  sim_cmd->add_option("--out", s_out, "write the distribution JSON here");

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "run a preset TVD study");
  PresetOptions popt;
  std::string e_out = ".", e_style = "rp_toffoli_3cx";
  exp_cmd->add_option("--preset", popt.preset, "fig1 | fig3 | fig4 | fig6")->required();
  exp_cmd->add_option("--seed", popt.seed, "master seed");
  exp_cmd->add_option("--oracles", popt.oracles, "oracles per point (0 = preset default)");
  exp_cmd->add_option("--r-grid", popt.r_grid, "solution counts")->delimiter(',');
  exp_cmd->add_option("--profiles", popt.profiles, "noise profiles")->delimiter(',');
  exp_cmd->add_option("--shots", popt.shots, "per-mode shot budget (sampled presets)");
  exp_cmd->add_option("--n-random", popt.n_random, "RC ensemble size");
  exp_cmd->add_flag("--select-then-pool", popt.select_then_pool,
                    "sampled rc+ed: condition members before averaging");
  exp_cmd->add_option("--threads", popt.threads, "worker threads");
  exp_cmd->add_option("--style", e_style, "toffoli_6cx | rp_toffoli_3cx");
  exp_cmd->add_option("--out", e_out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (enum_cmd->parsed())
      return cmd_oracle_enum(en_n, en_k, en_allow_x, en_sol, en_counts, en_out);
    if (build_cmd->parsed()) {
      OracleSpec oracle =
          oracle_from_options(b_n, b_marked, b_oracle, b_rrand, b_rpow2, b_seed);
      return cmd_build(b_n, oracle, b_iter, b_style, b_noshare, b_out);
    }
    if (tr_cmd->parsed())
      return cmd_transpile(t_in, t_out, t_elide, t_allow_diag, t_verify);
    if (sim_cmd->parsed())
      return cmd_simulate(s_in, s_profile, s_noise, s_shots_flag, s_shots, s_seed, s_mode,
                          s_nrandom, s_marg, s_stp, s_elide, s_verbose, s_out);
    if (exp_cmd->parsed()) {
      popt.style = mcz_style_from_name(e_style);
      return cmd_experiment(popt, e_out);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
