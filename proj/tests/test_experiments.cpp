#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <map>

#include "qgrove/qgrove.hpp"
#include "test_util.hpp"

using namespace qtest;

namespace {

Distribution dist_from(std::vector<double> p, int width) {
  Distribution d = Distribution::zeros(width, false);
  d.p = std::move(p);
  return d;
}

// Rebuild the circuit + runs behind one preset row, mirroring the documented
// seed layout, and return the row's tvd recomputed from scratch.
double recompute_fig3_row(const PresetResult& res, const TvdRow& row) {
  uint64_t count = (row.r == 1) ? std::min<uint64_t>(uint64_t(res.options.oracles), 64)
                                : uint64_t(res.options.oracles);
  auto specs =
      random_marked_sets(6, row.r, count, derive_seed(res.options.seed, {3ull, uint64_t(row.r)}));
  const OracleSpec& spec = specs[row.oracle_id];
  GroverConfig cfg;
  cfg.oracle = spec;
  cfg.style = res.options.style;
  Circuit c = build_grover(cfg);
  Distribution ideal = ideal_grover_distribution(6, spec.marked, 1);
  NoiseSpec noise = noise_profile(row.noise_profile);
  TranspileOptions topt;
  topt.allow_diag_oracle = true;
  if (row.mode == "none") {
    Circuit native = transpile(c, topt);
    return tvd(marginal(run_exact(native, noise), c.data_qubits()), ideal);
  }
  RCEnsemble ens = randomize(c, res.options.n_random, derive_seed(row.seed, {0x7263ull}), topt);
  std::vector<Distribution> fulls;
  for (const Circuit& m : ens.members) fulls.push_back(run_exact(m, noise));
  if (row.mode == "rc") return tvd(marginal(rc_aggregate(fulls), c.data_qubits()), ideal);
  EDResult e = post_select(rc_aggregate(fulls), c.ancilla_qubits());
  return tvd(e.data, ideal);  // rc_ed
}

std::vector<double> tvds_of(const PresetResult& res, const std::string& mode,
                            const std::string& panel, int r = -1) {
  std::vector<double> out;
  for (const TvdRow& row : res.rows) {
    if (row.mode != mode) continue;
    if (!panel.empty() && row.panel != panel) continue;
    if (r >= 0 && row.r != r) continue;
    out.push_back(row.tvd);
  }
  return out;
}

const CheckResult& check_named(const PresetResult& res, const std::string& name) {
  for (const CheckResult& c : res.checks)
    if (c.name == name) return c;
  throw std::runtime_error("missing check: " + name);
}

double stat_named(const PresetResult& res, const std::string& name) {
  for (const auto& [k, v] : res.stats)
    if (k == name) return v;
  throw std::runtime_error("missing stat: " + name);
}

}  // namespace

TEST_CASE("tvd measures total variation distance") {
  Distribution a = dist_from({1.0, 0.0, 0.0, 0.0}, 2);
  Distribution b = dist_from({0.0, 1.0, 0.0, 0.0}, 2);
  Distribution u = dist_from({0.25, 0.25, 0.25, 0.25}, 2);
  REQUIRE(tvd(a, a) == 0.0);
  REQUIRE(tvd(a, b) == 1.0);
  REQUIRE_THAT(tvd(a, u), Catch::Matchers::WithinAbs(0.75, 1e-15));
  REQUIRE(tvd(a, u) == tvd(u, a));
  REQUIRE(tvd(a, b) <= tvd(a, u) + tvd(u, b) + 1e-15);
  Distribution narrow = dist_from({0.5, 0.5}, 1);
  REQUIRE_THROWS_AS(tvd(a, narrow), std::invalid_argument);
}

TEST_CASE("improvement factor is the baseline-over-mode tvd ratio") {
  REQUIRE(improvement_factor(0.75, 0.5) == 1.5);
  REQUIRE(improvement_factor(0.07, 0.07) == 1.0);
  REQUIRE(std::isinf(improvement_factor(0.3, 0.0)));
  REQUIRE(improvement_factor(0.3, 0.0) > 0);
  REQUIRE(improvement_factor(0.0, 0.2) == 0.0);
  REQUIRE_THROWS_AS(improvement_factor(-0.1, 0.2), std::invalid_argument);
  REQUIRE_THROWS_AS(improvement_factor(0.1, -0.2), std::invalid_argument);
}

TEST_CASE("normal fit returns maximum-likelihood mean and stddev") {
  REQUIRE_THROWS_AS(normal_fit({}), std::invalid_argument);
  REQUIRE_THROWS_AS(normal_fit({1.0}), std::invalid_argument);
  NormalFit c = normal_fit({0.25, 0.25, 0.25});
  REQUIRE(c.mean == 0.25);
  REQUIRE(c.stddev == 0.0);
  REQUIRE(c.n == 3);
  NormalFit f = normal_fit({0.0, 1.0});
  REQUIRE(f.mean == 0.5);
  REQUIRE(f.stddev == 0.5);

  Rng rng(2024);
  std::vector<double> xs(10000);
  for (double& x : xs) x = 3.0 + 0.25 * rng.normal();
  NormalFit g = normal_fit(xs);
  REQUIRE_THAT(g.mean, Catch::Matchers::WithinAbs(3.0, 0.25 * 0.04));
  REQUIRE_THAT(g.stddev, Catch::Matchers::WithinRel(0.25, 0.05));
}

TEST_CASE("summary statistics follow population conventions") {
  std::vector<double> xs{1.0, 2.0, 3.0, 4.0};
  REQUIRE(mean_of(xs) == 2.5);
  REQUIRE(variance_of(xs) == 1.25);  // 1/n, not 1/(n-1)
  REQUIRE(stddev_of(xs) == std::sqrt(1.25));
  REQUIRE(mean_of({}) == 0.0);
  REQUIRE(variance_of({}) == 0.0);

  std::vector<double> ys{2.0, 4.0, 6.0, 8.0};
  REQUIRE_THAT(correlation(xs, ys), Catch::Matchers::WithinAbs(1.0, 1e-12));
  std::vector<double> neg{8.0, 6.0, 4.0, 2.0};
  REQUIRE_THAT(correlation(xs, neg), Catch::Matchers::WithinAbs(-1.0, 1e-12));
  REQUIRE(correlation(xs, {5.0, 5.0, 5.0, 5.0}) == 0.0);  // degenerate -> 0
  REQUIRE_THROWS_AS(correlation(xs, {1.0, 2.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(correlation({1.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("csv doubles round-trip at full precision") {
  for (double x : {0.1, 1.0 / 3.0, 2.0 / 7.0, 1e-17, 6.02214076e23, -0.0,
                   0.12345678901234567}) {
    std::string s = csv_double(x);
    REQUIRE(std::strtod(s.c_str(), nullptr) == x);
  }
  REQUIRE(csv_double(std::numeric_limits<double>::infinity()) == "inf");
  REQUIRE(csv_double(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("identical preset options give byte-identical csv output") {
  PresetOptions o;
  o.preset = "fig3";
  o.seed = 11;
  o.oracles = 5;
  o.r_grid = {1, 2};
  PresetResult a = run_preset(o);
  PresetResult b = run_preset(o);
  auto fa = preset_csv_files(a);
  auto fb = preset_csv_files(b);
  REQUIRE(fa.size() == fb.size());
  for (size_t i = 0; i < fa.size(); ++i) {
    REQUIRE(fa[i].first == fb[i].first);
    REQUIRE(fa[i].second == fb[i].second);
  }
  REQUIRE(preset_manifest_json(a, fa) == preset_manifest_json(b, fb));

  // Worker count must not leak into the result: rows land at fixed offsets.
  PresetOptions o3 = o;
  o3.threads = 3;
  PresetResult c = run_preset(o3);
  REQUIRE(c.rows.size() == a.rows.size());
  auto fc = preset_csv_files(c);
  for (size_t i = 0; i < fa.size(); ++i) REQUIRE(fa[i].second == fc[i].second);
}

TEST_CASE("preset rows reproduce independently from the recorded seed") {
  PresetOptions o;
  o.preset = "fig3";
  o.seed = 77;
  o.oracles = 4;
  o.r_grid = {2};
  PresetResult res = run_preset(o);
  REQUIRE(res.rows.size() == 4 * 4);

  for (const TvdRow& row : res.rows) {
    uint64_t expect = derive_seed(
        o.seed, {3ull, uint64_t(row.r), row.oracle_id, fnv1a64(row.panel),
                 fnv1a64(row.noise_profile)});
    REQUIRE(row.seed == expect);
    REQUIRE(row.shots == 0);  // exact rows record no shot budget
  }
  for (const TvdRow& row : res.rows) {
    if (row.mode == "ed") continue;  // shares the plain run asserted via "none"
    REQUIRE(recompute_fig3_row(res, row) == row.tvd);
  }
}

TEST_CASE("sampled preset rows reproduce from the recorded seed and shots") {
  PresetOptions o;
  o.preset = "fig6";
  o.seed = 5;
  o.oracles = 2;
  o.shots = 80;
  PresetResult res = run_preset(o);
  REQUIRE(res.rows.size() == 2 * 4);

  auto stars = enumerate_cz_oracles(6, 3, false, 16);
  for (const TvdRow& row : res.rows) {
    if (row.mode != "none") continue;
    REQUIRE(row.shots == 80);
    const OracleSpec& spec = stars[row.oracle_id];
    GroverConfig cfg;
    cfg.oracle = spec;
    cfg.style = o.style;
    Circuit c = build_grover(cfg);
    TranspileOptions topt;
    topt.allow_diag_oracle = true;
    Circuit native = transpile(c, topt);
    Distribution full = run_shots(native, noise_profile(row.noise_profile), 80,
                                  derive_seed(row.seed, {0x5354ull, 0}));
    double t = tvd(marginal(full, c.data_qubits()),
                   ideal_grover_distribution(6, spec.marked, 1));
    REQUIRE(t == row.tvd);
  }
}

TEST_CASE("structured-oracle preset produces panel splits and spread stats") {
  PresetOptions o;
  o.preset = "fig1";
  o.seed = 9;
  o.oracles = 12;
  PresetResult res = run_preset(o);
  REQUIRE(res.rows.size() == 12 + 15 + 60 + 60);

  std::map<std::string, int> panel_counts;
  for (const TvdRow& row : res.rows) {
    panel_counts[row.panel]++;
    REQUIRE(row.mode == "none");
    REQUIRE(row.r == 16);  // every panel marks 16 of 64 states
    REQUIRE(row.noise_profile == "or_only");
    REQUIRE(row.retention == 1.0);
    REQUIRE(row.improvement == 1.0);
  }
  REQUIRE(panel_counts["random"] == 12);
  REQUIRE(panel_counts["cz1"] == 15);
  REQUIRE(panel_counts["cz2"] == 60);
  REQUIRE(panel_counts["cz3"] == 60);

  for (const char* panel : {"random", "cz1", "cz2", "cz3"}) {
    double want = stddev_of(tvds_of(res, "none", panel));
    REQUIRE(stat_named(res, std::string("std_") + panel) == want);
  }
  REQUIRE(check_named(res, "cz1_spread_lt_cz3").pass ==
          (stat_named(res, "std_cz1") < stat_named(res, "std_cz3")));

  auto files = preset_csv_files(res);
  REQUIRE(files.size() == 2);
  REQUIRE(files[0].first == "fig1_random.csv");
  REQUIRE(files[1].first == "fig1_classes.csv");
  auto lines_in = [](const std::string& text) {
    return std::count(text.begin(), text.end(), '\n');
  };
  REQUIRE(lines_in(files[0].second) == 1 + 12);
  REQUIRE(lines_in(files[1].second) == 1 + 135);
  const std::string header =
      "preset,panel,r,oracle_id,mode,noise_profile,tvd,retention,"
      "improvement_factor,shots,seed\n";
  REQUIRE(files[0].second.substr(0, header.size()) == header);
  REQUIRE(files[1].second.substr(0, header.size()) == header);
}

TEST_CASE("scaling-preset checks are computed from the recorded rows") {
  PresetOptions o;
  o.preset = "fig3";
  o.seed = 13;
  o.oracles = 8;
  o.r_grid = {1, 16};
  PresetResult res = run_preset(o);
  REQUIRE(res.rows.size() == (8 + 8) * 4);

  double m1 = mean_of(tvds_of(res, "none", "or_only", 1));
  double m16 = mean_of(tvds_of(res, "none", "or_only", 16));
  REQUIRE(stat_named(res, "mean_none_r1") == m1);
  REQUIRE(stat_named(res, "mean_none_r16") == m16);
  double ratio = m16 / m1;
  REQUIRE(check_named(res, "none_tvd_grows_with_r").pass == (ratio > 2.0 && ratio < 4.0));

  bool var_ok = true, rced_ok = true;
  for (int r : {1, 16}) {
    var_ok = var_ok && variance_of(tvds_of(res, "rc", "or_only", r)) <
                           variance_of(tvds_of(res, "none", "or_only", r));
    double mre = mean_of(tvds_of(res, "rc_ed", "or_only", r));
    rced_ok = rced_ok && mre <= mean_of(tvds_of(res, "none", "or_only", r)) &&
              mre <= mean_of(tvds_of(res, "rc", "or_only", r)) &&
              mre <= mean_of(tvds_of(res, "ed", "or_only", r));
  }
  REQUIRE(check_named(res, "rc_shrinks_oracle_variance").pass == var_ok);
  REQUIRE(check_named(res, "rc_ed_lowest_mean_tvd").pass == rced_ok);
}

TEST_CASE("correlation-preset checks are computed from the recorded rows") {
  PresetOptions o;
  o.preset = "fig4";
  o.seed = 17;
  o.oracles = 10;
  o.r_grid = {16};
  PresetResult res = run_preset(o);

  auto tn = tvds_of(res, "none", "or_only", 16);
  auto tr = tvds_of(res, "rc", "or_only", 16);
  auto te = tvds_of(res, "ed", "or_only", 16);
  REQUIRE(tn.size() == 10);
  double c_rc = correlation(tn, tr);
  std::vector<double> gain(tn.size());
  for (size_t i = 0; i < tn.size(); ++i) gain[i] = tn[i] - te[i];
  double c_ed = correlation(tn, gain);
  REQUIRE(stat_named(res, "corr_none_rc") == c_rc);
  REQUIRE(stat_named(res, "corr_none_ed_gain") == c_ed);
  REQUIRE(check_named(res, "rc_tvd_decorrelates_from_baseline").pass == (c_rc < 0.3));
  REQUIRE(check_named(res, "ed_gain_tracks_baseline_weakly").pass == (std::abs(c_ed) < 0.5));
}

TEST_CASE("sampled star preset reports improvement statistics") {
  PresetOptions o;
  o.preset = "fig6";
  o.seed = 3;
  o.oracles = 3;
  o.shots = 150;
  PresetResult res = run_preset(o);
  REQUIRE(res.rows.size() == 3 * 4);

  std::map<uint64_t, double> none_tvd;
  for (const TvdRow& row : res.rows)
    if (row.mode == "none") none_tvd[row.oracle_id] = row.tvd;
  for (const TvdRow& row : res.rows) {
    REQUIRE(row.shots == 150);
    REQUIRE(row.panel == "stars");
    REQUIRE(row.noise_profile == "or_relax_stoch");
    if (row.mode == "none") {
      REQUIRE(row.improvement == 1.0);
    } else {
      REQUIRE(row.improvement == improvement_factor(none_tvd[row.oracle_id], row.tvd));
    }
    if (row.mode == "ed" || row.mode == "rc_ed") {
      REQUIRE(row.retention > 0.0);
      REQUIRE(row.retention <= 1.0);
    }
  }

  for (const char* mode : {"rc", "ed", "rc_ed"}) {
    std::vector<double> imp;
    for (const TvdRow& row : res.rows)
      if (row.mode == mode && std::isfinite(row.improvement)) imp.push_back(row.improvement);
    NormalFit f = normal_fit(imp);
    REQUIRE(stat_named(res, std::string("improvement_") + mode + "_mean") == f.mean);
    REQUIRE(stat_named(res, std::string("improvement_") + mode + "_std") == f.stddev);
  }
  REQUIRE(check_named(res, "rc_ed_improves_on_average").pass ==
          (stat_named(res, "improvement_rc_ed_mean") > 1.0));
  REQUIRE(stat_named(res, "hardware_reference_rc") == 1.2);
  REQUIRE(stat_named(res, "hardware_reference_ed") == 1.5);
  REQUIRE(stat_named(res, "hardware_reference_rc_ed") == 1.9);
}

TEST_CASE("preset files land on disk with a self-consistent manifest") {
  PresetOptions o;
  o.preset = "fig3";
  o.seed = 23;
  o.oracles = 3;
  o.r_grid = {4};
  PresetResult res = run_preset(o);

  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "qgrove_test_preset_out";
  fs::create_directories(dir);
  auto written = write_preset_files(res, dir.string());
  REQUIRE(written.size() == 2);
  REQUIRE(written[0] == "fig3_or_only.csv");
  REQUIRE(written[1] == "fig3_manifest.json");

  std::string csv_text = read_text_file((dir / written[0]).string());
  auto files = preset_csv_files(res);
  REQUIRE(files.size() == 1);
  REQUIRE(csv_text == files[0].second);

  json man = json::parse(read_text_file((dir / written[1]).string()));
  REQUIRE(man["preset"] == "fig3");
  REQUIRE(man["seed"] == 23);
  REQUIRE(man["rows"] == res.rows.size());
  REQUIRE(man["mcz_style"] == "rp_toffoli_3cx");
  REQUIRE(man["file_hashes"]["fig3_or_only.csv"] == hex64(fnv1a64(csv_text)));
  REQUIRE(man["all_pass"] == res.all_pass());
  REQUIRE(man["checks"].size() == res.checks.size());
  for (size_t i = 0; i < res.checks.size(); ++i) {
    REQUIRE(man["checks"][i]["name"] == res.checks[i].name);
    REQUIRE(man["checks"][i]["pass"] == res.checks[i].pass);
  }
}

TEST_CASE("preset options are validated") {
  PresetOptions bad;
  bad.preset = "fig9";
  REQUIRE_THROWS_AS(run_preset(bad), std::invalid_argument);

  PresetOptions badr;
  badr.preset = "fig3";
  badr.oracles = 2;
  badr.r_grid = {0};
  REQUIRE_THROWS_AS(run_preset(badr), std::invalid_argument);

  PresetOptions toomany;
  toomany.preset = "fig6";
  toomany.oracles = 61;
  REQUIRE_THROWS_AS(run_preset(toomany), std::invalid_argument);
}
