#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgrove/circuit.hpp"
#include "qgrove/distribution.hpp"
#include "qgrove/noise.hpp"
#include "qgrove/rng.hpp"
#include "qgrove/simulate.hpp"
#include "qgrove/transpile.hpp"
#include "qgrove/twirl.hpp"

namespace qgrove {

// Error-suppression strategies layered on a plain run:
//  - Rc averages the outcome distribution over a randomized-compiling
//    ensemble (coherent errors twirled toward stochastic ones);
//  - Ed post-selects on every ancilla reading 0 (the ancilla-returning
//    circuit structure flags errors that leave ancillas excited);
//  - RcEd composes both.
enum class SuppressMode : uint8_t { None, Rc, Ed, RcEd };

inline const char* suppress_mode_name(SuppressMode m) {
  switch (m) {
    case SuppressMode::None: return "none";
    case SuppressMode::Rc: return "rc";
    case SuppressMode::Ed: return "ed";
    default: return "rc_ed";
  }
}

inline SuppressMode suppress_mode_from_name(const std::string& s) {
  if (s == "none") return SuppressMode::None;
  if (s == "rc") return SuppressMode::Rc;
  if (s == "ed") return SuppressMode::Ed;
  if (s == "rc_ed" || s == "rc+ed") return SuppressMode::RcEd;
  throw std::invalid_argument("unknown suppression mode: " + s);
}

struct EDResult {
  Distribution data;      // conditioned distribution over the kept qubits
  double retention = 1.0;  // probability mass (or shot fraction) kept
};

// Condition a full-register distribution on all listed ancillas reading 0,
// renormalized over the remaining qubits (ascending order).
inline EDResult post_select(const Distribution& full, const std::vector<int>& ancillas) {
  validate_distribution(full);
  if (ancillas.empty()) throw std::invalid_argument("post_select: no ancillas given");
  uint64_t amask = 0;
  for (int q : ancillas) {
    if (q < 0 || q >= full.width) throw std::invalid_argument("post_select: qubit range");
    if (amask & (1ull << q)) throw std::invalid_argument("post_select: duplicate qubit");
    amask |= 1ull << q;
  }
  std::vector<int> keep;
  for (int q = 0; q < full.width; ++q)
    if (!(amask & (1ull << q))) keep.push_back(q);

  double kept = 0;
  for (uint64_t i = 0; i < full.p.size(); ++i)
    if ((i & amask) == 0) kept += full.p[i];
  if (kept <= 0)
    throw std::runtime_error("post_select: all outcomes discarded");

  EDResult r;
  r.retention = kept;
  r.data = Distribution::zeros(int(keep.size()), full.exact);
  for (uint64_t y = 0; y < r.data.p.size(); ++y) {
    uint64_t idx = 0;
    for (size_t j = 0; j < keep.size(); ++j)
      if ((y >> j) & 1ull) idx |= 1ull << keep[j];
    r.data.p[y] = full.p[idx] / kept;
  }
  r.data.retention = kept;
  if (!full.exact) r.data.shots = uint64_t(std::llround(double(full.shots) * kept));
  return r;
}

// Average member distributions: plain mean for exact members, shot-weighted
// pooling for sampled ones.
inline Distribution rc_aggregate(const std::vector<Distribution>& members) {
  if (members.empty()) throw std::invalid_argument("rc_aggregate: empty ensemble");
  const Distribution& first = members[0];
  for (const Distribution& d : members)
    if (d.width != first.width || d.exact != first.exact)
      throw std::invalid_argument("rc_aggregate: mismatched members");
  Distribution out = Distribution::zeros(first.width, first.exact);
  if (first.exact) {
    for (const Distribution& d : members)
      for (size_t i = 0; i < out.p.size(); ++i) out.p[i] += d.p[i];
    for (double& x : out.p) x /= double(members.size());
  } else {
    uint64_t total = 0;
    for (const Distribution& d : members) total += d.shots;
    if (total == 0) throw std::invalid_argument("rc_aggregate: zero total shots");
    for (const Distribution& d : members)
      for (size_t i = 0; i < out.p.size(); ++i) out.p[i] += d.p[i] * double(d.shots);
    for (double& x : out.p) x /= double(total);
    out.shots = total;
  }
  return out;
}

struct SuppressOptions {
  bool exact = true;
  uint64_t shots = 1000;   // total budget, split across RC members
  uint64_t seed = 0;
  int n_random = 10;
  // Sampled RcEd: default pools member histograms then conditions once;
  // this flag instead conditions each member and averages the conditionals.
  bool select_then_pool = false;
  ResidualZ residual = ResidualZ::Emit;
};

struct SuppressResult {
  Distribution data;       // distribution over the data qubits
  double retention = 1.0;  // 1 unless an Ed mode ran
  int n_members = 1;
};

namespace detail {

inline Distribution run_one(const Circuit& native, const NoiseSpec& noise,
                            const SuppressOptions& opt, uint64_t shots, uint64_t run_tag) {
  if (opt.exact) return run_exact(native, noise);
  return run_shots(native, noise, shots, derive_seed(opt.seed, {0x5354ull, run_tag}));
}

}  // namespace detail

// Compile, run and reduce one benchmark circuit under the chosen mode.
// Ancilla-free circuits support None/Rc only. RC members are compiled fresh
// from derive_seed(seed, {i}); sampled runs split the shot budget evenly
// across members (first members take the remainder).
inline SuppressResult suppress(const Circuit& c, const NoiseSpec& noise, SuppressMode mode,
                               const SuppressOptions& opt) {
  validate_noise(noise);
  std::vector<int> data = c.data_qubits();
  std::vector<int> anc = c.ancilla_qubits();
  bool ed = (mode == SuppressMode::Ed || mode == SuppressMode::RcEd);
  bool rc = (mode == SuppressMode::Rc || mode == SuppressMode::RcEd);
  if (ed && anc.empty())
    throw std::invalid_argument("suppress: error-detection modes need ancilla roles");

  TranspileOptions topt;
  topt.residual = opt.residual;
  topt.allow_diag_oracle = true;

  SuppressResult res;
  if (!rc) {
    Circuit native = transpile(c, topt);
    Distribution full = detail::run_one(native, noise, opt, opt.shots, 0);
    if (ed) {
      EDResult e = post_select(full, anc);
      res.data = std::move(e.data);
      res.retention = e.retention;
    } else {
      res.data = marginal(full, data);
    }
    return res;
  }

  RCEnsemble ens = randomize(c, opt.n_random, derive_seed(opt.seed, {0x7263ull}), topt);
  res.n_members = opt.n_random;
  std::vector<Distribution> fulls;
  fulls.reserve(ens.members.size());
  uint64_t base_shots = opt.exact ? 0 : opt.shots / ens.members.size();
  uint64_t rem = opt.exact ? 0 : opt.shots % ens.members.size();
  for (size_t i = 0; i < ens.members.size(); ++i) {
    uint64_t s = base_shots + (i < rem ? 1 : 0);
    fulls.push_back(detail::run_one(ens.members[i], noise, opt, s, i + 1));
  }

  if (!ed) {
    res.data = marginal(rc_aggregate(fulls), data);
    return res;
  }

  if (opt.exact || !opt.select_then_pool) {
    // Average (or pool) over members first, then condition once.
    EDResult e = post_select(rc_aggregate(fulls), anc);
    res.data = std::move(e.data);
    res.retention = e.retention;
    return res;
  }

  // Sampled select-then-pool: condition each member, average the
  // conditionals unweighted; retention is the pooled kept fraction.
  Distribution acc = Distribution::zeros(int(data.size()), false);
  uint64_t kept_shots = 0, total_shots = 0;
  int used = 0;
  for (const Distribution& full : fulls) {
    total_shots += full.shots;
    EDResult e;
    try {
      e = post_select(full, anc);
    } catch (const std::runtime_error&) {
      continue;  // member kept nothing; it contributes no conditional
    }
    for (size_t i = 0; i < acc.p.size(); ++i) acc.p[i] += e.data.p[i];
    kept_shots += e.data.shots;
    ++used;
  }
  if (used == 0) throw std::runtime_error("post_select: all outcomes discarded");
  for (double& x : acc.p) x /= double(used);
  acc.shots = kept_shots;
  res.data = std::move(acc);
  res.retention = total_shots ? double(kept_shots) / double(total_shots) : 0.0;
  res.data.retention = res.retention;
  return res;
}

}  // namespace qgrove
