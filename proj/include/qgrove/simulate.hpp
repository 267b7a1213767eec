#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qgrove/circuit.hpp"
#include "qgrove/common.hpp"
#include "qgrove/density.hpp"
#include "qgrove/distribution.hpp"
#include "qgrove/kernels.hpp"
#include "qgrove/noise.hpp"
#include "qgrove/rng.hpp"
#include "qgrove/unitary.hpp"

namespace qgrove {

namespace detail {

// Flag table of a DIAG_ORACLE gate, optionally overridden by an injected
// marked set (local values over the gate's qubit list).
inline std::vector<uint8_t> diag_flags(const Gate& g, const std::vector<uint64_t>* ov) {
  if (!ov) return oracle_flag_table(g);
  std::vector<uint8_t> f(1ull << g.qubits.size(), 0);
  for (uint64_t v : *ov) {
    if (v >= f.size())
      throw std::invalid_argument("oracle override: marked index out of range");
    f[v] = 1;
  }
  return f;
}

inline std::vector<int8_t> density_signs_from_flags(int width, const Gate& g,
                                                    const std::vector<uint8_t>& flags) {
  std::vector<int8_t> s(1ull << width, 1);
  for (uint64_t i = 0; i < s.size(); ++i)
    if (flags[oracle_local_value(i, g.qubits)]) s[i] = -1;
  return s;
}

inline std::vector<int8_t> density_signs_all_ones_mask(int width, const Gate& g) {
  uint64_t mask = 0;
  for (int q : g.qubits) mask |= 1ull << q;
  std::vector<int8_t> s(1ull << width, 1);
  for (uint64_t i = 0; i < s.size(); ++i)
    if ((i & mask) == mask) s[i] = -1;
  return s;
}

inline bool has_two_qubit_native(const Circuit& c) {
  for (const Gate& g : c.gates)
    if (g.kind == GateKind::MS || g.kind == GateKind::XX) return true;
  return false;
}

}  // namespace detail

// Exact simulation needs the density backend only when a non-unitary channel
// is active: relaxation, or stochastic depolarizing with a 2q native gate to
// attach to. Pure coherent noise keeps the state pure.
inline bool needs_density_backend(const Circuit& c, const NoiseSpec& n) {
  if (n.en_relaxation) return true;
  return n.en_stochastic && n.p_stoch2 > 0 && detail::has_two_qubit_native(c);
}

// Symmetric independent readout bit flips, applied classically to an exact
// outcome distribution.
inline void apply_readout_mix(std::vector<double>& probs, int width, double p) {
  if (p <= 0) return;
  uint64_t dim = 1ull << width;
  for (int q = 0; q < width; ++q) {
    uint64_t B = 1ull << q;
    for (uint64_t i = 0; i < dim; ++i) {
      if (i & B) continue;
      double a = probs[i], b = probs[i | B];
      probs[i] = (1 - p) * a + p * b;
      probs[i | B] = p * a + (1 - p) * b;
    }
  }
}

namespace detail {

inline Distribution run_exact_statevector(const Circuit& c, const NoiseSpec& noise,
                                          const std::vector<uint64_t>* oracle_ov) {
  uint64_t dim = 1ull << c.width;
  std::vector<cplx> st(dim, cplx(0, 0));
  st[0] = cplx(1, 0);
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::DIAG_ORACLE) {
      auto flags = diag_flags(g, oracle_ov);
      apply_diag_oracle(st.data(), c.width, g, flags);
    } else if (noise.en_over_rotation && is_noisy_kind(g.kind)) {
      apply_local_unitary(st.data(), c.width, noisy_gate_matrix(g, noise), g.qubits);
    } else {
      apply_gate_state(st.data(), c.width, g);
    }
  }
  Distribution d = Distribution::zeros(c.width, true);
  for (uint64_t i = 0; i < dim; ++i) d.p[i] = std::norm(st[i]);
  if (noise.en_readout) apply_readout_mix(d.p, c.width, noise.p_readout);
  return d;
}

inline Distribution run_exact_density(const Circuit& c, const NoiseSpec& noise,
                                      const std::vector<uint64_t>* oracle_ov) {
  if (c.width > 11)
    throw std::invalid_argument("run_exact: circuit too wide for the density backend");
  Density rho(c.width);
  std::vector<double> pending(c.width, 0.0);
  const bool relax = noise.en_relaxation;
  const bool stoch = noise.en_stochastic && noise.p_stoch2 > 0;

  auto flush_q = [&](int q) {
    if (relax && pending[q] > 0) {
      density_relax_1q(rho, q, relax_params(noise, pending[q]));
      pending[q] = 0;
    }
  };

  for (const Gate& g : c.gates) {
    // Diagonal +-1 gates commute with the relaxation channel, so pending
    // durations carry across them untouched.
    if (g.kind == GateKind::DIAG_ORACLE) {
      auto flags = diag_flags(g, oracle_ov);
      density_apply_signs(rho, density_signs_from_flags(c.width, g, flags));
      continue;
    }
    if (g.kind == GateKind::MCZ || g.kind == GateKind::CZ) {
      density_apply_signs(rho, density_signs_all_ones_mask(c.width, g));
      continue;
    }
    if (g.arity() > 2)
      throw std::invalid_argument("run_exact: expand 3q gates before density simulation");

    Mat u = noisy_gate_matrix(g, noise);
    if (g.arity() == 1) {
      int q = g.qubits[0];
      RelaxParams rp = relax ? relax_params(noise, pending[q]) : RelaxParams{};
      density_apply_1q(rho, Mat2(u), q, rp);
      pending[q] = 0;
    } else {
      int qa = g.qubits[0], qb = g.qubits[1];
      RelaxParams rpa = relax ? relax_params(noise, pending[qa]) : RelaxParams{};
      RelaxParams rpb = relax ? relax_params(noise, pending[qb]) : RelaxParams{};
      density_apply_2q(rho, Mat4(u), qa, qb, rpa, rpb);
      pending[qa] = pending[qb] = 0;
    }

    double dur = gate_duration(g.kind, noise);
    if (relax && dur > 0)
      for (int q = 0; q < c.width; ++q) pending[q] += dur;

    if (stoch && (g.kind == GateKind::MS || g.kind == GateKind::XX)) {
      // Depolarizing does not commute with relaxation on the same qubits:
      // settle the gate's own duration on its qubits before the kick.
      flush_q(g.qubits[0]);
      flush_q(g.qubits[1]);
      density_depol_2q(rho, g.qubits[0], g.qubits[1], noise.p_stoch2);
    }
  }
  for (int q = 0; q < c.width; ++q) flush_q(q);

  Distribution d = Distribution::zeros(c.width, true);
  d.p = rho.probs();
  for (double& x : d.p)
    if (x < 0 && x > -1e-12) x = 0;  // scrub numerical dust on the diagonal
  if (noise.en_readout) apply_readout_mix(d.p, c.width, noise.p_readout);
  return d;
}

}  // namespace detail

// Exact outcome distribution under the noise model. Backend is chosen
// automatically: statevector while the evolution stays pure, density matrix
// once relaxation or depolarizing channels are active.
inline Distribution run_exact(const Circuit& c, const NoiseSpec& noise,
                              const std::vector<uint64_t>* oracle_override = nullptr) {
  validate_circuit(c);
  validate_noise(noise);
  if (c.width > 24) throw std::invalid_argument("run_exact: circuit too wide");
  if (needs_density_backend(c, noise))
    return detail::run_exact_density(c, noise, oracle_override);
  return detail::run_exact_statevector(c, noise, oracle_override);
}

namespace detail {

// One quantum-trajectory relaxation flush on qubit q. Two coins in fixed
// order: amplitude-damping jump, then dephasing flip.
inline void traj_relax(std::vector<cplx>& st, int q, const RelaxParams& rp, Rng& rng) {
  if (rp.p == 0.0 && rp.q == 0.0) return;
  uint64_t B = 1ull << q, dim = st.size();
  double w1 = 0;
  for (uint64_t i = 0; i < dim; ++i)
    if (i & B) w1 += std::norm(st[i]);
  double pj = rp.p * w1;
  if (rng.uniform() < pj) {
    double inv = 1.0 / std::sqrt(w1);
    for (uint64_t i = 0; i < dim; ++i) {
      if (i & B) continue;
      st[i] = st[i | B] * inv;
      st[i | B] = cplx(0, 0);
    }
  } else {
    double s0 = 1.0 / std::sqrt(1.0 - pj);
    double s1 = std::sqrt(1.0 - rp.p) * s0;
    for (uint64_t i = 0; i < dim; ++i) st[i] *= (i & B) ? s1 : s0;
  }
  if (rng.uniform() < rp.q) {
    for (uint64_t i = 0; i < dim; ++i)
      if (i & B) st[i] = -st[i];
  }
}

struct PreparedGate {
  enum class Mode : uint8_t { Diag, Local, Generic } mode = Mode::Generic;
  const Gate* g = nullptr;
  Mat m;                        // Local: possibly over-rotated dense matrix
  std::vector<uint8_t> flags;   // Diag
  double dur = 0;
  bool stoch_kick = false;
};

inline std::vector<PreparedGate> prepare_gates(const Circuit& c, const NoiseSpec& noise,
                                               const std::vector<uint64_t>* oracle_ov) {
  std::vector<PreparedGate> out;
  out.reserve(c.gates.size());
  for (const Gate& g : c.gates) {
    PreparedGate p;
    p.g = &g;
    if (g.kind == GateKind::DIAG_ORACLE) {
      p.mode = PreparedGate::Mode::Diag;
      p.flags = diag_flags(g, oracle_ov);
    } else if (is_noisy_kind(g.kind)) {
      p.mode = PreparedGate::Mode::Local;
      p.m = noise.en_over_rotation ? noisy_gate_matrix(g, noise) : gate_local_matrix(g);
      p.dur = gate_duration(g.kind, noise);
      p.stoch_kick = noise.en_stochastic && noise.p_stoch2 > 0 &&
                     (g.kind == GateKind::MS || g.kind == GateKind::XX);
    } else {
      p.mode = PreparedGate::Mode::Generic;
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

// Shot-sampled simulation via quantum trajectories. Per shot and gate:
// pending relaxation flushes on the gate's qubits (jump/no-jump plus
// dephasing coins), the unitary applies, durations accrue on every qubit,
// and 2q native gates may fire a uniform depolarizing Pauli pair. Readout
// errors flip sampled bits classically. Deterministic in (circuit, noise,
// shots, seed).
inline Distribution run_shots(const Circuit& c, const NoiseSpec& noise, uint64_t shots,
                              uint64_t seed,
                              const std::vector<uint64_t>* oracle_override = nullptr) {
  validate_circuit(c);
  validate_noise(noise);
  if (c.width > 24) throw std::invalid_argument("run_shots: circuit too wide");
  if (shots == 0) throw std::invalid_argument("run_shots: shots must be positive");

  const uint64_t dim = 1ull << c.width;
  auto prepared = detail::prepare_gates(c, noise, oracle_override);
  const bool relax = noise.en_relaxation;
  Rng rng(seed);
  std::vector<uint64_t> counts(dim, 0);
  std::vector<cplx> st(dim);
  std::vector<double> pending(c.width, 0.0);

  static const Mat2 kPauli[4] = {Mat2::Identity(), Mat2(x_mat()), Mat2(y_mat()),
                                 Mat2(z_mat())};

  for (uint64_t shot = 0; shot < shots; ++shot) {
    std::fill(st.begin(), st.end(), cplx(0, 0));
    st[0] = cplx(1, 0);
    std::fill(pending.begin(), pending.end(), 0.0);

    for (const auto& p : prepared) {
      const Gate& g = *p.g;
      if (p.mode == detail::PreparedGate::Mode::Diag) {
        apply_diag_oracle(st.data(), c.width, g, p.flags);
        continue;
      }
      if (relax)
        for (int q : g.qubits) {
          detail::traj_relax(st, q, relax_params(noise, pending[q]), rng);
          pending[q] = 0;
        }
      if (p.mode == detail::PreparedGate::Mode::Local)
        apply_local_unitary(st.data(), c.width, p.m, g.qubits);
      else
        apply_gate_state(st.data(), c.width, g);
      if (relax && p.dur > 0)
        for (int q = 0; q < c.width; ++q) pending[q] += p.dur;
      if (p.stoch_kick) {
        if (relax)
          for (int q : g.qubits) {
            detail::traj_relax(st, q, relax_params(noise, pending[q]), rng);
            pending[q] = 0;
          }
        if (rng.uniform() < noise.p_stoch2) {
          uint64_t k = 1 + rng.below(15);
          int pa = static_cast<int>(k >> 2), pb = static_cast<int>(k & 3);
          if (pa) apply_local_unitary(st.data(), c.width, kPauli[pa], {g.qubits[0]});
          if (pb) apply_local_unitary(st.data(), c.width, kPauli[pb], {g.qubits[1]});
        }
      }
    }
    if (relax)
      for (int q = 0; q < c.width; ++q) {
        detail::traj_relax(st, q, relax_params(noise, pending[q]), rng);
        pending[q] = 0;
      }

    double total = 0;
    for (uint64_t i = 0; i < dim; ++i) total += std::norm(st[i]);
    double x = rng.uniform() * total;
    uint64_t idx = dim - 1;
    double acc = 0;
    for (uint64_t i = 0; i < dim; ++i) {
      acc += std::norm(st[i]);
      if (x < acc) {
        idx = i;
        break;
      }
    }
    if (noise.en_readout && noise.p_readout > 0)
      for (int q = 0; q < c.width; ++q)
        if (rng.uniform() < noise.p_readout) idx ^= 1ull << q;
    counts[idx]++;
  }

  Distribution d = Distribution::zeros(c.width, false);
  d.shots = shots;
  for (uint64_t i = 0; i < dim; ++i) d.p[i] = double(counts[i]) / double(shots);
  return d;
}

}  // namespace qgrove
