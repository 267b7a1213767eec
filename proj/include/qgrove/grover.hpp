#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qgrove/circuit.hpp"
#include "qgrove/distribution.hpp"
#include "qgrove/mcz.hpp"
#include "qgrove/oracle.hpp"

namespace qgrove {

struct GroverConfig {
  int n_data = 6;
  OracleSpec oracle;
  int iterations = 1;
  MczStyle style = MczStyle::RP_TOFFOLI_3CX;
  bool share_ancillas = true;
  // 0 = auto; otherwise the circuit must fit within this many qubits.
  int max_width = 0;
};

namespace detail {

// Oracle block gates over the data qubits, with multi-qubit terms realized by
// the AND-ladder on the given ancilla wires.
inline void append_oracle_block(Circuit& c, const OracleSpec& s,
                                const std::vector<int>& ancillas, MczStyle style) {
  if (s.realization == OracleRealization::IdealDiagonal) {
    std::vector<int> data;
    for (int q = 0; q < s.n_data; ++q) data.push_back(q);
    c.push(Gate::diag_oracle(data, s.marked));
    return;
  }
  for (const PhaseTerm& t : s.terms) {
    // An x_mask bit flips the qubit's sense: conjugate the Z term by X there.
    std::vector<int> flips;
    for (int q : t.qubits)
      if ((t.x_mask >> q) & 1ull) flips.push_back(q);
    for (int q : flips) c.push(Gate::x(q));
    if (t.qubits.size() == 2) {
      c.push(Gate::cz(t.qubits[0], t.qubits[1]));
    } else {
      std::vector<int> controls(t.qubits.begin(), t.qubits.end() - 1);
      int target = t.qubits.back();
      std::vector<int> anc(ancillas.begin(),
                           ancillas.begin() + (static_cast<long>(t.qubits.size()) - 2));
      for (Gate& g : mcz_ladder_gates(controls, target, anc, style)) c.push(std::move(g));
    }
    for (int q : flips) c.push(Gate::x(q));
  }
}

}  // namespace detail

// Ancilla wires needed by the diffusion block's C(n-1)Z ladder.
inline int qaa_ancilla_demand(int n_data) { return n_data >= 3 ? n_data - 2 : 0; }

// Full Grover circuit: H init layer on data, then per iteration the oracle
// block followed by the diffusion block (H, X layers around a decomposed
// C(n-1)Z). Ancillas sit above the data qubits, start in |0> and return to
// |0> under noiseless execution.
inline Circuit build_grover(const GroverConfig& cfg) {
  if (cfg.n_data < 2) throw std::invalid_argument("build_grover: n_data >= 2");
  if (cfg.iterations < 1) throw std::invalid_argument("build_grover: iterations >= 1");
  if (cfg.oracle.n_data != cfg.n_data)
    throw std::invalid_argument("build_grover: oracle width mismatch");
  validate_oracle(cfg.oracle);

  int n = cfg.n_data;
  int oracle_demand = oracle_ancilla_demand(cfg.oracle);
  int qaa_demand = qaa_ancilla_demand(n);
  int n_anc = cfg.share_ancillas ? std::max(oracle_demand, qaa_demand)
                                 : oracle_demand + qaa_demand;
  int width = n + n_anc;
  if (cfg.max_width > 0 && width > cfg.max_width)
    throw std::invalid_argument("build_grover: ancilla budget exceeded");

  Circuit c(width);
  for (int q = n; q < width; ++q) c.roles[q] = Role::Ancilla;

  std::vector<int> oracle_anc, qaa_anc;
  for (int i = 0; i < oracle_demand; ++i) oracle_anc.push_back(n + i);
  int qaa_base = cfg.share_ancillas ? n : n + oracle_demand;
  for (int i = 0; i < qaa_demand; ++i) qaa_anc.push_back(qaa_base + i);

  for (int q = 0; q < n; ++q) c.push(Gate::h(q));
  for (int it = 0; it < cfg.iterations; ++it) {
    detail::append_oracle_block(c, cfg.oracle, oracle_anc, cfg.style);
    for (int q = 0; q < n; ++q) c.push(Gate::h(q));
    for (int q = 0; q < n; ++q) c.push(Gate::x(q));
    std::vector<int> controls;
    for (int q = 0; q < n - 1; ++q) controls.push_back(q);
    for (Gate& g : mcz_ladder_gates(controls, n - 1, qaa_anc, cfg.style)) c.push(std::move(g));
    for (int q = 0; q < n; ++q) c.push(Gate::x(q));
    for (int q = 0; q < n; ++q) c.push(Gate::h(q));
  }
  return c;
}

// Closed-form ideal output distribution over the data qubits after the given
// number of iterations: marked amplitude sin((2j+1)t)/sqrt(r), unmarked
// cos((2j+1)t)/sqrt(N-r), t = arcsin(sqrt(r/N)).
inline Distribution ideal_grover_distribution(int n_data, const std::vector<uint64_t>& marked,
                                              int iterations = 1) {
  uint64_t dim = 1ull << n_data;
  double r = static_cast<double>(marked.size());
  if (r < 1 || r >= static_cast<double>(dim))
    throw std::invalid_argument("ideal_grover_distribution: bad marked size");
  double t = std::asin(std::sqrt(r / static_cast<double>(dim)));
  double a = 2 * iterations + 1;
  double pm = std::pow(std::sin(a * t), 2) / r;
  double pu = std::pow(std::cos(a * t), 2) / (static_cast<double>(dim) - r);
  Distribution d = Distribution::zeros(n_data);
  for (uint64_t x = 0; x < dim; ++x) d.p[x] = pu;
  for (uint64_t m : marked) d.p[m] = pm;
  return d;
}

}  // namespace qgrove
