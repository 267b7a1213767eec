#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "qgrove/circuit.hpp"
#include "qgrove/common.hpp"
#include "qgrove/euler.hpp"
#include "qgrove/gates.hpp"
#include "qgrove/mcz.hpp"
#include "qgrove/unitary.hpp"

namespace qgrove {

// Terminal residual-Z handling: Emit realizes each leftover Z rotation with a
// GPI pair (keeps the full unitary, required when every qubit is measured);
// Elide drops them (measurement-distribution preserving, fewer gates).
enum class ResidualZ : uint8_t { Emit, Elide };

struct TranspileOptions {
  ResidualZ residual = ResidualZ::Emit;
  // Let DIAG_ORACLE gates pass through as cycle barriers (used by the
  // simulation pipeline; the plain transpile entry point rejects them).
  bool allow_diag_oracle = false;
};

// Rewrite one CX or CZ into single-qubit dressing around a single XX(pi/2).
inline std::vector<Gate> two_qubit_to_xx(const Gate& g) {
  if (g.kind == GateKind::CZ) {
    int a = g.qubits[0], b = g.qubits[1];
    return {Gate::h(a),        Gate::h(b),        Gate::xx(a, b, kPi / 2), Gate::h(a),
            Gate::h(b),        Gate::rz(a, -kPi / 2), Gate::rz(b, -kPi / 2)};
  }
  if (g.kind == GateKind::CX) {
    int c = g.qubits[0], t = g.qubits[1];
    std::vector<Gate> out{Gate::h(t)};
    for (Gate& e : two_qubit_to_xx(Gate::cz(c, t))) out.push_back(std::move(e));
    out.push_back(Gate::h(t));
    return out;
  }
  throw std::invalid_argument("two_qubit_to_xx: unsupported kind");
}

namespace detail {

// Lower every gate to single-qubit kinds, XX(pi/2) and (optionally) barriers.
inline std::vector<Gate> xx_stream(const Circuit& c, bool allow_diag) {
  std::vector<Gate> out;
  for (const Gate& g0 : expand_three_qubit(c).gates) {
    switch (g0.kind) {
      case GateKind::MCZ:
        throw std::invalid_argument("transpile: abstract kind present (mcz)");
      case GateKind::DIAG_ORACLE:
        if (!allow_diag)
          throw std::invalid_argument("transpile: abstract kind present (diag_oracle)");
        out.push_back(g0);
        break;
      case GateKind::CX:
      case GateKind::CZ:
        for (Gate& e : two_qubit_to_xx(g0)) out.push_back(std::move(e));
        break;
      case GateKind::MS: {
        int a = g0.qubits[0], b = g0.qubits[1];
        double p0 = g0.params[0], p1 = g0.params[1];
        out.push_back(Gate::rz(a, -p0));
        out.push_back(Gate::rz(b, -p1));
        out.push_back(Gate::xx(a, b, kPi / 2));
        out.push_back(Gate::rz(a, p0));
        out.push_back(Gate::rz(b, p1));
        break;
      }
      case GateKind::XX: {
        double t = g0.params[0];
        if (std::abs(wrap_angle(t - kPi / 2)) < 1e-12) {
          out.push_back(Gate::xx(g0.qubits[0], g0.qubits[1], kPi / 2));
        } else if (std::abs(wrap_angle(t + kPi / 2)) < 1e-12) {
          // XX(-pi/2) = (Y x I) XX(pi/2) (Y x I); GPI(pi/2) = Y exactly.
          out.push_back(Gate::gpi(g0.qubits[0], kPi / 2));
          out.push_back(Gate::xx(g0.qubits[0], g0.qubits[1], kPi / 2));
          out.push_back(Gate::gpi(g0.qubits[0], kPi / 2));
        } else {
          throw std::invalid_argument("transpile: XX angle must be +-pi/2");
        }
        break;
      }
      default:
        out.push_back(g0);
    }
  }
  return out;
}

// One cycle: a layer of fused single-qubit gates followed by a layer of
// disjoint XX(pi/2) gates. Barrier-only cycles carry a diagonal oracle.
struct Cycle {
  std::vector<std::pair<int, Mat2>> fused;  // (wire, dense 2x2), wire order
  std::vector<Gate> xxs;
  std::optional<Gate> barrier;
};

inline std::vector<Cycle> build_cycles(int width, const std::vector<Gate>& stream) {
  std::vector<Cycle> cycles;
  std::vector<Mat2> u(width, Mat2::Identity());
  std::vector<uint8_t> active(width, 0), locked(width, 0);
  std::vector<Gate> xxs;

  auto flush = [&]() {
    Cycle cy;
    for (int w = 0; w < width; ++w)
      if (active[w]) cy.fused.push_back({w, u[w]});
    cy.xxs = std::move(xxs);
    if (!cy.fused.empty() || !cy.xxs.empty()) cycles.push_back(std::move(cy));
    for (int w = 0; w < width; ++w) {
      u[w] = Mat2::Identity();
      active[w] = locked[w] = 0;
    }
    xxs.clear();
  };

  for (const Gate& g : stream) {
    if (g.kind == GateKind::DIAG_ORACLE) {
      flush();
      Cycle cy;
      cy.barrier = g;
      cycles.push_back(std::move(cy));
      continue;
    }
    if (g.kind == GateKind::XX) {
      if (locked[g.qubits[0]] || locked[g.qubits[1]]) flush();
      locked[g.qubits[0]] = locked[g.qubits[1]] = 1;
      xxs.push_back(g);
      continue;
    }
    int w = g.qubits[0];
    if (locked[w]) flush();
    u[w] = Mat2(gate_local_matrix(g)) * u[w];
    active[w] = 1;
  }
  flush();
  return cycles;
}

inline bool is_identity_up_to_phase(const Mat2& m) {
  return std::abs(std::abs(m.trace()) - 2.0) < 1e-12 &&
         std::abs(m(0, 1)) < 1e-12 && std::abs(m(1, 0)) < 1e-12;
}

// Native emission with residual-Z propagation: each fused gate becomes at
// most two GPI2 gates whose phases absorb the accumulated residual; purely
// diagonal fused gates become virtual Z (no emission); each XX becomes one MS
// whose phases absorb the wire residuals; terminal residuals become GPI
// pairs under the Emit policy.
inline Circuit emit_native(const Circuit& src, const std::vector<Gate>& stream,
                           const TranspileOptions& opts) {
  Circuit out(src.width, src.roles);
  std::vector<double> cum(src.width, 0.0);

  for (const Cycle& cy : build_cycles(src.width, stream)) {
    if (cy.barrier) {
      // Residual Z commutes with the diagonal, so the accumulator carries
      // across the barrier unchanged.
      out.push(*cy.barrier);
      continue;
    }
    for (const auto& [w, u] : cy.fused) {
      if (std::abs(u(0, 1)) < 1e-12 && std::abs(u(1, 0)) < 1e-12) {
        cum[w] += std::arg(u(1, 1)) - std::arg(u(0, 0));
        continue;
      }
      EulerTriple e = zxzxz_angles(u);
      out.push(Gate::gpi2(w, wrap_angle(-(cum[w] + e.t1))));
      out.push(Gate::gpi2(w, wrap_angle(-(cum[w] + e.t1 + e.t2))));
      cum[w] += e.t1 + e.t2 + e.t3;
    }
    for (const Gate& xx : cy.xxs)
      out.push(Gate::ms(xx.qubits[0], xx.qubits[1], wrap_angle(-cum[xx.qubits[0]]),
                        wrap_angle(-cum[xx.qubits[1]])));
  }

  if (opts.residual == ResidualZ::Emit) {
    for (int w = 0; w < src.width; ++w) {
      double phi = wrap_angle(cum[w]);
      if (std::abs(phi) > 1e-12)
        for (Gate& g : residual_z_to_gpi(w, phi)) out.push(std::move(g));
    }
  }
  return out;
}

}  // namespace detail

// Fuse runs of single-qubit gates between two-qubit layers into dense
// single-qubit gates (identity runs elided). Input: single-qubit kinds and
// XX(pi/2) only.
inline Circuit fuse_single_qubit_runs(const Circuit& c) {
  validate_circuit(c);
  for (const Gate& g : c.gates)
    if (g.arity() != 1 && !(g.kind == GateKind::XX &&
                            std::abs(wrap_angle(g.params[0] - kPi / 2)) < 1e-12))
      throw std::invalid_argument("fuse_single_qubit_runs: expects 1q kinds and XX(pi/2)");
  Circuit out(c.width, c.roles);
  for (const detail::Cycle& cy : detail::build_cycles(c.width, c.gates)) {
    for (const auto& [w, u] : cy.fused)
      if (!detail::is_identity_up_to_phase(u)) out.push(u1q_gate(w, u));
    for (const Gate& xx : cy.xxs) out.push(xx);
  }
  return out;
}

// Per-cycle converted phases with the residual of every earlier cycle folded
// in. theta[i][j] = ZXZXZ triple of qubit i in cycle j (identity triples on
// idle wires).
struct CyclePlan {
  std::vector<std::vector<std::array<double, 3>>> phi;
};

inline CyclePlan propagate_residual_z(
    const std::vector<std::vector<std::array<double, 3>>>& theta) {
  CyclePlan plan;
  plan.phi.resize(theta.size());
  for (size_t i = 0; i < theta.size(); ++i) {
    double cum = 0;
    for (const auto& t : theta[i]) {
      double p1 = -(cum + t[0]);
      double p2 = -(cum + t[0] + t[1]);
      double p3 = cum + t[0] + t[1] + t[2];
      plan.phi[i].push_back({p1, p2, p3});
      cum = p3;
    }
  }
  return plan;
}

// Compile to the native set {GPI, GPI2, MS}. Toffoli kinds are expanded
// first; MCZ and (unless allowed as barriers) DIAG_ORACLE are rejected.
inline Circuit transpile(const Circuit& c, const TranspileOptions& opts = {}) {
  validate_circuit(c);
  auto stream = detail::xx_stream(c, opts.allow_diag_oracle);
  return detail::emit_native(c, stream, opts);
}

}  // namespace qgrove
