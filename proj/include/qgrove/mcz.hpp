#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qgrove/circuit.hpp"
#include "qgrove/gates.hpp"

namespace qgrove {

enum class MczStyle : uint8_t { TOFFOLI_6CX, RP_TOFFOLI_3CX };

inline MczStyle mcz_style_from_name(const std::string& s) {
  if (s == "toffoli_6cx") return MczStyle::TOFFOLI_6CX;
  if (s == "rp_toffoli_3cx") return MczStyle::RP_TOFFOLI_3CX;
  throw std::invalid_argument("unknown mcz style: " + s);
}

inline const char* mcz_style_name(MczStyle s) {
  return s == MczStyle::TOFFOLI_6CX ? "toffoli_6cx" : "rp_toffoli_3cx";
}

// RY(theta) as a {RZ, H} run (application order; matrix = RZ(pi/2) H RZ(theta) H RZ(-pi/2)).
inline void append_ry_run(std::vector<Gate>& out, int q, double theta) {
  out.push_back(Gate::rz(q, -kPi / 2));
  out.push_back(Gate::h(q));
  out.push_back(Gate::rz(q, theta));
  out.push_back(Gate::h(q));
  out.push_back(Gate::rz(q, kPi / 2));
}

// Standard Toffoli from 6 CX and T/Tdg; unitary equals Toffoli exactly.
inline std::vector<Gate> toffoli_6cx_gates(int c0, int c1, int t) {
  return {
      Gate::h(t),        Gate::cx(c1, t), Gate::tdg(t),     Gate::cx(c0, t),
      Gate::t(t),        Gate::cx(c1, t), Gate::tdg(t),     Gate::cx(c0, t),
      Gate::t(c1),       Gate::t(t),      Gate::h(t),       Gate::cx(c0, c1),
      Gate::t(c0),       Gate::tdg(c1),   Gate::cx(c0, c1),
  };
}

// Margolus-style relative-phase Toffoli: 3 CX, real matrix, equal to Toffoli
// up to a -1 phase on one basis state; exact under compute/uncompute pairing.
inline std::vector<Gate> rp_toffoli_3cx_gates(int c0, int c1, int t) {
  std::vector<Gate> out;
  append_ry_run(out, t, kPi / 4);
  out.push_back(Gate::cx(c1, t));
  append_ry_run(out, t, kPi / 4);
  out.push_back(Gate::cx(c0, t));
  append_ry_run(out, t, -kPi / 4);
  out.push_back(Gate::cx(c1, t));
  append_ry_run(out, t, -kPi / 4);
  return out;
}

inline std::vector<Gate> toffoli_gates(MczStyle style, int c0, int c1, int t) {
  return style == MczStyle::TOFFOLI_6CX ? toffoli_6cx_gates(c0, c1, t)
                                        : rp_toffoli_3cx_gates(c0, c1, t);
}

// 3-qubit circuit for one Toffoli of the given style, qubits (c0,c1,t)=(0,1,2).
inline Circuit expand_toffoli(MczStyle style) {
  Circuit c(3);
  for (Gate& g : toffoli_gates(style, 0, 1, 2)) c.push(std::move(g));
  return c;
}

// AND-ladder multi-controlled-Z over explicit wires, emitting Toffoli-kind
// gates (unexpanded). k = |controls| >= 1; needs k-1 ancillas. The uncompute
// ladder reuses the same Toffoli gates: the relative phase of the 3-CX style
// sits on an input pattern that pairs to +1 across compute/uncompute, so the
// block is exact on the ancilla-|0> subspace for either style.
inline std::vector<Gate> mcz_ladder_gates(const std::vector<int>& controls, int target,
                                          const std::vector<int>& ancillas, MczStyle style) {
  int k = static_cast<int>(controls.size());
  if (k < 1) throw std::invalid_argument("mcz ladder: needs at least one control");
  if (k == 1) return {Gate::cz(controls[0], target)};
  if (static_cast<int>(ancillas.size()) < k - 1)
    throw std::invalid_argument("mcz ladder: needs k-1 ancillas");
  GateKind tk = style == MczStyle::TOFFOLI_6CX ? GateKind::TOFFOLI : GateKind::RP_TOFFOLI;
  std::vector<Gate> chain;
  chain.push_back({tk, {controls[0], controls[1], ancillas[0]}, {}});
  for (int j = 2; j < k; ++j)
    chain.push_back({tk, {controls[j], ancillas[j - 2], ancillas[j - 1]}, {}});
  std::vector<Gate> out = chain;
  out.push_back(Gate::cz(ancillas[k - 2], target));
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) out.push_back(*it);
  return out;
}

// Z controlled on k qubits, decomposed with the AND-ladder. Layout: controls
// 0..k-1, target k, ancillas k+1..2k-1 (ancilla roles set).
inline Circuit decompose_mcz(int k, MczStyle style) {
  if (k < 2) throw std::invalid_argument("decompose_mcz: k >= 2");
  Circuit c(2 * k);
  for (int q = k + 1; q < 2 * k; ++q) c.roles[q] = Role::Ancilla;
  std::vector<int> controls, ancillas;
  for (int q = 0; q < k; ++q) controls.push_back(q);
  for (int q = k + 1; q < 2 * k; ++q) ancillas.push_back(q);
  for (Gate& g : mcz_ladder_gates(controls, k, ancillas, style)) c.push(std::move(g));
  return c;
}

// Replace TOFFOLI / RP_TOFFOLI kinds by their expansions; other gates pass
// through unchanged.
inline Circuit expand_three_qubit(const Circuit& c) {
  Circuit out(c.width, c.roles);
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::TOFFOLI || g.kind == GateKind::RP_TOFFOLI) {
      MczStyle style =
          g.kind == GateKind::TOFFOLI ? MczStyle::TOFFOLI_6CX : MczStyle::RP_TOFFOLI_3CX;
      for (Gate& e : toffoli_gates(style, g.qubits[0], g.qubits[1], g.qubits[2]))
        out.push(std::move(e));
    } else {
      out.push(g);
    }
  }
  return out;
}

}  // namespace qgrove
