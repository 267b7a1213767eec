#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "qgrove/common.hpp"
#include "qgrove/gates.hpp"

namespace qgrove {

enum class Role : uint8_t { Data, Ancilla };

// Ordered gate sequence over `width` qubits with per-qubit role labels.
struct Circuit {
  int width = 0;
  std::vector<Gate> gates;
  std::vector<Role> roles;  // size == width

  explicit Circuit(int w = 0) : width(w), roles(w, Role::Data) {}
  Circuit(int w, std::vector<Role> r) : width(w), roles(std::move(r)) {}

  Circuit& push(Gate g) {
    gates.push_back(std::move(g));
    return *this;
  }

  std::vector<int> data_qubits() const {
    std::vector<int> out;
    for (int q = 0; q < width; ++q)
      if (roles[q] == Role::Data) out.push_back(q);
    return out;
  }

  std::vector<int> ancilla_qubits() const {
    std::vector<int> out;
    for (int q = 0; q < width; ++q)
      if (roles[q] == Role::Ancilla) out.push_back(q);
    return out;
  }
};

inline void validate_circuit(const Circuit& c) {
  if (static_cast<int>(c.roles.size()) != c.width)
    throw std::invalid_argument("circuit: role list length must equal width");
  for (const Gate& g : c.gates) validate_gate(g, c.width);
}

// Gate tally by arity and kind. Abstract kinds are counted separately and
// excluded from the arity buckets.
struct GateCounts {
  std::map<GateKind, int> by_kind;
  int one_qubit = 0;
  int two_qubit = 0;
  int three_qubit = 0;
  int abstract_kinds = 0;

  int of(GateKind k) const {
    auto it = by_kind.find(k);
    return it == by_kind.end() ? 0 : it->second;
  }
};

inline GateCounts gate_counts(const Circuit& c) {
  GateCounts out;
  for (const Gate& g : c.gates) {
    out.by_kind[g.kind]++;
    if (is_abstract(g.kind)) {
      out.abstract_kinds++;
    } else if (g.arity() == 1) {
      out.one_qubit++;
    } else if (g.arity() == 2) {
      out.two_qubit++;
    } else if (g.arity() == 3) {
      out.three_qubit++;
    }
  }
  return out;
}

// Inverse circuit: gates reversed, each replaced by its inverse. MS and
// RP_TOFFOLI have no single-gate inverse in the set and are emitted as
// equivalent gate runs.
inline Circuit inverse(const Circuit& c) {
  Circuit out(c.width, c.roles);
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    const Gate& g = *it;
    switch (g.kind) {
      case GateKind::H:
      case GateKind::X:
      case GateKind::CX:
      case GateKind::CZ:
      case GateKind::TOFFOLI:
      case GateKind::MCZ:
      case GateKind::DIAG_ORACLE:
      case GateKind::GPI:
        out.push(g);
        break;
      case GateKind::T:
        out.push(Gate::tdg(g.qubits[0]));
        break;
      case GateKind::Tdg:
        out.push(Gate::t(g.qubits[0]));
        break;
      case GateKind::SX:
        out.push(Gate::gpi2(g.qubits[0], kPi));  // GPI2(0)^dag = GPI2(pi)
        break;
      case GateKind::RZ:
        out.push(Gate::rz(g.qubits[0], -g.params[0]));
        break;
      case GateKind::GPI2:
        out.push(Gate::gpi2(g.qubits[0], g.params[0] + kPi));
        break;
      case GateKind::XX:
        out.push(Gate::xx(g.qubits[0], g.qubits[1], -g.params[0]));
        break;
      case GateKind::MS: {
        // MS(a,b)^dag = (RZ(a) x RZ(b)) XX(-pi/2) (RZ(a) x RZ(b))^dag
        double a = g.params[0], b = g.params[1];
        out.push(Gate::rz(g.qubits[0], -a));
        out.push(Gate::rz(g.qubits[1], -b));
        out.push(Gate::xx(g.qubits[0], g.qubits[1], -kPi / 2));
        out.push(Gate::rz(g.qubits[0], a));
        out.push(Gate::rz(g.qubits[1], b));
        break;
      }
      case GateKind::U1Q: {
        // adjoint of the stored dense 2x2
        const auto& p = g.params;
        Gate inv{GateKind::U1Q, g.qubits,
                 {p[0], -p[1], p[4], -p[5], p[2], -p[3], p[6], -p[7]}};
        out.push(std::move(inv));
        break;
      }
      case GateKind::RP_TOFFOLI:
        // Not self-inverse (relative phase); callers expand it first.
        throw std::invalid_argument("inverse: rp_toffoli has no in-set inverse; expand first");
    }
  }
  return out;
}

}  // namespace qgrove
