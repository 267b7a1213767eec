#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgrove {

// Gate kinds. GPI/GPI2/MS are the native trapped-ion set; MCZ and
// DIAG_ORACLE are abstract (must be expanded/configured before native
// transpilation); U1Q is a fused dense single-qubit gate produced by
// single-qubit run fusion.
enum class GateKind : uint8_t {
  H,
  X,
  T,
  Tdg,
  SX,
  RZ,
  GPI,
  GPI2,
  CX,
  CZ,
  XX,
  MS,
  TOFFOLI,
  RP_TOFFOLI,
  MCZ,
  DIAG_ORACLE,
  U1Q,
};

inline const char* kind_name(GateKind k) {
  switch (k) {
    case GateKind::H: return "h";
    case GateKind::X: return "x";
    case GateKind::T: return "t";
    case GateKind::Tdg: return "tdg";
    case GateKind::SX: return "sx";
    case GateKind::RZ: return "rz";
    case GateKind::GPI: return "gpi";
    case GateKind::GPI2: return "gpi2";
    case GateKind::CX: return "cx";
    case GateKind::CZ: return "cz";
    case GateKind::XX: return "xx";
    case GateKind::MS: return "ms";
    case GateKind::TOFFOLI: return "toffoli";
    case GateKind::RP_TOFFOLI: return "rp_toffoli";
    case GateKind::MCZ: return "mcz";
    case GateKind::DIAG_ORACLE: return "diag_oracle";
    case GateKind::U1Q: return "u1q";
  }
  throw std::invalid_argument("kind_name: unknown kind");
}

inline GateKind kind_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(GateKind::U1Q); ++i) {
    auto k = static_cast<GateKind>(i);
    if (s == kind_name(k)) return k;
  }
  throw std::invalid_argument("unknown gate kind: " + s);
}

// A single gate instance.
//
// Conventions:
//  - Basis-state indices: qubit q contributes bit q (qubit 0 = least
//    significant bit). Measurement bitstrings render most-significant-qubit
//    first.
//  - Dense gate matrices: the FIRST listed qubit is the MOST significant bit
//    of the local matrix index.
//  - MCZ: qubits = [controls..., target], no params; symmetric under
//    relabeling.
//  - DIAG_ORACLE: qubits = the data qubits in ASCENDING order; params = the
//    marked basis indices over those qubits, where bit j of a marked index
//    corresponds to qubits[j] (least-significant-first, matching the global
//    index convention when qubits = 0..n-1).
//  - U1Q: params = 8 doubles, the dense 2x2 entries row-major as
//    (re00, im00, re01, im01, re10, im10, re11, im11).
struct Gate {
  GateKind kind;
  std::vector<int> qubits;
  std::vector<double> params;

  static Gate h(int q) { return {GateKind::H, {q}, {}}; }
  static Gate x(int q) { return {GateKind::X, {q}, {}}; }
  static Gate t(int q) { return {GateKind::T, {q}, {}}; }
  static Gate tdg(int q) { return {GateKind::Tdg, {q}, {}}; }
  static Gate sx(int q) { return {GateKind::SX, {q}, {}}; }
  static Gate rz(int q, double theta) { return {GateKind::RZ, {q}, {theta}}; }
  static Gate gpi(int q, double phi) { return {GateKind::GPI, {q}, {phi}}; }
  static Gate gpi2(int q, double phi) { return {GateKind::GPI2, {q}, {phi}}; }
  static Gate cx(int c, int t) { return {GateKind::CX, {c, t}, {}}; }
  static Gate cz(int a, int b) { return {GateKind::CZ, {a, b}, {}}; }
  static Gate xx(int a, int b, double theta) { return {GateKind::XX, {a, b}, {theta}}; }
  static Gate ms(int a, int b, double phi0, double phi1) {
    return {GateKind::MS, {a, b}, {phi0, phi1}};
  }
  static Gate toffoli(int c0, int c1, int t) { return {GateKind::TOFFOLI, {c0, c1, t}, {}}; }
  static Gate rp_toffoli(int c0, int c1, int t) {
    return {GateKind::RP_TOFFOLI, {c0, c1, t}, {}};
  }
  static Gate mcz(std::vector<int> controls_then_target) {
    return {GateKind::MCZ, std::move(controls_then_target), {}};
  }
  static Gate diag_oracle(std::vector<int> data_qubits, const std::vector<uint64_t>& marked) {
    Gate g{GateKind::DIAG_ORACLE, std::move(data_qubits), {}};
    g.params.reserve(marked.size());
    for (uint64_t m : marked) g.params.push_back(static_cast<double>(m));
    return g;
  }

  int arity() const { return static_cast<int>(qubits.size()); }
};

// Expected qubit count; -1 means variable (validated separately).
inline int kind_arity(GateKind k) {
  switch (k) {
    case GateKind::H:
    case GateKind::X:
    case GateKind::T:
    case GateKind::Tdg:
    case GateKind::SX:
    case GateKind::RZ:
    case GateKind::GPI:
    case GateKind::GPI2:
    case GateKind::U1Q:
      return 1;
    case GateKind::CX:
    case GateKind::CZ:
    case GateKind::XX:
    case GateKind::MS:
      return 2;
    case GateKind::TOFFOLI:
    case GateKind::RP_TOFFOLI:
      return 3;
    case GateKind::MCZ:
    case GateKind::DIAG_ORACLE:
      return -1;
  }
  return -1;
}

// Expected parameter count; -1 means variable.
inline int kind_param_count(GateKind k) {
  switch (k) {
    case GateKind::RZ:
    case GateKind::GPI:
    case GateKind::GPI2:
    case GateKind::XX:
      return 1;
    case GateKind::MS:
      return 2;
    case GateKind::U1Q:
      return 8;
    case GateKind::DIAG_ORACLE:
      return -1;
    default:
      return 0;
  }
}

inline bool is_native(GateKind k) {
  return k == GateKind::GPI || k == GateKind::GPI2 || k == GateKind::MS;
}

inline bool is_abstract(GateKind k) {
  return k == GateKind::MCZ || k == GateKind::DIAG_ORACLE;
}

inline bool is_two_qubit(GateKind k) {
  return k == GateKind::CX || k == GateKind::CZ || k == GateKind::XX || k == GateKind::MS;
}

inline void validate_gate(const Gate& g, int width) {
  int a = kind_arity(g.kind);
  if (a >= 0 && g.arity() != a)
    throw std::invalid_argument(std::string("gate ") + kind_name(g.kind) + ": bad qubit count");
  if (g.kind == GateKind::MCZ && g.arity() < 3)
    throw std::invalid_argument("mcz: needs at least 2 controls plus target");
  if (g.kind == GateKind::DIAG_ORACLE && g.arity() < 1)
    throw std::invalid_argument("diag_oracle: needs at least one qubit");
  int pc = kind_param_count(g.kind);
  if (pc >= 0 && static_cast<int>(g.params.size()) != pc)
    throw std::invalid_argument(std::string("gate ") + kind_name(g.kind) + ": bad param count");
  for (double p : g.params)
    if (!std::isfinite(p))
      throw std::invalid_argument(std::string("gate ") + kind_name(g.kind) + ": non-finite param");
  for (size_t i = 0; i < g.qubits.size(); ++i) {
    if (g.qubits[i] < 0 || g.qubits[i] >= width)
      throw std::invalid_argument(std::string("gate ") + kind_name(g.kind) + ": qubit out of range");
    for (size_t j = i + 1; j < g.qubits.size(); ++j)
      if (g.qubits[i] == g.qubits[j])
        throw std::invalid_argument(std::string("gate ") + kind_name(g.kind) + ": repeated qubit");
  }
  if (g.kind == GateKind::DIAG_ORACLE) {
    uint64_t dim = 1ull << g.qubits.size();
    for (size_t i = 1; i < g.qubits.size(); ++i)
      if (g.qubits[i] <= g.qubits[i - 1])
        throw std::invalid_argument("diag_oracle: qubits must be ascending");
    for (double p : g.params) {
      double r = std::round(p);
      if (r != p || r < 0 || r >= static_cast<double>(dim))
        throw std::invalid_argument("diag_oracle: marked index out of range");
    }
  }
}

}  // namespace qgrove
