#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qgrove/circuit.hpp"
#include "qgrove/common.hpp"
#include "qgrove/gates.hpp"
#include "qgrove/kernels.hpp"
#include "qgrove/mcz.hpp"

namespace qgrove {

inline constexpr int kMaxDenseQubits = 12;

inline Mat2 rz_mat(double theta) {
  Mat2 m;
  m << std::exp(cplx(0, -theta / 2)), 0, 0, std::exp(cplx(0, theta / 2));
  return m;
}

inline Mat2 rx_mat(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 m;
  m << c, cplx(0, -s), cplx(0, -s), c;
  return m;
}

inline Mat2 h_mat() {
  double r = 1.0 / std::sqrt(2.0);
  Mat2 m;
  m << r, r, r, -r;
  return m;
}

inline Mat2 x_mat() {
  Mat2 m;
  m << 0, 1, 1, 0;
  return m;
}

inline Mat2 y_mat() {
  Mat2 m;
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}

inline Mat2 z_mat() {
  Mat2 m;
  m << 1, 0, 0, -1;
  return m;
}

inline Mat2 t_mat() {
  Mat2 m;
  m << 1, 0, 0, std::exp(cplx(0, kPi / 4));
  return m;
}

inline Mat2 tdg_mat() {
  Mat2 m;
  m << 1, 0, 0, std::exp(cplx(0, -kPi / 4));
  return m;
}

// SqrtX = GPI2(0) = RX(pi/2) exactly (no extra phase).
inline Mat2 sx_mat() { return rx_mat(kPi / 2); }

inline Mat2 gpi_mat(double phi) {
  Mat2 m;
  m << 0, std::exp(cplx(0, -phi)), std::exp(cplx(0, phi)), 0;
  return m;
}

inline Mat2 gpi2_mat(double phi) { return rz_mat(phi) * sx_mat() * rz_mat(-phi); }

// XX(theta) = exp(-i theta/2 X(x)X).
inline Mat4 xx_mat(double theta) {
  double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = m(2, 2) = m(3, 3) = c;
  m(0, 3) = m(1, 2) = m(2, 1) = m(3, 0) = cplx(0, -s);
  return m;
}

inline Mat4 ms_mat(double phi0, double phi1) {
  Mat4 d = Mat4::Zero();
  Mat2 z0 = rz_mat(phi0), z1 = rz_mat(phi1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) d(2 * a + b, 2 * a + b) = z0(a, a) * z1(b, b);
  return d * xx_mat(kPi / 2) * d.adjoint();
}

inline Mat4 cx_mat() {
  Mat4 m = Mat4::Zero();
  m(0, 0) = m(1, 1) = 1;
  m(2, 3) = m(3, 2) = 1;
  return m;
}

inline Mat4 cz_mat() {
  Mat4 m = Mat4::Identity();
  m(3, 3) = -1;
  return m;
}

inline Mat2 u1q_mat(const std::vector<double>& p) {
  Mat2 m;
  m << cplx(p[0], p[1]), cplx(p[2], p[3]), cplx(p[4], p[5]), cplx(p[6], p[7]);
  return m;
}

inline Gate u1q_gate(int q, const Mat2& m) {
  return {GateKind::U1Q,
          {q},
          {m(0, 0).real(), m(0, 0).imag(), m(0, 1).real(), m(0, 1).imag(), m(1, 0).real(),
           m(1, 0).imag(), m(1, 1).real(), m(1, 1).imag()}};
}

// Dense local matrix in the gate convention (first listed qubit = most
// significant local bit).
inline Mat gate_local_matrix(const Gate& g) {
  switch (g.kind) {
    case GateKind::H: return h_mat();
    case GateKind::X: return x_mat();
    case GateKind::T: return t_mat();
    case GateKind::Tdg: return tdg_mat();
    case GateKind::SX: return sx_mat();
    case GateKind::RZ: return rz_mat(g.params[0]);
    case GateKind::GPI: return gpi_mat(g.params[0]);
    case GateKind::GPI2: return gpi2_mat(g.params[0]);
    case GateKind::CX: return cx_mat();
    case GateKind::CZ: return cz_mat();
    case GateKind::XX: return xx_mat(g.params[0]);
    case GateKind::MS: return ms_mat(g.params[0], g.params[1]);
    case GateKind::U1Q: return u1q_mat(g.params);
    case GateKind::TOFFOLI: {
      Mat m = Mat::Identity(8, 8);
      m(6, 6) = m(7, 7) = 0;
      m(6, 7) = m(7, 6) = 1;
      return m;
    }
    case GateKind::RP_TOFFOLI: {
      // Product of the 3-CX expansion on a local 3-qubit register.
      Mat u = Mat::Identity(8, 8);
      for (const Gate& e : rp_toffoli_3cx_gates(2, 1, 0)) {
        // local register: qubit 2 = c0 (MSB), 1 = c1, 0 = t
        Mat l = gate_local_matrix(e);
        for (int col = 0; col < 8; ++col)
          apply_local_unitary(u.col(col).data(), 3, l, e.qubits);
      }
      return u;
    }
    case GateKind::MCZ: {
      uint64_t dim = 1ull << g.qubits.size();
      Mat m = Mat::Identity(dim, dim);
      m(dim - 1, dim - 1) = -1;
      return m;
    }
    case GateKind::DIAG_ORACLE: {
      // The oracle's marked indices are least-significant-first over the
      // qubit list; the gate convention is most-significant-first, so bit
      // reverse when building the dense form.
      int k = static_cast<int>(g.qubits.size());
      uint64_t dim = 1ull << k;
      auto flags = oracle_flag_table(g);
      Mat m = Mat::Identity(dim, dim);
      for (uint64_t w = 0; w < dim; ++w) {
        uint64_t rev = 0;
        for (int j = 0; j < k; ++j)
          if ((w >> (k - 1 - j)) & 1ull) rev |= 1ull << j;
        if (flags[rev]) m(w, w) = -1;
      }
      return m;
    }
  }
  throw std::invalid_argument("gate_local_matrix: unexpandable gate");
}

// Apply one gate in place to a statevector, using fast paths for diagonal
// abstract kinds.
inline void apply_gate_state(cplx* state, int width, const Gate& g) {
  if (g.kind == GateKind::MCZ) {
    uint64_t mask = 0;
    for (int q : g.qubits) mask |= 1ull << q;
    apply_cz_mask(state, width, mask);
    return;
  }
  if (g.kind == GateKind::CZ) {
    apply_cz_mask(state, width, (1ull << g.qubits[0]) | (1ull << g.qubits[1]));
    return;
  }
  if (g.kind == GateKind::DIAG_ORACLE) {
    auto flags = oracle_flag_table(g);
    apply_diag_oracle(state, width, g, flags);
    return;
  }
  apply_local_unitary(state, width, gate_local_matrix(g), g.qubits);
}

// Gate unitary embedded on its qubits, identity elsewhere.
inline Mat unitary_of_gate(const Gate& g, int width) {
  if (width > kMaxDenseQubits) throw std::invalid_argument("dense bound exceeded");
  validate_gate(g, width);
  uint64_t n = 1ull << width;
  Mat u = Mat::Identity(n, n);
  for (uint64_t col = 0; col < n; ++col) apply_gate_state(u.col(col).data(), width, g);
  return u;
}

// Product of gate unitaries in application order (first gate applied first).
inline Mat circuit_unitary(const Circuit& c) {
  if (c.width > kMaxDenseQubits) throw std::invalid_argument("dense bound exceeded");
  validate_circuit(c);
  uint64_t n = 1ull << c.width;
  Mat u = Mat::Identity(n, n);
  for (const Gate& g : c.gates)
    for (uint64_t col = 0; col < n; ++col) apply_gate_state(u.col(col).data(), c.width, g);
  return u;
}

inline double circuit_fidelity(const Circuit& a, const Circuit& b) {
  return unitary_fidelity(circuit_unitary(a), circuit_unitary(b));
}

}  // namespace qgrove
