#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "qgrove/common.hpp"
#include "qgrove/gates.hpp"
#include "qgrove/unitary.hpp"

namespace qgrove {

// Angles (t1, t2, t3) and global phase g such that
//   U = e^{ig} RZ(t3) SqrtX RZ(t2) SqrtX RZ(t1)   (t1 applied first).
struct EulerTriple {
  double t1 = 0, t2 = 0, t3 = 0;
  double phase = 0;
};

inline Mat2 euler_reconstruct(const EulerTriple& e) {
  Mat2 m = rz_mat(e.t3) * sx_mat() * rz_mat(e.t2) * sx_mat() * rz_mat(e.t1);
  return std::exp(cplx(0, e.phase)) * m;
}

// Z-X-Z-X-Z Euler extraction. Exact (including global phase); angles are
// reduced to (-pi, pi] with the 4pi periodicity of RZ folded into the phase.
// Diagonal inputs take t2 = pi and put the whole relative phase into t3
// (the |t1|-minimizing split).
inline EulerTriple zxzxz_angles(const Mat2& u) {
  if (!is_unitary(u)) throw std::invalid_argument("zxzxz_angles: non-unitary input");
  EulerTriple e;
  double g;
  if (std::abs(u(1, 0)) < 1e-12) {
    double a = std::arg(u(0, 0));
    double delta = std::arg(u(1, 1)) - a;
    e.t1 = 0;
    e.t2 = kPi;
    e.t3 = delta - kPi;
    g = a + delta / 2;
  } else {
    double theta = 2.0 * std::atan2(std::abs(u(1, 0)), std::abs(u(0, 0)));
    double alpha, f, l;
    if (std::abs(u(0, 0)) < 1e-12) {
      alpha = std::arg(u(1, 0));
      f = 0;
      l = std::arg(-u(0, 1)) - alpha;
    } else {
      alpha = std::arg(u(0, 0));
      f = std::arg(u(1, 0)) - alpha;
      l = std::arg(-u(0, 1)) - alpha;
    }
    e.t1 = l;
    e.t2 = theta + kPi;
    e.t3 = f - kPi;
    g = alpha + kPi / 2 + (e.t1 + e.t3) / 2;
  }
  e.t1 = wrap_rz_angle(e.t1, g);
  e.t2 = wrap_rz_angle(e.t2, g);
  e.t3 = wrap_rz_angle(e.t3, g);
  e.phase = wrap_angle(g);
  return e;
}

// GPI2-pair phases: Z(phi3) GPI2(phi2) GPI2(phi1) reproduces the ZXZXZ form
// exactly, with phi3 deferred (the residual Z).
struct Gpi2Pair {
  double phi1 = 0, phi2 = 0, phi3 = 0;
};

inline Gpi2Pair euler_to_gpi2_pair(const EulerTriple& e) {
  return {-e.t1, -(e.t1 + e.t2), e.t1 + e.t2 + e.t3};
}

// Terminal residual Z as two GPI gates: GPI(0) GPI(-phi/2) = RZ(phi) up to
// global phase (application order: GPI(-phi/2) first).
inline std::vector<Gate> residual_z_to_gpi(int q, double phi) {
  return {Gate::gpi(q, -phi / 2), Gate::gpi(q, 0)};
}

// Fold conjugate Z rotations around XX(pi/2) into a single MS gate.
// pre0/pre1 are the RZ angles applied before the XX on each wire, post0/post1
// after; the conjugation pattern requires post = -pre (mod 2pi).
inline Gate absorb_z_into_ms(double pre0, double pre1, const Gate& xx, double post0,
                             double post1) {
  if (xx.kind != GateKind::XX || std::abs(wrap_angle(xx.params[0] - kPi / 2)) > 1e-12)
    throw std::invalid_argument("absorb_z_into_ms: expects XX(pi/2)");
  if (std::abs(wrap_angle(pre0 + post0)) > 1e-9 || std::abs(wrap_angle(pre1 + post1)) > 1e-9)
    throw std::invalid_argument("absorb_z_into_ms: angles not conjugate");
  return Gate::ms(xx.qubits[0], xx.qubits[1], post0, post1);
}

}  // namespace qgrove
