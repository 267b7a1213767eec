#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgrove/common.hpp"
#include "qgrove/gates.hpp"
#include "qgrove/unitary.hpp"

namespace qgrove {

// Error model for the native gate set. Components toggle independently:
//  - over-rotation: fractional angle errors eps1 (GPI/GPI2) and eps2 (MS/XX);
//  - relaxation: amplitude damping T1 and dephasing from T2 applied over each
//    gate's wall-clock duration (dur1 for 1q gates, dur2 for 2q gates);
//  - stochastic: uniform two-qubit depolarizing with probability p_stoch2
//    after each MS/XX;
//  - readout: independent symmetric bit flips at measurement.
// Only native kinds pick up noise; abstract kinds run ideal with zero
// duration, so circuits should be transpiled before noisy simulation.
struct NoiseSpec {
  bool en_over_rotation = false;
  double eps1 = 0.0, eps2 = 0.0;

  bool en_relaxation = false;
  double t1 = 0.0, t2 = 0.0;    // seconds
  double dur1 = 0.0, dur2 = 0.0;  // seconds

  bool en_stochastic = false;
  double p_stoch2 = 0.0;

  bool en_readout = false;
  double p_readout = 0.0;

  static NoiseSpec none() { return {}; }

  static NoiseSpec over_rotation_only() {
    NoiseSpec n;
    n.en_over_rotation = true;
    n.eps1 = 0.008;
    n.eps2 = 0.08;
    return n;
  }

  static NoiseSpec over_rotation_relaxation() {
    NoiseSpec n = over_rotation_only();
    n.en_relaxation = true;
    n.t1 = 100.0;
    n.t2 = 1.0;
    n.dur1 = 135e-6;
    n.dur2 = 600e-6;
    return n;
  }

  static NoiseSpec full() {
    NoiseSpec n = over_rotation_relaxation();
    n.en_stochastic = true;
    n.p_stoch2 = 0.01;
    return n;
  }

  bool any_noise() const {
    return en_over_rotation || en_relaxation || en_stochastic || en_readout;
  }
};

inline NoiseSpec noise_profile(const std::string& name) {
  if (name == "none") return NoiseSpec::none();
  if (name == "or_only") return NoiseSpec::over_rotation_only();
  if (name == "or_relax") return NoiseSpec::over_rotation_relaxation();
  if (name == "or_relax_stoch") return NoiseSpec::full();
  throw std::invalid_argument("unknown noise profile: " + name);
}

inline void validate_noise(const NoiseSpec& n) {
  if (!std::isfinite(n.eps1) || !std::isfinite(n.eps2))
    throw std::invalid_argument("noise: over-rotation fractions must be finite");
  if (n.en_relaxation) {
    if (!(n.t1 > 0) || !(n.t2 > 0))
      throw std::invalid_argument("noise: T1 and T2 must be positive");
    if (n.t2 > 2 * n.t1 + 1e-15)
      throw std::invalid_argument("noise: T2 must not exceed 2*T1");
    if (n.dur1 < 0 || n.dur2 < 0)
      throw std::invalid_argument("noise: durations must be non-negative");
  }
  if (n.p_stoch2 < 0 || n.p_stoch2 > 1)
    throw std::invalid_argument("noise: p_stoch2 must be in [0,1]");
  if (n.p_readout < 0 || n.p_readout > 1)
    throw std::invalid_argument("noise: p_readout must be in [0,1]");
}

// Damping/dephasing strengths over an interval dt: p is the |1> decay
// probability, q the phase-flip probability from pure dephasing, gamma the
// resulting off-diagonal contraction sqrt(1-p)(1-2q) = exp(-dt/T2).
struct RelaxParams {
  double p = 0.0, q = 0.0, gamma = 1.0;
};

inline RelaxParams relax_params(double t1, double t2, double dt) {
  if (dt <= 0) return {};
  RelaxParams r;
  r.p = 1.0 - std::exp(-dt / t1);
  double inv_tphi = 1.0 / t2 - 0.5 / t1;  // pure dephasing rate
  r.q = 0.5 * (1.0 - std::exp(-dt * inv_tphi));
  r.gamma = std::sqrt(1.0 - r.p) * (1.0 - 2.0 * r.q);
  return r;
}

inline RelaxParams relax_params(const NoiseSpec& n, double dt) {
  if (!n.en_relaxation || dt <= 0) return {};
  return relax_params(n.t1, n.t2, dt);
}

// Kraus operators of the composite damping-then-dephasing channel over dt.
// Zero duration (or relaxation disabled) yields the identity channel.
inline std::vector<Mat2> kraus_channel(const NoiseSpec& n, double dt) {
  RelaxParams r = relax_params(n, dt);
  if (r.p == 0.0 && r.q == 0.0) return {Mat2::Identity()};
  Mat2 a0 = Mat2::Zero(), a1 = Mat2::Zero();
  a0(0, 0) = 1.0;
  a0(1, 1) = std::sqrt(1.0 - r.p);
  a1(0, 1) = std::sqrt(r.p);
  std::vector<Mat2> ks;
  double sq = std::sqrt(1.0 - r.q), sq1 = std::sqrt(r.q);
  Mat2 z = Mat2(z_mat());
  ks.push_back(sq * a0);
  ks.push_back(sq * a1);
  ks.push_back(sq1 * z * a0);
  ks.push_back(sq1 * z * a1);
  return ks;
}

// Kinds the error model applies to: the native set plus bare XX, which is
// the physical entangling operation underneath MS.
inline bool is_noisy_kind(GateKind k) {
  return is_native(k) || k == GateKind::XX;
}

// Wall-clock duration a gate occupies on its qubits.
inline double gate_duration(GateKind k, const NoiseSpec& n) {
  switch (k) {
    case GateKind::GPI:
    case GateKind::GPI2:
      return n.dur1;
    case GateKind::MS:
    case GateKind::XX:
      return n.dur2;
    default:
      return 0.0;
  }
}

namespace detail {

inline Mat4 kron_rz(double a, double b) {
  Mat4 d = Mat4::Zero();
  Mat2 ra = Mat2(rz_mat(a)), rb = Mat2(rz_mat(b));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) d(2 * i + j, 2 * i + j) = ra(i, i) * rb(j, j);
  return d;
}

}  // namespace detail

// Dense local matrix with coherent over-rotation applied to native kinds.
inline Mat noisy_gate_matrix(const Gate& g, const NoiseSpec& n) {
  if (!n.en_over_rotation) return gate_local_matrix(g);
  switch (g.kind) {
    case GateKind::GPI: {
      // GPI(phi) = i RZ(phi) RX(pi) RZ(-phi); the physical rotation angle
      // pi picks up the fractional error.
      Mat2 m = cplx(0, 1) * Mat2(rz_mat(g.params[0])) *
               Mat2(rx_mat(kPi * (1.0 + n.eps1))) * Mat2(rz_mat(-g.params[0]));
      return m;
    }
    case GateKind::GPI2: {
      Mat2 m = Mat2(rz_mat(g.params[0])) * Mat2(rx_mat(kPi / 2 * (1.0 + n.eps1))) *
               Mat2(rz_mat(-g.params[0]));
      return m;
    }
    case GateKind::MS: {
      Mat4 d = detail::kron_rz(g.params[0], g.params[1]);
      Mat4 m = d * Mat4(xx_mat(kPi / 2 * (1.0 + n.eps2))) * d.adjoint();
      return m;
    }
    case GateKind::XX:
      return xx_mat(g.params[0] * (1.0 + n.eps2));
    default:
      return gate_local_matrix(g);
  }
}

}  // namespace qgrove
