#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qgrove/common.hpp"
#include "qgrove/noise.hpp"

namespace qgrove {

// Dense density matrix, row-major. Practical up to ~11 qubits (2^22 complex
// entries = 64 MB); the shared-ancilla search register needs 10.
struct Density {
  int width = 0;
  uint64_t dim = 0;
  std::vector<cplx> m;

  explicit Density(int w) : width(w), dim(1ull << w), m(dim * dim, cplx(0, 0)) {
    m[0] = cplx(1, 0);
  }

  cplx& at(uint64_t r, uint64_t c) { return m[r * dim + c]; }
  const cplx& at(uint64_t r, uint64_t c) const { return m[r * dim + c]; }

  double trace_real() const {
    double t = 0;
    for (uint64_t i = 0; i < dim; ++i) t += m[i * dim + i].real();
    return t;
  }

  std::vector<double> probs() const {
    std::vector<double> p(dim);
    for (uint64_t i = 0; i < dim; ++i) p[i] = m[i * dim + i].real();
    return p;
  }
};

namespace detail {

inline uint64_t insert_zero_bit(uint64_t x, int pos) {
  uint64_t low = (1ull << pos) - 1;
  return ((x & ~low) << 1) | (x & low);
}

}  // namespace detail

// Relaxation block update on the (row-bit, col-bit) 2x2 sub-block of qubit q:
// population flows |1>->|0> with probability p, coherences contract by gamma.
inline void density_relax_1q(Density& d, int q, const RelaxParams& r) {
  if (r.p == 0.0 && r.q == 0.0) return;
  const uint64_t B = 1ull << q, dim = d.dim, half = dim >> 1;
  const double keep = 1.0 - r.p, g = r.gamma;
  for (uint64_t rh = 0; rh < half; ++rh) {
    uint64_t r0 = detail::insert_zero_bit(rh, q);
    cplx* row0 = d.m.data() + r0 * dim;
    cplx* row1 = d.m.data() + (r0 | B) * dim;
    for (uint64_t ch = 0; ch < half; ++ch) {
      uint64_t c0 = detail::insert_zero_bit(ch, q), c1 = c0 | B;
      row0[c0] += r.p * row1[c1];
      row1[c1] *= keep;
      row0[c1] *= g;
      row1[c0] *= g;
    }
  }
}

// Fused pass: pending relaxation on qubit q, then the unitary sandwich
// rho -> u (R rho) u^dag, one sweep over the matrix.
inline void density_apply_1q(Density& d, const Mat2& u, int q, const RelaxParams& r) {
  const uint64_t B = 1ull << q, dim = d.dim, half = dim >> 1;
  const bool relax = (r.p != 0.0 || r.q != 0.0);
  const double p = r.p, keep = 1.0 - r.p, g = r.gamma;
  const cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
  const cplx v00 = std::conj(u00), v01 = std::conj(u01), v10 = std::conj(u10),
             v11 = std::conj(u11);
  for (uint64_t rh = 0; rh < half; ++rh) {
    uint64_t r0 = detail::insert_zero_bit(rh, q);
    cplx* row0 = d.m.data() + r0 * dim;
    cplx* row1 = d.m.data() + (r0 | B) * dim;
    for (uint64_t ch = 0; ch < half; ++ch) {
      uint64_t c0 = detail::insert_zero_bit(ch, q), c1 = c0 | B;
      cplx b00 = row0[c0], b01 = row0[c1], b10 = row1[c0], b11 = row1[c1];
      if (relax) {
        b00 += p * b11;
        b11 *= keep;
        b01 *= g;
        b10 *= g;
      }
      cplx t00 = u00 * b00 + u01 * b10, t01 = u00 * b01 + u01 * b11;
      cplx t10 = u10 * b00 + u11 * b10, t11 = u10 * b01 + u11 * b11;
      row0[c0] = t00 * v00 + t01 * v01;
      row0[c1] = t00 * v10 + t01 * v11;
      row1[c0] = t10 * v00 + t11 * v01;
      row1[c1] = t10 * v10 + t11 * v11;
    }
  }
}

// Fused two-qubit pass; qa is the most significant local bit. Pending
// relaxation on both qubits is applied inside the same sweep, before the
// unitary sandwich.
inline void density_apply_2q(Density& d, const Mat4& u, int qa, int qb,
                             const RelaxParams& ra, const RelaxParams& rb) {
  const uint64_t Ba = 1ull << qa, Bb = 1ull << qb, dim = d.dim;
  const uint64_t quarter = dim >> 2;
  const int lo = qa < qb ? qa : qb, hi = qa < qb ? qb : qa;
  const uint64_t off[4] = {0, Bb, Ba, Ba | Bb};
  const bool relax_a = (ra.p != 0.0 || ra.q != 0.0);
  const bool relax_b = (rb.p != 0.0 || rb.q != 0.0);
  cplx e[4][4], t[4][4];
  for (uint64_t rh = 0; rh < quarter; ++rh) {
    uint64_t rbase = detail::insert_zero_bit(detail::insert_zero_bit(rh, lo), hi);
    for (uint64_t ch = 0; ch < quarter; ++ch) {
      uint64_t cbase = detail::insert_zero_bit(detail::insert_zero_bit(ch, lo), hi);
      for (int vr = 0; vr < 4; ++vr)
        for (int vc = 0; vc < 4; ++vc)
          e[vr][vc] = d.m[(rbase + off[vr]) * dim + (cbase + off[vc])];
      if (relax_a) {  // qubit a lives on local bit 1
        for (int rb_ = 0; rb_ < 2; ++rb_)
          for (int cb_ = 0; cb_ < 2; ++cb_) {
            e[rb_][cb_] += ra.p * e[2 | rb_][2 | cb_];
            e[2 | rb_][2 | cb_] *= (1.0 - ra.p);
            e[rb_][2 | cb_] *= ra.gamma;
            e[2 | rb_][cb_] *= ra.gamma;
          }
      }
      if (relax_b) {  // qubit b lives on local bit 0
        for (int ra_ = 0; ra_ < 2; ++ra_)
          for (int ca_ = 0; ca_ < 2; ++ca_) {
            e[ra_ * 2][ca_ * 2] += rb.p * e[ra_ * 2 + 1][ca_ * 2 + 1];
            e[ra_ * 2 + 1][ca_ * 2 + 1] *= (1.0 - rb.p);
            e[ra_ * 2][ca_ * 2 + 1] *= rb.gamma;
            e[ra_ * 2 + 1][ca_ * 2] *= rb.gamma;
          }
      }
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          cplx s(0, 0);
          for (int k = 0; k < 4; ++k) s += u(i, k) * e[k][j];
          t[i][j] = s;
        }
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
          cplx s(0, 0);
          for (int k = 0; k < 4; ++k) s += t[i][k] * std::conj(u(j, k));
          d.m[(rbase + off[i]) * dim + (cbase + off[j])] = s;
        }
    }
  }
}

// Uniform two-qubit depolarizing channel on (qa, qb):
// rho -> (1 - 16p/15) rho + (4p/15) Tr_ab(rho) (x) I. Block-local: each 4x4
// sub-block mixes toward its own trace.
inline void density_depol_2q(Density& d, int qa, int qb, double p) {
  if (p == 0.0) return;
  const uint64_t Ba = 1ull << qa, Bb = 1ull << qb, dim = d.dim;
  const uint64_t quarter = dim >> 2;
  const int lo = qa < qb ? qa : qb, hi = qa < qb ? qb : qa;
  const uint64_t off[4] = {0, Bb, Ba, Ba | Bb};
  const double f = 1.0 - 16.0 * p / 15.0, g = 4.0 * p / 15.0;
  for (uint64_t rh = 0; rh < quarter; ++rh) {
    uint64_t rbase = detail::insert_zero_bit(detail::insert_zero_bit(rh, lo), hi);
    for (uint64_t ch = 0; ch < quarter; ++ch) {
      uint64_t cbase = detail::insert_zero_bit(detail::insert_zero_bit(ch, lo), hi);
      cplx tr(0, 0);
      for (int v = 0; v < 4; ++v) tr += d.m[(rbase + off[v]) * dim + (cbase + off[v])];
      tr *= g;
      for (int vr = 0; vr < 4; ++vr)
        for (int vc = 0; vc < 4; ++vc) {
          cplx& x = d.m[(rbase + off[vr]) * dim + (cbase + off[vc])];
          x *= f;
          if (vr == vc) x += tr;
        }
    }
  }
}

// Diagonal +-1 gate: rho(r,c) *= s_r s_c.
inline void density_apply_signs(Density& d, const std::vector<int8_t>& sign) {
  if (sign.size() != d.dim) throw std::invalid_argument("density: sign vector size");
  for (uint64_t r = 0; r < d.dim; ++r) {
    cplx* row = d.m.data() + r * d.dim;
    int8_t sr = sign[r];
    for (uint64_t c = 0; c < d.dim; ++c)
      if (sr * sign[c] < 0) row[c] = -row[c];
  }
}

}  // namespace qgrove
