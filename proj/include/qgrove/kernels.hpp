#pragma once

#include <cstdint>
#include <vector>

#include "qgrove/common.hpp"
#include "qgrove/gates.hpp"

namespace qgrove {

// Low-level statevector kernels shared by the dense-unitary builder, the
// pure-state simulator and the trajectory sampler.
//
// Index convention: qubit q contributes bit q of the basis index. Dense local
// matrices follow the gate convention (first listed qubit = most significant
// local bit), so the local value of global index i for qubit list Q is
//   v = sum_j bit(i, Q[j]) << (k-1-j).

// Offsets of the 2^k local basis values inside the global index space.
inline void local_offsets(const std::vector<int>& qubits, uint64_t* offsets) {
  int k = static_cast<int>(qubits.size());
  uint64_t dim = 1ull << k;
  for (uint64_t v = 0; v < dim; ++v) {
    uint64_t off = 0;
    for (int j = 0; j < k; ++j)
      if ((v >> (k - 1 - j)) & 1ull) off |= 1ull << qubits[j];
    offsets[v] = off;
  }
}

// Apply a dense local unitary on the listed qubits to a full statevector.
inline void apply_local_unitary(cplx* state, int width, const Mat& local,
                                const std::vector<int>& qubits) {
  int k = static_cast<int>(qubits.size());
  uint64_t n = 1ull << width;

  if (k == 1) {
    uint64_t b = 1ull << qubits[0];
    cplx m00 = local(0, 0), m01 = local(0, 1), m10 = local(1, 0), m11 = local(1, 1);
    for (uint64_t hi = 0; hi < n; hi += 2 * b) {
      for (uint64_t lo = 0; lo < b; ++lo) {
        cplx a0 = state[hi + lo];
        cplx a1 = state[hi + lo + b];
        state[hi + lo] = m00 * a0 + m01 * a1;
        state[hi + lo + b] = m10 * a0 + m11 * a1;
      }
    }
    return;
  }

  uint64_t dim = 1ull << k;
  uint64_t offsets[64];
  local_offsets(qubits, offsets);

  // Ascending bit positions for zero-insertion enumeration of base indices.
  std::vector<int> pos(qubits.begin(), qubits.end());
  for (size_t i = 0; i < pos.size(); ++i)
    for (size_t j = i + 1; j < pos.size(); ++j)
      if (pos[j] < pos[i]) std::swap(pos[i], pos[j]);

  cplx amps[64], out[64];
  for (uint64_t idx = 0; idx < (n >> k); ++idx) {
    uint64_t base = idx;
    for (int p : pos) {
      uint64_t low = base & ((1ull << p) - 1);
      base = ((base >> p) << (p + 1)) | low;
    }
    for (uint64_t v = 0; v < dim; ++v) amps[v] = state[base + offsets[v]];
    for (uint64_t r = 0; r < dim; ++r) {
      cplx acc = 0.0;
      for (uint64_t cidx = 0; cidx < dim; ++cidx) acc += local(r, cidx) * amps[cidx];
      out[r] = acc;
    }
    for (uint64_t v = 0; v < dim; ++v) state[base + offsets[v]] = out[v];
  }
}

// Sign flip on every basis state where all bits of `and_mask` are set
// (controlled-Z of any order; symmetric under relabeling).
inline void apply_cz_mask(cplx* state, int width, uint64_t and_mask) {
  uint64_t n = 1ull << width;
  for (uint64_t i = 0; i < n; ++i)
    if ((i & and_mask) == and_mask) state[i] = -state[i];
}

// Marked-state lookup table for a DIAG_ORACLE gate: flags[v] = 1 if the
// oracle's local value v (bit j of v = qubits[j], least-significant-first) is
// marked.
inline std::vector<uint8_t> oracle_flag_table(const Gate& g) {
  std::vector<uint8_t> flags(1ull << g.qubits.size(), 0);
  for (double p : g.params) flags[static_cast<uint64_t>(p)] = 1;
  return flags;
}

// Local value of a global index under the oracle (LSB-first) convention.
inline uint64_t oracle_local_value(uint64_t idx, const std::vector<int>& qubits) {
  uint64_t v = 0;
  for (size_t j = 0; j < qubits.size(); ++j) v |= ((idx >> qubits[j]) & 1ull) << j;
  return v;
}

// Apply a DIAG_ORACLE gate: -1 phase on marked local values.
inline void apply_diag_oracle(cplx* state, int width, const Gate& g,
                              const std::vector<uint8_t>& flags) {
  uint64_t n = 1ull << width;
  // Fast path: contiguous ascending qubits starting at some q0.
  int k = static_cast<int>(g.qubits.size());
  bool contiguous = true;
  for (int j = 1; j < k; ++j)
    if (g.qubits[j] != g.qubits[0] + j) contiguous = false;
  if (contiguous) {
    int shift = g.qubits[0];
    uint64_t mask = (1ull << k) - 1;
    for (uint64_t i = 0; i < n; ++i)
      if (flags[(i >> shift) & mask]) state[i] = -state[i];
    return;
  }
  for (uint64_t i = 0; i < n; ++i)
    if (flags[oracle_local_value(i, g.qubits)]) state[i] = -state[i];
}

}  // namespace qgrove
