#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgrove/gates.hpp"

namespace qgrove {

// One controlled-Z-type phase term: applies a -1 phase when every listed
// qubit matches its sense, i.e. the product over q in qubits of
// (x_q XOR xbit(q)) is 1. x_mask is a global-index mask restricted to the
// term's qubits; a set bit flips that qubit's sense (X conjugation).
// Two-qubit terms are plain (possibly X-conjugated) CZ gates; wider terms are
// multi-controlled Z.
struct PhaseTerm {
  std::vector<int> qubits;  // ascending, size >= 2
  uint64_t x_mask = 0;

  bool evaluates(uint64_t x) const {
    for (int q : qubits)
      if ((((x ^ x_mask) >> q) & 1ull) == 0) return false;
    return true;
  }
};

inline void validate_term(const PhaseTerm& t, int n_data) {
  if (t.qubits.size() < 2) throw std::invalid_argument("phase term: needs >= 2 qubits");
  uint64_t qmask = 0;
  for (size_t i = 0; i < t.qubits.size(); ++i) {
    if (t.qubits[i] < 0 || t.qubits[i] >= n_data)
      throw std::invalid_argument("phase term: qubit out of range");
    if (i > 0 && t.qubits[i] <= t.qubits[i - 1])
      throw std::invalid_argument("phase term: qubits must be ascending");
    qmask |= 1ull << t.qubits[i];
  }
  if (t.x_mask & ~qmask) throw std::invalid_argument("phase term: x_mask outside term qubits");
}

// Marked set of a term list: states where an odd number of terms fire.
inline std::vector<uint64_t> marked_of_terms(int n_data, const std::vector<PhaseTerm>& terms) {
  std::vector<uint64_t> marked;
  for (uint64_t x = 0; x < (1ull << n_data); ++x) {
    int par = 0;
    for (const PhaseTerm& t : terms) par ^= t.evaluates(x) ? 1 : 0;
    if (par) marked.push_back(x);
  }
  return marked;
}

enum class OracleRealization : uint8_t { IdealDiagonal, GateList };

// An r-solution phase oracle over n_data qubits: -1 phase on `marked`.
// IdealDiagonal applies the diagonal directly (noiseless by design);
// GateList realizes it from CZ-type phase terms.
struct OracleSpec {
  int n_data = 0;
  std::vector<uint64_t> marked;  // sorted ascending
  OracleRealization realization = OracleRealization::IdealDiagonal;
  std::vector<PhaseTerm> terms;  // GateList only

  static OracleSpec ideal(int n_data, std::vector<uint64_t> marked) {
    OracleSpec s;
    s.n_data = n_data;
    s.marked = std::move(marked);
    std::sort(s.marked.begin(), s.marked.end());
    s.realization = OracleRealization::IdealDiagonal;
    return s;
  }

  static OracleSpec gate_list(int n_data, std::vector<PhaseTerm> terms) {
    OracleSpec s;
    s.n_data = n_data;
    s.terms = std::move(terms);
    s.realization = OracleRealization::GateList;
    s.marked = marked_of_terms(n_data, s.terms);
    return s;
  }

  int r() const { return static_cast<int>(marked.size()); }
};

inline void validate_oracle(const OracleSpec& s) {
  if (s.n_data < 1 || s.n_data > 20) throw std::invalid_argument("oracle: bad n_data");
  uint64_t dim = 1ull << s.n_data;
  if (s.marked.empty() || s.marked.size() >= dim)
    throw std::invalid_argument("oracle: need 1 <= |marked| <= 2^n - 1");
  for (size_t i = 0; i < s.marked.size(); ++i) {
    if (s.marked[i] >= dim) throw std::invalid_argument("oracle: marked index out of range");
    if (i > 0 && s.marked[i] <= s.marked[i - 1])
      throw std::invalid_argument("oracle: marked must be sorted unique");
  }
  if (s.realization == OracleRealization::GateList) {
    for (const PhaseTerm& t : s.terms) validate_term(t, s.n_data);
    if (marked_of_terms(s.n_data, s.terms) != s.marked)
      throw std::invalid_argument("oracle: gate list does not realize the marked set");
  }
}

// Ancilla count needed to realize the oracle block with the AND-ladder
// (a width-w term needs w-2 ancillas; ideal diagonals need none).
inline int oracle_ancilla_demand(const OracleSpec& s) {
  if (s.realization == OracleRealization::IdealDiagonal) return 0;
  int demand = 0;
  for (const PhaseTerm& t : s.terms)
    demand = std::max(demand, static_cast<int>(t.qubits.size()) - 2);
  return demand;
}

// Benchmark oracle with r = 2^j solutions realized as one phase term over the
// low n-j qubits (all-ones sense): marks exactly the states whose low n-j
// bits are set.
inline OracleSpec power_of_two_oracle(int n_data, int j) {
  if (j < 0 || n_data - j < 2)
    throw std::invalid_argument("power_of_two_oracle: term must span >= 2 qubits");
  PhaseTerm t;
  for (int q = 0; q < n_data - j; ++q) t.qubits.push_back(q);
  return OracleSpec::gate_list(n_data, {t});
}

}  // namespace qgrove
