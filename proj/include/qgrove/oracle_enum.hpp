#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "qgrove/oracle.hpp"
#include "qgrove/rng.hpp"

namespace qgrove {

namespace detail {

// 2^n-bit truth table as packed words (n <= 8 -> 4 words).
using TruthTable = std::array<uint64_t, 4>;

inline TruthTable term_table(int n, const PhaseTerm& t) {
  TruthTable tab{};
  for (uint64_t x = 0; x < (1ull << n); ++x)
    if (t.evaluates(x)) tab[x >> 6] |= 1ull << (x & 63);
  return tab;
}

inline void xor_into(TruthTable& a, const TruthTable& b) {
  for (int i = 0; i < 4; ++i) a[i] ^= b[i];
}

inline bool is_zero(const TruthTable& a) { return !(a[0] | a[1] | a[2] | a[3]); }

// All candidate CZ-type pair terms for the enumeration universe.
inline std::vector<PhaseTerm> pair_universe(int n, bool allow_x) {
  std::vector<PhaseTerm> out;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      if (!allow_x) {
        out.push_back({{a, b}, 0});
        continue;
      }
      for (int m = 0; m < 4; ++m) {
        uint64_t mask = (m & 1 ? 1ull << a : 0) | (m & 2 ? 1ull << b : 0);
        out.push_back({{a, b}, mask});
      }
    }
  return out;
}

// Distinct nonzero truth tables realizable with exactly k distinct terms,
// paired with the first (lexicographic) term combination achieving each.
inline void tables_with_k(int n, int k, const std::vector<PhaseTerm>& universe,
                          std::set<TruthTable>& seen,
                          std::vector<std::pair<TruthTable, std::vector<int>>>* out) {
  std::vector<TruthTable> term_tabs;
  term_tabs.reserve(universe.size());
  for (const PhaseTerm& t : universe) term_tabs.push_back(term_table(n, t));

  std::vector<int> pick(k);
  std::vector<TruthTable> prefix(k + 1);
  prefix[0] = TruthTable{};
  int u = static_cast<int>(universe.size());

  // Iterative k-combination enumeration with running XOR prefixes.
  int depth = 0;
  pick[0] = -1;
  while (depth >= 0) {
    ++pick[depth];
    if (pick[depth] > u - (k - depth)) {
      --depth;
      continue;
    }
    prefix[depth + 1] = prefix[depth];
    xor_into(prefix[depth + 1], term_tabs[pick[depth]]);
    if (depth + 1 == k) {
      const TruthTable& tab = prefix[k];
      if (!is_zero(tab) && seen.insert(tab).second && out)
        out->push_back({tab, std::vector<int>(pick.begin(), pick.end())});
    } else {
      ++depth;
      pick[depth] = pick[depth - 1];
    }
  }
}

inline std::vector<uint64_t> table_to_marked(const TruthTable& tab, int n) {
  std::vector<uint64_t> marked;
  for (uint64_t x = 0; x < (1ull << n); ++x)
    if ((tab[x >> 6] >> (x & 63)) & 1ull) marked.push_back(x);
  return marked;
}

}  // namespace detail

// Enumerate the distinct phase functions realizable with exactly k_cz
// CZ-type gates (dedup by truth table; functions realizable with fewer gates
// excluded). With allow_x_conjugation, each gate may be conjugated by X on
// either qubit. Optional filter keeps only oracles with |marked| == r.
inline std::vector<OracleSpec> enumerate_cz_oracles(int n_data, int k_cz,
                                                    bool allow_x_conjugation,
                                                    std::optional<int> solutions = std::nullopt) {
  if (n_data < 2 || n_data > 8) throw std::invalid_argument("enumerate: n_data must be 2..8");
  if (k_cz < 1 || k_cz > 4) throw std::invalid_argument("enumerate: k_cz must be 1..4");
  auto universe = detail::pair_universe(n_data, allow_x_conjugation);

  // Search-space guard (exhaustive bound).
  double combos = 1;
  for (int i = 0; i < k_cz; ++i) combos *= static_cast<double>(universe.size() - i) / (i + 1);
  if (combos > 1e7) throw std::invalid_argument("enumerate: search-space bound exceeded");

  // Tables realizable with fewer gates are excluded from "exactly k".
  std::set<detail::TruthTable> seen;
  for (int j = 1; j < k_cz; ++j) detail::tables_with_k(n_data, j, universe, seen, nullptr);
  std::vector<std::pair<detail::TruthTable, std::vector<int>>> found;
  detail::tables_with_k(n_data, k_cz, universe, seen, &found);

  std::vector<OracleSpec> out;
  for (auto& [tab, pick] : found) {
    auto marked = detail::table_to_marked(tab, n_data);
    if (solutions && static_cast<int>(marked.size()) != *solutions) continue;
    std::vector<PhaseTerm> terms;
    for (int idx : pick) terms.push_back(universe[idx]);
    OracleSpec s = OracleSpec::gate_list(n_data, std::move(terms));
    validate_oracle(s);
    out.push_back(std::move(s));
  }
  return out;
}

// Uniform sampling (without replacement) of size-r subsets of [0, 2^n) as
// ideal-diagonal oracles. count == 0 means "all": valid only for r = 1, which
// yields every singleton; r = 1 also goes exhaustive whenever count >= 2^n.
inline std::vector<OracleSpec> random_marked_sets(int n_data, int r, uint64_t count,
                                                  uint64_t seed) {
  uint64_t dim = 1ull << n_data;
  if (r < 1 || static_cast<uint64_t>(r) > dim - 1)
    throw std::invalid_argument("random_marked_sets: need 1 <= r <= 2^n - 1");
  std::vector<OracleSpec> out;
  if (r == 1 && (count == 0 || count >= dim)) {
    for (uint64_t x = 0; x < dim; ++x) out.push_back(OracleSpec::ideal(n_data, {x}));
    return out;
  }
  if (count == 0)
    throw std::invalid_argument("random_marked_sets: exhaustive mode is r = 1 only");
  double combos = 1;
  for (int i = 0; i < r && combos < 1e18; ++i)
    combos *= static_cast<double>(dim - i) / (i + 1);
  if (static_cast<double>(count) > combos)
    throw std::invalid_argument("random_marked_sets: count exceeds distinct subsets");

  Rng rng(seed);
  std::set<std::vector<uint64_t>> distinct;
  std::vector<uint64_t> pool(dim);
  while (distinct.size() < count) {
    for (uint64_t i = 0; i < dim; ++i) pool[i] = i;
    for (int i = 0; i < r; ++i) {
      uint64_t j = i + rng.below(dim - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<uint64_t> marked(pool.begin(), pool.begin() + r);
    std::sort(marked.begin(), marked.end());
    if (distinct.insert(marked).second) out.push_back(OracleSpec::ideal(n_data, marked));
  }
  return out;
}

}  // namespace qgrove
