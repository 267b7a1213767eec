#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qgrove/common.hpp"

namespace qgrove {

// Probability vector over basis states of a qubit subset (index bit q =
// listed qubit q of that subset, least significant first). `exact` marks
// infinite-shot results; sampled results carry the shot count. `retention`
// is 1 unless the distribution was conditioned by post-selection.
struct Distribution {
  std::vector<double> p;
  int width = 0;
  bool exact = true;
  uint64_t shots = 0;
  double retention = 1.0;

  static Distribution zeros(int width, bool exact = true) {
    Distribution d;
    d.width = width;
    d.p.assign(1ull << width, 0.0);
    d.exact = exact;
    return d;
  }

  double sum() const {
    double s = 0;
    for (double v : p) s += v;
    return s;
  }
};

inline void validate_distribution(const Distribution& d, double tol = 1e-9) {
  if (d.p.size() != (1ull << d.width))
    throw std::invalid_argument("distribution: size must be 2^width");
  for (double v : d.p)
    if (v < -1e-12) throw std::invalid_argument("distribution: negative probability");
  if (std::abs(d.sum() - 1.0) > tol)
    throw std::invalid_argument("distribution: must sum to 1");
}

// Marginal over a qubit subset (ascending order kept; subset qubit j becomes
// bit j of the marginal index).
inline Distribution marginal(const Distribution& d, const std::vector<int>& keep) {
  for (size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= d.width)
      throw std::invalid_argument("marginal: qubit out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("marginal: keep list must be ascending");
  }
  Distribution out = Distribution::zeros(static_cast<int>(keep.size()), d.exact);
  out.shots = d.shots;
  out.retention = d.retention;
  for (uint64_t x = 0; x < d.p.size(); ++x) {
    uint64_t y = 0;
    for (size_t j = 0; j < keep.size(); ++j) y |= ((x >> keep[j]) & 1ull) << j;
    out.p[y] += d.p[x];
  }
  return out;
}

// Render a basis index as a bitstring, most-significant-qubit first.
inline std::string bitstring(uint64_t idx, int width) {
  std::string s(width, '0');
  for (int q = 0; q < width; ++q)
    if ((idx >> q) & 1ull) s[width - 1 - q] = '1';
  return s;
}

}  // namespace qgrove
