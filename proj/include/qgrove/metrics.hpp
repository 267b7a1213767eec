#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "qgrove/distribution.hpp"

namespace qgrove {

// Total variation distance between two distributions on the same register.
inline double tvd(const Distribution& a, const Distribution& b) {
  if (a.width != b.width || a.p.size() != b.p.size())
    throw std::invalid_argument("tvd: mismatched outcome spaces");
  double s = 0;
  for (size_t i = 0; i < a.p.size(); ++i) s += std::abs(a.p[i] - b.p[i]);
  return 0.5 * s;
}

// Error-suppression factor tvd_baseline / tvd_mode. A perfectly corrected
// mode yields +inf; rendered as "inf" downstream.
inline double improvement_factor(double tvd_baseline, double tvd_mode) {
  if (tvd_baseline < 0 || tvd_mode < 0)
    throw std::invalid_argument("improvement_factor: negative distance");
  if (tvd_mode == 0) return std::numeric_limits<double>::infinity();
  return tvd_baseline / tvd_mode;
}

struct NormalFit {
  double mean = 0;
  double stddev = 0;  // maximum-likelihood (1/n) estimate
  size_t n = 0;
};

inline NormalFit normal_fit(const std::vector<double>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("normal_fit: need at least 2 samples");
  NormalFit f;
  f.n = xs.size();
  for (double x : xs) f.mean += x;
  f.mean /= double(f.n);
  double v = 0;
  for (double x : xs) v += (x - f.mean) * (x - f.mean);
  f.stddev = std::sqrt(v / double(f.n));
  return f;
}

inline double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / double(xs.size());
}

inline double variance_of(const std::vector<double>& xs) {
  if (xs.empty()) return 0;
  double m = mean_of(xs), v = 0;
  for (double x : xs) v += (x - m) * (x - m);
  return v / double(xs.size());
}

inline double stddev_of(const std::vector<double>& xs) { return std::sqrt(variance_of(xs)); }

// Pearson correlation coefficient.
inline double correlation(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2)
    throw std::invalid_argument("correlation: need matched samples");
  double mx = mean_of(xs), my = mean_of(ys);
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace qgrove
