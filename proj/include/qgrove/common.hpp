#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qgrove {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec = Eigen::VectorXcd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Wrap an angle into (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

// Wrap a Z rotation angle into (-pi, pi] and adjust the accompanying global
// phase: RZ has period 4*pi, so each 2*pi step folded away flips the sign,
// i.e. adds pi to the global phase.
inline double wrap_rz_angle(double t, double& global_phase) {
  double w = wrap_angle(t);
  long long k = std::llround((t - w) / (2.0 * kPi));
  if (k % 2 != 0) global_phase += kPi;
  return w;
}

// |tr(U^dag V)| / dim, equal to 1 iff U = V up to global phase.
inline double unitary_fidelity(const Mat& u, const Mat& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols())
    throw std::invalid_argument("unitary_fidelity: dimension mismatch");
  cplx t = (u.adjoint() * v).trace();
  return std::abs(t) / static_cast<double>(u.rows());
}

inline bool is_unitary(const Mat& u, double tol = 1e-10) {
  Mat d = u.adjoint() * u - Mat::Identity(u.rows(), u.cols());
  return d.cwiseAbs().maxCoeff() < tol;
}

// FNV-1a 64-bit hash, used for content hashes in result manifests.
inline uint64_t fnv1a64(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

}  // namespace qgrove
