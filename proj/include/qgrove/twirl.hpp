#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "qgrove/circuit.hpp"
#include "qgrove/common.hpp"
#include "qgrove/rng.hpp"
#include "qgrove/transpile.hpp"
#include "qgrove/unitary.hpp"

namespace qgrove {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline const char* pauli_name(Pauli p) {
  switch (p) {
    case Pauli::I: return "I";
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    default: return "Z";
  }
}

inline Mat2 pauli_mat(Pauli p) {
  switch (p) {
    case Pauli::I: return Mat2::Identity();
    case Pauli::X: return Mat2(x_mat());
    case Pauli::Y: return Mat2(y_mat());
    default: return Mat2(z_mat());
  }
}

// Correction frame for one twirl: (qa x qb) G (pa x pb) = sign * G.
struct TwirlFrame {
  Pauli qa = Pauli::I, qb = Pauli::I;
  int sign = 1;
};

namespace detail {

inline Mat4 kron2(const Mat2& a, const Mat2& b) {
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

inline Mat4 twirl_conjugate(const Mat4& g, Pauli pa, Pauli pb) {
  return g * kron2(pauli_mat(pa), pauli_mat(pb)) * g.adjoint();
}

inline TwirlFrame solve_twirl_frame(const Mat4& g, Pauli pa, Pauli pb) {
  Mat4 m = twirl_conjugate(g, pa, pb);
  for (int qa = 0; qa < 4; ++qa)
    for (int qb = 0; qb < 4; ++qb) {
      Mat4 q = kron2(pauli_mat(static_cast<Pauli>(qa)),
                     pauli_mat(static_cast<Pauli>(qb)));
      for (int sign : {1, -1}) {
        if ((m - double(sign) * q).cwiseAbs().maxCoeff() < 1e-9)
          return {static_cast<Pauli>(qa), static_cast<Pauli>(qb), sign};
      }
    }
  throw std::runtime_error("twirl: conjugate is not a signed Pauli pair");
}

inline Mat4 twirl_base_matrix(GateKind k) {
  switch (k) {
    case GateKind::CX: return Mat4(cx_mat());
    case GateKind::CZ: return Mat4(cz_mat());
    case GateKind::XX: return Mat4(xx_mat(kPi / 2));
    default:
      throw std::invalid_argument("twirl: kind is not a Clifford two-qubit gate");
  }
}

}  // namespace detail

// Pull the correction Paulis through gate kind k (CX, CZ or XX(pi/2)).
// Frames are tabulated once per kind.
inline TwirlFrame twirl_gate(GateKind k, Pauli pa, Pauli pb) {
  auto table_for = [](GateKind kk) {
    std::array<TwirlFrame, 16> t;
    Mat4 g = detail::twirl_base_matrix(kk);
    for (int i = 0; i < 16; ++i)
      t[i] = detail::solve_twirl_frame(g, static_cast<Pauli>(i / 4),
                                       static_cast<Pauli>(i % 4));
    return t;
  };
  int idx = static_cast<int>(pa) * 4 + static_cast<int>(pb);
  switch (k) {
    case GateKind::CX: {
      static const std::array<TwirlFrame, 16> t = table_for(GateKind::CX);
      return t[idx];
    }
    case GateKind::CZ: {
      static const std::array<TwirlFrame, 16> t = table_for(GateKind::CZ);
      return t[idx];
    }
    case GateKind::XX: {
      static const std::array<TwirlFrame, 16> t = table_for(GateKind::XX);
      return t[idx];
    }
    default:
      throw std::invalid_argument("twirl: kind is not a Clifford two-qubit gate");
  }
}

// Gate realization of a Pauli insertion: X directly, Y as GPI(pi/2), Z as
// RZ(pi); all equal the Pauli up to global phase and fuse into neighbours.
inline std::vector<Gate> pauli_insertion_gates(int q, Pauli p) {
  switch (p) {
    case Pauli::I: return {};
    case Pauli::X: return {Gate::x(q)};
    case Pauli::Y: return {Gate::gpi(q, kPi / 2)};
    default: return {Gate::rz(q, kPi)};
  }
}

struct RCEnsemble {
  Circuit base;                  // untwirled native compilation
  std::vector<Circuit> members;  // logically equivalent native circuits
  uint64_t seed = 0;
};

namespace detail {

// Dress every XX in the stream with a random Pauli pair and its correction.
// Exactly one below(16) draw is consumed per XX gate, in stream order.
inline std::vector<Gate> insert_twirls(const std::vector<Gate>& stream, Rng& rng) {
  std::vector<Gate> out;
  out.reserve(stream.size() * 2);
  for (const Gate& g : stream) {
    if (g.kind != GateKind::XX) {
      out.push_back(g);
      continue;
    }
    int a = g.qubits[0], b = g.qubits[1];
    auto idx = rng.below(16);
    Pauli pa = static_cast<Pauli>(idx / 4), pb = static_cast<Pauli>(idx % 4);
    TwirlFrame f = twirl_gate(GateKind::XX, pa, pb);
    for (Gate& e : pauli_insertion_gates(a, pa)) out.push_back(std::move(e));
    for (Gate& e : pauli_insertion_gates(b, pb)) out.push_back(std::move(e));
    out.push_back(g);
    for (Gate& e : pauli_insertion_gates(a, f.qa)) out.push_back(std::move(e));
    for (Gate& e : pauli_insertion_gates(b, f.qb)) out.push_back(std::move(e));
  }
  return out;
}

}  // namespace detail

// Compile c once untwirled and n_random times with independent Pauli
// twirls around every XX. Member i uses derive_seed(seed, {i}); all members
// equal the base circuit up to global phase.
inline RCEnsemble randomize(const Circuit& c, int n_random, uint64_t seed,
                            const TranspileOptions& opts = {}) {
  if (n_random < 1) throw std::invalid_argument("randomize: n_random must be >= 1");
  validate_circuit(c);
  auto stream = detail::xx_stream(c, opts.allow_diag_oracle);
  RCEnsemble ens;
  ens.seed = seed;
  ens.base = detail::emit_native(c, stream, opts);
  ens.members.reserve(n_random);
  for (int i = 0; i < n_random; ++i) {
    Rng rng(derive_seed(seed, {static_cast<uint64_t>(i)}));
    ens.members.push_back(detail::emit_native(c, detail::insert_twirls(stream, rng), opts));
  }
  return ens;
}

}  // namespace qgrove
