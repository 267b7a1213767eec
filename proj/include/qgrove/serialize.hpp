#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgrove/circuit.hpp"
#include "qgrove/common.hpp"
#include "qgrove/distribution.hpp"
#include "qgrove/gates.hpp"
#include "qgrove/noise.hpp"
#include "qgrove/oracle.hpp"

namespace qgrove {

using json = nlohmann::json;

// ---- circuits ----
// {"width":W,"roles":"ddaa","gates":[{"kind":"gpi2","qubits":[0],"params":[..]},..]}
// Doubles survive a round trip bit-exactly (shortest-repr printing).

inline json circuit_to_json(const Circuit& c) {
  json j;
  j["width"] = c.width;
  std::string roles;
  for (Role r : c.roles) roles.push_back(r == Role::Ancilla ? 'a' : 'd');
  j["roles"] = roles;
  json gl = json::array();
  for (const Gate& g : c.gates) {
    json e;
    e["kind"] = kind_name(g.kind);
    e["qubits"] = g.qubits;
    if (!g.params.empty()) e["params"] = g.params;
    gl.push_back(std::move(e));
  }
  j["gates"] = std::move(gl);
  return j;
}

inline Circuit circuit_from_json(const json& j) {
  int width = j.at("width").get<int>();
  Circuit c(width);
  if (j.contains("roles")) {
    std::string roles = j.at("roles").get<std::string>();
    if (int(roles.size()) != width)
      throw std::invalid_argument("circuit json: roles length != width");
    for (int q = 0; q < width; ++q) {
      if (roles[q] != 'd' && roles[q] != 'a')
        throw std::invalid_argument("circuit json: role must be 'd' or 'a'");
      c.roles[q] = roles[q] == 'a' ? Role::Ancilla : Role::Data;
    }
  }
  for (const json& e : j.at("gates")) {
    Gate g;
    g.kind = kind_from_name(e.at("kind").get<std::string>());
    g.qubits = e.at("qubits").get<std::vector<int>>();
    if (e.contains("params")) g.params = e.at("params").get<std::vector<double>>();
    c.push(std::move(g));
  }
  validate_circuit(c);
  return c;
}

// ---- oracles ----

inline json oracle_to_json(const OracleSpec& s) {
  json j;
  j["n_data"] = s.n_data;
  j["realization"] = s.realization == OracleRealization::IdealDiagonal ? "ideal" : "gate_list";
  j["marked"] = s.marked;
  if (s.realization == OracleRealization::GateList) {
    json terms = json::array();
    for (const PhaseTerm& t : s.terms) {
      json e;
      e["qubits"] = t.qubits;
      e["x_mask"] = t.x_mask;
      terms.push_back(std::move(e));
    }
    j["terms"] = std::move(terms);
  }
  return j;
}

inline OracleSpec oracle_from_json(const json& j) {
  int n = j.at("n_data").get<int>();
  std::string real = j.at("realization").get<std::string>();
  if (real == "ideal") {
    OracleSpec s = OracleSpec::ideal(n, j.at("marked").get<std::vector<uint64_t>>());
    validate_oracle(s);
    return s;
  }
  if (real != "gate_list") throw std::invalid_argument("oracle json: bad realization");
  std::vector<PhaseTerm> terms;
  for (const json& e : j.at("terms")) {
    PhaseTerm t;
    t.qubits = e.at("qubits").get<std::vector<int>>();
    t.x_mask = e.at("x_mask").get<uint64_t>();
    terms.push_back(std::move(t));
  }
  OracleSpec s = OracleSpec::gate_list(n, terms);
  if (j.contains("marked")) {
    auto m = j.at("marked").get<std::vector<uint64_t>>();
    if (m != s.marked)
      throw std::invalid_argument("oracle json: marked set inconsistent with terms");
  }
  validate_oracle(s);
  return s;
}

// ---- noise ----

inline json noise_to_json(const NoiseSpec& n) {
  json j;
  j["en_over_rotation"] = n.en_over_rotation;
  j["eps1"] = n.eps1;
  j["eps2"] = n.eps2;
  j["en_relaxation"] = n.en_relaxation;
  j["t1"] = n.t1;
  j["t2"] = n.t2;
  j["dur1"] = n.dur1;
  j["dur2"] = n.dur2;
  j["en_stochastic"] = n.en_stochastic;
  j["p_stoch2"] = n.p_stoch2;
  j["en_readout"] = n.en_readout;
  j["p_readout"] = n.p_readout;
  return j;
}

inline NoiseSpec noise_from_json(const json& j) {
  NoiseSpec n;
  n.en_over_rotation = j.value("en_over_rotation", false);
  n.eps1 = j.value("eps1", 0.0);
  n.eps2 = j.value("eps2", 0.0);
  n.en_relaxation = j.value("en_relaxation", false);
  n.t1 = j.value("t1", 0.0);
  n.t2 = j.value("t2", 0.0);
  n.dur1 = j.value("dur1", 0.0);
  n.dur2 = j.value("dur2", 0.0);
  n.en_stochastic = j.value("en_stochastic", false);
  n.p_stoch2 = j.value("p_stoch2", 0.0);
  n.en_readout = j.value("en_readout", false);
  n.p_readout = j.value("p_readout", 0.0);
  validate_noise(n);
  return n;
}

// ---- distributions ----

inline json distribution_to_json(const Distribution& d) {
  json j;
  j["width"] = d.width;
  j["exact"] = d.exact;
  j["shots"] = d.shots;
  j["retention"] = d.retention;
  j["p"] = d.p;
  return j;
}

inline Distribution distribution_from_json(const json& j) {
  Distribution d = Distribution::zeros(j.at("width").get<int>(), j.at("exact").get<bool>());
  d.shots = j.value("shots", uint64_t{0});
  d.retention = j.value("retention", 1.0);
  d.p = j.at("p").get<std::vector<double>>();
  if (d.p.size() != (size_t(1) << d.width))
    throw std::invalid_argument("distribution json: size mismatch");
  return d;
}

// ---- file helpers ----

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

// ---- CSV ----
// All floating-point fields print with %.17g so re-parsing reproduces the
// exact double; infinities print as "inf".

inline std::string csv_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct CsvWriter {
  std::string text;

  explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

  void row_strings(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) text.push_back(',');
      text += cells[i];
    }
    text.push_back('\n');
  }
};

}  // namespace qgrove
