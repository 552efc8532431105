// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reversible gate-level circuits over a closed gate set, the Toffoli and
// Fredkin decomposition templates, static resource counting, the serial
// ion-trap runtime model, and the QC1 text format.

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gf2q/errors.hpp"

namespace gf2q {

using Qubit = std::uint32_t;

enum class GateKind : std::uint8_t { X, H, S, S_DAG, T, T_DAG, CNOT, TOFFOLI, FREDKIN };

inline constexpr std::array<GateKind, 9> kAllGateKinds = {GateKind::X,     GateKind::H,    GateKind::S,
                                                          GateKind::S_DAG, GateKind::T,    GateKind::T_DAG,
                                                          GateKind::CNOT,  GateKind::TOFFOLI, GateKind::FREDKIN};

inline constexpr std::string_view mnemonic(GateKind k) {
  switch (k) {
    case GateKind::X: return "X";
    case GateKind::H: return "H";
    case GateKind::S: return "S";
    case GateKind::S_DAG: return "S_DAG";
    case GateKind::T: return "T";
    case GateKind::T_DAG: return "T_DAG";
    case GateKind::CNOT: return "CNOT";
    case GateKind::TOFFOLI: return "TOFFOLI";
    case GateKind::FREDKIN: return "FREDKIN";
  }
  return "?";
}

inline std::optional<GateKind> kind_from_mnemonic(std::string_view s) {
  for (GateKind k : kAllGateKinds)
    if (mnemonic(k) == s) return k;
  return std::nullopt;
}

inline constexpr std::size_t arity(GateKind k) {
  switch (k) {
    case GateKind::CNOT: return 2;
    case GateKind::TOFFOLI:
    case GateKind::FREDKIN: return 3;
    default: return 1;
  }
}

inline constexpr bool is_permutation_kind(GateKind k) {
  return k == GateKind::X || k == GateKind::CNOT || k == GateKind::TOFFOLI || k == GateKind::FREDKIN;
}

inline constexpr GateKind inverse_kind(GateKind k) {
  switch (k) {
    case GateKind::S: return GateKind::S_DAG;
    case GateKind::S_DAG: return GateKind::S;
    case GateKind::T: return GateKind::T_DAG;
    case GateKind::T_DAG: return GateKind::T;
    default: return k;
  }
}

// Controls come first: CNOT(c, t), TOFFOLI(c1, c2, t), FREDKIN(c, a, b).
struct Gate {
  GateKind kind = GateKind::X;
  std::array<Qubit, 3> q{};

  std::size_t arity() const { return gf2q::arity(kind); }
  friend bool operator==(const Gate&, const Gate&) = default;
};

struct Register {
  std::string name;
  Qubit start = 0;
  std::size_t size = 0;

  Qubit operator[](std::size_t i) const { return start + static_cast<Qubit>(i); }
  std::vector<Qubit> qubits() const {
    std::vector<Qubit> v(size);
    for (std::size_t i = 0; i < size; ++i) v[i] = (*this)[i];
    return v;
  }
  friend bool operator==(const Register&, const Register&) = default;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(std::size_t width) : width_(width) {}

  std::size_t width() const { return width_; }
  const std::vector<Gate>& gates() const { return gates_; }
  const std::vector<Register>& registers() const { return registers_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  // Appends a fresh register of `size` qubits at the top of the index range.
  Register add_register(std::string name, std::size_t size) {
    Register r{std::move(name), static_cast<Qubit>(width_), size};
    width_ += size;
    registers_.push_back(r);
    return r;
  }

  const Register& reg(std::string_view name) const {
    for (const auto& r : registers_)
      if (r.name == name) return r;
    throw ContractViolation("no register named " + std::string(name));
  }

  // Grows the width without naming the new qubits (used by fragments).
  void widen(std::size_t width) {
    if (width > width_) width_ = width;
  }

  void add(const Gate& g) {
    const std::size_t a = g.arity();
    for (std::size_t i = 0; i < a; ++i) {
      if (g.q[i] >= width_)
        throw ContractViolation(std::string(mnemonic(g.kind)) + ": qubit " + std::to_string(g.q[i]) +
                                " out of range for width " + std::to_string(width_));
      for (std::size_t j = 0; j < i; ++j)
        if (g.q[i] == g.q[j]) throw ContractViolation(std::string(mnemonic(g.kind)) + ": repeated qubit");
    }
    gates_.push_back(g);
  }

  void x(Qubit a) { add({GateKind::X, {a, 0, 0}}); }
  void h(Qubit a) { add({GateKind::H, {a, 0, 0}}); }
  void s(Qubit a) { add({GateKind::S, {a, 0, 0}}); }
  void sdg(Qubit a) { add({GateKind::S_DAG, {a, 0, 0}}); }
  void t(Qubit a) { add({GateKind::T, {a, 0, 0}}); }
  void tdg(Qubit a) { add({GateKind::T_DAG, {a, 0, 0}}); }
  void cnot(Qubit c, Qubit t) { add({GateKind::CNOT, {c, t, 0}}); }
  void toffoli(Qubit c1, Qubit c2, Qubit t) { add({GateKind::TOFFOLI, {c1, c2, t}}); }
  void fredkin(Qubit c, Qubit a, Qubit b) { add({GateKind::FREDKIN, {c, a, b}}); }

  void append(const Circuit& other) {
    if (other.width_ > width_) throw ContractViolation("append: fragment is wider than circuit");
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  }

  // Same width and registers, no gates.
  Circuit empty_like() const {
    Circuit c(width_);
    c.registers_ = registers_;
    return c;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::size_t width_ = 0;
  std::vector<Gate> gates_;
  std::vector<Register> registers_;
};

// Reverse order, each gate replaced by its inverse.
inline Circuit inverse(const Circuit& c) {
  Circuit out = c.empty_like();
  for (auto it = c.gates().rbegin(); it != c.gates().rend(); ++it) {
    Gate g = *it;
    g.kind = inverse_kind(g.kind);
    out.add(g);
  }
  return out;
}

// Toffoli(c1, c2; t): 6 CNOT, 7 T/T_DAG, 2 H, 1 S.
inline void emit_toffoli_template(Circuit& out, Qubit c1, Qubit c2, Qubit t) {
  out.h(t);
  out.cnot(c2, t);
  out.tdg(t);
  out.cnot(c1, t);
  out.t(t);
  out.cnot(c2, t);
  out.tdg(t);
  out.cnot(c1, t);
  out.t(t);
  out.h(t);
  out.t(c1);
  out.tdg(c2);
  out.cnot(c1, c2);
  out.tdg(c2);
  out.cnot(c1, c2);
  out.s(c2);
}

// Fredkin(c; a, b): 7 CNOT, 7 T/T_DAG, 2 H, 3 S/S_DAG.
inline void emit_fredkin_template(Circuit& out, Qubit c, Qubit a, Qubit b) {
  out.cnot(b, a);
  out.t(c);
  out.t(a);
  out.cnot(c, a);
  out.tdg(a);
  out.cnot(c, a);
  out.h(b);
  out.t(b);
  out.cnot(c, b);
  out.tdg(b);
  out.cnot(a, b);
  out.t(b);
  out.cnot(c, b);
  out.tdg(b);
  out.h(b);
  out.s(a);
  out.s(b);
  out.cnot(b, a);
  out.sdg(a);
}

inline Circuit decompose(const Circuit& c) {
  Circuit out = c.empty_like();
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::TOFFOLI) {
      emit_toffoli_template(out, g.q[0], g.q[1], g.q[2]);
    } else if (g.kind == GateKind::FREDKIN) {
      emit_fredkin_template(out, g.q[0], g.q[1], g.q[2]);
    } else {
      out.add(g);
    }
  }
  return out;
}

using GateCounts = std::map<GateKind, std::uint64_t>;

inline constexpr double kDefaultPerCnotSeconds = 2.85e-4;
inline constexpr double kDefaultBudgetSeconds = 600.0;

struct ResourceReport {
  GateCounts counts;  // pre-decomposition, every kind present (zeros included)
  std::uint64_t cnot_equivalent = 0;
  std::uint64_t single_qubit_total = 0;
  double serial_seconds = 0.0;
  double budget_seconds = kDefaultBudgetSeconds;
  bool within_budget = true;
};

inline GateCounts count_gates(const Circuit& c) {
  GateCounts counts;
  for (GateKind k : kAllGateKinds) counts[k] = 0;
  for (const Gate& g : c.gates()) ++counts[g.kind];
  return counts;
}

inline ResourceReport estimate_runtime(ResourceReport r, double per_cnot_seconds = kDefaultPerCnotSeconds,
                                       double budget_seconds = kDefaultBudgetSeconds) {
  if (!(per_cnot_seconds > 0)) throw ContractViolation("estimate_runtime: per_cnot_seconds must be > 0");
  if (!(budget_seconds >= 0)) throw ContractViolation("estimate_runtime: budget_seconds must be >= 0");
  r.serial_seconds = static_cast<double>(r.cnot_equivalent) * per_cnot_seconds;
  r.budget_seconds = budget_seconds;
  r.within_budget = r.serial_seconds <= budget_seconds;
  return r;
}

// Counts from a kind->count map (used for formula-only estimates too).
inline ResourceReport report_from_counts(GateCounts counts) {
  for (GateKind k : kAllGateKinds) counts.try_emplace(k, 0);
  ResourceReport r;
  r.counts = counts;
  r.cnot_equivalent = counts[GateKind::CNOT] + 6 * counts[GateKind::TOFFOLI] + 7 * counts[GateKind::FREDKIN];
  std::uint64_t single = 0;
  for (GateKind k : {GateKind::X, GateKind::H, GateKind::S, GateKind::S_DAG, GateKind::T, GateKind::T_DAG})
    single += counts[k];
  r.single_qubit_total = single + 10 * counts[GateKind::TOFFOLI] + 12 * counts[GateKind::FREDKIN];
  return estimate_runtime(r);
}

inline ResourceReport count_resources(const Circuit& c) { return report_from_counts(count_gates(c)); }

inline nlohmann::ordered_json counts_to_json(const GateCounts& counts) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (GateKind k : kAllGateKinds) {
    auto it = counts.find(k);
    j[std::string(mnemonic(k))] = it == counts.end() ? 0 : it->second;
  }
  return j;
}

inline nlohmann::ordered_json to_json(const ResourceReport& r) {
  nlohmann::ordered_json j;
  j["counts"] = counts_to_json(r.counts);
  j["cnot_equivalent"] = r.cnot_equivalent;
  j["single_qubit_total"] = r.single_qubit_total;
  j["serial_seconds"] = r.serial_seconds;
  j["budget_seconds"] = r.budget_seconds;
  j["within_budget"] = r.within_budget;
  return j;
}

// QC1 text format:
//   QC1 width=<w>
//   # reg <name> <start> <size>     (optional register declarations)
//   <MNEMONIC> <q0> [<q1> [<q2>]]   (controls first)
// '#' starts a comment; lines end with LF.
inline void serialize(const Circuit& c, std::ostream& out) {
  out << "QC1 width=" << c.width() << '\n';
  for (const auto& r : c.registers()) out << "# reg " << r.name << ' ' << r.start << ' ' << r.size << '\n';
  for (const Gate& g : c.gates()) {
    out << mnemonic(g.kind);
    for (std::size_t i = 0; i < g.arity(); ++i) out << ' ' << g.q[i];
    out << '\n';
  }
}

inline std::string serialize(const Circuit& c) {
  std::ostringstream os;
  serialize(c, os);
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::uint64_t parse_index(const std::string& tok, std::size_t lineno) {
  if (tok.empty() || tok.size() > 12) throw ParseError(lineno, "bad integer \"" + tok + "\"");
  std::uint64_t v = 0;
  for (char ch : tok) {
    if (ch < '0' || ch > '9') throw ParseError(lineno, "bad integer \"" + tok + "\"");
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
  }
  return v;
}

}  // namespace detail

inline Circuit parse_circuit(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<Circuit> c;
  std::vector<Register> regs;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') throw ParseError(lineno, "CR line ending (QC1 uses LF)");
    std::string_view body = line;
    if (auto hash = body.find('#'); hash != std::string_view::npos) {
      auto comment = detail::split_ws(body.substr(hash + 1));
      if (!comment.empty() && comment[0] == "reg") {
        if (comment.size() != 4) throw ParseError(lineno, "register declaration needs: reg <name> <start> <size>");
        regs.push_back({comment[1], static_cast<Qubit>(detail::parse_index(comment[2], lineno)),
                        static_cast<std::size_t>(detail::parse_index(comment[3], lineno))});
      }
      body = body.substr(0, hash);
    }
    auto tok = detail::split_ws(body);
    if (tok.empty()) continue;
    if (!c) {
      if (tok.size() != 2 || tok[0] != "QC1" || tok[1].rfind("width=", 0) != 0)
        throw ParseError(lineno, "expected header \"QC1 width=<w>\"");
      c.emplace(static_cast<std::size_t>(detail::parse_index(tok[1].substr(6), lineno)));
      continue;
    }
    auto kind = kind_from_mnemonic(tok[0]);
    if (!kind) throw ParseError(lineno, "unknown gate \"" + tok[0] + "\"");
    if (tok.size() - 1 != arity(*kind))
      throw ParseError(lineno, tok[0] + " takes " + std::to_string(arity(*kind)) + " qubit(s), got " +
                                   std::to_string(tok.size() - 1));
    Gate g{*kind, {}};
    for (std::size_t i = 0; i < arity(*kind); ++i) {
      auto v = detail::parse_index(tok[i + 1], lineno);
      if (v >= c->width()) throw ParseError(lineno, "qubit " + tok[i + 1] + " out of range for width " + std::to_string(c->width()));
      g.q[i] = static_cast<Qubit>(v);
    }
    try {
      c->add(g);
    } catch (const ContractViolation& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (!c) throw ParseError(lineno, "missing \"QC1 width=<w>\" header");
  std::size_t end = 0;
  for (const auto& r : regs) {
    if (r.start != end || r.start + r.size > c->width()) throw ParseError(0, "register \"" + r.name + "\" does not tile the qubit range");
    end += r.size;
  }
  Circuit out(0);
  for (const auto& r : regs) out.add_register(r.name, r.size);
  out.widen(c->width());
  out.append(*c);
  return out;
}

inline Circuit parse_circuit(std::string_view text) {
  std::istringstream is{std::string(text)};
  return parse_circuit(is);
}

}  // namespace gf2q
