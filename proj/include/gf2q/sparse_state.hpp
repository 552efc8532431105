// SPDX-License-Identifier: Apache-2.0
#pragma once

// Sparse basis-amplitude simulator. Keys are fixed-width bit strings stored
// as little-endian 64-bit words; qubit q is bit (q % 64) of word (q / 64), so
// qubit 0 is the least significant bit of the basis index.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstring>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "json.hpp"

#include "gf2q/circuit.hpp"
#include "gf2q/errors.hpp"
#include "gf2q/gf2.hpp"
#include "gf2q/rng.hpp"

namespace gf2q {

using Amplitude = std::complex<double>;

inline constexpr double kPruneThreshold = 1e-12;
inline constexpr double kNormTolerance = 1e-9;

namespace detail {

inline std::uint64_t hash_words(const std::uint64_t* w, std::size_t n) {
  std::uint64_t h = 0x243F6A8885A308D3ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= w[i] + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h = (h ^ (h >> 31)) * 0xBF58476D1CE4E5B9ULL;
  }
  return h ^ (h >> 29);
}

// Open-addressing map from multi-word key to a dense slot index.
class KeyIndex {
 public:
  KeyIndex(std::size_t stride, std::size_t expected) : stride_(stride) {
    std::size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    table_.assign(cap, -1);
  }

  // Returns (slot, inserted).
  std::pair<std::size_t, bool> find_or_insert(const std::uint64_t* key) {
    if ((count_ + 1) * 2 > table_.size()) grow();
    const std::size_t mask = table_.size() - 1;
    std::size_t pos = hash_words(key, stride_) & mask;
    while (true) {
      const std::int64_t s = table_[pos];
      if (s < 0) {
        table_[pos] = static_cast<std::int64_t>(count_);
        keys_.insert(keys_.end(), key, key + stride_);
        return {count_++, true};
      }
      if (std::equal(key, key + stride_, keys_.data() + static_cast<std::size_t>(s) * stride_))
        return {static_cast<std::size_t>(s), false};
      pos = (pos + 1) & mask;
    }
  }

  const std::vector<std::uint64_t>& keys() const { return keys_; }
  std::size_t size() const { return count_; }

 private:
  void grow() {
    std::vector<std::int64_t> t(table_.size() * 2, -1);
    const std::size_t mask = t.size() - 1;
    for (std::size_t s = 0; s < count_; ++s) {
      std::size_t pos = hash_words(keys_.data() + s * stride_, stride_) & mask;
      while (t[pos] >= 0) pos = (pos + 1) & mask;
      t[pos] = static_cast<std::int64_t>(s);
    }
    table_.swap(t);
  }

  std::size_t stride_;
  std::size_t count_ = 0;
  std::vector<std::int64_t> table_;
  std::vector<std::uint64_t> keys_;
};

inline bool key_bit(const std::uint64_t* k, Qubit q) { return (k[q >> 6] >> (q & 63)) & 1U; }
inline void key_flip(std::uint64_t* k, Qubit q) { k[q >> 6] ^= std::uint64_t{1} << (q & 63); }

// Applies a permutation gate to one key in place.
inline void permute_key(std::uint64_t* k, const Gate& g) {
  switch (g.kind) {
    case GateKind::X: key_flip(k, g.q[0]); break;
    case GateKind::CNOT:
      if (key_bit(k, g.q[0])) key_flip(k, g.q[1]);
      break;
    case GateKind::TOFFOLI:
      if (key_bit(k, g.q[0]) && key_bit(k, g.q[1])) key_flip(k, g.q[2]);
      break;
    case GateKind::FREDKIN:
      if (key_bit(k, g.q[0]) && key_bit(k, g.q[1]) != key_bit(k, g.q[2])) {
        key_flip(k, g.q[1]);
        key_flip(k, g.q[2]);
      }
      break;
    default: throw ContractViolation("permute_key: not a permutation gate");
  }
}

inline std::size_t words_for(std::size_t width) { return std::max<std::size_t>(1, (width + 63) / 64); }

}  // namespace detail

// Entry i of `bits` is the value of the i-th measured qubit.
struct Sample {
  Gf2Vector bits;
  double probability = 0.0;
};

class SparseState {
 public:
  static constexpr std::size_t kDefaultEntryLimit = std::size_t{1} << 26;

  SparseState() = default;

  static SparseState init_basis(std::size_t width, const Gf2Vector& bits) {
    if (width == 0) throw ContractViolation("init_basis: width must be >= 1");
    if (bits.size() != width)
      throw ContractViolation("init_basis: expected " + std::to_string(width) + " bits, got " +
                              std::to_string(bits.size()));
    SparseState s;
    s.width_ = width;
    s.stride_ = detail::words_for(width);
    s.keys_.assign(s.stride_, 0);
    for (std::size_t i = 0; i < width; ++i)
      if (bits.get(i)) detail::key_flip(s.keys_.data(), static_cast<Qubit>(i));
    s.amps_.assign(1, Amplitude(1.0, 0.0));
    s.max_entries_ = 1;
    return s;
  }

  static SparseState init_zero(std::size_t width) { return init_basis(width, Gf2Vector(width)); }

  std::size_t width() const { return width_; }
  std::size_t stride() const { return stride_; }
  std::size_t size() const { return amps_.size(); }
  const std::uint64_t* key(std::size_t i) const { return keys_.data() + i * stride_; }
  Amplitude amp(std::size_t i) const { return amps_[i]; }
  bool bit(std::size_t i, Qubit q) const { return detail::key_bit(key(i), q); }

  // Largest entry count seen since construction.
  std::size_t max_entries() const { return max_entries_; }
  std::size_t hadamards_applied() const { return hadamards_; }
  void set_entry_limit(std::size_t limit) { entry_limit_ = limit; }
  std::size_t entry_limit() const { return entry_limit_; }

  Gf2Vector key_bits(std::size_t i) const {
    Gf2Vector v(width_);
    for (std::size_t q = 0; q < width_; ++q)
      if (bit(i, static_cast<Qubit>(q))) v.set(q, true);
    return v;
  }

  Amplitude amplitude_of(const Gf2Vector& bits) const {
    if (bits.size() != width_) throw ContractViolation("amplitude_of: width mismatch");
    for (std::size_t i = 0; i < size(); ++i) {
      bool eq = true;
      for (std::size_t q = 0; q < width_ && eq; ++q) eq = bit(i, static_cast<Qubit>(q)) == bits.get(q);
      if (eq) return amps_[i];
    }
    return {0.0, 0.0};
  }

  double norm2() const {
    double s = 0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }

  void check_norm(const char* where) const {
    const double n = norm2();
    if (!(std::abs(n - 1.0) <= kNormTolerance))
      throw InvariantBreach(std::string(where) + ": state norm " + std::to_string(n) + " drifted from 1");
  }

  void apply_gate(const Gate& g) {
    for (std::size_t i = 0; i < g.arity(); ++i)
      if (g.q[i] >= width_) throw ContractViolation("apply_gate: qubit out of range");
    switch (g.kind) {
      case GateKind::X:
      case GateKind::CNOT:
      case GateKind::TOFFOLI:
      case GateKind::FREDKIN:
        for (std::size_t i = 0; i < size(); ++i) detail::permute_key(keys_.data() + i * stride_, g);
        break;
      case GateKind::S: phase(g.q[0], Amplitude(0.0, 1.0)); break;
      case GateKind::S_DAG: phase(g.q[0], Amplitude(0.0, -1.0)); break;
      case GateKind::T: phase(g.q[0], Amplitude(M_SQRT1_2, M_SQRT1_2)); break;
      case GateKind::T_DAG: phase(g.q[0], Amplitude(M_SQRT1_2, -M_SQRT1_2)); break;
      case GateKind::H: hadamard(g.q[0]); break;
    }
  }

  void apply_circuit(const Circuit& c) {
    if (c.width() > width_)
      throw ContractViolation("apply_circuit: circuit width " + std::to_string(c.width()) + " exceeds state width " +
                              std::to_string(width_));
    for (const Gate& g : c.gates()) apply_gate(g);
    check_norm("apply_circuit");
  }

  // Marginal distribution of the listed qubits; entry i of each key is qubits[i].
  std::map<Gf2Vector, double> exact_marginal(const std::vector<Qubit>& qubits) const {
    check_qubits(qubits);
    std::map<Gf2Vector, double> out;
    for (std::size_t i = 0; i < size(); ++i) out[project(i, qubits)] += std::norm(amps_[i]);
    return out;
  }

  // Samples the listed qubits from the exact marginal and collapses the state.
  Sample measure(const std::vector<Qubit>& qubits, Rng& rng) {
    auto marginal = exact_marginal(qubits);
    double total = 0;
    for (const auto& [k, p] : marginal) total += p;
    const double u = uniform_unit(rng) * total;
    double acc = 0;
    auto chosen = marginal.begin();
    for (auto it = marginal.begin(); it != marginal.end(); ++it) {
      acc += it->second;
      chosen = it;
      if (u < acc) break;
    }
    collapse(qubits, chosen->first, chosen->second);
    return {chosen->first, chosen->second / total};
  }

  Sample measure(const std::vector<Qubit>& qubits, std::uint64_t seed) {
    Rng rng(seed);
    return measure(qubits, rng);
  }

  // Keeps only branches whose listed qubits equal `value` and renormalizes.
  void collapse(const std::vector<Qubit>& qubits, const Gf2Vector& value, double probability) {
    if (!(probability > 0)) throw ContractViolation("collapse: outcome has zero probability");
    const double scale = 1.0 / std::sqrt(probability);
    std::size_t w = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (project(i, qubits) != value) continue;
      if (w != i) std::memmove(keys_.data() + w * stride_, keys_.data() + i * stride_, stride_ * sizeof(std::uint64_t));
      amps_[w++] = amps_[i] * scale;
    }
    keys_.resize(w * stride_);
    amps_.resize(w);
    check_norm("collapse");
  }

  // Sorted by the integer value of the key (most significant qubit first in "bits").
  nlohmann::ordered_json dump_json() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      for (std::size_t w = stride_; w-- > 0;)
        if (key(a)[w] != key(b)[w]) return key(a)[w] < key(b)[w];
      return false;
    });
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (std::size_t i : order) {
      std::string bits(width_, '0');
      for (std::size_t q = 0; q < width_; ++q)
        if (bit(i, static_cast<Qubit>(q))) bits[width_ - 1 - q] = '1';
      out.push_back({{"bits", bits}, {"re", amps_[i].real()}, {"im", amps_[i].imag()}});
    }
    return out;
  }

  Gf2Vector project(std::size_t i, const std::vector<Qubit>& qubits) const {
    Gf2Vector v(qubits.size());
    for (std::size_t j = 0; j < qubits.size(); ++j)
      if (bit(i, qubits[j])) v.set(j, true);
    return v;
  }

 private:
  void check_qubits(const std::vector<Qubit>& qubits) const {
    if (qubits.empty()) throw ContractViolation("register must name at least one qubit");
    for (Qubit q : qubits)
      if (q >= width_) throw ContractViolation("register qubit " + std::to_string(q) + " out of range");
  }

  void phase(Qubit q, Amplitude f) {
    for (std::size_t i = 0; i < size(); ++i)
      if (bit(i, q)) amps_[i] *= f;
  }

  void hadamard(Qubit q) {
    ++hadamards_;
    detail::KeyIndex index(stride_, size());
    std::vector<Amplitude> a0, a1;
    a0.reserve(size());
    a1.reserve(size());
    std::vector<std::uint64_t> base(stride_);
    for (std::size_t i = 0; i < size(); ++i) {
      std::copy(key(i), key(i) + stride_, base.begin());
      const bool one = detail::key_bit(base.data(), q);
      if (one) detail::key_flip(base.data(), q);
      auto [slot, inserted] = index.find_or_insert(base.data());
      if (inserted) {
        a0.emplace_back(0.0, 0.0);
        a1.emplace_back(0.0, 0.0);
      }
      (one ? a1 : a0)[slot] += amps_[i];
    }
    const std::size_t groups = index.size();
    const auto& gkeys = index.keys();
    std::vector<std::uint64_t> nkeys;
    std::vector<Amplitude> namps;
    nkeys.reserve(2 * groups * stride_);
    namps.reserve(2 * groups);
    for (std::size_t s = 0; s < groups; ++s) {
      const Amplitude n0 = (a0[s] + a1[s]) * M_SQRT1_2;
      const Amplitude n1 = (a0[s] - a1[s]) * M_SQRT1_2;
      const std::uint64_t* gk = gkeys.data() + s * stride_;
      if (std::abs(n0) >= kPruneThreshold) {
        nkeys.insert(nkeys.end(), gk, gk + stride_);
        namps.push_back(n0);
      }
      if (std::abs(n1) >= kPruneThreshold) {
        nkeys.insert(nkeys.end(), gk, gk + stride_);
        detail::key_flip(nkeys.data() + nkeys.size() - stride_, q);
        namps.push_back(n1);
      }
    }
    if (namps.size() > entry_limit_)
      throw ResourceError("sparse state grew to " + std::to_string(namps.size()) + " entries (limit " +
                          std::to_string(entry_limit_) + ")");
    keys_.swap(nkeys);
    amps_.swap(namps);
    max_entries_ = std::max(max_entries_, amps_.size());
    check_norm("hadamard");
  }

  std::size_t width_ = 0;
  std::size_t stride_ = 1;
  std::vector<std::uint64_t> keys_;
  std::vector<Amplitude> amps_;
  std::size_t max_entries_ = 0;
  std::size_t hadamards_ = 0;
  std::size_t entry_limit_ = kDefaultEntryLimit;
};

struct MeasurementOutcome {
  Gf2Vector bits;
  double probability = 0.0;
  SparseState post_state;
};

inline MeasurementOutcome measure_register(const SparseState& state, const std::vector<Qubit>& qubits,
                                           std::uint64_t seed) {
  MeasurementOutcome out{{}, 0.0, state};
  auto s = out.post_state.measure(qubits, seed);
  out.bits = std::move(s.bits);
  out.probability = s.probability;
  return out;
}

inline std::map<Gf2Vector, double> exact_marginal(const SparseState& state, const std::vector<Qubit>& qubits) {
  return state.exact_marginal(qubits);
}

inline SparseState init_basis(std::size_t width, const Gf2Vector& bits) { return SparseState::init_basis(width, bits); }

inline SparseState apply_circuit(SparseState s, const Circuit& c) {
  s.apply_circuit(c);
  return s;
}

// Runs a permutation-only circuit on a packed basis key in place.
inline void classical_eval_words(const Circuit& c, std::uint64_t* words) {
  for (const Gate& g : c.gates()) {
    if (!is_permutation_kind(g.kind))
      throw ContractViolation(std::string("classical_eval: ") + std::string(mnemonic(g.kind)) +
                              " is not a permutation gate");
    detail::permute_key(words, g);
  }
}

inline Gf2Vector classical_eval(const Circuit& c, const Gf2Vector& bits) {
  if (bits.size() != c.width())
    throw ContractViolation("classical_eval: expected " + std::to_string(c.width()) + " bits, got " +
                            std::to_string(bits.size()));
  std::vector<std::uint64_t> w(detail::words_for(c.width()), 0);
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (bits.get(i)) detail::key_flip(w.data(), static_cast<Qubit>(i));
  classical_eval_words(c, w.data());
  Gf2Vector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i)
    if (detail::key_bit(w.data(), static_cast<Qubit>(i))) out.set(i, true);
  return out;
}

}  // namespace gf2q
