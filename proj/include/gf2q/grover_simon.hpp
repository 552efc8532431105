// SPDX-License-Identifier: Apache-2.0
#pragma once

// Key search on a toy FX cipher Enc(x) = E_{k0}(x ^ k1) ^ k2. Grover runs
// over the inner key register; every candidate key drives ell Simon blocks
// on f(k, x) = Enc(x) ^ E_k(x), whose sampled rows are solved by ALG2 and
// handed, together with the key, to a plaintext-pair test.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gf2q/circuit.hpp"
#include "gf2q/errors.hpp"
#include "gf2q/linsolve.hpp"
#include "gf2q/oracle_compile.hpp"
#include "gf2q/rng.hpp"
#include "gf2q/simon.hpp"
#include "gf2q/sparse_state.hpp"

namespace gf2q {

struct FxInstance {
  std::size_t m = 0, n = 0;
  std::vector<std::vector<std::uint64_t>> E;  // E[k][x], each a permutation of n-bit words
  std::uint64_t k0 = 0, k1 = 0, k2 = 0;

  std::uint64_t enc(std::uint64_t x) const { return E[k0][x ^ k1] ^ k2; }
  std::uint64_t f(std::uint64_t k, std::uint64_t x) const { return enc(x) ^ E[k][x]; }
};

inline void validate(const FxInstance& fx) {
  if (fx.m == 0 || fx.m > 8 || fx.n == 0 || fx.n > 8) throw ContractViolation("fx: need 1 <= m,n <= 8");
  const std::uint64_t keys = std::uint64_t{1} << fx.m, size = std::uint64_t{1} << fx.n;
  if (fx.E.size() != keys) throw ContractViolation("fx: expected 2^m permutations");
  for (const auto& e : fx.E) {
    if (e.size() != size) throw ContractViolation("fx: every permutation needs 2^n entries");
    std::vector<bool> seen(size, false);
    for (auto v : e) {
      if (v >= size || seen[v]) throw ContractViolation("fx: E_k is not a permutation");
      seen[v] = true;
    }
  }
  if (fx.k0 >= keys || fx.k1 >= size || fx.k2 >= size) throw ContractViolation("fx: key out of range");
}

// True when no key other than k0 makes f(k, .) periodic.
inline bool fx_promise_holds(const FxInstance& fx) {
  const std::uint64_t size = std::uint64_t{1} << fx.n;
  for (std::uint64_t k = 0; k < fx.E.size(); ++k) {
    if (k == fx.k0) continue;
    std::vector<std::uint64_t> t(size);
    for (std::uint64_t x = 0; x < size; ++x) t[x] = fx.f(k, x);
    if (!periods_of_table(fx.n, t).empty()) return false;
  }
  return true;
}

struct FxDraw {
  FxInstance fx;
  bool promise_holds = false;
  std::size_t attempts = 0;
};

// Random FX instance; redraws up to `retries` times until no wrong key has a
// periodic f(k, .). The last draw is returned with the flag cleared if none
// qualifies.
inline FxDraw random_fx(std::size_t m, std::size_t n, std::uint64_t seed, std::size_t retries = 64) {
  FxDraw d;
  Rng rng(seed);
  const std::uint64_t keys = std::uint64_t{1} << m, size = std::uint64_t{1} << n;
  for (d.attempts = 1;; ++d.attempts) {
    FxInstance fx;
    fx.m = m;
    fx.n = n;
    for (std::uint64_t k = 0; k < keys; ++k) {
      std::vector<std::uint64_t> p(size);
      for (std::uint64_t x = 0; x < size; ++x) p[x] = x;
      shuffle(p, rng);
      fx.E.push_back(std::move(p));
    }
    fx.k0 = uniform_below(rng, keys);
    fx.k1 = uniform_below(rng, size - 1) + 1;
    fx.k2 = uniform_below(rng, size);
    validate(fx);
    d.fx = std::move(fx);
    d.promise_holds = fx_promise_holds(d.fx);
    if (d.promise_holds || d.attempts >= retries) return d;
  }
}

// ell = 2(n + sqrt n) as used by the success analysis.
inline double analysis_ell(std::size_t n) { return 2.0 * (static_cast<double>(n) + std::sqrt(static_cast<double>(n))); }

inline std::size_t default_pairs(std::size_t m, std::size_t n, std::size_t ell) { return (3 * m + n * ell + n - 1) / n; }

// Soundness of the plaintext-pair test at the analysis ell: 1 - 2^-(2m + n ell - 4).
inline double classifier_soundness(std::size_t m, std::size_t n) {
  return 1.0 - std::pow(2.0, -(2.0 * static_cast<double>(m) + static_cast<double>(n) * analysis_ell(n) - 4.0));
}

inline constexpr double kGroverSimonSuccessBound = 0.4;

enum class ClassifierMode {
  UNCOMPUTE,  // U4^-1 U5^-1 O U5 U4: all solver ancillas return to 0
  KEEP,       // O U4^-1 U5 U4: k and solution stay entangled, fresh ones per call
};

inline std::string to_string(ClassifierMode c) { return c == ClassifierMode::UNCOMPUTE ? "uncompute" : "keep"; }
inline ClassifierMode classifier_mode_from_string(std::string_view s) {
  if (s == "uncompute") return ClassifierMode::UNCOMPUTE;
  if (s == "keep") return ClassifierMode::KEEP;
  throw ContractViolation("unknown classifier mode \"" + std::string(s) + "\" (expected uncompute or keep)");
}

struct GroverSimonConfig {
  FxInstance fx;
  std::size_t ell = 4;
  std::size_t pairs = 0;       // 0: default_pairs(m, n, ell)
  std::size_t iterations = 0;  // 0: grover_iterations(m)
  std::uint64_t seed = 0;
  ClassifierMode classifier = ClassifierMode::UNCOMPUTE;
  std::size_t entry_limit = SparseState::kDefaultEntryLimit;
};

struct PlaintextPair {
  std::uint64_t a = 0, b = 0;
};

inline std::vector<PlaintextPair> draw_pairs(std::size_t n, std::size_t count, Rng& rng) {
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<PlaintextPair> out;
  for (std::size_t i = 0; i < count; ++i) {
    PlaintextPair p;
    p.a = uniform_below(rng, size);
    p.b = (p.a + 1 + uniform_below(rng, size - 1)) % size;
    out.push_back(p);
  }
  return out;
}

// Test table over (k, v), index k | v << m: 1 when the candidate pair
// reproduces every plaintext-pair difference.
inline std::vector<std::uint64_t> pair_test_table(const FxInstance& fx, const std::vector<PlaintextPair>& pairs) {
  const std::uint64_t keys = std::uint64_t{1} << fx.m, size = std::uint64_t{1} << fx.n;
  std::vector<std::uint64_t> t(keys * size, 0);
  for (std::uint64_t k = 0; k < keys; ++k) {
    for (std::uint64_t v = 0; v < size; ++v) {
      bool ok = true;
      for (const auto& p : pairs)
        ok = ok && (fx.enc(p.a) ^ fx.enc(p.b)) == (fx.E[k][p.a ^ v] ^ fx.E[k][p.b ^ v]);
      t[k | (v << fx.m)] = ok;
    }
  }
  return t;
}

struct GroverSimonCircuit {
  Circuit circuit;
  Register key, inputs, values, flag, work;
  LinsolveLayout solver;
  Register readout_k, readout_solution;  // where the final solution is read
  std::vector<PlaintextPair> pairs;
  std::vector<std::uint64_t> test_table;
  std::size_t iterations = 0;
};

namespace detail {

inline std::vector<std::vector<Qubit>> rows_of(const Register& r, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<Qubit>> g(rows, std::vector<Qubit>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) g[i][j] = r[i * cols + j];
  return g;
}

inline std::vector<Qubit> concat(std::initializer_list<std::vector<Qubit>> parts) {
  std::vector<Qubit> out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace detail

inline GroverSimonCircuit build_grover_simon(const GroverSimonConfig& cfg) {
  const auto& fx = cfg.fx;
  validate(fx);
  if (cfg.ell == 0) throw ContractViolation("grover-simon: ell must be >= 1");
  const std::size_t m = fx.m, n = fx.n, ell = cfg.ell;
  const std::size_t pairs = cfg.pairs ? cfg.pairs : default_pairs(m, n, ell);
  GroverSimonCircuit g;
  g.iterations = cfg.iterations ? cfg.iterations : grover_iterations(m);
  Rng rng(derive_seed(cfg.seed, 1));
  g.pairs = draw_pairs(n, pairs, rng);
  g.test_table = pair_test_table(fx, g.pairs);

  Circuit& c = g.circuit;
  g.key = c.add_register("key", m);
  g.inputs = c.add_register("inputs", ell * n);
  g.values = c.add_register("values", ell * n);
  g.flag = c.add_register("flag", 1);
  g.work = c.add_register("work", std::max<std::size_t>(1, m + 2 * ell * n - 1));
  const auto rows = detail::rows_of(g.inputs, ell, n);
  g.solver = allocate_linsolve(c, Variant::ALG2, ell, n, &rows, "u4_");

  const auto key = g.key.qubits(), work = g.work.qubits();
  const Qubit y = g.flag[0];

  // A: key and inputs to uniform, ell keyed queries, H on the inputs.
  Circuit a = c.empty_like();
  for (Qubit q : key) a.h(q);
  for (Qubit q : g.inputs.qubits()) a.h(q);
  std::vector<std::uint64_t> ftab(std::size_t{1} << (m + n));
  for (std::uint64_t k = 0; k < (std::uint64_t{1} << m); ++k)
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) ftab[k | (x << m)] = fx.f(k, x);
  const auto vals = detail::rows_of(g.values, ell, n);
  for (std::size_t b = 0; b < ell; ++b) compile_truth_table(a, detail::concat({key, rows[b]}), vals[b], ftab, work);
  for (Qubit q : g.inputs.qubits()) a.h(q);

  auto solver_block = [&](const LinsolveLayout& L) {
    Circuit u = c.empty_like();
    LinsolveLayout copy = L;
    emit_forward(u, copy);
    emit_extraction(u, copy);
    return u;
  };
  auto elim_block = [&](const LinsolveLayout& L) {
    Circuit u = c.empty_like();
    LinsolveLayout copy = L;
    emit_forward(u, copy);
    return u;
  };
  auto test_on = [&](Circuit& out, const Register& sol) {
    compile_truth_table(out, detail::concat({key, sol.qubits()}), {y}, g.test_table, work);
  };

  // S0 up to global phase: flag flip on the all-zero (key, inputs, values) word.
  Circuit s0 = c.empty_like();
  compile_zero_test(s0, detail::concat({key, g.inputs.qubits(), g.values.qubits()}), y, work);

  c.x(y);
  c.h(y);
  c.append(a);
  const Circuit a_inv = inverse(a);
  for (std::size_t it = 0; it < g.iterations; ++it) {
    if (cfg.classifier == ClassifierMode::UNCOMPUTE) {
      const Circuit u45 = solver_block(g.solver);
      c.append(u45);
      test_on(c, g.solver.solution);
      c.append(inverse(u45));
    } else {
      LinsolveLayout fresh = g.solver;
      fresh.k = c.add_register("k_it" + std::to_string(it), n);
      fresh.solution = c.add_register("solution_it" + std::to_string(it), n);
      const Circuit u4 = elim_block(fresh);
      Circuit u5 = c.empty_like();
      emit_extraction(u5, fresh);
      c.append(u4);
      c.append(u5);
      c.append(inverse(u4));
      test_on(c, fresh.solution);
    }
    c.append(a_inv);
    c.append(s0);
    c.append(a);
  }
  LinsolveLayout out = g.solver;
  if (cfg.classifier == ClassifierMode::KEEP) {
    out.k = c.add_register("k_readout", n);
    out.solution = c.add_register("solution_readout", n);
  }
  c.append(solver_block(out));
  g.readout_k = out.k;
  g.readout_solution = out.solution;
  return g;
}

struct GroverSimonResult {
  std::uint64_t k0_found = 0, k1_found = 0;
  double success_probability = 0;  // exact mass on (k0, k1)
  double key_mass = 0;             // exact mass on k0, any solution
  double accepted_mass = 0;        // mass on pairs the plaintext test accepts
  double sampled_probability = 0;
  std::size_t iterations = 0, pairs = 0, width = 0, max_entries = 0;
  std::size_t marked_keys = 0;  // keys the test accepts for every solution value
  double ideal_key_mass = 0;    // Grover prediction for k0 when marking is key-only
  bool marking_is_key_only = false;
  GateCounts counts;
};

// Grover prediction for one marked element among `marked` out of `total`.
inline double grover_mass_per_marked(std::size_t total, std::size_t marked, std::size_t iterations) {
  if (marked == 0) return 1.0 / static_cast<double>(total);
  const double theta = std::asin(std::sqrt(static_cast<double>(marked) / static_cast<double>(total)));
  const double s = std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
  return s * s / static_cast<double>(marked);
}

inline GroverSimonResult grover_meets_simon(const GroverSimonConfig& cfg) {
  auto g = build_grover_simon(cfg);
  const auto& fx = cfg.fx;
  auto s = SparseState::init_zero(g.circuit.width());
  s.set_entry_limit(cfg.entry_limit);
  s.apply_circuit(g.circuit);

  GroverSimonResult r;
  r.iterations = g.iterations;
  r.pairs = g.pairs.size();
  r.width = g.circuit.width();
  r.max_entries = s.max_entries();
  r.counts = count_gates(g.circuit);
  const auto read = detail::concat({g.key.qubits(), g.readout_solution.qubits()});
  for (const auto& [bits, p] : s.exact_marginal(read)) {
    const std::uint64_t w = bits.to_u64();
    const std::uint64_t k = w & ((std::uint64_t{1} << fx.m) - 1), v = w >> fx.m;
    if (k == fx.k0) r.key_mass += p;
    if (k == fx.k0 && v == fx.k1) r.success_probability += p;
    if (g.test_table[w]) r.accepted_mass += p;
  }
  auto sample = s.measure(read, derive_seed(cfg.seed, 2));
  const std::uint64_t w = sample.bits.to_u64();
  r.k0_found = w & ((std::uint64_t{1} << fx.m) - 1);
  r.k1_found = w >> fx.m;
  r.sampled_probability = sample.probability;

  const std::uint64_t keys = std::uint64_t{1} << fx.m, size = std::uint64_t{1} << fx.n;
  r.marking_is_key_only = true;
  for (std::uint64_t k = 0; k < keys; ++k) {
    std::size_t hits = 0;
    for (std::uint64_t v = 0; v < size; ++v) hits += g.test_table[k | (v << fx.m)] != 0;
    if (hits == size) ++r.marked_keys;
    else if (hits != 0) r.marking_is_key_only = false;
  }
  r.ideal_key_mass = grover_mass_per_marked(keys, r.marked_keys, r.iterations);
  return r;
}

}  // namespace gf2q
