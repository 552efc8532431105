// SPDX-License-Identifier: Apache-2.0
#pragma once

// Asymmetric period search: find the index i0 for which f_i0 ^ g is
// periodic, then its period. Grover runs over the index register; the test
// oracle queries f_i into cn Simon blocks that already hold g, solves the
// Hadamard-transformed inputs with ALG3, flags rank < n, and uncomputes.
//
// Full simulation is only affordable for a couple of blocks, so an exact
// block-level evaluator covers larger c. It relies on the test oracle being
// a clean phase flip on i0, which the full simulation checks.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gf2q/circuit.hpp"
#include "gf2q/errors.hpp"
#include "gf2q/grover_simon.hpp"
#include "gf2q/linsolve.hpp"
#include "gf2q/oracle_compile.hpp"
#include "gf2q/rng.hpp"
#include "gf2q/simon.hpp"
#include "gf2q/sparse_state.hpp"

namespace gf2q {

struct PolyQ2Config {
  std::size_t m = 1, n = 2, c = 1;
  std::vector<std::vector<std::uint64_t>> F;  // F[i][x], n-bit outputs
  std::vector<std::uint64_t> g;
  std::uint64_t i0 = 0, s = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;      // 0: grover_iterations(m)
  std::size_t simon_parallel = 0;  // 0: ceil(10.4 n)
};

inline void validate(const PolyQ2Config& cfg) {
  if (cfg.m == 0 || cfg.m > 8 || cfg.n == 0 || cfg.n > 6)
    throw ContractViolation("polyq2: need 1 <= m <= 8 and 1 <= n <= 6");
  if (cfg.c == 0) throw ContractViolation("polyq2: c must be >= 1");
  const std::uint64_t idx = std::uint64_t{1} << cfg.m, size = std::uint64_t{1} << cfg.n;
  if (cfg.F.size() != idx) throw ContractViolation("polyq2: expected 2^m functions");
  auto check = [&](const std::vector<std::uint64_t>& t, const char* what) {
    if (t.size() != size) throw ContractViolation(std::string("polyq2: ") + what + " needs 2^n entries");
    for (auto v : t)
      if (v >= size) throw ContractViolation(std::string("polyq2: ") + what + " output wider than n bits");
  };
  for (const auto& f : cfg.F) check(f, "f_i");
  check(cfg.g, "g");
  if (cfg.i0 >= idx || cfg.s == 0 || cfg.s >= size) throw ContractViolation("polyq2: i0 or s out of range");
}

inline std::vector<std::uint64_t> shifted_difference(const PolyQ2Config& cfg, std::uint64_t i) {
  std::vector<std::uint64_t> h(cfg.g.size());
  for (std::size_t x = 0; x < h.size(); ++x) h[x] = cfg.F[i][x] ^ cfg.g[x];
  return h;
}

// max over i != i0 and a outside {0, s} of Pr_x[h_i(x ^ a) = h_i(x)], with
// h_i = f_i ^ g. 0 when the domain is empty.
inline double promise_check(const PolyQ2Config& cfg) {
  double best = 0;
  const std::uint64_t size = std::uint64_t{1} << cfg.n;
  for (std::uint64_t i = 0; i < cfg.F.size(); ++i) {
    if (i == cfg.i0) continue;
    const auto h = shifted_difference(cfg, i);
    for (std::uint64_t a = 1; a < size; ++a) {
      if (a == cfg.s) continue;
      std::uint64_t hits = 0;
      for (std::uint64_t x = 0; x < size; ++x) hits += h[x] == h[x ^ a];
      best = std::max(best, static_cast<double>(hits) / static_cast<double>(size));
    }
  }
  return best;
}

inline constexpr double kPolyQ2PromiseBound = 0.5;

// 2^{(n+1)/2} (3/4)^{cn/2}
inline double polyq2_error_bound(std::size_t n, std::size_t c) {
  return std::pow(2.0, (static_cast<double>(n) + 1.0) / 2.0) *
         std::pow(0.75, static_cast<double>(c * n) / 2.0);
}

// Smallest c with polyq2_error_bound(n, c) < target.
inline std::size_t smallest_c_below(std::size_t n, double target) {
  for (std::size_t c = 1; c < 100000; ++c)
    if (polyq2_error_bound(n, c) < target) return c;
  throw ContractViolation("smallest_c_below: no c found");
}

struct PolyQ2Draw {
  PolyQ2Config cfg;
  bool promise_holds = false;
  double promise_value = 0;
  std::size_t attempts = 0;
};

// f_i random permutations; g = f_i0 ^ (coset oracle with period s). Redraws
// until no other index gives a periodic f_i ^ g and the collision promise
// holds, up to `retries` attempts.
inline PolyQ2Draw random_polyq2(std::size_t m, std::size_t n, std::size_t c, std::uint64_t seed,
                                std::size_t retries = 64) {
  PolyQ2Draw d;
  Rng rng(seed);
  const std::uint64_t idx = std::uint64_t{1} << m, size = std::uint64_t{1} << n;
  for (d.attempts = 1;; ++d.attempts) {
    PolyQ2Config cfg;
    cfg.m = m;
    cfg.n = n;
    cfg.c = c;
    cfg.seed = seed;
    for (std::uint64_t i = 0; i < idx; ++i) {
      std::vector<std::uint64_t> p(size);
      for (std::uint64_t x = 0; x < size; ++x) p[x] = x;
      shuffle(p, rng);
      cfg.F.push_back(std::move(p));
    }
    cfg.i0 = uniform_below(rng, idx);
    cfg.s = uniform_below(rng, size - 1) + 1;
    const auto h = make_oracle(n, {Gf2Vector::from_u64(n, cfg.s)}, rng());
    cfg.g.resize(size);
    for (std::uint64_t x = 0; x < size; ++x) cfg.g[x] = cfg.F[cfg.i0][x] ^ h(x);
    validate(cfg);
    bool unique = true;
    for (std::uint64_t i = 0; i < idx && unique; ++i)
      if (i != cfg.i0) unique = periods_of_table(n, shifted_difference(cfg, i)).empty();
    d.promise_value = promise_check(cfg);
    d.cfg = std::move(cfg);
    d.promise_holds = unique && d.promise_value <= kPolyQ2PromiseBound;
    if (d.promise_holds || d.attempts >= retries) return d;
  }
}

// ------------------------------------------------------------ circuit

struct PolyQ2Circuit {
  Circuit circuit;
  Register index, inputs, values, rank_flag, flag, work;
  LinsolveLayout solver;
  Circuit test_compute;  // f query, H, U4, U5, r: everything before the O flip
  Circuit test_oracle;   // compute, O, uncompute
  Circuit prepare;       // flag to |->, H on index and inputs, g queries
  Circuit diffusion;     // reflection about the uniform index state
  std::size_t iterations = 0;
};

inline PolyQ2Circuit build_polyq2(const PolyQ2Config& cfg) {
  validate(cfg);
  const std::size_t m = cfg.m, n = cfg.n, blocks = cfg.c * n;
  PolyQ2Circuit p;
  p.iterations = cfg.iterations ? cfg.iterations : grover_iterations(m);
  Circuit& c = p.circuit;
  p.index = c.add_register("index", m);
  p.inputs = c.add_register("inputs", blocks * n);
  p.values = c.add_register("values", blocks * n);
  p.rank_flag = c.add_register("r", 1);
  p.flag = c.add_register("flag", 1);
  p.work = c.add_register("work", std::max<std::size_t>({1, m + n - 1, n - 1, m}));
  const auto rows = detail::rows_of(p.inputs, blocks, n);
  const auto vals = detail::rows_of(p.values, blocks, n);
  p.solver = allocate_linsolve(c, Variant::ALG3, blocks, n, &rows, "u4_");
  const auto index = p.index.qubits(), work = p.work.qubits();
  const Qubit r = p.rank_flag[0], y = p.flag[0];

  p.prepare = c.empty_like();
  p.prepare.x(y);
  p.prepare.h(y);
  for (Qubit q : index) p.prepare.h(q);
  for (Qubit q : p.inputs.qubits()) p.prepare.h(q);
  for (std::size_t b = 0; b < blocks; ++b) compile_truth_table(p.prepare, rows[b], vals[b], cfg.g, work);

  Circuit fq = c.empty_like();
  std::vector<std::uint64_t> ftab(std::size_t{1} << (m + n));
  for (std::uint64_t i = 0; i < cfg.F.size(); ++i)
    for (std::uint64_t x = 0; x < cfg.g.size(); ++x) ftab[i | (x << m)] = cfg.F[i][x];
  for (std::size_t b = 0; b < blocks; ++b)
    compile_truth_table(fq, detail::concat({index, rows[b]}), vals[b], ftab, work);

  p.test_compute = c.empty_like();
  p.test_compute.append(fq);
  for (Qubit q : p.inputs.qubits()) p.test_compute.h(q);
  {
    LinsolveLayout L = p.solver;
    emit_forward(p.test_compute, L);
    emit_extraction(p.test_compute, L);
  }
  compile_or(p.test_compute, p.solver.rank_out.qubits(), r, work);

  p.test_oracle = p.test_compute;
  std::vector<std::uint64_t> otab(std::size_t{1} << (m + 1), 0);
  otab[cfg.i0 | (std::uint64_t{1} << m)] = 1;
  compile_truth_table(p.test_oracle, detail::concat({index, {r}}), {y}, otab, work);
  p.test_oracle.append(inverse(p.test_compute));

  p.diffusion = c.empty_like();
  for (Qubit q : index) p.diffusion.h(q);
  compile_zero_test(p.diffusion, index, y, work);
  for (Qubit q : index) p.diffusion.h(q);

  c.append(p.prepare);
  for (std::size_t it = 0; it < p.iterations; ++it) {
    c.append(p.test_oracle);
    c.append(p.diffusion);
  }
  c.append(p.test_compute);
  return p;
}

// ------------------------------------------------------------ block-level evaluator

// Probability that `draws` independent rows from `row` span fewer than n
// dimensions.
inline double rank_deficiency_probability(std::size_t n, const std::vector<double>& row, std::size_t draws) {
  const std::uint64_t size = std::uint64_t{1} << n;
  const std::uint64_t full = size == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size) - 1;
  double deficient = 0;
  for (const auto& [mask, p] : span_distribution(n, row, draws))
    if (mask != full) deficient += p;
  return deficient;
}

struct PolyQ2Evaluation {
  // Readout distribution over (index, r), keyed by index | r << m.
  std::map<std::uint64_t, double> readout;
  std::vector<double> false_positive;  // Pr[r = 1 | i] per index
  double index_mass = 0;               // Pr[i = i0]
};

inline PolyQ2Evaluation evaluate_polyq2(const PolyQ2Config& cfg, std::size_t iterations) {
  validate(cfg);
  PolyQ2Evaluation e;
  const std::size_t total = cfg.F.size(), blocks = cfg.c * cfg.n;
  for (std::uint64_t i = 0; i < total; ++i)
    e.false_positive.push_back(rank_deficiency_probability(cfg.n, simon_row_distribution(cfg.n, shifted_difference(cfg, i)), blocks));
  // A single clean phase flip on i0: standard Grover rotation.
  const double theta = std::asin(std::sqrt(1.0 / static_cast<double>(total)));
  const double s = std::sin((2.0 * static_cast<double>(iterations) + 1.0) * theta);
  e.index_mass = total == 1 ? 1.0 : s * s;
  const double rest = total == 1 ? 0.0 : (1.0 - e.index_mass) / static_cast<double>(total - 1);
  for (std::uint64_t i = 0; i < total; ++i) {
    const double pi = i == cfg.i0 ? e.index_mass : rest;
    const double p1 = e.false_positive[i];
    e.readout[i] += pi * (1.0 - p1);
    e.readout[i | (std::uint64_t{1} << cfg.m)] += pi * p1;
  }
  for (auto it = e.readout.begin(); it != e.readout.end();) it = it->second == 0 ? e.readout.erase(it) : std::next(it);
  return e;
}

// ------------------------------------------------------------ pipeline

enum class PolyQ2Engine { FULL, BLOCK };

inline std::string to_string(PolyQ2Engine e) { return e == PolyQ2Engine::FULL ? "full" : "block"; }

struct PolyQ2Result {
  std::uint64_t i0_found = 0;
  bool r = false;
  bool success = false;  // sampled outcome is (i0, 1)
  std::optional<std::uint64_t> s_found;
  double success_probability = 0;  // exact mass on (i0, r = 1)
  double max_false_positive = 0;   // max over i != i0 of Pr[r = 1 | i]
  double bound = 0;                // polyq2_error_bound(n, c)
  double promise = 0;
  std::size_t iterations = 0, simon_parallel = 0;
  PolyQ2Engine engine = PolyQ2Engine::BLOCK;
  std::map<std::uint64_t, double> readout;
  std::size_t width = 0, max_entries = 0;
  GateCounts counts;
};

// Full state simulation of the circuit; returns the readout marginal over
// (index, r) keyed as in PolyQ2Evaluation.
inline std::map<std::uint64_t, double> simulate_polyq2(const PolyQ2Circuit& p, std::size_t entry_limit,
                                                       std::size_t* max_entries = nullptr) {
  auto s = SparseState::init_zero(p.circuit.width());
  s.set_entry_limit(entry_limit);
  s.apply_circuit(p.circuit);
  if (max_entries) *max_entries = s.max_entries();
  std::map<std::uint64_t, double> out;
  auto q = p.index.qubits();
  q.push_back(p.rank_flag[0]);
  for (const auto& [bits, pr] : s.exact_marginal(q)) out[bits.to_u64()] += pr;
  return out;
}

inline std::size_t default_simon_parallel(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(10.4 * static_cast<double>(n) - 1e-9));
}

inline PolyQ2Result alg_polyq2(const PolyQ2Config& cfg, PolyQ2Engine engine,
                               std::size_t entry_limit = SparseState::kDefaultEntryLimit) {
  validate(cfg);
  PolyQ2Result res;
  res.engine = engine;
  res.bound = polyq2_error_bound(cfg.n, cfg.c);
  res.promise = promise_check(cfg);
  res.iterations = cfg.iterations ? cfg.iterations : grover_iterations(cfg.m);
  const auto ev = evaluate_polyq2(cfg, res.iterations);
  for (std::uint64_t i = 0; i < ev.false_positive.size(); ++i)
    if (i != cfg.i0) res.max_false_positive = std::max(res.max_false_positive, ev.false_positive[i]);
  if (engine == PolyQ2Engine::FULL) {
    auto p = build_polyq2(cfg);
    res.width = p.circuit.width();
    res.counts = count_gates(p.circuit);
    res.readout = simulate_polyq2(p, entry_limit, &res.max_entries);
  } else {
    res.readout = ev.readout;
  }
  const std::uint64_t hit = cfg.i0 | (std::uint64_t{1} << cfg.m);
  res.success_probability = res.readout.count(hit) ? res.readout.at(hit) : 0.0;

  Rng rng(derive_seed(cfg.seed, 3));
  double u = uniform_unit(rng), acc = 0;
  std::uint64_t outcome = res.readout.rbegin()->first;
  for (const auto& [k, pr] : res.readout) {
    acc += pr;
    if (u < acc) {
      outcome = k;
      break;
    }
  }
  res.i0_found = outcome & ((std::uint64_t{1} << cfg.m) - 1);
  res.r = (outcome >> cfg.m) & 1U;
  res.success = res.i0_found == cfg.i0 && res.r;

  res.simon_parallel = cfg.simon_parallel ? cfg.simon_parallel : default_simon_parallel(cfg.n);
  if (res.r) {
    const auto h = from_table(cfg.n, shifted_difference(cfg, res.i0_found));
    const auto ps = parallel_simon(h, res.simon_parallel, SimonMode::SAMPLED, derive_seed(cfg.seed, 4));
    if (ps.periods.size() == 1) res.s_found = ps.periods[0].to_u64();
  }
  return res;
}

// ------------------------------------------------------------ restoration checks

// Runs the ALG3 solver section of the test oracle classically on every listed
// tuple of block inputs and reports whether every input row, every ALG3
// ancilla, and every qubit outside the solver's output registers comes back
// bit-identical. Tuples are packed n bits per block, block 0 lowest.
inline bool solver_restores_inputs(const PolyQ2Circuit& p, const std::vector<std::vector<std::uint64_t>>& tuples) {
  const auto& L = p.solver;
  Circuit u4 = p.circuit.empty_like();
  LinsolveLayout copy = L;
  emit_forward(u4, copy);
  std::vector<bool> output(p.circuit.width(), false);
  for (const auto& reg : {L.rank_out, L.k, L.solution})
    for (Qubit q : reg.qubits()) output[q] = true;
  for (std::size_t r = 0; r < L.n; ++r)
    for (std::size_t col = 0; col <= L.n; ++col) output[L.stored(r, col)] = true;
  for (const auto& t : tuples) {
    Gf2Vector in(p.circuit.width());
    for (std::size_t b = 0; b < L.m; ++b)
      for (std::size_t j = 0; j < L.n; ++j) in.set(L.a(b, j), (t[b] >> j) & 1U);
    const auto out = classical_eval(u4, in);
    for (std::size_t q = 0; q < in.size(); ++q)
      if (!output[q] && in.get(q) != out.get(q)) return false;
  }
  return true;
}

// Whether any gate of the test oracle's solver part touches the value (g)
// registers or the index.
inline bool solver_touches(const PolyQ2Circuit& p, const Register& reg) {
  Circuit u4 = p.circuit.empty_like();
  LinsolveLayout copy = p.solver;
  emit_forward(u4, copy);
  emit_extraction(u4, copy);
  for (const Gate& g : u4.gates())
    for (std::size_t k = 0; k < arity(g.kind); ++k)
      if (g.q[k] >= reg.start && g.q[k] < reg.start + reg.size) return true;
  return false;
}

// Full-state check at small c: after the preparation, one application of the
// test oracle must return every basis key unchanged, with amplitude negated
// exactly on the i0 branch.
inline bool test_oracle_is_phase_flip(const PolyQ2Circuit& p, std::uint64_t i0,
                                      std::size_t entry_limit = SparseState::kDefaultEntryLimit) {
  auto before = SparseState::init_zero(p.circuit.width());
  before.set_entry_limit(entry_limit);
  before.apply_circuit(p.prepare);
  auto after = before;
  after.apply_circuit(p.test_oracle);
  if (after.size() != before.size()) return false;
  std::map<Gf2Vector, Amplitude> ref;
  for (std::size_t i = 0; i < before.size(); ++i) ref[before.key_bits(i)] = before.amp(i);
  const auto index = p.index.qubits();
  for (std::size_t i = 0; i < after.size(); ++i) {
    auto it = ref.find(after.key_bits(i));
    if (it == ref.end()) return false;
    const bool marked = after.project(i, index).to_u64() == i0;
    const Amplitude expect = marked ? -it->second : it->second;
    if (std::abs(after.amp(i) - expect) > 1e-12) return false;
  }
  return true;
}

}  // namespace gf2q
