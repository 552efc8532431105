// SPDX-License-Identifier: Apache-2.0
#pragma once

// Simon's algorithm over truth-table oracles: coset oracles with planted
// periods, the single-query circuit, sampling, and the parallel variant that
// feeds the sampled rows through the ALG2 circuit. Also the probability
// bounds used to size the parallel variant.

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gf2q/circuit.hpp"
#include "gf2q/errors.hpp"
#include "gf2q/gf2.hpp"
#include "gf2q/linsolve.hpp"
#include "gf2q/oracle_compile.hpp"
#include "gf2q/rng.hpp"
#include "gf2q/sparse_state.hpp"

namespace gf2q {

inline constexpr std::size_t kMaxOracleBits = 20;
inline constexpr std::size_t kMaxEpsilonBits = 12;

struct PeriodicOracle {
  std::size_t n = 0;
  std::vector<std::uint64_t> truth_table;  // f(x) for x = 0 .. 2^n-1, n-bit outputs
  std::vector<Gf2Vector> period_set;       // reduced basis of the hidden subgroup
  std::optional<double> epsilon;

  std::uint64_t operator()(std::uint64_t x) const { return truth_table.at(x); }
};

namespace detail {

inline std::uint64_t pack(const Gf2Vector& v) { return v.to_u64(); }

// Every element of span(basis) as n-bit words.
inline std::vector<std::uint64_t> span_words(const std::vector<Gf2Vector>& basis) {
  std::vector<std::uint64_t> out{0};
  for (const auto& b : basis) {
    const std::uint64_t w = pack(b);
    const std::size_t k = out.size();
    for (std::size_t i = 0; i < k; ++i) out.push_back(out[i] ^ w);
  }
  return out;
}

// Canonical coset representative of x modulo a reduced basis: clear the
// pivot bit of every basis row.
inline std::uint64_t coset_rep(std::uint64_t x, const std::vector<Gf2Vector>& reduced) {
  for (const auto& b : reduced) {
    const std::uint64_t w = pack(b);
    const std::uint64_t pivot = w & (~w + 1);
    if (x & pivot) x ^= w;
  }
  return x;
}

inline void check_width(std::size_t n, const char* who) {
  if (n == 0 || n > kMaxOracleBits)
    throw ContractViolation(std::string(who) + ": n must be in 1.." + std::to_string(kMaxOracleBits));
}

}  // namespace detail

// Brute-force period subgroup of a truth table (as a reduced basis).
inline std::vector<Gf2Vector> periods_of_table(std::size_t n, const std::vector<std::uint64_t>& table) {
  detail::check_width(n, "periods_of_table");
  if (n > kMaxEpsilonBits) throw ResourceError("periods_of_table: brute force limited to n <= 12");
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<Gf2Vector> found;
  for (std::uint64_t a = 1; a < size; ++a) {
    bool period = true;
    for (std::uint64_t x = 0; x < size && period; ++x) period = table[x] == table[x ^ a];
    if (period) found.push_back(Gf2Vector::from_u64(n, a));
  }
  return span_basis(found, n);
}

// max over a outside span(periods) of Pr_x[f(x) = f(x xor a)]; 0 when no
// such a exists.
inline double collision_max(std::size_t n, const std::vector<std::uint64_t>& table,
                            const std::vector<Gf2Vector>& periods) {
  if (n > kMaxEpsilonBits) throw ResourceError("epsilon: brute force limited to n <= 12");
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<bool> in_span(size, false);
  for (auto w : detail::span_words(periods)) in_span[w] = true;
  std::uint64_t best = 0;
  for (std::uint64_t a = 1; a < size; ++a) {
    if (in_span[a]) continue;
    std::uint64_t hits = 0;
    for (std::uint64_t x = 0; x < size; ++x) hits += table[x] == table[x ^ a];
    best = std::max(best, hits);
  }
  return static_cast<double>(best) / static_cast<double>(size);
}

inline double epsilon_f(const PeriodicOracle& o) {
  if (o.epsilon) return *o.epsilon;
  return collision_max(o.n, o.truth_table, o.period_set);
}

// Labels every coset of span(periods) with a distinct random n-bit word.
inline PeriodicOracle make_oracle(std::size_t n, const std::vector<Gf2Vector>& periods, std::uint64_t seed) {
  detail::check_width(n, "make_oracle");
  for (const auto& p : periods)
    if (p.size() != n) throw ContractViolation("make_oracle: every period must have n bits");
  auto basis = span_basis(periods, n);
  if (basis.size() != periods.size()) throw ContractViolation("make_oracle: periods are linearly dependent");

  PeriodicOracle o;
  o.n = n;
  o.period_set = basis;
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> labels(size);
  for (std::uint64_t i = 0; i < size; ++i) labels[i] = i;
  Rng rng(seed);
  shuffle(labels, rng);
  // Representatives are distinct words, so labels[rep] is injective on cosets.
  o.truth_table.resize(size);
  for (std::uint64_t x = 0; x < size; ++x) o.truth_table[x] = labels[detail::coset_rep(x, basis)];
  if (n <= 10) o.epsilon = collision_max(n, o.truth_table, o.period_set);
  return o;
}

// Wraps an arbitrary table. Without `planted`, the period set is the full
// brute-force period subgroup; with it, each planted period is checked and
// epsilon is taken relative to their span.
inline PeriodicOracle from_table(std::size_t n, std::vector<std::uint64_t> table,
                                 std::optional<std::vector<Gf2Vector>> planted = std::nullopt) {
  detail::check_width(n, "from_table");
  if (table.size() != (std::size_t{1} << n))
    throw ContractViolation("from_table: expected 2^" + std::to_string(n) + " entries");
  for (auto v : table)
    if (v >> n) throw ContractViolation("from_table: outputs must fit in n bits");
  PeriodicOracle o;
  o.n = n;
  o.truth_table = std::move(table);
  if (planted) {
    for (const auto& p : *planted) {
      if (p.size() != n) throw ContractViolation("from_table: every period must have n bits");
      const std::uint64_t a = p.to_u64();
      for (std::uint64_t x = 0; x < o.truth_table.size(); ++x)
        if (o.truth_table[x] != o.truth_table[x ^ a])
          throw ContractViolation("from_table: " + p.to_string() + " is not a period of the table");
    }
    o.period_set = span_basis(*planted, n);
    if (o.period_set.size() != planted->size()) throw ContractViolation("from_table: periods are linearly dependent");
  } else {
    o.period_set = periods_of_table(n, o.truth_table);
  }
  o.epsilon = collision_max(n, o.truth_table, o.period_set);
  return o;
}

// ------------------------------------------------------------ circuits

struct SimonCircuit {
  Circuit circuit;
  Register input, output, work;
};

// H on the input, f written into the output register, H on the input.
inline SimonCircuit simon_circuit(const PeriodicOracle& o) {
  SimonCircuit sc;
  sc.input = sc.circuit.add_register("input", o.n);
  sc.output = sc.circuit.add_register("output", o.n);
  sc.work = sc.circuit.add_register("work", std::max<std::size_t>(1, o.n - 1));
  for (Qubit q : sc.input.qubits()) sc.circuit.h(q);
  compile_truth_table(sc.circuit, sc.input.qubits(), sc.output.qubits(), o.truth_table, sc.work.qubits());
  for (Qubit q : sc.input.qubits()) sc.circuit.h(q);
  return sc;
}

// Exact distribution of the measured input register.
inline std::map<Gf2Vector, double> simon_marginal(const PeriodicOracle& o,
                                                  std::size_t entry_limit = SparseState::kDefaultEntryLimit) {
  auto sc = simon_circuit(o);
  auto s = SparseState::init_zero(sc.circuit.width());
  s.set_entry_limit(entry_limit);
  s.apply_circuit(sc.circuit);
  return s.exact_marginal(sc.input.qubits());
}

// Draws from the simulated marginal; every draw is checked against the
// planted periods.
class SimonSampler {
 public:
  explicit SimonSampler(const PeriodicOracle& o) : n_(o.n), periods_(o.period_set) {
    double acc = 0;
    for (const auto& [y, p] : simon_marginal(o)) {
      if (p < kPruneThreshold) continue;
      acc += p;
      values_.push_back(y);
      cdf_.push_back(acc);
    }
    if (values_.empty()) throw InvariantBreach("simon: empty output distribution");
  }

  const std::vector<Gf2Vector>& support() const { return values_; }

  Gf2Vector draw(Rng& rng) const {
    const double u = uniform_unit(rng) * cdf_.back();
    std::size_t i = 0;
    while (i + 1 < cdf_.size() && !(u < cdf_[i])) ++i;
    const Gf2Vector& y = values_[i];
    for (const auto& s : periods_)
      if (y.dot(s)) throw InvariantBreach("simon: sampled y=" + y.to_string() + " with y.s=1 for s=" + s.to_string());
    return y;
  }

  std::vector<Gf2Vector> draw(std::size_t count, Rng& rng) const {
    std::vector<Gf2Vector> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(draw(rng));
    return out;
  }

  std::size_t n() const { return n_; }

 private:
  std::size_t n_;
  std::vector<Gf2Vector> periods_;
  std::vector<Gf2Vector> values_;
  std::vector<double> cdf_;
};

inline std::vector<Gf2Vector> sample_simon(const PeriodicOracle& o, std::size_t count, std::uint64_t seed) {
  if (count == 0) return {};
  SimonSampler sampler(o);
  Rng rng(seed);
  return sampler.draw(count, rng);
}

// Exact distribution of one Simon row for a table h on n bits:
// Pr[u] = sum_v |2^-n sum_{x: h(x)=v} (-1)^{u.x}|^2.
inline std::vector<double> simon_row_distribution(std::size_t n, const std::vector<std::uint64_t>& h) {
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<double> pr(size, 0.0);
  std::map<std::uint64_t, std::vector<std::uint64_t>> preimages;
  for (std::uint64_t x = 0; x < size; ++x) preimages[h[x]].push_back(x);
  const double scale = 1.0 / static_cast<double>(size);
  for (std::uint64_t u = 0; u < size; ++u) {
    for (const auto& [v, xs] : preimages) {
      double a = 0;
      for (auto x : xs) a += (std::popcount(u & x) & 1) ? -1.0 : 1.0;
      pr[u] += a * a * scale * scale;
    }
  }
  return pr;
}

// Distribution of span(u_1..u_draws) for iid rows drawn from `row`. A
// subspace is keyed by its membership mask over F_2^n, so n <= 6.
inline std::map<std::uint64_t, double> span_distribution(std::size_t n, const std::vector<double>& row,
                                                         std::size_t draws) {
  if (n > 6) throw ResourceError("span_distribution: n <= 6 only");
  const std::uint64_t size = std::uint64_t{1} << n;
  if (row.size() != size) throw ContractViolation("span_distribution: row needs 2^n entries");
  std::map<std::uint64_t, double> dist{{1, 1.0}};
  for (std::size_t d = 0; d < draws; ++d) {
    std::map<std::uint64_t, double> next;
    for (const auto& [mask, p] : dist) {
      for (std::uint64_t u = 0; u < size; ++u) {
        if (row[u] == 0) continue;
        std::uint64_t grown = mask;
        for (std::uint64_t v = 0; v < size; ++v)
          if ((mask >> v) & 1U) grown |= std::uint64_t{1} << (v ^ u);
        next[grown] += p * row[u];
      }
    }
    dist = std::move(next);
  }
  return dist;
}

// Exact probability that m_parallel rows span the orthogonal complement of
// the planted periods, i.e. that parallel Simon returns exactly them.
inline double exact_recovery_probability(const PeriodicOracle& o, std::size_t m_parallel) {
  const std::uint64_t size = std::uint64_t{1} << o.n;
  std::uint64_t perp = 0;
  for (std::uint64_t y = 0; y < size; ++y) {
    const auto yv = Gf2Vector::from_u64(o.n, y);
    bool ok = true;
    for (const auto& s : o.period_set) ok = ok && !yv.dot(s);
    if (ok) perp |= std::uint64_t{1} << y;
  }
  const auto dist = span_distribution(o.n, simon_row_distribution(o.n, o.truth_table), m_parallel);
  auto it = dist.find(perp);
  return it == dist.end() ? 0.0 : it->second;
}

// ------------------------------------------------------------ parallel

enum class SimonMode { SAMPLED, COHERENT };

inline std::string to_string(SimonMode m) { return m == SimonMode::SAMPLED ? "sampled" : "coherent"; }
inline SimonMode simon_mode_from_string(std::string_view s) {
  if (s == "sampled") return SimonMode::SAMPLED;
  if (s == "coherent") return SimonMode::COHERENT;
  throw ContractViolation("unknown simon mode \"" + std::string(s) + "\" (expected sampled or coherent)");
}

struct ParallelSimonResult {
  std::vector<Gf2Vector> periods;  // reduced basis of the recovered span
  std::vector<Gf2Vector> rows;     // SAMPLED: the sampled y vectors
  std::size_t rank = 0;
  bool matches_planted = false;
  double outcome_probability = 1.0;  // COHERENT: probability of the measured storage block
};

namespace detail {

// Kernel basis from the mark register and storage block of an ALG2 run.
inline std::vector<Gf2Vector> kernel_from_storage(std::size_t n, const Gf2Vector& mark, const Gf2Vector& store) {
  std::vector<Gf2Vector> eta;
  for (std::size_t j = 0; j < n; ++j) {
    if (!mark.get(j)) continue;
    Gf2Vector v(n);
    for (std::size_t k = 0; k < n; ++k) v.set(k, store.get(k * (n + 1) + j));
    eta.push_back(v);
  }
  return eta;
}

}  // namespace detail

// ALG2 forward section for homogeneous m x n systems, run classically on
// basis inputs.
class Alg2Kernel {
 public:
  Alg2Kernel(std::size_t m, std::size_t n) : circuit_(0) {
    layout_ = allocate_linsolve(circuit_, Variant::ALG2, m, n);
    emit_forward(circuit_, layout_);
  }

  std::vector<Gf2Vector> kernel(const std::vector<Gf2Vector>& rows) const {
    const auto& L = layout_;
    if (rows.size() != L.m) throw ContractViolation("Alg2Kernel: wrong row count");
    Gf2Vector in(circuit_.width());
    for (std::size_t i = 0; i < L.m; ++i)
      for (std::size_t j = 0; j < L.n; ++j) in.set(L.a(i, j), rows[i].get(j));
    auto out = classical_eval(circuit_, in);
    Gf2Vector mark(L.n), store((L.n + 1) * L.n);
    for (std::size_t j = 0; j < L.n; ++j) mark.set(j, out.get(L.mark[j]));
    const auto sq = L.storage_qubits();
    for (std::size_t i = 0; i < sq.size(); ++i) store.set(i, out.get(sq[i]));
    return detail::kernel_from_storage(L.n, mark, store);
  }

  const LinsolveLayout& layout() const { return layout_; }

 private:
  Circuit circuit_;
  LinsolveLayout layout_;
};

inline ParallelSimonResult parallel_simon_sampled(const PeriodicOracle& o, const SimonSampler& sampler,
                                                  const Alg2Kernel& solver, std::uint64_t seed) {
  ParallelSimonResult r;
  Rng rng(seed);
  r.rows = sampler.draw(solver.layout().m, rng);
  r.periods = span_basis(solver.kernel(r.rows), o.n);
  r.rank = o.n - r.periods.size();
  r.matches_planted = r.periods == o.period_set;
  return r;
}

struct CoherentSimonCircuit {
  Circuit circuit;
  std::vector<Register> inputs, outputs;
  Register work;
  LinsolveLayout solver;
};

// m_parallel Simon blocks whose input registers are the ALG2 data rows.
inline CoherentSimonCircuit coherent_simon_circuit(const PeriodicOracle& o, std::size_t m_parallel) {
  CoherentSimonCircuit cs;
  std::vector<std::vector<Qubit>> rows;
  for (std::size_t b = 0; b < m_parallel; ++b) {
    cs.inputs.push_back(cs.circuit.add_register("x" + std::to_string(b), o.n));
    cs.outputs.push_back(cs.circuit.add_register("f" + std::to_string(b), o.n));
    rows.push_back(cs.inputs.back().qubits());
  }
  cs.work = cs.circuit.add_register("work", std::max<std::size_t>(1, o.n - 1));
  cs.solver = allocate_linsolve(cs.circuit, Variant::ALG2, m_parallel, o.n, &rows, "alg2_");
  for (const auto& r : cs.inputs)
    for (Qubit q : r.qubits()) cs.circuit.h(q);
  for (std::size_t b = 0; b < m_parallel; ++b)
    compile_truth_table(cs.circuit, cs.inputs[b].qubits(), cs.outputs[b].qubits(), o.truth_table,
                        cs.work.qubits());
  for (const auto& r : cs.inputs)
    for (Qubit q : r.qubits()) cs.circuit.h(q);
  emit_forward(cs.circuit, cs.solver);
  return cs;
}

struct CoherentSimonRun {
  CoherentSimonCircuit cs;
  SparseState state;
};

inline CoherentSimonRun run_coherent_simon(const PeriodicOracle& o, std::size_t m_parallel,
                                           std::size_t entry_limit = SparseState::kDefaultEntryLimit) {
  auto cs = coherent_simon_circuit(o, m_parallel);
  auto s = SparseState::init_zero(cs.circuit.width());
  s.set_entry_limit(entry_limit);
  s.apply_circuit(cs.circuit);
  return {std::move(cs), std::move(s)};
}

inline ParallelSimonResult parallel_simon(const PeriodicOracle& o, std::size_t m_parallel, SimonMode mode,
                                          std::uint64_t seed,
                                          std::size_t entry_limit = SparseState::kDefaultEntryLimit) {
  if (m_parallel == 0) throw ContractViolation("parallel_simon: m_parallel must be >= 1");
  if (mode == SimonMode::SAMPLED) {
    SimonSampler sampler(o);
    Alg2Kernel solver(m_parallel, o.n);
    return parallel_simon_sampled(o, sampler, solver, seed);
  }
  auto run = run_coherent_simon(o, m_parallel, entry_limit);
  const auto& L = run.cs.solver;
  std::vector<Qubit> measured = L.mark.qubits();
  const auto sq = L.storage_qubits();
  measured.insert(measured.end(), sq.begin(), sq.end());
  auto sample = run.state.measure(measured, seed);
  Gf2Vector mark(o.n), store(sq.size());
  for (std::size_t j = 0; j < o.n; ++j) mark.set(j, sample.bits.get(j));
  for (std::size_t i = 0; i < sq.size(); ++i) store.set(i, sample.bits.get(o.n + i));
  ParallelSimonResult r;
  r.periods = span_basis(detail::kernel_from_storage(o.n, mark, store), o.n);
  r.rank = o.n - r.periods.size();
  r.matches_planted = r.periods == o.period_set;
  r.outcome_probability = sample.probability;
  return r;
}

// ------------------------------------------------------------ bounds

// Probability that d uniform vectors of F_2^d are independent:
// prod_{i=1..d} (1 - 2^-i).
inline double independence_probability(std::size_t d) {
  double p = 1.0;
  for (std::size_t i = 1; i <= d; ++i) p *= 1.0 - std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(i, 1100)));
  return p;
}

inline void check_p0(double p0) {
  if (!(p0 >= 0.0 && p0 < 1.0)) throw ContractViolation("p0 must satisfy 0 <= p0 < 1");
}

// Lower bound on parallel Simon success with m rows when epsilon(f) <= p0.
inline double simon_recovery_bound(std::size_t n, double p0, std::size_t m_parallel) {
  check_p0(p0);
  const double v = 1.0 - std::ldexp(std::pow((1.0 + p0) / 2.0, static_cast<double>(m_parallel)), static_cast<int>(n));
  return std::max(0.0, v);
}

// Row count from which the bound above is non-trivial: 3n / (1 - p0).
inline double simon_row_threshold(std::size_t n, double p0) {
  check_p0(p0);
  return 3.0 * static_cast<double>(n) / (1.0 - p0);
}

// Generic collision bound used when epsilon(f) is not measured.
inline constexpr double kGenericP0 = 0.712;

// ceil(pi / (4 asin(2^{-m/2}))); the slack keeps exact integers (m = 2
// gives 1.5, m = 0 gives 0.5) from rounding up on floating-point noise.
inline std::size_t grover_iterations(std::size_t m) {
  if (m > 1000) throw ContractViolation("grover_iterations: m too large");
  const double theta = std::asin(std::pow(2.0, -static_cast<double>(m) / 2.0));
  return static_cast<std::size_t>(std::ceil(M_PI / (4.0 * theta) - 1e-12));
}

}  // namespace gf2q
