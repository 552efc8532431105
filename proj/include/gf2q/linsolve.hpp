// SPDX-License-Identifier: Apache-2.0
#pragma once

// Reversible circuits that solve GF(2) systems held in qubits, in three
// layouts:
//   ALG1  row-wise Gauss-Jordan with pivot flags and Fredkin placement
//   ALG2  column-wise elimination into an upper block U; the general
//         solution overwrites the data rows
//   ALG3  as ALG2 with a separate storage block; the elimination is undone
//         afterwards so the data rows come back unchanged
// All indices are 0-based. Matrix cell (r, c) is row r, column c of the
// padded (n+1)-column layout; column n holds b.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gf2q/circuit.hpp"
#include "gf2q/errors.hpp"
#include "gf2q/gf2.hpp"
#include "gf2q/rng.hpp"
#include "gf2q/sparse_state.hpp"

namespace gf2q {

enum class Variant { ALG1, ALG2, ALG3 };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::ALG1: return "alg1";
    case Variant::ALG2: return "alg2";
    case Variant::ALG3: return "alg3";
  }
  return "?";
}

inline Variant variant_from_string(std::string_view s) {
  if (s == "alg1") return Variant::ALG1;
  if (s == "alg2") return Variant::ALG2;
  if (s == "alg3") return Variant::ALG3;
  throw ContractViolation("unknown variant \"" + std::string(s) + "\" (expected alg1, alg2 or alg3)");
}

struct BuildOptions {
  // Restrict the storage copy of column j to rows k < j (ALG2/ALG3).
  bool omit_redundant_range = false;
};

struct GateRange {
  std::size_t begin = 0, end = 0;
  std::size_t size() const { return end - begin; }
};

struct LinsolveLayout {
  Variant variant = Variant::ALG2;
  std::size_t m = 0, n = 0;

  // Rows x (n+1) qubit grid. ALG1: max(m,n) data rows then n storage rows.
  // ALG2: n U rows then max(m,n) data rows (the first n double as storage).
  // ALG3: n U rows, m data rows, n storage rows.
  std::vector<std::vector<Qubit>> matrix;
  std::size_t input_row0 = 0;
  std::size_t storage_row0 = 0;

  Register mark, tag, radd, pivot, work, k, solution, rank_out;
  std::vector<std::vector<Qubit>> placement;  // ALG1 only, n x (n+1)

  // Gate index ranges when built standalone.
  GateRange elimination, storage, rank_copy, restore, extraction;

  std::size_t total_width = 0;

  Qubit a(std::size_t i, std::size_t j) const { return matrix[input_row0 + i][j]; }
  Qubit b(std::size_t i) const { return matrix[input_row0 + i][n]; }
  Qubit stored(std::size_t r, std::size_t c) const { return matrix[storage_row0 + r][c]; }
  std::size_t rows() const { return matrix.size(); }

  // Qubits whose value 0 means "pivot column" for ALG2/ALG3 (mark or its
  // copy), or whose value 1 means "pivot column" for ALG1 (placement diagonal).
  std::vector<Qubit> rank_qubits() const {
    std::vector<Qubit> q;
    for (std::size_t j = 0; j < n; ++j) {
      switch (variant) {
        case Variant::ALG1: q.push_back(placement[j][j]); break;
        case Variant::ALG2: q.push_back(mark[j]); break;
        case Variant::ALG3: q.push_back(rank_out[j]); break;
      }
    }
    return q;
  }
  bool rank_bit_is_pivot(bool bit) const { return variant == Variant::ALG1 ? bit : !bit; }

  std::vector<Qubit> storage_qubits() const {
    std::vector<Qubit> q;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c <= n; ++c) q.push_back(stored(r, c));
    return q;
  }
  std::vector<Qubit> input_qubits() const {
    std::vector<Qubit> q;
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t c = 0; c <= n; ++c) q.push_back(matrix[input_row0 + i][c]);
    return q;
  }
};

struct LinsolveCircuit {
  Circuit circuit;
  LinsolveLayout layout;
};

namespace detail {

inline std::size_t alg1_work_count(std::size_t m, std::size_t n) {
  std::size_t w = 0;
  for (std::size_t j = 2; j < n; ++j) w += j;
  return m * w;
}

inline std::size_t alg23_radd_count(std::size_t m, std::size_t n) { return m * n + n * (n - 1) / 2; }

inline std::vector<std::vector<Qubit>> grid(const Register& r, std::size_t rows, std::size_t cols) {
  std::vector<std::vector<Qubit>> g(rows, std::vector<Qubit>(cols));
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) g[i][c] = r[i * cols + c];
  return g;
}

inline void append_rows(std::vector<std::vector<Qubit>>& dst, const std::vector<std::vector<Qubit>>& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

}  // namespace detail

// Allocates every register the variant needs at the top of `host`. When
// `a_rows` is given, its m rows of n qubits are used as the coefficient part
// of the data rows and only the b column is allocated fresh (and starts 0).
inline LinsolveLayout allocate_linsolve(Circuit& host, Variant v, std::size_t m, std::size_t n,
                                        const std::vector<std::vector<Qubit>>* a_rows = nullptr,
                                        const std::string& prefix = "") {
  if (m == 0 || n == 0) throw ContractViolation("linsolve: m and n must be >= 1");
  if (a_rows) {
    if (a_rows->size() != m) throw ContractViolation("linsolve: expected " + std::to_string(m) + " external rows");
    for (const auto& r : *a_rows)
      if (r.size() != n) throw ContractViolation("linsolve: external rows must have n qubits");
  }
  LinsolveLayout L;
  L.variant = v;
  L.m = m;
  L.n = n;
  const std::size_t w = n + 1;
  const std::size_t start_width = host.width();

  auto data_rows = [&]() {
    std::vector<std::vector<Qubit>> rows;
    if (a_rows) {
      auto b = host.add_register(prefix + "b", m);
      for (std::size_t i = 0; i < m; ++i) {
        auto r = (*a_rows)[i];
        r.push_back(b[i]);
        rows.push_back(r);
      }
    } else {
      rows = detail::grid(host.add_register(prefix + "data", m * w), m, w);
    }
    return rows;
  };

  switch (v) {
    case Variant::ALG1: {
      const std::size_t d = std::max(m, n);
      detail::append_rows(L.matrix, data_rows());
      if (d > m) detail::append_rows(L.matrix, detail::grid(host.add_register(prefix + "pad", (d - m) * w), d - m, w));
      L.storage_row0 = d;
      detail::append_rows(L.matrix, detail::grid(host.add_register(prefix + "storage", n * w), n, w));
      L.input_row0 = 0;
      L.placement = detail::grid(host.add_register(prefix + "placement", n * w), n, w);
      L.pivot = host.add_register(prefix + "pivot", m * n);
      L.work = host.add_register(prefix + "work", detail::alg1_work_count(m, n));
      L.radd = host.add_register(prefix + "radd", m * (m - 1) * n);
      break;
    }
    case Variant::ALG2:
    case Variant::ALG3: {
      detail::append_rows(L.matrix, detail::grid(host.add_register(prefix + "U", n * w), n, w));
      L.input_row0 = n;
      detail::append_rows(L.matrix, data_rows());
      if (v == Variant::ALG2) {
        if (n > m) detail::append_rows(L.matrix, detail::grid(host.add_register(prefix + "pad", (n - m) * w), n - m, w));
        L.storage_row0 = n;
      } else {
        L.storage_row0 = n + m;
        detail::append_rows(L.matrix, detail::grid(host.add_register(prefix + "storage", n * w), n, w));
      }
      L.mark = host.add_register(prefix + "mark", n);
      L.tag = host.add_register(prefix + "tag", m);
      L.radd = host.add_register(prefix + "radd", detail::alg23_radd_count(m, n));
      if (v == Variant::ALG3) L.rank_out = host.add_register(prefix + "rank_out", n);
      break;
    }
  }
  L.k = host.add_register(prefix + "k", n);
  L.solution = host.add_register(prefix + "solution", n);
  L.total_width = host.width() - start_width;
  return L;
}

// ALG1 row loop (pivot search, elimination, placement).
inline void emit_alg1_elimination(Circuit& out, const LinsolveLayout& L) {
  const std::size_t m = L.m, n = L.n;
  std::size_t work_next = 0, radd_next = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Qubit piv = L.pivot[i * n + j];
      // piv = a_ij AND no 1 earlier in row i.
      if (j == 0) {
        out.cnot(L.a(i, 0), piv);
      } else if (j == 1) {
        out.x(L.a(i, 0));
        out.toffoli(L.a(i, 0), L.a(i, 1), piv);
        out.x(L.a(i, 0));
      } else {
        std::vector<Qubit> work(j);
        for (auto& q : work) q = L.work[work_next++];
        for (std::size_t c = 0; c < j; ++c) out.x(L.a(i, c));
        out.toffoli(L.a(i, 0), L.a(i, 1), work[0]);
        for (std::size_t c = 2; c < j; ++c) out.toffoli(L.a(i, c), work[c - 2], work[c - 1]);
        for (std::size_t c = 0; c < j; ++c) out.x(L.a(i, c));
        out.toffoli(L.a(i, j), work[j - 2], work[j - 1]);
        out.cnot(work[j - 1], piv);
      }
      for (std::size_t l = 0; l < m; ++l) {
        if (l == i) continue;
        const Qubit radd = L.radd[radd_next++];
        out.toffoli(piv, L.a(l, j), radd);
        for (std::size_t c = 0; c < n; ++c) out.toffoli(radd, L.a(i, c), L.a(l, c));
        out.toffoli(radd, L.b(i), L.b(l));
      }
    }
  }
  // Move each pivot row onto the diagonal of the placement block. The moves
  // are disjoint, so doing them after the row loop keeps the loop's row
  // indices valid.
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t c = 0; c <= n; ++c) out.fredkin(L.pivot[i * n + j], L.matrix[i][c], L.placement[j][c]);
}

inline void emit_alg1_storage(Circuit& out, const LinsolveLayout& L) {
  const std::size_t n = L.n;
  for (std::size_t j = 0; j < n; ++j) {
    const Qubit d = L.placement[j][j];
    out.toffoli(d, L.placement[j][n], L.stored(j, n));
    for (std::size_t i = 0; i < n; ++i) {
      if (i == j) continue;
      out.x(d);
      out.toffoli(d, L.placement[i][j], L.stored(i, j));
      out.x(d);
    }
    out.x(d);
    out.cnot(d, L.stored(j, j));
    out.x(d);
  }
}

// ALG2/ALG3 column loop. Row U_j receives the first unused data row with a 1
// in column j, then clears column j from every earlier U row and every data row.
inline void emit_alg23_elimination(Circuit& out, const LinsolveLayout& L) {
  const std::size_t m = L.m, n = L.n;
  for (std::size_t j = 0; j < n; ++j) out.x(L.mark[j]);
  std::size_t radd_next = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const auto& uj = L.matrix[j];
    for (std::size_t i = 0; i < m; ++i) {
      const auto& ri = L.matrix[L.input_row0 + i];
      out.toffoli(ri[j], L.mark[j], L.tag[i]);
      out.toffoli(ri[j], L.tag[i], L.mark[j]);
      for (std::size_t c = 0; c <= n; ++c) out.toffoli(L.tag[i], ri[c], uj[c]);
    }
    std::vector<std::size_t> targets;
    for (std::size_t l = 0; l < j; ++l) targets.push_back(l);
    for (std::size_t i = 0; i < m; ++i) targets.push_back(L.input_row0 + i);
    for (std::size_t r : targets) {
      const auto& row = L.matrix[r];
      const Qubit radd = L.radd[radd_next++];
      out.cnot(row[j], radd);
      for (std::size_t c = 0; c <= n; ++c) out.toffoli(radd, uj[c], row[c]);
    }
  }
}

// Writes the general solution: column j of the storage block becomes the
// kernel vector of free column j, column n the special solution. Runs after
// the whole column loop so U is fully reduced and the data rows are clear.
inline void emit_alg23_storage(Circuit& out, const LinsolveLayout& L, const BuildOptions& opt) {
  const std::size_t n = L.n;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t kend = opt.omit_redundant_range ? j : n;
    for (std::size_t k = 0; k < kend; ++k) {
      if (k == j) continue;
      out.toffoli(L.mark[j], L.matrix[k][j], L.stored(k, j));
    }
    out.cnot(L.mark[j], L.stored(j, j));
    out.x(L.mark[j]);
    out.toffoli(L.mark[j], L.matrix[j][n], L.stored(j, n));
    out.x(L.mark[j]);
  }
}

// Hadamard on each k_h, then solution_j = b'_j + sum_h k_h eta_h[j].
inline void emit_extraction(Circuit& out, const LinsolveLayout& L) {
  const std::size_t n = L.n;
  for (std::size_t h = 0; h < n; ++h) out.h(L.k[h]);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t h = 0; h < n; ++h) out.toffoli(L.k[h], L.stored(j, h), L.solution[j]);
    out.cnot(L.stored(j, n), L.solution[j]);
  }
}

// Everything before the k Hadamards. Section ranges are recorded in `L` as
// gate indices into `out`.
inline void emit_forward(Circuit& out, LinsolveLayout& L, const BuildOptions& opt = {}) {
  auto mark_range = [&](GateRange& r, auto&& body) {
    r.begin = out.size();
    body();
    r.end = out.size();
  };
  switch (L.variant) {
    case Variant::ALG1:
      mark_range(L.elimination, [&] { emit_alg1_elimination(out, L); });
      mark_range(L.storage, [&] { emit_alg1_storage(out, L); });
      break;
    case Variant::ALG2:
      mark_range(L.elimination, [&] { emit_alg23_elimination(out, L); });
      mark_range(L.storage, [&] { emit_alg23_storage(out, L, opt); });
      break;
    case Variant::ALG3: {
      Circuit elim(out.width());
      emit_alg23_elimination(elim, L);
      mark_range(L.elimination, [&] { out.append(elim); });
      mark_range(L.storage, [&] { emit_alg23_storage(out, L, opt); });
      mark_range(L.rank_copy, [&] {
        for (std::size_t j = 0; j < L.n; ++j) out.cnot(L.mark[j], L.rank_out[j]);
      });
      mark_range(L.restore, [&] { out.append(inverse(elim)); });
      break;
    }
  }
}

inline LinsolveCircuit build_linsolve(Variant v, std::size_t m, std::size_t n, const BuildOptions& opt = {}) {
  LinsolveCircuit lc;
  lc.layout = allocate_linsolve(lc.circuit, v, m, n);
  emit_forward(lc.circuit, lc.layout, opt);
  lc.layout.extraction.begin = lc.circuit.size();
  emit_extraction(lc.circuit, lc.layout);
  lc.layout.extraction.end = lc.circuit.size();
  return lc;
}

inline LinsolveCircuit build_alg1(std::size_t m, std::size_t n) { return build_linsolve(Variant::ALG1, m, n); }
inline LinsolveCircuit build_alg2(std::size_t m, std::size_t n, const BuildOptions& opt = {}) {
  return build_linsolve(Variant::ALG2, m, n, opt);
}
inline LinsolveCircuit build_alg3(std::size_t m, std::size_t n, const BuildOptions& opt = {}) {
  return build_linsolve(Variant::ALG3, m, n, opt);
}

// ---------------------------------------------------------------- counts

using SignedCounts = std::map<GateKind, std::int64_t>;

// Closed forms as printed, for CNOT, TOFFOLI and FREDKIN only.
inline GateCounts predicted_counts(Variant v, std::uint64_t m, std::uint64_t n) {
  if (m == 0 || n == 0) throw ContractViolation("predicted_counts: m and n must be >= 1");
  GateCounts c;
  if (v == Variant::ALG1) {
    c[GateKind::CNOT] = m * n + 2 * n - m;
    c[GateKind::TOFFOLI] = (2 * m * m * n * n + 4 * m * m * n + 4 * n * n - m * n * n - 5 * m * n) / 2;
    c[GateKind::FREDKIN] = m * n * (n + 1);
  } else {
    c[GateKind::CNOT] = (2 * m * n + n * n + 3 * n) / 2;
    c[GateKind::TOFFOLI] = (4 * m * n * n + n * n * n + 8 * m * n + 4 * n * n - n) / 2;
    c[GateKind::FREDKIN] = 0;
  }
  return c;
}

struct DeviationEntry {
  std::string id;
  std::string reason;
  SignedCounts delta;
};

// Every known difference between the built circuit and the printed formulas.
// Built count = predicted + sum of deltas, kind by kind.
inline std::vector<DeviationEntry> expected_deviation(Variant v, std::uint64_t m, std::uint64_t n,
                                                      const BuildOptions& opt = {}) {
  std::vector<DeviationEntry> out;
  const auto M = static_cast<std::int64_t>(m), N = static_cast<std::int64_t>(n);
  if (v == Variant::ALG1 && n == 1) {
    out.push_back({"alg1-single-column",
                   "with one column the pivot flag is a single CNOT per row, which the formula's m(n-1) term omits",
                   {{GateKind::CNOT, M}}});
  }
  if (v != Variant::ALG1 && opt.omit_redundant_range && n > 1) {
    out.push_back({"omit-redundant-range", "storage copy restricted to rows k < j",
                   {{GateKind::TOFFOLI, -N * (N - 1) / 2}}});
  }
  if (v == Variant::ALG3) {
    const std::int64_t elim_cnot = M * N + N * (N - 1) / 2;
    const std::int64_t elim_tof = 2 * M * N + M * N * (N + 1) + elim_cnot * (N + 1);
    out.push_back({"alg3-rank-copy", "mark copied to rank_out before uncompute", {{GateKind::CNOT, N}}});
    out.push_back({"alg3-restore", "inverse of the elimination loop restores the data rows",
                   {{GateKind::CNOT, elim_cnot}, {GateKind::TOFFOLI, elim_tof}}});
  }
  return out;
}

inline GateCounts count_range(const Circuit& c, GateRange r) {
  GateCounts counts;
  for (GateKind k : kAllGateKinds) counts[k] = 0;
  for (std::size_t i = r.begin; i < r.end; ++i) ++counts[c.gates()[i].kind];
  return counts;
}

// ---------------------------------------------------------------- solving

enum class SolveMode { SAMPLE, ENUMERATE };

struct LinsolveResult {
  std::size_t rank = 0;
  bool consistent = false;
  std::optional<Gf2Vector> solution_sample;  // SAMPLE mode, consistent only
  Gf2Vector special;                         // empty when inconsistent
  std::vector<Gf2Vector> kernel_basis;       // free columns ascending
  std::vector<std::size_t> pivot_cols;
  std::optional<bool> data_register_restored;  // ALG3 only
  double sample_probability = 0.0;
};

inline Gf2Vector encode_input(const LinsolveLayout& L, std::size_t width, const Gf2Matrix& a, const Gf2Vector& b) {
  if (a.rows() != L.m || a.cols() != L.n || b.size() != L.m)
    throw ContractViolation("encode_input: system is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            ", circuit expects " + std::to_string(L.m) + "x" + std::to_string(L.n));
  Gf2Vector in(width);
  for (std::size_t i = 0; i < L.m; ++i) {
    for (std::size_t j = 0; j < L.n; ++j) in.set(L.a(i, j), a.get(i, j));
    in.set(L.b(i), b.get(i));
  }
  return in;
}

namespace detail {

// Reads a qubit list that must hold one definite value in `s`.
inline Gf2Vector definite(const SparseState& s, const std::vector<Qubit>& qs, const char* what) {
  auto marg = s.exact_marginal(qs);
  if (marg.size() != 1) throw InvariantBreach(std::string(what) + " register is not in a definite state");
  return marg.begin()->first;
}

}  // namespace detail

// Reads rank and general solution from a run on a basis input.
inline LinsolveResult read_general_solution(const LinsolveLayout& L, const SparseState& s, const Gf2Matrix& a,
                                            const Gf2Vector& b) {
  LinsolveResult r;
  const auto rank_bits = detail::definite(s, L.rank_qubits(), "rank");
  const auto store = detail::definite(s, L.storage_qubits(), "storage");
  const std::size_t n = L.n;
  auto cell = [&](std::size_t row, std::size_t col) { return store.get(row * (n + 1) + col); };
  std::vector<bool> pivot(n);
  for (std::size_t j = 0; j < n; ++j) {
    pivot[j] = L.rank_bit_is_pivot(rank_bits.get(j));
    if (pivot[j]) r.pivot_cols.push_back(j);
  }
  r.rank = r.pivot_cols.size();
  Gf2Vector special(n);
  for (std::size_t k = 0; k < n; ++k) special.set(k, cell(k, n));
  r.consistent = a.mul(special) == b;
  if (!r.consistent) return r;
  r.special = special;
  for (std::size_t j = 0; j < n; ++j) {
    if (pivot[j]) continue;
    Gf2Vector eta(n);
    for (std::size_t k = 0; k < n; ++k) eta.set(k, cell(k, j));
    r.kernel_basis.push_back(eta);
  }
  return r;
}

inline SparseState run_instance(const LinsolveCircuit& lc, const Gf2Matrix& a, const Gf2Vector& b) {
  auto s = SparseState::init_basis(lc.circuit.width(), encode_input(lc.layout, lc.circuit.width(), a, b));
  s.apply_circuit(lc.circuit);
  return s;
}

inline LinsolveResult solve_instance(const LinsolveCircuit& lc, const Gf2Matrix& a, const Gf2Vector& b,
                                     SolveMode mode, std::uint64_t seed) {
  const auto& L = lc.layout;
  if (mode == SolveMode::ENUMERATE && L.variant == Variant::ALG1)
    throw ContractViolation("solve_instance: ENUMERATE mode requires alg2 or alg3");
  auto s = run_instance(lc, a, b);
  auto r = read_general_solution(L, s, a, b);
  if (L.variant == Variant::ALG3) {
    const auto data = detail::definite(s, L.input_qubits(), "data");
    Gf2Vector expect(data.size());
    for (std::size_t i = 0; i < L.m; ++i) {
      for (std::size_t j = 0; j < L.n; ++j) expect.set(i * (L.n + 1) + j, a.get(i, j));
      expect.set(i * (L.n + 1) + L.n, b.get(i));
    }
    r.data_register_restored = data == expect;
  }
  if (mode == SolveMode::SAMPLE) {
    if (r.consistent) {
      auto m = s.measure(L.solution.qubits(), seed);
      r.solution_sample = m.bits;
      r.sample_probability = m.probability;
    }
    // The general solution is read from the storage block in ENUMERATE mode
    // only; SAMPLE mode reports the sampled member and the rank.
    r.special = Gf2Vector();
    r.kernel_basis.clear();
  }
  return r;
}

inline LinsolveResult solve_instance(Variant v, const Gf2Matrix& a, const Gf2Vector& b, SolveMode mode,
                                     std::uint64_t seed, const BuildOptions& opt = {}) {
  return solve_instance(build_linsolve(v, a.rows(), a.cols(), opt), a, b, mode, seed);
}

// Exact distribution of the solution register for a basis input.
inline std::map<Gf2Vector, double> solution_distribution(const LinsolveCircuit& lc, const Gf2Matrix& a,
                                                         const Gf2Vector& b) {
  return run_instance(lc, a, b).exact_marginal(lc.layout.solution.qubits());
}

struct SuperposedRun {
  LinsolveCircuit lc;
  SparseState state;
};

// Uniform superposition over every (A, b) of the given shape, then the solver.
inline SuperposedRun solve_superposed(Variant v, std::size_t m, std::size_t n,
                                      std::size_t entry_limit = SparseState::kDefaultEntryLimit,
                                      const BuildOptions& opt = {}) {
  auto lc = build_linsolve(v, m, n, opt);
  const std::size_t hs = m * (n + 1) + n;
  if (hs >= 63 || (std::size_t{1} << hs) > entry_limit)
    throw ResourceError("solve_superposed: needs up to 2^" + std::to_string(hs) + " amplitudes, limit is " +
                        std::to_string(entry_limit));
  auto s = SparseState::init_zero(lc.circuit.width());
  s.set_entry_limit(entry_limit);
  for (Qubit q : lc.layout.input_qubits()) s.apply_gate({GateKind::H, {q, 0, 0}});
  s.apply_circuit(lc.circuit);
  return {std::move(lc), std::move(s)};
}

}  // namespace gf2q
