// SPDX-License-Identifier: Apache-2.0
#pragma once

// Serial-CNOT feasibility rows for ALG2 at m = c n rows. Counts come from the
// closed forms so n = 64 stays instant; small sizes can be cross-checked by
// building and decomposing.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "gf2q/circuit.hpp"
#include "gf2q/errors.hpp"
#include "gf2q/linsolve.hpp"

namespace gf2q {

struct FeasibilityRow {
  std::string label;
  std::uint64_t n = 0, m = 0;
  double c = 0;  // m / n
  std::uint64_t cnot_equivalent = 0;
  double serial_seconds = 0;
  bool within_budget = false;
  double leading_term = 0;  // (12c + 3) n^3
};

inline FeasibilityRow feasibility_row(std::string label, std::uint64_t n, std::uint64_t m,
                                      double per_cnot_seconds = kDefaultPerCnotSeconds,
                                      double budget_seconds = kDefaultBudgetSeconds) {
  if (n == 0 || m == 0) throw ContractViolation("estimate: n and m must be >= 1");
  auto rep = estimate_runtime(report_from_counts(predicted_counts(Variant::ALG2, m, n)), per_cnot_seconds,
                              budget_seconds);
  FeasibilityRow row;
  row.label = std::move(label);
  row.n = n;
  row.m = m;
  row.c = static_cast<double>(m) / static_cast<double>(n);
  row.cnot_equivalent = rep.cnot_equivalent;
  row.serial_seconds = rep.serial_seconds;
  row.within_budget = rep.within_budget;
  const double nn = static_cast<double>(n);
  row.leading_term = (12.0 * row.c + 3.0) * nn * nn * nn;
  return row;
}

inline FeasibilityRow estimate_row(std::uint64_t n, std::uint64_t c, double per_cnot_seconds = kDefaultPerCnotSeconds,
                                   double budget_seconds = kDefaultBudgetSeconds) {
  if (n == 0) throw ContractViolation("estimate: n must be >= 1");
  if (c == 0) throw ContractViolation("estimate: c must be >= 1");
  return feasibility_row("n=" + std::to_string(n) + ",c=" + std::to_string(c), n, c * n, per_cnot_seconds,
                         budget_seconds);
}

// Same quantity by construction: build ALG2 and decompose. Small n only.
inline std::uint64_t built_cnot_equivalent(std::uint64_t n, std::uint64_t m) {
  return count_gates(decompose(build_alg2(m, n).circuit))[GateKind::CNOT];
}

// Ratio of cnot_equivalent at 2n to n, fixed c.
inline double doubling_ratio(std::uint64_t n, std::uint64_t c) {
  return static_cast<double>(estimate_row(2 * n, c).cnot_equivalent) /
         static_cast<double>(estimate_row(n, c).cnot_equivalent);
}

// 64-bit block ciphers with two 64-bit whitening keys. Rows at c = 1 and at
// the Simon row count ell = 2(n + sqrt n) = 144.
inline std::vector<FeasibilityRow> preset_rows(double per_cnot_seconds = kDefaultPerCnotSeconds,
                                               double budget_seconds = kDefaultBudgetSeconds) {
  std::vector<FeasibilityRow> rows;
  for (const char* cipher : {"DESX", "PRINCE", "PRIDE"}) {
    rows.push_back(feasibility_row(std::string(cipher) + " c=1", 64, 64, per_cnot_seconds, budget_seconds));
    rows.push_back(feasibility_row(std::string(cipher) + " ell=144", 64, 144, per_cnot_seconds, budget_seconds));
  }
  return rows;
}

}  // namespace gf2q
