// SPDX-License-Identifier: Apache-2.0
#pragma once

// Brute-force references shared by the test suites.

#include <cstdint>
#include <set>
#include <vector>

#include "gf2q/gf2.hpp"

namespace gf2q::testing {

// All x in F_2^n with A x = b, by exhaustive search.
inline std::set<Gf2Vector> brute_solutions(const Gf2Matrix& a, const Gf2Vector& b) {
  std::set<Gf2Vector> out;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << a.cols()); ++x) {
    auto v = Gf2Vector::from_u64(a.cols(), x);
    if (a.mul(v) == b) out.insert(v);
  }
  return out;
}

// Rank as log2 of the number of distinct row combinations.
inline std::size_t brute_rank(const Gf2Matrix& a) {
  std::set<Gf2Vector> combos;
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << a.rows()); ++c) {
    Gf2Vector v(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      if ((c >> i) & 1U) v ^= a.row(i);
    combos.insert(v);
  }
  std::size_t r = 0;
  while ((std::size_t{1} << r) < combos.size()) ++r;
  return r;
}

// Every (A, b) of shape m x n, indexed by a (mn + m)-bit word: bit i*n+j is
// a_ij, bit mn+i is b_i.
inline std::pair<Gf2Matrix, Gf2Vector> system_from_index(std::size_t m, std::size_t n, std::uint64_t code) {
  Gf2Matrix a(m, n);
  Gf2Vector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a.set(i, j, (code >> (i * n + j)) & 1U);
    b.set(i, (code >> (m * n + i)) & 1U);
  }
  return {a, b};
}

// Every subspace of F_2^n (n <= 5), each as a reduced basis. Found by closing
// {0} under added vectors and keeping distinct membership sets.
inline std::vector<std::vector<Gf2Vector>> all_subspaces(std::size_t n) {
  const std::uint64_t size = std::uint64_t{1} << n;
  std::set<std::uint64_t> seen{1};
  std::vector<std::uint64_t> frontier{1};
  while (!frontier.empty()) {
    std::vector<std::uint64_t> next;
    for (auto mask : frontier) {
      for (std::uint64_t u = 1; u < size; ++u) {
        std::uint64_t grown = mask;
        for (std::uint64_t v = 0; v < size; ++v)
          if ((mask >> v) & 1U) grown |= std::uint64_t{1} << (v ^ u);
        if (seen.insert(grown).second) next.push_back(grown);
      }
    }
    frontier = std::move(next);
  }
  std::vector<std::vector<Gf2Vector>> out;
  for (auto mask : seen) {
    std::vector<Gf2Vector> members;
    for (std::uint64_t v = 0; v < size; ++v)
      if ((mask >> v) & 1U) members.push_back(Gf2Vector::from_u64(n, v));
    out.push_back(span_basis(members, n));
  }
  return out;
}

}  // namespace gf2q::testing
