// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bit-packed GF(2) vectors and matrices plus the classical Gauss-Jordan
// solver used as ground truth for every circuit result.
//
// Conventions: indices are 0-based. Entry j of a vector is bit (j % 64) of
// word (j / 64). Text forms list entry 0 first.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gf2q/errors.hpp"
#include "gf2q/rng.hpp"

namespace gf2q {

using Word = std::uint64_t;
inline constexpr std::size_t kWordBits = 64;

inline std::size_t words_for(std::size_t bits) { return (bits + kWordBits - 1) / kWordBits; }

class Gf2Vector {
 public:
  Gf2Vector() = default;
  explicit Gf2Vector(std::size_t len) : len_(len), words_(words_for(len), 0) {}

  static Gf2Vector from_u64(std::size_t len, std::uint64_t bits) {
    Gf2Vector v(len);
    if (len > 0) v.words_[0] = len >= 64 ? bits : bits & ((Word{1} << len) - 1);
    return v;
  }

  // Characters '0'/'1', entry 0 first.
  static Gf2Vector from_string(std::string_view s) {
    Gf2Vector v(s.size());
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] == '1') {
        v.set(j, true);
      } else if (s[j] != '0') {
        throw ParseError(0, "expected only '0'/'1' in bit string \"" + std::string(s) + "\"");
      }
    }
    return v;
  }

  std::size_t size() const { return len_; }
  bool get(std::size_t j) const { return (words_[j / kWordBits] >> (j % kWordBits)) & 1U; }
  void set(std::size_t j, bool bit) {
    const Word mask = Word{1} << (j % kWordBits);
    if (bit) {
      words_[j / kWordBits] |= mask;
    } else {
      words_[j / kWordBits] &= ~mask;
    }
  }
  void flip(std::size_t j) { words_[j / kWordBits] ^= Word{1} << (j % kWordBits); }

  Gf2Vector& operator^=(const Gf2Vector& o) {
    require_same(o);
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= o.words_[w];
    return *this;
  }
  friend Gf2Vector operator^(Gf2Vector a, const Gf2Vector& b) { return a ^= b; }

  bool dot(const Gf2Vector& o) const {
    require_same(o);
    unsigned parity = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) parity ^= std::popcount(words_[w] & o.words_[w]);
    return parity & 1U;
  }

  bool is_zero() const {
    return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
  }
  std::size_t weight() const {
    std::size_t c = 0;
    for (Word w : words_) c += std::popcount(w);
    return c;
  }

  // Low 64 entries as an integer (entry j is bit j).
  std::uint64_t to_u64() const { return words_.empty() ? 0 : words_[0]; }

  std::string to_string() const {
    std::string s(len_, '0');
    for (std::size_t j = 0; j < len_; ++j)
      if (get(j)) s[j] = '1';
    return s;
  }

  const std::vector<Word>& words() const { return words_; }
  std::vector<Word>& words() { return words_; }

  friend bool operator==(const Gf2Vector&, const Gf2Vector&) = default;
  friend std::strong_ordering operator<=>(const Gf2Vector& a, const Gf2Vector& b) {
    if (auto c = a.len_ <=> b.len_; c != 0) return c;
    for (std::size_t w = a.words_.size(); w-- > 0;) {
      if (auto c = a.words_[w] <=> b.words_[w]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  void require_same(const Gf2Vector& o) const {
    if (o.len_ != len_) throw ContractViolation("vector length mismatch");
  }

  std::size_t len_ = 0;
  std::vector<Word> words_;
};

class Gf2Matrix {
 public:
  Gf2Matrix() = default;
  Gf2Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), stride_(words_for(cols)), bits_(rows * words_for(cols), 0) {
    if (rows == 0 || cols == 0) throw ContractViolation("matrix dimensions must be >= 1");
  }

  static Gf2Matrix identity(std::size_t n) {
    Gf2Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
    return m;
  }

  static Gf2Matrix from_rows(const std::vector<Gf2Vector>& rows) {
    if (rows.empty()) throw ContractViolation("matrix needs at least one row");
    Gf2Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
    return m;
  }

  // Rows given as strings, entry 0 first.
  static Gf2Matrix from_strings(const std::vector<std::string>& rows) {
    std::vector<Gf2Vector> v;
    for (const auto& r : rows) v.push_back(Gf2Vector::from_string(r));
    return from_rows(v);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t i, std::size_t j) const {
    return (bits_[i * stride_ + j / kWordBits] >> (j % kWordBits)) & 1U;
  }
  void set(std::size_t i, std::size_t j, bool bit) {
    Word& w = bits_[i * stride_ + j / kWordBits];
    const Word mask = Word{1} << (j % kWordBits);
    w = bit ? (w | mask) : (w & ~mask);
  }

  Gf2Vector row(std::size_t i) const {
    Gf2Vector v(cols_);
    std::copy_n(bits_.begin() + static_cast<std::ptrdiff_t>(i * stride_), stride_, v.words().begin());
    return v;
  }
  void set_row(std::size_t i, const Gf2Vector& v) {
    if (v.size() != cols_) throw ContractViolation("row length mismatch");
    std::copy_n(v.words().begin(), stride_, bits_.begin() + static_cast<std::ptrdiff_t>(i * stride_));
  }
  // Column extraction helper; storage is row-major.
  Gf2Vector column(std::size_t j) const {
    Gf2Vector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v.set(i, get(i, j));
    return v;
  }

  void xor_row_into(std::size_t src, std::size_t dst) {
    for (std::size_t w = 0; w < stride_; ++w) bits_[dst * stride_ + w] ^= bits_[src * stride_ + w];
  }
  void swap_rows(std::size_t a, std::size_t b) {
    for (std::size_t w = 0; w < stride_; ++w) std::swap(bits_[a * stride_ + w], bits_[b * stride_ + w]);
  }

  Gf2Vector mul(const Gf2Vector& x) const {
    if (x.size() != cols_) throw ContractViolation("A*x: length of x must equal cols");
    Gf2Vector y(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      unsigned parity = 0;
      for (std::size_t w = 0; w < stride_; ++w) parity ^= std::popcount(bits_[i * stride_ + w] & x.words()[w]);
      y.set(i, parity & 1U);
    }
    return y;
  }

  // [A | b] as a rows x (cols+1) matrix.
  Gf2Matrix augmented(const Gf2Vector& b) const {
    if (b.size() != rows_) throw ContractViolation("b.len must equal A.rows");
    Gf2Matrix m(rows_, cols_ + 1);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) m.set(i, j, get(i, j));
      m.set(i, cols_, b.get(i));
    }
    return m;
  }

  std::vector<std::string> to_strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i).to_string());
    return out;
  }

  friend bool operator==(const Gf2Matrix&, const Gf2Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0, stride_ = 0;
  std::vector<Word> bits_;
};

struct GeneralSolution {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_cols;  // ascending
  Gf2Vector special;                    // x0; empty when inconsistent
  std::vector<Gf2Vector> kernel_basis;  // one per free column, ascending
  bool consistent = false;
};

namespace detail {

struct Reduction {
  Gf2Matrix a;
  Gf2Vector b;
  std::vector<std::size_t> pivot_of_row;  // column index or npos
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

// Row-by-row elimination in scan order without row swaps: row i's first 1
// becomes its pivot and is cleared from every other row.
inline Reduction reduce(Gf2Matrix a, Gf2Vector b) {
  Reduction r{std::move(a), std::move(b), {}};
  const std::size_t m = r.a.rows(), n = r.a.cols();
  r.pivot_of_row.assign(m, npos);
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = 0;
    while (j < n && !r.a.get(i, j)) ++j;
    if (j == n) continue;
    r.pivot_of_row[i] = j;
    for (std::size_t l = 0; l < m; ++l) {
      if (l != i && r.a.get(l, j)) {
        r.a.xor_row_into(i, l);
        r.b.set(l, r.b.get(l) ^ r.b.get(i));
      }
    }
  }
  return r;
}

}  // namespace detail

// Classical Gauss-Jordan over GF(2). Variables keep their original order.
inline GeneralSolution gauss_jordan(const Gf2Matrix& a, const Gf2Vector& b) {
  if (b.size() != a.rows()) throw ContractViolation("gauss_jordan: b.len must equal A.rows");
  const std::size_t m = a.rows(), n = a.cols();
  auto red = detail::reduce(a, b);

  GeneralSolution gs;
  std::vector<std::size_t> row_of_pivot(n, detail::npos);
  for (std::size_t i = 0; i < m; ++i) {
    if (red.pivot_of_row[i] != detail::npos) {
      row_of_pivot[red.pivot_of_row[i]] = i;
      gs.pivot_cols.push_back(red.pivot_of_row[i]);
    }
  }
  std::sort(gs.pivot_cols.begin(), gs.pivot_cols.end());
  gs.rank = gs.pivot_cols.size();

  gs.consistent = true;
  for (std::size_t i = 0; i < m; ++i)
    if (red.pivot_of_row[i] == detail::npos && red.b.get(i)) gs.consistent = false;
  if (!gs.consistent) return gs;

  gs.special = Gf2Vector(n);
  for (std::size_t j = 0; j < n; ++j)
    if (row_of_pivot[j] != detail::npos) gs.special.set(j, red.b.get(row_of_pivot[j]));
  for (std::size_t j = 0; j < n; ++j) {
    if (row_of_pivot[j] != detail::npos) continue;
    Gf2Vector eta(n);
    eta.set(j, true);
    for (std::size_t p = 0; p < n; ++p)
      if (row_of_pivot[p] != detail::npos) eta.set(p, red.a.get(row_of_pivot[p], j));
    gs.kernel_basis.push_back(std::move(eta));
  }
  return gs;
}

inline std::size_t rank(const Gf2Matrix& a) {
  auto red = detail::reduce(a, Gf2Vector(a.rows()));
  return static_cast<std::size_t>(
      std::count_if(red.pivot_of_row.begin(), red.pivot_of_row.end(), [](std::size_t p) { return p != detail::npos; }));
}

inline bool is_consistent(const Gf2Matrix& a, const Gf2Vector& b) {
  if (b.size() != a.rows()) throw ContractViolation("is_consistent: b.len must equal A.rows");
  return rank(a) == rank(a.augmented(b));
}

// All 2^k solutions x0 + sum c_i eta_i, ordered by the coefficient word c.
// Throws ContractViolation on an inconsistent system.
inline std::vector<Gf2Vector> enumerate_solutions(const GeneralSolution& gs) {
  if (!gs.consistent) throw ContractViolation("enumerate_solutions: system is inconsistent");
  const std::size_t k = gs.kernel_basis.size();
  if (k >= 63) throw ResourceError("enumerate_solutions: 2^" + std::to_string(k) + " solutions");
  std::vector<Gf2Vector> out;
  out.reserve(std::size_t{1} << k);
  for (std::uint64_t c = 0; c < (std::uint64_t{1} << k); ++c) {
    Gf2Vector x = gs.special;
    for (std::size_t i = 0; i < k; ++i)
      if ((c >> i) & 1U) x ^= gs.kernel_basis[i];
    out.push_back(std::move(x));
  }
  return out;
}

// Span of a set of vectors, as a reduced basis (canonical for equality tests).
inline std::vector<Gf2Vector> span_basis(const std::vector<Gf2Vector>& vs, std::size_t len) {
  if (vs.empty()) return {};
  Gf2Matrix m(vs.size(), len);
  for (std::size_t i = 0; i < vs.size(); ++i) m.set_row(i, vs[i]);
  auto red = detail::reduce(m, Gf2Vector(vs.size()));
  std::vector<std::pair<std::size_t, Gf2Vector>> rows;
  for (std::size_t i = 0; i < vs.size(); ++i)
    if (red.pivot_of_row[i] != detail::npos) rows.emplace_back(red.pivot_of_row[i], red.a.row(i));
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<Gf2Vector> out;
  for (auto& [p, v] : rows) out.push_back(std::move(v));
  return out;
}

inline bool same_span(const std::vector<Gf2Vector>& a, const std::vector<Gf2Vector>& b, std::size_t len) {
  return span_basis(a, len) == span_basis(b, len);
}

inline std::pair<Gf2Matrix, Gf2Vector> random_system(std::size_t m, std::size_t n, std::uint64_t seed) {
  if (m == 0 || n == 0) throw ContractViolation("random_system: m,n must be >= 1");
  Rng rng(seed);
  Gf2Matrix a(m, n);
  Gf2Vector b(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) a.set(i, j, random_bit(rng));
    b.set(i, random_bit(rng));
  }
  return {std::move(a), std::move(b)};
}

// Matrix text format: "m n", then m rows of n chars, then an optional line of
// m chars holding b (absent means b = 0). Blank lines and '#' lines skipped.
inline std::pair<Gf2Matrix, Gf2Vector> parse_system(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  auto next = [&](std::string& out) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      auto last = line.find_last_not_of(" \t");
      out = line.substr(first, last - first + 1);
      return true;
    }
    return false;
  };
  std::string head;
  if (!next(head)) throw ParseError(lineno, "missing header \"m n\"");
  std::istringstream hs(head);
  long long m = 0, n = 0;
  std::string extra;
  if (!(hs >> m >> n) || (hs >> extra)) throw ParseError(lineno, "header must be \"m n\"");
  if (m < 1 || n < 1) throw ParseError(lineno, "m and n must be >= 1");
  Gf2Matrix a(static_cast<std::size_t>(m), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::string r;
    if (!next(r)) throw ParseError(lineno, "expected " + std::to_string(m) + " matrix rows, got " + std::to_string(i));
    if (r.size() != a.cols()) throw ParseError(lineno, "row has " + std::to_string(r.size()) + " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] != '0' && r[j] != '1') throw ParseError(lineno, "entries must be 0 or 1");
      a.set(i, j, r[j] == '1');
    }
  }
  Gf2Vector b(a.rows());
  std::string r;
  if (next(r)) {
    if (r.size() != a.rows()) throw ParseError(lineno, "b has " + std::to_string(r.size()) + " entries, expected " + std::to_string(m));
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i] != '0' && r[i] != '1') throw ParseError(lineno, "entries must be 0 or 1");
      b.set(i, r[i] == '1');
    }
    std::string trailing;
    if (next(trailing)) throw ParseError(lineno, "unexpected trailing content");
  }
  return {std::move(a), std::move(b)};
}

}  // namespace gf2q
