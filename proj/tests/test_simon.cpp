// SPDX-License-Identifier: Apache-2.0
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <set>

#include "doctest.h"

#include "brute.hpp"
#include "gf2q/oracle_compile.hpp"
#include "gf2q/simon.hpp"

using namespace gf2q;
using gf2q::testing::all_subspaces;

namespace {

Gf2Vector vec(const char* s) { return Gf2Vector::from_string(s); }

// Pr_x[f(x) = f(x ^ a)] maximized over a outside the span, by direct counting.
double brute_epsilon(std::size_t n, const std::vector<std::uint64_t>& f, const std::set<std::uint64_t>& span) {
  double best = 0;
  for (std::uint64_t a = 1; a < (std::uint64_t{1} << n); ++a) {
    if (span.count(a)) continue;
    int hits = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) hits += f[x] == f[x ^ a];
    best = std::max(best, hits / double(std::uint64_t{1} << n));
  }
  return best;
}

}  // namespace

TEST_CASE("truth tables compile to the table, with clean work qubits") {
  Rng rng(5);
  for (std::size_t nin = 1; nin <= 4; ++nin) {
    for (std::size_t nout = 1; nout <= 3; ++nout) {
      Circuit c;
      auto in = c.add_register("in", nin), out = c.add_register("out", nout), work = c.add_register("w", 3);
      std::vector<std::uint64_t> table(std::size_t{1} << nin);
      for (auto& t : table) t = uniform_below(rng, std::uint64_t{1} << nout);
      compile_truth_table(c, in.qubits(), out.qubits(), table, work.qubits());
      for (std::uint64_t x = 0; x < table.size(); ++x) {
        for (std::uint64_t y0 = 0; y0 < (std::uint64_t{1} << nout); ++y0) {
          const auto res = classical_eval(c, Gf2Vector::from_u64(c.width(), x | (y0 << nin))).to_u64();
          CHECK((res & ((1U << nin) - 1)) == x);
          CHECK(((res >> nin) & ((1U << nout) - 1)) == (y0 ^ table[x]));
          CHECK((res >> (nin + nout)) == 0);
        }
      }
    }
  }
  Circuit c(4);
  CHECK_THROWS_AS(compile_truth_table(c, {0, 1}, {2}, {0, 1, 1}, {3}), ContractViolation);
  CHECK_THROWS_AS(compile_truth_table(c, {0, 1, 2}, {3}, std::vector<std::uint64_t>(8, 1), {}), ContractViolation);
  CHECK_THROWS_AS(compile_truth_table(c, {0}, {1}, {0, 2}, {}), ContractViolation);
}

TEST_CASE("zero test and OR") {
  for (std::size_t k = 1; k <= 4; ++k) {
    Circuit z(k + 1 + 3), o(k + 1 + 3);
    std::vector<Qubit> in, work{Qubit(k + 1), Qubit(k + 2), Qubit(k + 3)};
    for (std::size_t i = 0; i < k; ++i) in.push_back(static_cast<Qubit>(i));
    compile_zero_test(z, in, static_cast<Qubit>(k), work);
    compile_or(o, in, static_cast<Qubit>(k), work);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x) {
      const auto rz = classical_eval(z, Gf2Vector::from_u64(z.width(), x)).to_u64();
      const auto ro = classical_eval(o, Gf2Vector::from_u64(o.width(), x)).to_u64();
      CHECK(rz == (x | (std::uint64_t(x == 0) << k)));
      CHECK(ro == (x | (std::uint64_t(x != 0) << k)));
    }
  }
}

TEST_CASE("coset oracles") {
  auto o = make_oracle(2, {vec("11")}, 1);
  CHECK(o(0b00) == o(0b11));
  CHECK(o(0b01) == o(0b10));
  CHECK(o(0b00) != o(0b01));
  CHECK(epsilon_f(o) == 0.0);

  auto o3 = make_oracle(3, {vec("110"), vec("011")}, 2);
  std::map<std::uint64_t, int> preimages;
  for (std::uint64_t x = 0; x < 8; ++x) ++preimages[o3(x)];
  CHECK(preimages.size() == 2);
  for (auto& [v, cnt] : preimages) CHECK(cnt == 4);

  CHECK(make_oracle(4, {vec("1010")}, 9).truth_table == make_oracle(4, {vec("1010")}, 9).truth_table);
  CHECK_THROWS_AS(make_oracle(3, {vec("110"), vec("011"), vec("101")}, 1), ContractViolation);
  CHECK_THROWS_AS(make_oracle(3, {vec("11")}, 1), ContractViolation);

  // Promise and epsilon against brute force over every subspace up to n = 4.
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& basis : all_subspaces(n)) {
      auto orc = make_oracle(n, basis, 77 + n);
      std::set<std::uint64_t> span;
      for (std::uint64_t a = 0; a < (std::uint64_t{1} << n); ++a) {
        bool period = true;
        for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) period = period && orc(x) == orc(x ^ a);
        if (period) span.insert(a);
      }
      CHECK(span.size() == (std::size_t{1} << basis.size()));
      for (const auto& b : basis) CHECK(span.count(b.to_u64()));
      CHECK(epsilon_f(orc) == brute_epsilon(n, orc.truth_table, span));
      CHECK(epsilon_f(orc) == 0.0);
    }
  }
}

TEST_CASE("epsilon of degenerate and planted-collision tables") {
  auto c = from_table(2, {3, 3, 3, 3}, std::vector<Gf2Vector>{vec("11")});
  CHECK(epsilon_f(c) == 1.0);
  CHECK(from_table(2, {3, 3, 3, 3}).period_set.size() == 2);
  CHECK(epsilon_f(from_table(2, {3, 3, 3, 3})) == 0.0);

  // Injective on 3 bits, then one extra collision between x=2 and x=5.
  std::vector<std::uint64_t> t{6, 1, 4, 0, 7, 4, 2, 3};
  auto o = from_table(3, t);
  CHECK(o.period_set.empty());
  CHECK(epsilon_f(o) == 2.0 / 8.0);
  CHECK(epsilon_f(o) == brute_epsilon(3, t, {0}));
  CHECK_THROWS_AS(from_table(2, {0, 1, 2, 3}, std::vector<Gf2Vector>{vec("11")}), ContractViolation);
  CHECK_THROWS_AS(from_table(2, {0, 1, 2}), ContractViolation);
}

TEST_CASE("single Simon query distributions") {
  auto one = simon_marginal(make_oracle(1, {vec("1")}, 3));
  CHECK(one.size() == 1);
  CHECK(one.at(vec("0")) == doctest::Approx(1.0).epsilon(1e-12));

  auto two = simon_marginal(make_oracle(2, {vec("11")}, 3));
  CHECK(two.size() == 2);
  CHECK(two.at(vec("00")) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(two.at(vec("11")) == doctest::Approx(0.5).epsilon(1e-12));

  auto full = simon_marginal(make_oracle(2, {vec("10"), vec("01")}, 3));
  CHECK(full.size() == 1);
  CHECK(full.count(vec("00")));
}

TEST_CASE("Simon marginal is uniform on the orthogonal complement") {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (const auto& basis : all_subspaces(n)) {
      auto marg = simon_marginal(make_oracle(n, basis, 1000 + n));
      const double expect = std::ldexp(1.0, -static_cast<int>(n - basis.size()));
      for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); ++y) {
        const auto yv = Gf2Vector::from_u64(n, y);
        bool perp = true;
        for (const auto& s : basis) perp = perp && !yv.dot(s);
        const double got = marg.count(yv) ? marg.at(yv) : 0.0;
        CHECK(std::abs(got - (perp ? expect : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("sampling") {
  auto o = make_oracle(2, {vec("11")}, 4);
  for (const auto& y : sample_simon(o, 200, 8)) CHECK((y == vec("00") || y == vec("11")));
  CHECK(sample_simon(o, 0, 8).empty());
  CHECK(sample_simon(o, 50, 8) == sample_simon(o, 50, 8));

  auto o3 = make_oracle(3, {vec("101")}, 5);
  auto marg = simon_marginal(o3);
  const std::size_t draws = 10000;
  std::map<Gf2Vector, double> freq;
  for (const auto& y : sample_simon(o3, draws, 17)) freq[y] += 1;
  double chi2 = 0;
  for (const auto& [y, p] : marg) {
    const double e = p * draws;
    const double d = freq[y] - e;
    chi2 += d * d / e;
  }
  const double dof = static_cast<double>(marg.size() - 1);
  CHECK(chi2 <= dof + 3 * std::sqrt(2 * dof));
}

TEST_CASE("parallel Simon, sampled") {
  auto o = make_oracle(2, {vec("11")}, 6);
  SimonSampler sampler(o);
  Alg2Kernel solver(21, 2);
  int ok = 0;
  for (int t = 0; t < 500; ++t) ok += parallel_simon_sampled(o, sampler, solver, derive_seed(1, t)).matches_planted;
  CHECK(ok >= 495);

  auto o3 = make_oracle(3, {vec("110"), vec("011")}, 7);
  auto r = parallel_simon(o3, 32, SimonMode::SAMPLED, 3);
  CHECK(r.matches_planted);
  CHECK(same_span(r.periods, {vec("110"), vec("011")}, 3));
  CHECK(r.rank == 1);
  CHECK_THROWS_AS(parallel_simon(o3, 0, SimonMode::SAMPLED, 3), ContractViolation);
}

TEST_CASE("ALG2 kernel matches the classical oracle") {
  Rng rng(12);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + uniform_below(rng, 6), n = 1 + uniform_below(rng, 4);
    Alg2Kernel solver(m, n);
    std::vector<Gf2Vector> rows;
    Gf2Matrix a(m, n);
    for (std::size_t i = 0; i < m; ++i) {
      rows.push_back(Gf2Vector::from_u64(n, uniform_below(rng, std::uint64_t{1} << n)));
      a.set_row(i, rows.back());
    }
    CHECK(same_span(solver.kernel(rows), gauss_jordan(a, Gf2Vector(m)).kernel_basis, n));
  }
}

TEST_CASE("parallel Simon, coherent") {
  auto o = make_oracle(2, {vec("11")}, 6);
  auto run = run_coherent_simon(o, 3);
  CHECK(std::abs(run.state.norm2() - 1.0) < 1e-9);
  const auto& L = run.cs.solver;

  // Branch inspection: replay the Simon blocks alone, then push every branch
  // through the solver classically and compare with the classical kernel of
  // that branch's rows.
  Circuit prefix = run.cs.circuit.empty_like(), solver = run.cs.circuit.empty_like();
  for (std::size_t i = 0; i < run.cs.circuit.size(); ++i)
    (i < L.elimination.begin ? prefix : solver).add(run.cs.circuit.gates()[i]);
  auto pre = SparseState::init_zero(prefix.width());
  pre.apply_circuit(prefix);
  for (std::size_t e = 0; e < pre.size(); ++e) {
    std::vector<Gf2Vector> rows;
    for (const auto& r : run.cs.inputs) {
      rows.push_back(pre.project(e, r.qubits()));
      CHECK(!rows.back().dot(vec("11")));
    }
    const auto out = classical_eval(solver, pre.key_bits(e));
    Gf2Vector mark(2), store(6);
    for (std::size_t j = 0; j < 2; ++j) mark.set(j, out.get(L.mark[j]));
    const auto sq = L.storage_qubits();
    for (std::size_t i = 0; i < sq.size(); ++i) store.set(i, out.get(sq[i]));
    auto eta = detail::kernel_from_storage(2, mark, store);
    CHECK(same_span(eta, gauss_jordan(Gf2Matrix::from_rows(rows), Gf2Vector(3)).kernel_basis, 2));
  }

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto r = parallel_simon(o, 3, SimonMode::COHERENT, seed);
    bool contains_s = false;
    for (auto w : detail::span_words(r.periods)) contains_s = contains_s || w == 0b11;
    CHECK(contains_s);
    CHECK(r.outcome_probability > 0);
  }
  CHECK_THROWS_AS(parallel_simon(o, 6, SimonMode::COHERENT, 1, 1000), ResourceError);
}

TEST_CASE("independence probability") {
  using boost::multiprecision::cpp_int;
  CHECK(independence_probability(0) == 1.0);
  CHECK(independence_probability(1) == 0.5);
  CHECK(independence_probability(64) == doctest::Approx(0.288788095).epsilon(1e-9));
  // Exact rationals: P(d) = prod (2^i - 1) / 2^{d(d+1)/2}; P(d+1) < P(d) iff
  // (2^{d+1} - 1) < 2^{d+1}, checked on the integers themselves.
  cpp_int num = 1;
  for (unsigned d = 1; d <= 80; ++d) {
    cpp_int next = num * ((cpp_int(1) << d) - 1);
    CHECK(next < (num << d));
    num = next;
  }
  double prev = 2.0;
  for (std::size_t d = 0; d <= 2000; ++d) {
    const double p = independence_probability(d);
    // 1 - 2^-d rounds to 1 in double precision past d = 53.
    if (d <= 52) CHECK(p < prev);
    CHECK(p <= prev);
    CHECK(p >= 0.2887);
    prev = p;
  }
  CHECK(independence_probability(1000000) >= 0.2887);
}

TEST_CASE("recovery bound and row threshold") {
  CHECK(simon_recovery_bound(3, 0.5, 0) == 0.0);
  CHECK(simon_recovery_bound(3, 0.5, 18) == doctest::Approx(1 - 8 * std::pow(0.75, 18)).epsilon(1e-14));
  CHECK(simon_recovery_bound(3, 0.5, 18) == doctest::Approx(0.9548).epsilon(1e-4));
  CHECK(simon_row_threshold(1, kGenericP0) == doctest::Approx(10.4).epsilon(2e-3));
  CHECK(simon_row_threshold(3, 0.0) == 9.0);
  CHECK_THROWS_AS(simon_recovery_bound(3, 1.0, 4), ContractViolation);
  CHECK_THROWS_AS(simon_row_threshold(3, -0.1), ContractViolation);
}

TEST_CASE("Grover iteration count") {
  CHECK(grover_iterations(1) == 1);
  CHECK(grover_iterations(2) == 2);
  CHECK(grover_iterations(4) == 4);
  for (std::size_t m = 1; m <= 20; ++m)
    CHECK(grover_iterations(m) == static_cast<std::size_t>(std::ceil(M_PI / (4 * std::asin(std::pow(2.0, -(m / 2.0)))) - 1e-12)));
}
