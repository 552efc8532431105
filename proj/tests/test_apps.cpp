// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <set>

#include "doctest.h"

#include "dense_sim.hpp"
#include "gf2q/estimate.hpp"
#include "gf2q/grover_simon.hpp"
#include "gf2q/polyq2.hpp"

using namespace gf2q;
using gf2q::testing::DenseState;

TEST_CASE("FX instances") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto d = random_fx(2, 2, seed);
    const auto& fx = d.fx;
    CHECK_NOTHROW(validate(fx));
    for (std::uint64_t x = 0; x < 4; ++x) {
      CHECK(fx.enc(x) == (fx.E[fx.k0][x ^ fx.k1] ^ fx.k2));
      CHECK(fx.f(fx.k0, x) == fx.f(fx.k0, x ^ fx.k1));
    }
    CHECK(fx.k1 != 0);
    if (d.promise_holds) CHECK(fx_promise_holds(fx));
  }
  FxInstance bad = random_fx(1, 2, 1).fx;
  bad.E[0][0] = bad.E[0][1];
  CHECK_THROWS_AS(validate(bad), ContractViolation);
}

TEST_CASE("plaintext pairs and the pair test") {
  Rng rng(3);
  for (const auto& p : draw_pairs(2, 100, rng)) CHECK(p.a != p.b);
  CHECK(default_pairs(2, 2, 4) == 7);
  CHECK(default_pairs(1, 1, 2) == 5);
  CHECK(analysis_ell(2) == doctest::Approx(2 * (2 + std::sqrt(2.0))));
  auto fx = random_fx(2, 2, 4).fx;
  auto pairs = draw_pairs(2, 7, rng);
  auto t = pair_test_table(fx, pairs);
  CHECK(t[fx.k0 | (fx.k1 << 2)] == 1);
  // Independent check of one entry per (k, v).
  for (std::uint64_t k = 0; k < 4; ++k) {
    for (std::uint64_t v = 0; v < 4; ++v) {
      bool ok = true;
      for (const auto& p : pairs) {
        const auto lhs = fx.E[fx.k0][p.a ^ fx.k1] ^ fx.E[fx.k0][p.b ^ fx.k1];
        ok = ok && lhs == (fx.E[k][p.a ^ v] ^ fx.E[k][p.b ^ v]);
      }
      CHECK(t[k | (v << 2)] == ok);
    }
  }
}

TEST_CASE("Grover-meets-Simon circuit agrees with dense simulation") {
  auto fx = random_fx(1, 1, 5).fx;
  GroverSimonConfig cfg;
  cfg.fx = fx;
  cfg.ell = 1;
  cfg.seed = 9;
  auto g = build_grover_simon(cfg);
  REQUIRE(g.circuit.width() <= 22);
  DenseState dense(g.circuit.width());
  dense.apply(g.circuit);
  auto sparse = SparseState::init_zero(g.circuit.width());
  sparse.apply_circuit(g.circuit);
  double diff = 0;
  for (std::size_t b = 0; b < dense.amps().size(); ++b)
    diff = std::max(diff, std::abs(dense.amps()[b] - sparse.amplitude_of(Gf2Vector::from_u64(g.circuit.width(), b))));
  CHECK(diff < 1e-10);
}

TEST_CASE("Grover-meets-Simon on the degenerate m=1, n=1 instance") {
  // With one-bit blocks both keys pass any pair test, so Grover over two
  // keys leaves each at 1/2 and the solution register is uniform.
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    GroverSimonConfig cfg;
    cfg.fx = random_fx(1, 1, seed).fx;
    cfg.ell = 2;
    cfg.seed = seed;
    auto r = grover_meets_simon(cfg);
    CHECK(r.iterations == 1);
    CHECK(r.marked_keys == 2);
    CHECK(r.key_mass == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.success_probability == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.accepted_mass == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("Grover-meets-Simon sampling matches the exact mass") {
  GroverSimonConfig cfg;
  cfg.fx = random_fx(1, 1, 2).fx;
  cfg.ell = 2;
  auto g = build_grover_simon(cfg);
  auto s = SparseState::init_zero(g.circuit.width());
  s.apply_circuit(g.circuit);
  std::vector<Qubit> read = g.key.qubits();
  for (Qubit q : g.readout_solution.qubits()) read.push_back(q);
  const auto marg = s.exact_marginal(read);
  const auto target = Gf2Vector::from_u64(2, cfg.fx.k0 | (cfg.fx.k1 << 1));
  const double p = marg.count(target) ? marg.at(target) : 0.0;
  const int draws = 2000;
  int hits = 0;
  for (int t = 0; t < draws; ++t) hits += measure_register(s, read, derive_seed(4, t)).bits == target;
  const double sigma = std::sqrt(p * (1 - p) / draws);
  CHECK(std::abs(hits / double(draws) - p) <= 3 * sigma);
}

TEST_CASE("Grover-meets-Simon at m=2, n=2 follows the ideal rotation") {
  auto d = random_fx(2, 2, 21);
  GroverSimonConfig cfg;
  cfg.fx = d.fx;
  cfg.ell = 3;
  cfg.seed = 1;
  auto r = grover_meets_simon(cfg);
  CHECK(r.iterations == 2);
  CHECK(r.pairs == 6);
  CHECK(r.marking_is_key_only);
  CHECK(r.key_mass == doctest::Approx(r.ideal_key_mass).epsilon(1e-9));
  CHECK(r.success_probability <= r.key_mass + 1e-12);

  cfg.classifier = ClassifierMode::KEEP;
  cfg.ell = 2;
  auto k = grover_meets_simon(cfg);
  CHECK(k.key_mass >= 0.0);
  CHECK(k.key_mass <= 1.0);
  cfg.entry_limit = 64;
  CHECK_THROWS_AS(grover_meets_simon(cfg), ResourceError);
}

TEST_CASE("Grover rotation helper") {
  CHECK(grover_mass_per_marked(4, 1, 2) == doctest::Approx(0.25));
  CHECK(grover_mass_per_marked(4, 1, 1) == doctest::Approx(1.0));
  CHECK(grover_mass_per_marked(2, 1, 1) == doctest::Approx(0.5));
  for (std::size_t t = 1; t <= 4; ++t) CHECK(grover_mass_per_marked(4, t, 2) == doctest::Approx(0.25));
}

// ------------------------------------------------------------ PolyQ2

TEST_CASE("PolyQ2 error bound") {
  CHECK(polyq2_error_bound(2, 8) == doctest::Approx(std::pow(2.0, 1.5) * std::pow(0.75, 8)).epsilon(1e-14));
  CHECK(polyq2_error_bound(2, 8) == doctest::Approx(0.283).epsilon(1e-3));
  CHECK(smallest_c_below(2, 0.3) == 8);
}

TEST_CASE("promise check") {
  auto d = random_polyq2(1, 2, 1, 3);
  const auto& cfg = d.cfg;
  double best = 0;
  for (std::uint64_t i = 0; i < 2; ++i) {
    if (i == cfg.i0) continue;
    for (std::uint64_t a = 1; a < 4; ++a) {
      if (a == cfg.s) continue;
      int hits = 0;
      for (std::uint64_t x = 0; x < 4; ++x)
        hits += (cfg.F[i][x] ^ cfg.g[x]) == (cfg.F[i][x ^ a] ^ cfg.g[x ^ a]);
      best = std::max(best, hits / 4.0);
    }
  }
  CHECK(promise_check(cfg) == best);
  CHECK(d.promise_holds == (best <= 0.5));

  PolyQ2Config same = cfg;
  for (auto& f : same.F) f = same.g;
  CHECK(promise_check(same) == 1.0);

  PolyQ2Config single = cfg;
  single.F.resize(1);
  single.i0 = 0;
  CHECK(promise_check(single) == 0.0);
}

TEST_CASE("Simon row distribution matches simulation") {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    std::vector<std::uint64_t> h(8);
    for (auto& v : h) v = uniform_below(rng, 8);
    auto o = from_table(3, h);
    auto marg = simon_marginal(o);
    auto row = simon_row_distribution(3, h);
    for (std::uint64_t u = 0; u < 8; ++u) {
      const auto uv = Gf2Vector::from_u64(3, u);
      CHECK(std::abs(row[u] - (marg.count(uv) ? marg.at(uv) : 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("rank deficiency probability by enumeration") {
  Rng rng(2);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> row(4);
    double total = 0;
    for (auto& p : row) total += (p = uniform_unit(rng));
    for (auto& p : row) p /= total;
    for (std::size_t draws = 1; draws <= 4; ++draws) {
      double deficient = 0;
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << (2 * draws)); ++code) {
        double p = 1;
        Gf2Matrix a(draws, 2);
        for (std::size_t k = 0; k < draws; ++k) {
          const auto u = (code >> (2 * k)) & 3U;
          p *= row[u];
          a.set_row(k, Gf2Vector::from_u64(2, u));
        }
        if (rank(a) < 2) deficient += p;
      }
      CHECK(rank_deficiency_probability(2, row, draws) == doctest::Approx(deficient).epsilon(1e-12));
    }
  }
}

TEST_CASE("PolyQ2 block evaluator matches full simulation") {
  for (std::size_t c : {1, 2}) {
    for (std::uint64_t seed = 0; seed < (c == 1 ? 4u : 1u); ++seed) {
      auto d = random_polyq2(1, 2, c, seed);
      auto full = alg_polyq2(d.cfg, PolyQ2Engine::FULL);
      auto block = alg_polyq2(d.cfg, PolyQ2Engine::BLOCK);
      std::set<std::uint64_t> keys;
      for (auto& [k, p] : full.readout) keys.insert(k);
      for (auto& [k, p] : block.readout) keys.insert(k);
      for (auto k : keys) {
        const double a = full.readout.count(k) ? full.readout.at(k) : 0.0;
        const double b = block.readout.count(k) ? block.readout.at(k) : 0.0;
        CHECK(std::abs(a - b) < 1e-10);
      }
      CHECK(test_oracle_is_phase_flip(build_polyq2(d.cfg), d.cfg.i0));
    }
  }
}

TEST_CASE("PolyQ2 solver section restores the Simon inputs") {
  auto d = random_polyq2(1, 2, 8, 5);
  auto p = build_polyq2(d.cfg);
  CHECK_FALSE(solver_touches(p, p.values));
  CHECK_FALSE(solver_touches(p, p.index));
  const std::uint64_t perp = (d.cfg.s == 1) ? 2 : (d.cfg.s == 2) ? 1 : 3;  // the nonzero vector orthogonal to s
  std::vector<std::vector<std::uint64_t>> tuples;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << 16); ++code) {
    std::vector<std::uint64_t> t(16);
    for (std::size_t b = 0; b < 16; ++b) t[b] = ((code >> b) & 1U) ? perp : 0;
    tuples.push_back(t);
  }
  Rng rng(4);
  for (int k = 0; k < 1024; ++k) {
    std::vector<std::uint64_t> t(16);
    for (auto& u : t) u = uniform_below(rng, 4);
    tuples.push_back(t);
  }
  CHECK(solver_restores_inputs(p, tuples));
}

TEST_CASE("PolyQ2 at c=8") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto d = random_polyq2(1, 2, 8, seed);
    CHECK(d.promise_holds);
    auto r = alg_polyq2(d.cfg, PolyQ2Engine::BLOCK);
    CHECK(r.iterations == 1);
    CHECK(r.success_probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.max_false_positive <= r.bound);
    if (r.success) {
      REQUIRE(r.s_found.has_value());
      CHECK(*r.s_found == d.cfg.s);
    }
  }
  PolyQ2Config bad = random_polyq2(1, 2, 1, 0).cfg;
  bad.c = 0;
  CHECK_THROWS_AS(validate(bad), ContractViolation);
}

// ------------------------------------------------------------ estimate

TEST_CASE("feasibility rows") {
  auto r = estimate_row(64, 1);
  const std::uint64_t m = 64, n = 64;
  const std::uint64_t cnot = (2 * m * n + n * n + 3 * n) / 2;
  const std::uint64_t toff = (4 * m * n * n + n * n * n + 8 * m * n + 4 * n * n - n) / 2;
  CHECK(r.cnot_equivalent == cnot + 6 * toff);
  CHECK(r.serial_seconds == static_cast<double>(cnot + 6 * toff) * 2.85e-4);
  CHECK(r.within_budget == (r.serial_seconds <= 600.0));
  CHECK_THROWS_AS(estimate_row(0, 1), ContractViolation);
  CHECK_THROWS_AS(estimate_row(4, 0), ContractViolation);
  for (std::uint64_t nn = 1; nn <= 5; ++nn)
    for (std::uint64_t mm = 1; mm <= 5; ++mm)
      CHECK(built_cnot_equivalent(nn, mm) == feasibility_row("", nn, mm).cnot_equivalent);
  for (std::uint64_t c = 1; c <= 4; ++c)
    for (std::uint64_t nn : {16, 32, 64}) CHECK(std::abs(doubling_ratio(nn, c) / 8.0 - 1.0) < 0.15);
  auto presets = preset_rows();
  CHECK(presets.size() == 6);
  for (const auto& p : presets) CHECK(p.n == 64);
}
