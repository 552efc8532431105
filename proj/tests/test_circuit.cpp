// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "doctest.h"

#include "dense_sim.hpp"
#include "random_circuit.hpp"
#include "gf2q/circuit.hpp"
#include "gf2q/rng.hpp"
#include "gf2q/sparse_state.hpp"

using namespace gf2q;
using gf2q::testing::cd;
using gf2q::testing::random_circuit;
using gf2q::testing::unitary;

namespace {

double max_entry_diff(const std::vector<std::vector<cd>>& a, const std::vector<std::vector<cd>>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

}  // namespace

TEST_CASE("gate construction checks arity, range and distinctness") {
  Circuit c(3);
  c.toffoli(0, 1, 2);
  CHECK(c.size() == 1);
  CHECK_THROWS_AS(c.cnot(0, 3), ContractViolation);
  CHECK_THROWS_AS(c.cnot(1, 1), ContractViolation);
  auto r = c.add_register("extra", 2);
  CHECK(r.start == 3);
  CHECK(c.width() == 5);
  CHECK(c.reg("extra").size == 2);
  Circuit wide(9);
  CHECK_THROWS_AS(c.append(wide), ContractViolation);
}

TEST_CASE("decomposed Toffoli and Fredkin equal the ideal unitaries") {
  Circuit tof(3), fred(3);
  tof.toffoli(0, 1, 2);
  fred.fredkin(0, 1, 2);
  for (const Circuit* c : {&tof, &fred}) {
    auto ideal = unitary(*c);
    auto dec = decompose(*c);
    CHECK(max_entry_diff(unitary(dec), ideal) <= 1e-12);
    for (const Gate& g : dec.gates()) CHECK(is_permutation_kind(g.kind) == (g.kind == GateKind::X || g.kind == GateKind::CNOT));
  }
  // Permuted wirings exercise the template on non-adjacent qubits.
  Circuit tof2(4), fred2(4);
  tof2.toffoli(3, 0, 2);
  fred2.fredkin(2, 3, 0);
  CHECK(max_entry_diff(unitary(decompose(tof2)), unitary(tof2)) <= 1e-12);
  CHECK(max_entry_diff(unitary(decompose(fred2)), unitary(fred2)) <= 1e-12);
}

TEST_CASE("decomposition gate tallies") {
  Circuit tof(3), fred(3);
  tof.toffoli(0, 1, 2);
  fred.fredkin(0, 1, 2);
  auto t = count_gates(decompose(tof));
  CHECK(t[GateKind::CNOT] == 6);
  CHECK(t[GateKind::T] + t[GateKind::T_DAG] == 7);
  CHECK(t[GateKind::H] == 2);
  CHECK(t[GateKind::S] + t[GateKind::S_DAG] == 1);
  auto f = count_gates(decompose(fred));
  CHECK(f[GateKind::CNOT] == 7);
  CHECK(f[GateKind::T] + f[GateKind::T_DAG] == 7);
  CHECK(f[GateKind::H] == 2);
  CHECK(f[GateKind::S] + f[GateKind::S_DAG] == 3);
  CHECK(decompose(Circuit(4)).empty());
}

TEST_CASE("resource report arithmetic") {
  Circuit c(2);
  for (int i = 0; i < 1000; ++i) c.cnot(0, 1);
  auto r = count_resources(c);
  CHECK(r.cnot_equivalent == 1000);
  CHECK(r.serial_seconds == doctest::Approx(0.285).epsilon(1e-12));
  CHECK(r.within_budget);

  Circuit t(3);
  t.toffoli(0, 1, 2);
  CHECK(count_resources(t).cnot_equivalent == 6);
  CHECK(count_resources(t).single_qubit_total == 10);
  CHECK(count_resources(t).serial_seconds == doctest::Approx(1.71e-3).epsilon(1e-12));

  auto empty = count_resources(Circuit(1));
  CHECK(empty.cnot_equivalent == 0);
  CHECK(empty.serial_seconds == 0.0);
  CHECK(empty.within_budget);

  ResourceReport at;
  at.cnot_equivalent = 2105263;
  CHECK(estimate_runtime(at).within_budget);
  at.cnot_equivalent = 2105264;
  CHECK_FALSE(estimate_runtime(at).within_budget);
  CHECK_THROWS_AS(estimate_runtime(at, 0.0), ContractViolation);
  CHECK_THROWS_AS(estimate_runtime(at, -1.0), ContractViolation);

  auto j = to_json(count_resources(t));
  CHECK(j.size() == 6);
  CHECK(j["counts"]["TOFFOLI"] == 1);
  CHECK(j.contains("within_budget"));
}

TEST_CASE("CNOT count after decomposition equals cnot_equivalent on random circuits") {
  Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    auto c = random_circuit(3 + uniform_below(rng, 6), 1 + uniform_below(rng, 60), rng);
    auto before = count_resources(c);
    auto after = count_gates(decompose(c));
    CHECK(after[GateKind::CNOT] == before.cnot_equivalent);
    CHECK(after[GateKind::TOFFOLI] + after[GateKind::FREDKIN] == 0);
    CHECK(count_resources(decompose(c)).single_qubit_total == before.single_qubit_total);
  }
}

TEST_CASE("inverse") {
  Circuit c(2);
  c.cnot(0, 1);
  c.x(0);
  auto inv = inverse(c);
  REQUIRE(inv.size() == 2);
  CHECK(inv.gates()[0] == Gate{GateKind::X, {0, 0, 0}});
  CHECK(inv.gates()[1] == Gate{GateKind::CNOT, {0, 1, 0}});

  Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    const std::size_t w = 1 + uniform_below(rng, 10);
    auto r = random_circuit(w, 30, rng);
    CHECK(inverse(inverse(r)) == r);
    Circuit round = r;
    round.append(inverse(r));
    const std::uint64_t basis = uniform_below(rng, std::uint64_t{1} << w);
    auto s = SparseState::init_basis(w, Gf2Vector::from_u64(w, basis));
    s.apply_circuit(round);
    REQUIRE(s.size() == 1);
    CHECK(s.key(0)[0] == basis);
    CHECK(std::abs(s.amp(0) - cd(1, 0)) < 1e-10);
  }
}

TEST_CASE("inverse restores every basis state for small widths") {
  Rng rng(9);
  for (std::size_t w = 1; w <= 6; ++w) {
    auto r = random_circuit(w, 25, rng);
    Circuit round = r;
    round.append(inverse(r));
    for (std::uint64_t b = 0; b < (std::uint64_t{1} << w); ++b) {
      auto s = SparseState::init_basis(w, Gf2Vector::from_u64(w, b));
      s.apply_circuit(round);
      REQUIRE(s.size() == 1);
      CHECK(s.key(0)[0] == b);
    }
  }
}

TEST_CASE("text format round trip and errors") {
  Circuit c(0);
  auto a = c.add_register("a", 2);
  c.add_register("b", 1);
  c.toffoli(a[0], a[1], 2);
  c.h(0);
  c.sdg(1);
  c.fredkin(2, 0, 1);
  const auto text = serialize(c);
  CHECK(text.rfind("QC1 width=3\n", 0) == 0);
  CHECK(parse_circuit(text) == c);

  auto one = parse_circuit("QC1 width=3\nTOFFOLI 0 1 2\n");
  REQUIRE(one.size() == 1);
  CHECK(one.gates()[0] == Gate{GateKind::TOFFOLI, {0, 1, 2}});

  auto expect_line = [](const char* text, std::size_t line) {
    try {
      parse_circuit(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == line);
    }
  };
  expect_line("QC1 width=2\nCNOT 0\n", 2);
  expect_line("QC1 width=2\nX 0\nSWAP 0 1\n", 3);
  expect_line("QC1 width=2\n\n# note\nX 2\n", 4);
  expect_line("X 0\n", 1);
  expect_line("QC1 width=2\nCNOT 1 1\n", 2);
}
