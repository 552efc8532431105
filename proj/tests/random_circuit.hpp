// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "gf2q/circuit.hpp"
#include "gf2q/rng.hpp"

namespace gf2q::testing {

// Uniform gate kinds on distinct random wires; kinds wider than the circuit
// fall back to H.
inline Circuit random_circuit(std::size_t width, std::size_t gates, Rng& rng) {
  Circuit c(width);
  for (std::size_t i = 0; i < gates; ++i) {
    GateKind k = kAllGateKinds[uniform_below(rng, kAllGateKinds.size())];
    if (arity(k) > width) k = GateKind::H;
    std::vector<Qubit> pool(width);
    for (std::size_t q = 0; q < width; ++q) pool[q] = static_cast<Qubit>(q);
    shuffle(pool, rng);
    c.add({k, {pool[0], arity(k) > 1 ? pool[1] : 0, arity(k) > 2 ? pool[2] : 0}});
  }
  return c;
}

}  // namespace gf2q::testing
