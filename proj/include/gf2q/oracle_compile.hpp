// SPDX-License-Identifier: Apache-2.0
#pragma once

// Truth tables compiled to permutation circuits: for every input word with a
// nonzero output, an X-wrapped AND cascade over the inputs drives CNOTs into
// the output bits, then the cascade is undone. The work ancillas come back
// to 0, so one work register serves any number of tables.

#include <cstdint>
#include <string>
#include <vector>

#include "gf2q/circuit.hpp"
#include "gf2q/errors.hpp"

namespace gf2q {

// Entry x of `table` is the output word for input word x, where input bit i
// is qubit inputs[i] and output bit o is qubit outputs[o].
inline void compile_truth_table(Circuit& out, const std::vector<Qubit>& inputs, const std::vector<Qubit>& outputs,
                                const std::vector<std::uint64_t>& table, const std::vector<Qubit>& work) {
  const std::size_t nin = inputs.size();
  if (nin == 0 || nin >= 63) throw ContractViolation("truth table needs 1..62 input bits");
  if (table.size() != (std::size_t{1} << nin))
    throw ContractViolation("truth table has " + std::to_string(table.size()) + " rows, expected 2^" +
                            std::to_string(nin));
  if (work.size() + 1 < nin) throw ContractViolation("truth table needs " + std::to_string(nin - 1) + " work qubits");
  const std::uint64_t out_mask = outputs.size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << outputs.size()) - 1;

  for (std::uint64_t x = 0; x < table.size(); ++x) {
    const std::uint64_t y = table[x];
    if (y & ~out_mask) throw ContractViolation("truth table output wider than the output register");
    if (y == 0) continue;
    for (std::size_t i = 0; i < nin; ++i)
      if (!((x >> i) & 1U)) out.x(inputs[i]);
    Qubit all = inputs[0];
    if (nin >= 2) {
      out.toffoli(inputs[0], inputs[1], work[0]);
      for (std::size_t i = 2; i < nin; ++i) out.toffoli(inputs[i], work[i - 2], work[i - 1]);
      all = work[nin - 2];
    }
    for (std::size_t o = 0; o < outputs.size(); ++o)
      if ((y >> o) & 1U) out.cnot(all, outputs[o]);
    if (nin >= 2) {
      for (std::size_t i = nin; i-- > 2;) out.toffoli(inputs[i], work[i - 2], work[i - 1]);
      out.toffoli(inputs[0], inputs[1], work[0]);
    }
    for (std::size_t i = 0; i < nin; ++i)
      if (!((x >> i) & 1U)) out.x(inputs[i]);
  }
}

// Flips `target` when every listed qubit is 0.
inline void compile_zero_test(Circuit& out, const std::vector<Qubit>& inputs, Qubit target,
                              const std::vector<Qubit>& work) {
  const std::size_t nin = inputs.size();
  if (nin == 0) throw ContractViolation("zero test needs at least one input");
  if (work.size() + 1 < nin) throw ContractViolation("zero test needs " + std::to_string(nin - 1) + " work qubits");
  for (Qubit q : inputs) out.x(q);
  if (nin == 1) {
    out.cnot(inputs[0], target);
  } else {
    out.toffoli(inputs[0], inputs[1], work[0]);
    for (std::size_t i = 2; i < nin; ++i) out.toffoli(inputs[i], work[i - 2], work[i - 1]);
    out.cnot(work[nin - 2], target);
    for (std::size_t i = nin; i-- > 2;) out.toffoli(inputs[i], work[i - 2], work[i - 1]);
    out.toffoli(inputs[0], inputs[1], work[0]);
  }
  for (Qubit q : inputs) out.x(q);
}

// Flips `target` when any listed qubit is 1.
inline void compile_or(Circuit& out, const std::vector<Qubit>& inputs, Qubit target, const std::vector<Qubit>& work) {
  compile_zero_test(out, inputs, target, work);
  out.x(target);
}

}  // namespace gf2q
