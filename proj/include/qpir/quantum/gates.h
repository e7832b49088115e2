/*
 * Copyright 2026 The QPIR Lab Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef QPIR_QUANTUM_GATES_H_
#define QPIR_QUANTUM_GATES_H_

#include <cstdint>
#include <span>
#include <string>
#include <variant>

#include "absl/status/status.h"
#include "qpir/quantum/state_vector.h"

namespace qpir::quantum {

struct HGate {};
struct XGate {};
struct ZGate {};
struct CnotGate {};  // targets: {control, target}
struct CzGate {};    // targets: {a, b}
struct PhaseGate {   // diag(1, e^{i phi})
  double phi = 0.0;
};
// |j>|x> -> |j> U^j |x> with U|x> = exp(2 pi i x / modulus)|x>. Targets list
// the `control_qubits` qubits of j first, then the qubits of x.
struct ControlledPowerPhaseGate {
  int control_qubits = 1;
  uint64_t modulus = 2;
};

using Gate = std::variant<HGate, XGate, ZGate, CnotGate, CzGate, PhaseGate,
                          ControlledPowerPhaseGate>;

std::string GateName(const Gate& gate);

// Applies `gate` to `targets`. Errors on unknown labels or an arity mismatch.
absl::Status ApplyGate(StateVector& state, const Gate& gate,
                       std::span<const QubitLabel> targets);
inline absl::Status ApplyGate(StateVector& state, const Gate& gate,
                              std::initializer_list<QubitLabel> targets) {
  return ApplyGate(state, gate, std::span<const QubitLabel>(targets.begin(), targets.size()));
}

}  // namespace qpir::quantum

#endif  // QPIR_QUANTUM_GATES_H_
