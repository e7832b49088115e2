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

#include "qpir/quantum/gates.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "absl/strings/str_cat.h"

namespace qpir::quantum {
namespace {

absl::Status Arity(std::span<const QubitLabel> targets, size_t expected,
                   std::string_view name) {
  if (targets.size() != expected) {
    return absl::InvalidArgumentError(absl::StrCat(std::string(name), " expects ", expected,
                                                   " target(s), got ", targets.size()));
  }
  return absl::OkStatus();
}

struct Applier {
  StateVector& state;
  std::span<const QubitLabel> targets;

  absl::Status operator()(const HGate&) {
    if (auto s = Arity(targets, 1, "H"); !s.ok()) return s;
    return state.ApplySingle(HadamardMatrix(), targets[0]);
  }
  absl::Status operator()(const XGate&) {
    if (auto s = Arity(targets, 1, "X"); !s.ok()) return s;
    return state.ApplySingle(PauliXMatrix(), targets[0]);
  }
  absl::Status operator()(const ZGate&) {
    if (auto s = Arity(targets, 1, "Z"); !s.ok()) return s;
    return state.ApplySingle(PauliZMatrix(), targets[0]);
  }
  absl::Status operator()(const CnotGate&) {
    if (auto s = Arity(targets, 2, "CNOT"); !s.ok()) return s;
    return state.ApplyControlledSingle(PauliXMatrix(), targets[0], targets[1]);
  }
  absl::Status operator()(const CzGate&) {
    if (auto s = Arity(targets, 2, "CZ"); !s.ok()) return s;
    return state.ApplyControlledSingle(PauliZMatrix(), targets[0], targets[1]);
  }
  absl::Status operator()(const PhaseGate& g) {
    if (auto s = Arity(targets, 1, "phase"); !s.ok()) return s;
    return state.ApplySingle(PhaseMatrix(g.phi), targets[0]);
  }
  absl::Status operator()(const ControlledPowerPhaseGate& g) {
    if (g.control_qubits < 1 || static_cast<size_t>(g.control_qubits) >= targets.size()) {
      return absl::InvalidArgumentError(
          "controlled_U_power needs a nonempty control and a nonempty target register");
    }
    if (g.modulus == 0) return absl::InvalidArgumentError("modulus must be positive");
    const int m = static_cast<int>(targets.size()) - g.control_qubits;
    const uint64_t modulus = g.modulus;
    return state.ApplyPhaseOracle(targets, [=](uint64_t joint) {
      const uint64_t j = joint >> m;
      const uint64_t x = joint & ((uint64_t{1} << m) - 1);
      const uint64_t e = (j % modulus) * (x % modulus) % modulus;
      return 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(modulus);
    });
  }
};

}  // namespace

std::string GateName(const Gate& gate) {
  struct Namer {
    std::string operator()(const HGate&) { return "H"; }
    std::string operator()(const XGate&) { return "X"; }
    std::string operator()(const ZGate&) { return "Z"; }
    std::string operator()(const CnotGate&) { return "CNOT"; }
    std::string operator()(const CzGate&) { return "CZ"; }
    std::string operator()(const PhaseGate& g) { return absl::StrCat("phase(", g.phi, ")"); }
    std::string operator()(const ControlledPowerPhaseGate& g) {
      return absl::StrCat("controlled_U_power(N=", g.modulus, ")");
    }
  };
  return std::visit(Namer{}, gate);
}

absl::Status ApplyGate(StateVector& state, const Gate& gate,
                       std::span<const QubitLabel> targets) {
  return std::visit(Applier{state, targets}, gate);
}

}  // namespace qpir::quantum
