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

#include "qpir/quantum/measurement.h"

#include <vector>

#include "qpir/util/status_macros.h"

namespace qpir::quantum {

std::string_view BellLabelName(BellLabel label) {
  switch (label) {
    case BellLabel::kPhiPlus:
      return "Phi+";
    case BellLabel::kPhiMinus:
      return "Phi-";
    case BellLabel::kPsiPlus:
      return "Psi+";
    case BellLabel::kPsiMinus:
      return "Psi-";
  }
  return "?";
}

absl::StatusOr<MeasurementOutcome> MeasureComputational(StateVector state,
                                                        std::span<const QubitLabel> qubits,
                                                        Rng& rng) {
  QPIR_ASSIGN_OR_RETURN(std::vector<double> probs, state.Probabilities(qubits));
  QPIR_ASSIGN_OR_RETURN(uint64_t value, state.MeasureInPlace(qubits, rng));
  return MeasurementOutcome{BitValue{value, static_cast<int>(qubits.size())}, probs[value],
                            std::move(state)};
}

absl::StatusOr<MeasurementOutcome> MeasureComputational(StateVector state,
                                                        std::string_view reg, Rng& rng) {
  QPIR_ASSIGN_OR_RETURN(std::vector<QubitLabel> labels, state.Register(reg));
  return MeasureComputational(std::move(state), labels, rng);
}

absl::StatusOr<BellLabel> MeasureBellInPlace(StateVector& state, const QubitLabel& a,
                                             const QubitLabel& b, Rng& rng,
                                             double* probability) {
  if (a == b) return absl::InvalidArgumentError("Bell measurement needs two distinct qubits");
  QPIR_RETURN_IF_ERROR(state.ApplyControlledSingle(PauliXMatrix(), a, b));
  QPIR_RETURN_IF_ERROR(state.ApplySingle(HadamardMatrix(), a));
  const std::vector<QubitLabel> pair = {a, b};
  QPIR_ASSIGN_OR_RETURN(std::vector<double> probs, state.Probabilities(pair));
  QPIR_ASSIGN_OR_RETURN(uint64_t value, state.MeasureInPlace(pair, rng));
  if (probability != nullptr) *probability = probs[value];
  // Undo the basis change so the post state is the Bell state itself.
  QPIR_RETURN_IF_ERROR(state.ApplySingle(HadamardMatrix(), a));
  QPIR_RETURN_IF_ERROR(state.ApplyControlledSingle(PauliXMatrix(), a, b));
  switch (value) {
    case 0b00:
      return BellLabel::kPhiPlus;
    case 0b10:
      return BellLabel::kPhiMinus;
    case 0b01:
      return BellLabel::kPsiPlus;
    default:
      return BellLabel::kPsiMinus;
  }
}

absl::StatusOr<MeasurementOutcome> MeasureBell(StateVector state, const QubitLabel& a,
                                               const QubitLabel& b, Rng& rng) {
  double p = 0.0;
  QPIR_ASSIGN_OR_RETURN(BellLabel label, MeasureBellInPlace(state, a, b, rng, &p));
  return MeasurementOutcome{label, p, std::move(state)};
}

absl::StatusOr<int> MeasureRotatedInPlace(StateVector& state, const QubitLabel& qubit,
                                          double theta, Rng& rng, double* probability) {
  QPIR_RETURN_IF_ERROR(state.ApplySingle(RotationYMatrix(-theta), qubit));
  const std::vector<QubitLabel> one = {qubit};
  QPIR_ASSIGN_OR_RETURN(std::vector<double> probs, state.Probabilities(one));
  QPIR_ASSIGN_OR_RETURN(uint64_t bit, state.MeasureInPlace(one, rng));
  if (probability != nullptr) *probability = probs[bit];
  QPIR_RETURN_IF_ERROR(state.ApplySingle(RotationYMatrix(theta), qubit));
  return static_cast<int>(bit);
}

absl::StatusOr<MeasurementOutcome> MeasureRotated(StateVector state, const QubitLabel& qubit,
                                                  double theta, Rng& rng) {
  double p = 0.0;
  QPIR_ASSIGN_OR_RETURN(int bit, MeasureRotatedInPlace(state, qubit, theta, rng, &p));
  return MeasurementOutcome{BitValue{static_cast<uint64_t>(bit), 1}, p, std::move(state)};
}

absl::StatusOr<double> RotatedZeroProbability(const StateVector& state,
                                              const QubitLabel& qubit, double theta) {
  StateVector copy = state;
  QPIR_RETURN_IF_ERROR(copy.ApplySingle(RotationYMatrix(-theta), qubit));
  const std::vector<QubitLabel> one = {qubit};
  return copy.ProbabilityOf(one, 0);
}

}  // namespace qpir::quantum
