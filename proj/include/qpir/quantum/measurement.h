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

#ifndef QPIR_QUANTUM_MEASUREMENT_H_
#define QPIR_QUANTUM_MEASUREMENT_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <variant>

#include "absl/status/statusor.h"
#include "qpir/quantum/state_vector.h"
#include "qpir/util/random.h"

namespace qpir::quantum {

enum class BellLabel { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

std::string_view BellLabelName(BellLabel label);

// Computational-basis value of `width` bits, read big-endian.
struct BitValue {
  uint64_t bits = 0;
  int width = 0;
  friend bool operator==(const BitValue&, const BitValue&) = default;
};

struct MeasurementOutcome {
  std::variant<BitValue, BellLabel> value;
  double probability = 0.0;
  StateVector post_state;
};

absl::StatusOr<MeasurementOutcome> MeasureComputational(StateVector state,
                                                        std::span<const QubitLabel> qubits,
                                                        Rng& rng);
// Measures a whole register by name.
absl::StatusOr<MeasurementOutcome> MeasureComputational(StateVector state,
                                                        std::string_view reg, Rng& rng);

// In-place Bell measurement of the pair (a, b). Outcome encoding: the pair is
// rotated by CNOT(a->b) then H(a); (0,0)=Phi+, (1,0)=Phi-, (0,1)=Psi+,
// (1,1)=Psi-. The post-measurement state is the corresponding Bell state.
absl::StatusOr<BellLabel> MeasureBellInPlace(StateVector& state, const QubitLabel& a,
                                             const QubitLabel& b, Rng& rng,
                                             double* probability = nullptr);
absl::StatusOr<MeasurementOutcome> MeasureBell(StateVector state, const QubitLabel& a,
                                               const QubitLabel& b, Rng& rng);

// Measures `qubit` in {cos(t/2)|0>+sin(t/2)|1>, -sin(t/2)|0>+cos(t/2)|1>};
// bit 0 corresponds to the first vector.
absl::StatusOr<int> MeasureRotatedInPlace(StateVector& state, const QubitLabel& qubit,
                                          double theta, Rng& rng,
                                          double* probability = nullptr);
absl::StatusOr<MeasurementOutcome> MeasureRotated(StateVector state, const QubitLabel& qubit,
                                                  double theta, Rng& rng);

// Probability of bit 0 when measuring `qubit` in the theta-rotated basis.
absl::StatusOr<double> RotatedZeroProbability(const StateVector& state,
                                              const QubitLabel& qubit, double theta);

}  // namespace qpir::quantum

#endif  // QPIR_QUANTUM_MEASUREMENT_H_
