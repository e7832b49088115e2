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

#ifndef QPIR_QUANTUM_JOINT_STATE_H_
#define QPIR_QUANTUM_JOINT_STATE_H_

#include <span>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "qpir/quantum/density_matrix.h"
#include "qpir/quantum/gates.h"
#include "qpir/quantum/measurement.h"
#include "qpir/quantum/state_vector.h"
#include "qpir/util/random.h"

namespace qpir::quantum {

// A pure multi-register state kept as a tensor product of StateVector
// factors. Factors are merged lazily when an operation spans several of them
// and measured qubits are split back out, so that many small independent
// subsystems (e.g. Bell pairs) do not blow up the dense dimension.
//
// Every operation is equivalent to the same operation on the single dense
// vector returned by ToStateVector().
class JointState {
 public:
  explicit JointState(int qubit_cap = kDefaultQubitCap) : qubit_cap_(qubit_cap) {}

  // Adds |0...0> on a new register, one single-qubit factor per qubit.
  absl::Status AddRegister(const RegisterSpec& spec);
  // Adds an arbitrary factor; its labels must be new.
  absl::Status AddFactor(StateVector factor);

  bool Contains(const QubitLabel& label) const;
  int num_qubits() const { return static_cast<int>(order_.size()); }
  // Labels in the order they were added.
  const std::vector<QubitLabel>& labels() const { return order_; }
  absl::StatusOr<std::vector<QubitLabel>> Register(std::string_view name) const;
  const std::vector<StateVector>& factors() const { return factors_; }
  // Dimension of the largest factor, i.e. the working-set size.
  size_t MaxFactorDimension() const;

  // Merges every factor touching `labels` into one and returns it.
  absl::StatusOr<StateVector*> Merge(std::span<const QubitLabel> labels);

  absl::Status Apply(const Gate& gate, std::span<const QubitLabel> targets);
  absl::Status Apply(const Gate& gate, std::initializer_list<QubitLabel> targets) {
    return Apply(gate, std::span<const QubitLabel>(targets.begin(), targets.size()));
  }
  absl::Status ApplySingle(const Mat2& u, const QubitLabel& target);
  absl::Status ApplyXorOracle(std::span<const QubitLabel> inputs,
                              std::span<const QubitLabel> outputs,
                              const std::function<uint64_t(uint64_t)>& f);
  absl::Status ApplyQft(std::span<const QubitLabel> reg);
  absl::Status ApplyInverseQft(std::span<const QubitLabel> reg);

  absl::StatusOr<std::vector<double>> Probabilities(std::span<const QubitLabel> labels) const;
  // Computational-basis measurement. The measured qubits are left in place as
  // single-qubit basis-state factors.
  absl::StatusOr<uint64_t> Measure(std::span<const QubitLabel> labels, Rng& rng,
                                   double* probability = nullptr);
  absl::StatusOr<BellLabel> MeasureBell(const QubitLabel& a, const QubitLabel& b, Rng& rng);
  absl::StatusOr<int> MeasureRotated(const QubitLabel& qubit, double theta, Rng& rng);
  absl::StatusOr<double> RotatedZeroProbability(const QubitLabel& qubit, double theta) const;

  // Splits `group` into its own factor if it is unentangled from the rest of
  // its factor; returns whether the split happened.
  absl::StatusOr<bool> TrySplit(std::span<const QubitLabel> group);

  // Reduced state on `keep`, in that order.
  absl::StatusOr<DensityMatrix> ReducedState(std::span<const QubitLabel> keep) const;
  // Dense vector over labels() order. Subject to the qubit cap.
  absl::StatusOr<StateVector> ToStateVector() const;

 private:
  absl::StatusOr<size_t> FactorOf(const QubitLabel& label) const;

  int qubit_cap_;
  std::vector<QubitLabel> order_;
  std::vector<StateVector> factors_;
};

}  // namespace qpir::quantum

#endif  // QPIR_QUANTUM_JOINT_STATE_H_
