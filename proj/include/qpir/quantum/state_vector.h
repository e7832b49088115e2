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

#ifndef QPIR_QUANTUM_STATE_VECTOR_H_
#define QPIR_QUANTUM_STATE_VECTOR_H_

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "qpir/util/random.h"

namespace qpir::quantum {

using Complex = std::complex<double>;

// Tolerance for every state invariant (normalization, hermiticity, trace).
inline constexpr double kTolerance = 1e-9;
inline constexpr int kDefaultQubitCap = 24;

struct QubitLabel {
  std::string reg;
  int index = 0;

  friend auto operator<=>(const QubitLabel&, const QubitLabel&) = default;
  friend bool operator==(const QubitLabel&, const QubitLabel&) = default;

  // "reg[index]"
  std::string ToString() const;
};

struct RegisterSpec {
  std::string name;
  int qubits = 0;
};

// Labels of register `name` with `qubits` qubits: name[0] ... name[qubits-1].
std::vector<QubitLabel> RegisterLabels(std::string_view name, int qubits);

// 2x2 unitary in row-major order.
using Mat2 = std::array<Complex, 4>;

// Dense pure state over an ordered list of labelled qubits.
//
// Ordering is fixed globally: labels appear in register declaration order and
// the first label is the most significant bit of the amplitude index. A
// register's value is read big-endian, so name[0] is its most significant bit.
class StateVector {
 public:
  // |0...0> over the declared registers.
  static absl::StatusOr<StateVector> Create(std::span<const RegisterSpec> registers,
                                            int qubit_cap = kDefaultQubitCap);
  static absl::StatusOr<StateVector> Create(
      std::initializer_list<RegisterSpec> registers,
      int qubit_cap = kDefaultQubitCap) {
    return Create(std::span<const RegisterSpec>(registers.begin(), registers.size()),
                  qubit_cap);
  }
  // Validates label uniqueness, power-of-two length and normalization.
  static absl::StatusOr<StateVector> FromAmplitudes(std::vector<QubitLabel> labels,
                                                    std::vector<Complex> amplitudes);

  int num_qubits() const { return static_cast<int>(labels_.size()); }
  size_t dimension() const { return amplitudes_.size(); }
  const std::vector<QubitLabel>& labels() const { return labels_; }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  Complex amplitude(uint64_t index) const { return amplitudes_[index]; }

  bool Contains(const QubitLabel& label) const;
  absl::StatusOr<int> PositionOf(const QubitLabel& label) const;
  absl::StatusOr<std::vector<int>> PositionsOf(std::span<const QubitLabel> labels) const;
  // Labels of register `name` in big-endian order; error if absent.
  absl::StatusOr<std::vector<QubitLabel>> Register(std::string_view name) const;

  double NormSquared() const;

  // Tensor product this ⊗ other; labels must be disjoint.
  absl::StatusOr<StateVector> Tensor(const StateVector& other,
                                     int qubit_cap = kDefaultQubitCap) const;
  // Same state with labels permuted into `order` (a permutation of labels()).
  absl::StatusOr<StateVector> Reordered(std::span<const QubitLabel> order) const;

  // Primitive kernels. All of them preserve the norm.
  absl::Status ApplySingle(const Mat2& u, const QubitLabel& target);
  absl::Status ApplyControlledSingle(const Mat2& u, const QubitLabel& control,
                                     const QubitLabel& target);
  // |in>|out> -> |in>|out XOR f(in)>, both registers read big-endian.
  absl::Status ApplyXorOracle(std::span<const QubitLabel> inputs,
                              std::span<const QubitLabel> outputs,
                              const std::function<uint64_t(uint64_t)>& f);
  // |in> -> exp(i * angle(in)) |in>.
  absl::Status ApplyPhaseOracle(std::span<const QubitLabel> inputs,
                                const std::function<double(uint64_t)>& angle);
  // Exact DFT of a register: |x> -> N^{-1/2} sum_j exp(2 pi i x j / N) |j>.
  absl::Status ApplyQft(std::span<const QubitLabel> reg);
  absl::Status ApplyInverseQft(std::span<const QubitLabel> reg);

  // Born probabilities of all 2^k values of `labels` (big-endian).
  absl::StatusOr<std::vector<double>> Probabilities(std::span<const QubitLabel> labels) const;
  absl::StatusOr<double> ProbabilityOf(std::span<const QubitLabel> labels,
                                       uint64_t value) const;
  // Projects onto `labels` == value and renormalizes; returns the probability.
  absl::StatusOr<double> Project(std::span<const QubitLabel> labels, uint64_t value);
  // Samples a computational-basis outcome of `labels`, collapsing the state.
  absl::StatusOr<uint64_t> MeasureInPlace(std::span<const QubitLabel> labels, Rng& rng);

  // Removes qubits that are in a definite computational-basis value and
  // returns that value. Fails if the qubits are still in superposition or
  // entangled with the rest.
  absl::StatusOr<uint64_t> ExtractDefinite(std::span<const QubitLabel> labels);
  // Splits a qubit that is unentangled from the rest into its own state.
  // Fails if the qubit is entangled with the remainder.
  absl::StatusOr<StateVector> SplitOff(const QubitLabel& label);

  // Appends |0...0> registers.
  absl::Status AddRegister(const RegisterSpec& spec, int qubit_cap = kDefaultQubitCap);

  // <this|other> over identical label orders.
  absl::StatusOr<Complex> InnerProduct(const StateVector& other) const;

 private:
  StateVector(std::vector<QubitLabel> labels, std::vector<Complex> amplitudes)
      : labels_(std::move(labels)), amplitudes_(std::move(amplitudes)) {}

  uint64_t BitMask(int position) const {
    return uint64_t{1} << (labels_.size() - 1 - position);
  }
  uint64_t ReadValue(uint64_t index, std::span<const int> positions) const;
  absl::Status ApplyDft(std::span<const QubitLabel> reg, bool inverse);

  std::vector<QubitLabel> labels_;
  std::vector<Complex> amplitudes_;
};

// Common single-qubit gates.
Mat2 HadamardMatrix();
Mat2 PauliXMatrix();
Mat2 PauliZMatrix();
Mat2 PhaseMatrix(double phi);
// Real rotation mapping |0> to cos(theta/2)|0> + sin(theta/2)|1>.
Mat2 RotationYMatrix(double theta);

}  // namespace qpir::quantum

#endif  // QPIR_QUANTUM_STATE_VECTOR_H_
