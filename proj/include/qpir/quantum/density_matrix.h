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

#ifndef QPIR_QUANTUM_DENSITY_MATRIX_H_
#define QPIR_QUANTUM_DENSITY_MATRIX_H_

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "qpir/quantum/state_vector.h"

namespace qpir::quantum {

using Matrix = Eigen::MatrixXcd;

// Mixed state over labelled qubits. Labels may be empty for an abstract
// finite-dimensional state (e.g. a classical distribution embedded on the
// diagonal); the dimension then need not be a power of two.
class DensityMatrix {
 public:
  // Validates hermiticity, unit trace and positivity within kTolerance.
  static absl::StatusOr<DensityMatrix> Create(std::vector<QubitLabel> labels, Matrix matrix);
  // Unlabelled matrix of arbitrary dimension.
  static absl::StatusOr<DensityMatrix> FromMatrix(Matrix matrix);
  static DensityMatrix FromPure(const StateVector& state);
  static DensityMatrix MaximallyMixed(std::vector<QubitLabel> labels);
  static DensityMatrix MaximallyMixed(int dimension);
  // diag(probabilities); probabilities must sum to one.
  static absl::StatusOr<DensityMatrix> Diagonal(std::span<const double> probabilities);

  const std::vector<QubitLabel>& labels() const { return labels_; }
  const Matrix& matrix() const { return matrix_; }
  int dimension() const { return static_cast<int>(matrix_.rows()); }

  // Kronecker product this ⊗ other.
  DensityMatrix Tensor(const DensityMatrix& other) const;
  absl::StatusOr<DensityMatrix> Reordered(std::span<const QubitLabel> order) const;

 private:
  DensityMatrix(std::vector<QubitLabel> labels, Matrix matrix)
      : labels_(std::move(labels)), matrix_(std::move(matrix)) {}

  std::vector<QubitLabel> labels_;
  Matrix matrix_;
};

// Checks the three density-matrix invariants on a raw matrix.
absl::Status ValidateDensityMatrix(const Matrix& matrix);

// Reduced state over `keep` (in that order). Errors on an empty keep set or
// unknown labels.
absl::StatusOr<DensityMatrix> PartialTrace(const StateVector& state,
                                           std::span<const QubitLabel> keep);
absl::StatusOr<DensityMatrix> PartialTrace(const DensityMatrix& rho,
                                           std::span<const QubitLabel> keep);
// Keeps every qubit of the named registers.
absl::StatusOr<DensityMatrix> PartialTraceRegisters(const StateVector& state,
                                                    std::span<const std::string> registers);

// Pure state on rho's qubits plus an equally sized ancilla register
// `ancilla_register` whose reduction onto rho's qubits is rho. Uses the
// eigendecomposition, largest eigenvalue first.
absl::StatusOr<StateVector> Purify(const DensityMatrix& rho,
                                   std::string_view ancilla_register = "purifier");

}  // namespace qpir::quantum

#endif  // QPIR_QUANTUM_DENSITY_MATRIX_H_
