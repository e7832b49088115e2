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

#ifndef QPIR_INFO_METRICS_H_
#define QPIR_INFO_METRICS_H_

#include <limits>
#include <span>
#include <vector>

#include "absl/status/statusor.h"
#include "qpir/quantum/density_matrix.h"
#include "qpir/quantum/state_vector.h"

namespace qpir::info {

using quantum::DensityMatrix;
using quantum::Matrix;

// Returned by the relative entropies when the support condition fails.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
// Eigenvalues below this are treated as exact zeros inside logarithms.
inline constexpr double kEigenFloor = 1e-12;
// Slack used by every "holds" predicate.
inline constexpr double kBoundTolerance = 1e-9;

class Distribution {
 public:
  // Nonnegative entries summing to one within 1e-9.
  static absl::StatusOr<Distribution> Create(std::vector<double> probabilities);
  static Distribution Uniform(size_t size);

  const std::vector<double>& probabilities() const { return p_; }
  size_t size() const { return p_.size(); }
  double operator[](size_t k) const { return p_[k]; }

 private:
  explicit Distribution(std::vector<double> p) : p_(std::move(p)) {}
  std::vector<double> p_;
};

// Weighted family of states of equal dimension.
struct Ensemble {
  std::vector<DensityMatrix> states;
  std::vector<double> weights;

  static absl::StatusOr<Ensemble> Create(std::vector<DensityMatrix> states,
                                         std::vector<double> weights);
  static absl::StatusOr<Ensemble> Uniform(std::vector<DensityMatrix> states);
  // sum_i w_i rho_i.
  DensityMatrix Average() const;
};

// All entropies are in bits.
absl::StatusOr<double> ClassicalRelativeEntropy(const Distribution& p, const Distribution& q);
double ShannonEntropy(const Distribution& p);
double L1Distance(const Distribution& p, const Distribution& q);

struct PinskerCheck {
  double lhs = 0.0;  // relative entropy
  double rhs = 0.0;  // ||p - q||_1^2 / (2 ln 2)
  bool holds = false;
};
absl::StatusOr<PinskerCheck> CheckPinsker(const Distribution& p, const Distribution& q);

double VonNeumannEntropy(const DensityMatrix& rho);
absl::StatusOr<double> QuantumRelativeEntropy(const DensityMatrix& rho, const DensityMatrix& sigma);
// 1/2 ||rho - sigma||_1.
absl::StatusOr<double> TraceDistance(const DensityMatrix& rho, const DensityMatrix& sigma);
// Schatten 1-norm of a Hermitian matrix.
double HermitianTraceNorm(const Matrix& m);
// Root fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)); F = 1 iff rho == sigma.
absl::StatusOr<double> Fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

struct QuantumPinskerCheck {
  double l1 = 0.0;     // ||rho - sigma||_1
  double bound = 0.0;  // sqrt(2 ln 2 S(rho||sigma))
  bool holds = false;
};
absl::StatusOr<QuantumPinskerCheck> CheckQuantumPinsker(const DensityMatrix& rho,
                                                        const DensityMatrix& sigma);

struct UhlmannResult {
  Matrix unitary;  // acts on the ancilla of phi
  double overlap_sq = 0.0;
};
// Maximizes |<psi|(I (x) U)|phi>| over ancilla unitaries U. `system` names the
// purified qubits; all other qubits of psi and phi form the ancillas, taken in
// their stored order, and must have equal size.
absl::StatusOr<UhlmannResult> UhlmannUnitary(const quantum::StateVector& psi,
                                             const quantum::StateVector& phi,
                                             std::span<const quantum::QubitLabel> system);
// Right-hand side 1 - sqrt(ln 2 * epsilon / 2) of the generalized Uhlmann bound.
double UhlmannOverlapBound(double epsilon);

double HolevoQuantity(const Ensemble& ensemble);

// Both error on delta outside [0, 1]; FanoBound also needs n >= 2.
absl::StatusOr<double> BinaryEntropy(double delta);
absl::StatusOr<double> FanoBound(double delta, int n);

struct BoundReport {
  double bound_value = 0.0;    // qubits
  double measured_cost = 0.0;  // qubits
  bool satisfied = false;
  double slack = 0.0;  // measured_cost - bound_value
};

// (1 - max_i S(rho_i || rho_prior)) * n, clamped below at zero, compared with
// `measured_cost`. rho_prior is the ensemble average.
absl::StatusOr<BoundReport> CommunicationLowerBound(const Ensemble& views, int n, double measured_cost);
// Same bound with the weighted average relative entropy instead of the max.
absl::StatusOr<BoundReport> CommunicationBoundAverage(const Ensemble& views, int n,
                                                 double measured_cost);

}  // namespace qpir::info

#endif  // QPIR_INFO_METRICS_H_
