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

#include "qpir/info/metrics.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "absl/strings/str_cat.h"
#include "qpir/util/status_macros.h"

namespace qpir::info {
namespace {

using quantum::Complex;
using quantum::QubitLabel;
using quantum::StateVector;

absl::Status SameDimension(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dimension() != b.dimension()) {
    return absl::InvalidArgumentError(
        absl::StrCat("dimension mismatch: ", a.dimension(), " vs ", b.dimension()));
  }
  return absl::OkStatus();
}

double Log2OrZero(double x) { return x > kEigenFloor ? std::log2(x) : 0.0; }

Matrix PsdSqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  Eigen::VectorXd root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().adjoint();
}

Matrix Coefficients(const StateVector& state, std::span<const QubitLabel> system,
                    absl::StatusOr<int>* ancilla_qubits) {
  std::vector<QubitLabel> order(system.begin(), system.end());
  for (const auto& label : state.labels()) {
    if (std::find(system.begin(), system.end(), label) == system.end()) order.push_back(label);
  }
  auto reordered = state.Reordered(order);
  if (!reordered.ok()) {
    *ancilla_qubits = reordered.status();
    return Matrix();
  }
  const int anc = state.num_qubits() - static_cast<int>(system.size());
  *ancilla_qubits = anc;
  const Eigen::Index ds = Eigen::Index{1} << system.size();
  const Eigen::Index da = Eigen::Index{1} << anc;
  Matrix m(ds, da);
  for (Eigen::Index s = 0; s < ds; ++s) {
    for (Eigen::Index a = 0; a < da; ++a) m(s, a) = reordered->amplitude(s * da + a);
  }
  return m;
}

}  // namespace

absl::StatusOr<Distribution> Distribution::Create(std::vector<double> probabilities) {
  if (probabilities.empty()) return absl::InvalidArgumentError("empty distribution");
  double total = 0.0;
  for (double p : probabilities) {
    if (p < 0.0 || !std::isfinite(p)) {
      return absl::InvalidArgumentError("probabilities must be finite and nonnegative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    return absl::InvalidArgumentError(absl::StrCat("probabilities sum to ", total));
  }
  return Distribution(std::move(probabilities));
}

Distribution Distribution::Uniform(size_t size) {
  return Distribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

absl::StatusOr<Ensemble> Ensemble::Create(std::vector<DensityMatrix> states,
                                          std::vector<double> weights) {
  if (states.empty()) return absl::InvalidArgumentError("empty ensemble");
  if (states.size() != weights.size()) {
    return absl::InvalidArgumentError("ensemble weights do not match state count");
  }
  QPIR_RETURN_IF_ERROR(Distribution::Create(weights).status());
  for (const auto& s : states) QPIR_RETURN_IF_ERROR(SameDimension(s, states.front()));
  return Ensemble{std::move(states), std::move(weights)};
}

absl::StatusOr<Ensemble> Ensemble::Uniform(std::vector<DensityMatrix> states) {
  std::vector<double> w(states.size(), states.empty() ? 0.0 : 1.0 / states.size());
  return Create(std::move(states), std::move(w));
}

DensityMatrix Ensemble::Average() const {
  Matrix avg = Matrix::Zero(states.front().dimension(), states.front().dimension());
  for (size_t k = 0; k < states.size(); ++k) avg += weights[k] * states[k].matrix();
  // Convex combinations of valid states stay valid.
  return *DensityMatrix::FromMatrix(std::move(avg));
}

absl::StatusOr<double> ClassicalRelativeEntropy(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) return absl::InvalidArgumentError("distribution length mismatch");
  double out = 0.0;
  for (size_t k = 0; k < p.size(); ++k) {
    if (p[k] <= 0.0) continue;
    if (q[k] <= 0.0) return kInfinity;
    out += p[k] * std::log2(p[k] / q[k]);
  }
  return std::max(out, 0.0);
}

double ShannonEntropy(const Distribution& p) {
  double h = 0.0;
  for (double x : p.probabilities()) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

double L1Distance(const Distribution& p, const Distribution& q) {
  double out = 0.0;
  for (size_t k = 0; k < std::min(p.size(), q.size()); ++k) out += std::abs(p[k] - q[k]);
  return out;
}

absl::StatusOr<PinskerCheck> CheckPinsker(const Distribution& p, const Distribution& q) {
  QPIR_ASSIGN_OR_RETURN(double lhs, ClassicalRelativeEntropy(p, q));
  const double l1 = L1Distance(p, q);
  const double rhs = l1 * l1 / (2.0 * std::numbers::ln2);
  return PinskerCheck{lhs, rhs, lhs >= rhs - kBoundTolerance};
}

double VonNeumannEntropy(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double l = solver.eigenvalues()(k);
    s -= l > kEigenFloor ? l * std::log2(l) : 0.0;
  }
  return std::max(s, 0.0);
}

absl::StatusOr<double> QuantumRelativeEntropy(const DensityMatrix& rho,
                                              const DensityMatrix& sigma) {
  QPIR_RETURN_IF_ERROR(SameDimension(rho, sigma));
  Eigen::SelfAdjointEigenSolver<Matrix> sig(sigma.matrix());
  double cross = 0.0;  // -tr(rho log sigma)
  for (Eigen::Index k = 0; k < sig.eigenvalues().size(); ++k) {
    const auto v = sig.eigenvectors().col(k);
    const double weight = (v.adjoint() * rho.matrix() * v)(0, 0).real();
    if (sig.eigenvalues()(k) <= kEigenFloor) {
      if (weight > kEigenFloor) return kInfinity;
      continue;
    }
    cross -= weight * std::log2(sig.eigenvalues()(k));
  }
  return std::max(cross - VonNeumannEntropy(rho), 0.0);
}

double HermitianTraceNorm(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().cwiseAbs().sum();
}

absl::StatusOr<double> TraceDistance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  QPIR_RETURN_IF_ERROR(SameDimension(rho, sigma));
  return 0.5 * HermitianTraceNorm(rho.matrix() - sigma.matrix());
}

absl::StatusOr<double> Fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  QPIR_RETURN_IF_ERROR(SameDimension(rho, sigma));
  const Matrix root = PsdSqrt(rho.matrix());
  Matrix inner = root * sigma.matrix() * root;
  inner = 0.5 * (inner + inner.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(inner, Eigen::EigenvaluesOnly);
  return std::min(1.0, solver.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum());
}

absl::StatusOr<QuantumPinskerCheck> CheckQuantumPinsker(const DensityMatrix& rho,
                                                        const DensityMatrix& sigma) {
  QPIR_ASSIGN_OR_RETURN(double s, QuantumRelativeEntropy(rho, sigma));
  QPIR_ASSIGN_OR_RETURN(double half, TraceDistance(rho, sigma));
  const double l1 = 2.0 * half;
  const double bound = std::sqrt(2.0 * std::numbers::ln2 * s);
  return QuantumPinskerCheck{l1, bound, l1 <= bound + kBoundTolerance};
}

absl::StatusOr<UhlmannResult> UhlmannUnitary(const StateVector& psi, const StateVector& phi,
                                             std::span<const QubitLabel> system) {
  if (system.empty()) return absl::InvalidArgumentError("empty system register");
  absl::StatusOr<int> anc_psi = 0, anc_phi = 0;
  const Matrix a = Coefficients(psi, system, &anc_psi);
  QPIR_RETURN_IF_ERROR(anc_psi.status());
  const Matrix b = Coefficients(phi, system, &anc_phi);
  QPIR_RETURN_IF_ERROR(anc_phi.status());
  if (*anc_psi != *anc_phi || *anc_psi == 0) {
    return absl::InvalidArgumentError("purifications need equal, nonempty ancillas");
  }
  // <psi|(I (x) U)|phi> = tr(U^T M) with M = A^dagger B; optimum at
  // U = conj(W) V^T for M = W S V^dagger, with value sum(S).
  const Matrix m = a.adjoint() * b;
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix u = svd.matrixU().conjugate() * svd.matrixV().transpose();
  const Complex overlap = (u.transpose() * m).trace();
  return UhlmannResult{std::move(u), std::norm(overlap)};
}

double UhlmannOverlapBound(double epsilon) {
  return 1.0 - std::sqrt(std::numbers::ln2 * epsilon / 2.0);
}

double HolevoQuantity(const Ensemble& ensemble) {
  double avg_entropy = 0.0;
  for (size_t k = 0; k < ensemble.states.size(); ++k) {
    avg_entropy += ensemble.weights[k] * VonNeumannEntropy(ensemble.states[k]);
  }
  return VonNeumannEntropy(ensemble.Average()) - avg_entropy;
}

absl::StatusOr<double> BinaryEntropy(double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    return absl::InvalidArgumentError(absl::StrCat("delta ", delta, " outside [0, 1]"));
  }
  return -delta * Log2OrZero(delta) - (1.0 - delta) * Log2OrZero(1.0 - delta);
}

absl::StatusOr<double> FanoBound(double delta, int n) {
  if (n < 2) return absl::InvalidArgumentError("Fano bound needs n >= 2");
  QPIR_ASSIGN_OR_RETURN(double h, BinaryEntropy(delta));
  return h + delta * std::log2(static_cast<double>(n));
}

namespace {

absl::StatusOr<BoundReport> MakeReport(double divergence, int n, double measured_cost) {
  if (n < 1) return absl::InvalidArgumentError("database size must be positive");
  const double bound =
      std::isinf(divergence) ? 0.0 : std::max(0.0, (1.0 - divergence) * static_cast<double>(n));
  return BoundReport{bound, measured_cost, measured_cost >= bound - kBoundTolerance,
                     measured_cost - bound};
}

}  // namespace

absl::StatusOr<BoundReport> CommunicationLowerBound(const Ensemble& views, int n, double measured_cost) {
  if (views.states.empty()) return absl::InvalidArgumentError("empty ensemble");
  const DensityMatrix prior = views.Average();
  double worst = 0.0;
  for (const auto& view : views.states) {
    QPIR_ASSIGN_OR_RETURN(double s, QuantumRelativeEntropy(view, prior));
    worst = std::max(worst, s);
  }
  return MakeReport(worst, n, measured_cost);
}

absl::StatusOr<BoundReport> CommunicationBoundAverage(const Ensemble& views, int n,
                                                 double measured_cost) {
  if (views.states.empty()) return absl::InvalidArgumentError("empty ensemble");
  const DensityMatrix prior = views.Average();
  double avg = 0.0;
  for (size_t k = 0; k < views.states.size(); ++k) {
    QPIR_ASSIGN_OR_RETURN(double s, QuantumRelativeEntropy(views.states[k], prior));
    avg += views.weights[k] * s;
  }
  return MakeReport(avg, n, measured_cost);
}

}  // namespace qpir::info
