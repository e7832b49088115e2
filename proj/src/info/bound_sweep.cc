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

#include "qpir/info/bound_sweep.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpir/util/status_macros.h"

namespace qpir::info {
namespace {

using quantum::Complex;
using quantum::QubitLabel;

double Gaussian(Rng& rng) {
  // Box-Muller on the portable uniform source.
  const double u1 = 1.0 - UniformUnit(rng);
  const double u2 = UniformUnit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Matrix RandomPsdMatrix(int dim, int rank, Rng& rng) {
  if (rank <= 0 || rank > dim) rank = dim;
  Matrix g(dim, rank);
  for (int r = 0; r < dim; ++r) {
    for (int c = 0; c < rank; ++c) g(r, c) = Complex(Gaussian(rng), Gaussian(rng));
  }
  Matrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint());
  return rho / rho.trace().real();
}

void Record(SweepResult& result, double margin, double tolerance) {
  if (result.instances == 0 || margin < result.worst_margin) result.worst_margin = margin;
  ++result.instances;
  if (margin < -tolerance) ++result.violations;
}

}  // namespace

Distribution RandomDistribution(size_t size, Rng& rng, bool allow_zeros) {
  std::vector<double> p(size);
  double total = 0.0;
  for (auto& x : p) {
    x = (allow_zeros && UniformBelow(rng, 8) == 0) ? 0.0 : -std::log(1.0 - UniformUnit(rng));
    total += x;
  }
  if (total == 0.0) {
    p[UniformBelow(rng, size)] = 1.0;
    total = 1.0;
  }
  for (auto& x : p) x /= total;
  double sum = 0.0;
  for (size_t k = 0; k + 1 < size; ++k) sum += p[k];
  p.back() = std::max(0.0, 1.0 - sum);
  return *Distribution::Create(std::move(p));
}

DensityMatrix RandomDensityMatrix(int dim, Rng& rng, int rank) {
  return *DensityMatrix::FromMatrix(RandomPsdMatrix(dim, rank, rng));
}

DensityMatrix RandomQubitDensityMatrix(int qubits, Rng& rng, int rank) {
  return *DensityMatrix::Create(quantum::RegisterLabels("sys", qubits),
                                RandomPsdMatrix(1 << qubits, rank, rng));
}

SweepResult SweepClassicalPinsker(const SweepOptions& options, Rng& rng) {
  SweepResult result{.name = "classical_pinsker"};
  for (int k = 0; k < options.samples; ++k) {
    const size_t dim = 2 + UniformBelow(rng, options.max_classical_dim - 1);
    const Distribution p = RandomDistribution(dim, rng);
    const Distribution q = RandomDistribution(dim, rng, /*allow_zeros=*/k % 10 == 0);
    const PinskerCheck check = *CheckPinsker(p, q);
    if (std::isinf(check.lhs)) ++result.infinite_cases;
    Record(result, std::isinf(check.lhs) ? kInfinity : check.lhs - check.rhs, options.tolerance);
  }
  return result;
}

SweepResult SweepQuantumPinsker(const SweepOptions& options, Rng& rng) {
  SweepResult result{.name = "quantum_pinsker"};
  for (int k = 0; k < options.samples; ++k) {
    const int dim = 2 + static_cast<int>(UniformBelow(rng, options.max_dim - 1));
    const int rho_rank = 1 + static_cast<int>(UniformBelow(rng, dim));
    // Every tenth sigma is rank deficient to reach the support-failure path.
    const int sigma_rank = k % 10 == 0 ? std::max(1, dim - 1) : 0;
    const DensityMatrix rho = RandomDensityMatrix(dim, rng, rho_rank);
    const DensityMatrix sigma = RandomDensityMatrix(dim, rng, sigma_rank);
    const QuantumPinskerCheck check = *CheckQuantumPinsker(rho, sigma);
    if (std::isinf(check.bound)) ++result.infinite_cases;
    Record(result, std::isinf(check.bound) ? kInfinity : check.bound - check.l1,
           options.tolerance);
  }
  return result;
}

SweepResult SweepUhlmann(const SweepOptions& options, Rng& rng) {
  SweepResult result{.name = "uhlmann"};
  int max_qubits = 1;
  while ((2 << max_qubits) <= options.max_dim) ++max_qubits;
  while (result.instances < options.samples) {
    const int qubits = 1 + static_cast<int>(UniformBelow(rng, max_qubits));
    const int dim = 1 << qubits;
    const DensityMatrix rho = RandomQubitDensityMatrix(qubits, rng);
    const Matrix tau = RandomPsdMatrix(dim, 0, rng);
    const double t = 0.6 * UniformUnit(rng);
    const DensityMatrix sigma =
        *DensityMatrix::Create(rho.labels(), (1.0 - t) * rho.matrix() + t * tau);
    const double s = *QuantumRelativeEntropy(rho, sigma);
    if (s > options.uhlmann_epsilon) continue;

    auto psi = *quantum::Purify(rho, "anc");
    auto phi = *quantum::Purify(sigma, "anc");
    // Scramble phi's ancilla so the optimizer has work to do.
    for (int a = 0; a < qubits; ++a) {
      const QubitLabel label{"anc", a};
      (void)phi.ApplySingle(quantum::RotationYMatrix(6.0 * UniformUnit(rng)), label);
      (void)phi.ApplySingle(quantum::PhaseMatrix(6.0 * UniformUnit(rng)), label);
    }
    const UhlmannResult opt = *UhlmannUnitary(psi, phi, rho.labels());
    const double f = *Fidelity(rho, sigma);
    const double equality_margin = options.tolerance - std::abs(opt.overlap_sq - f * f);
    const double bound_margin = opt.overlap_sq - UhlmannOverlapBound(s);
    // Equality misses are folded in as violations of the same sweep.
    Record(result, equality_margin < 0 ? equality_margin - options.tolerance : bound_margin,
           options.tolerance);
  }
  return result;
}

absl::StatusOr<std::vector<SweepResult>> RunBoundSweeps(const SweepOptions& options, Rng& rng) {
  if (options.samples < 1) return absl::InvalidArgumentError("samples must be positive");
  if (options.max_dim < 2 || options.max_dim > 8) {
    return absl::InvalidArgumentError("dims must lie in [2, 8]");
  }
  if (options.max_classical_dim < 2) {
    return absl::InvalidArgumentError("classical dims must be at least 2");
  }
  return std::vector<SweepResult>{SweepClassicalPinsker(options, rng),
                                  SweepQuantumPinsker(options, rng), SweepUhlmann(options, rng)};
}

}  // namespace qpir::info
