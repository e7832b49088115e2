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

#ifndef QPIR_INFO_BOUND_SWEEP_H_
#define QPIR_INFO_BOUND_SWEEP_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "qpir/info/metrics.h"
#include "qpir/util/random.h"

namespace qpir::info {

// Seeded random instances for property sweeps.
Distribution RandomDistribution(size_t size, Rng& rng, bool allow_zeros = true);
// Ginibre-type state of the given rank (rank <= dim, 0 means full rank).
DensityMatrix RandomDensityMatrix(int dim, Rng& rng, int rank = 0);
// Random state over `qubits` labelled qubits of register "sys".
DensityMatrix RandomQubitDensityMatrix(int qubits, Rng& rng, int rank = 0);

struct SweepResult {
  std::string name;
  int instances = 0;
  int violations = 0;
  // Smallest (bound side) - (value side) seen; negative means a violation.
  double worst_margin = 0.0;
  // Instances that exercised the infinite relative-entropy path.
  int infinite_cases = 0;
};

struct SweepOptions {
  int samples = 1000;
  int max_dim = 8;  // quantum and Uhlmann system dimension cap
  int max_classical_dim = 16;
  double tolerance = 1e-6;
  double uhlmann_epsilon = 0.5;
};

SweepResult SweepClassicalPinsker(const SweepOptions& options, Rng& rng);
SweepResult SweepQuantumPinsker(const SweepOptions& options, Rng& rng);
// Checks both the Uhlmann equality overlap_sq == F^2 and the relative-entropy
// overlap bound on pairs with S(rho||sigma) <= uhlmann_epsilon.
SweepResult SweepUhlmann(const SweepOptions& options, Rng& rng);

absl::StatusOr<std::vector<SweepResult>> RunBoundSweeps(const SweepOptions& options, Rng& rng);

}  // namespace qpir::info

#endif  // QPIR_INFO_BOUND_SWEEP_H_
