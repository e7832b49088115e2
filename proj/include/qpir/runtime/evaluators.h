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

#ifndef QPIR_RUNTIME_EVALUATORS_H_
#define QPIR_RUNTIME_EVALUATORS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "qpir/info/metrics.h"
#include "qpir/runtime/protocol.h"

namespace qpir::runtime {

// Randomness spaces up to this size are enumerated exactly.
inline constexpr uint64_t kExhaustiveCoinLimit = uint64_t{1} << 16;
inline constexpr int64_t kDefaultPrivacySamples = 10000;

struct PrivacyOptions {
  // Used when the coin space is too large to enumerate.
  int64_t samples = kDefaultPrivacySamples;
  uint64_t seed = 1;
  // Target indices to compare; empty means all.
  std::vector<uint64_t> indices;
  AdversaryModel adversary;
};

struct PrivacyReport {
  std::string protocol;
  std::string role;
  std::vector<uint64_t> indices;
  // distances[a][b] between the views for indices[a] and indices[b].
  std::vector<std::vector<double>> distances;
  double max_distance = 0.0;
  double epsilon = 0.0;
  bool pass = false;
  bool exhaustive = false;
  int64_t samples = 0;
  // Monte Carlo scale 1/sqrt(samples) when sampled, else 0.
  double sample_error = 0.0;
  // Averaged view per index, aligned with `indices`.
  std::vector<CqState> views;

  nlohmann::ordered_json ToJson() const;
};

// Builds the role's view for each target index, averaged over the client's
// randomness, and compares every pair. Pass iff max distance <= 2 epsilon.
absl::StatusOr<PrivacyReport> EvaluatePrivacy(const Protocol& protocol, const Database& db,
                                              std::string_view role, double epsilon,
                                              const PrivacyOptions& options = {});

struct CorrectnessOptions {
  int trials = 1;
  uint64_t seed = 1;
  AdversaryModel adversary;
};

struct CorrectnessReport {
  std::string protocol;
  double min_success = 1.0;
  double mean_success = 0.0;
  double delta = 0.0;
  bool pass = false;
  int64_t inputs = 0;
  int64_t runs = 0;
  int64_t aborts = 0;
  size_t worst_database = 0;
  uint64_t worst_index = 0;

  nlohmann::ordered_json ToJson() const;
};

// Minimum over (database, index) of the average exact success probability.
absl::StatusOr<CorrectnessReport> EvaluateCorrectness(const Protocol& protocol,
                                                      const std::vector<Database>& family,
                                                      double delta,
                                                      const CorrectnessOptions& options = {});

// Recovery map applied to the deviated state: trace out these registers.
struct RecoveryMap {
  std::vector<std::string> discard_registers;
  // Also discard the scratch registers the deviated run declared.
  bool discard_scratch = true;

  static RecoveryMap Identity() { return {{}, false}; }
};

struct SpeciousnessReport {
  std::vector<double> per_round;
  double max_distance = 0.0;
  double epsilon = 0.0;
  bool pass = false;

  nlohmann::ordered_json ToJson() const;
};

// Runs the honest and deviated protocol with the same seed and compares the
// joint state round by round after recovery. A round missing from one run
// (e.g. after an abort) counts as distance 1. Rounds are matched by number.
absl::StatusOr<SpeciousnessReport> EvaluateSpeciousness(const Protocol& protocol,
                                                        const Database& db, uint64_t index,
                                                        const AdversaryModel& adversary,
                                                        const RecoveryMap& recovery,
                                                        uint64_t seed = 1);

// Communication lower bound for the views in `report` against a measured
// cost.
absl::StatusOr<info::BoundReport> EvaluateCommunicationBound(const PrivacyReport& report, int n,
                                                             double measured_cost);

}  // namespace qpir::runtime

#endif  // QPIR_RUNTIME_EVALUATORS_H_
