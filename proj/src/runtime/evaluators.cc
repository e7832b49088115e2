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

#include "qpir/runtime/evaluators.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "qpir/quantum/density_matrix.h"
#include "qpir/util/status_macros.h"

namespace qpir::runtime {
namespace {

using quantum::QubitLabel;

constexpr double kPassTolerance = 1e-9;

}  // namespace

nlohmann::ordered_json PrivacyReport::ToJson() const {
  nlohmann::ordered_json j;
  j["protocol"] = protocol;
  j["role"] = role;
  j["indices"] = indices;
  j["distances"] = distances;
  j["max_distance"] = max_distance;
  j["epsilon"] = epsilon;
  j["pass"] = pass;
  j["exhaustive"] = exhaustive;
  j["samples"] = samples;
  j["sample_error"] = sample_error;
  return j;
}

absl::StatusOr<PrivacyReport> EvaluatePrivacy(const Protocol& protocol, const Database& db,
                                              std::string_view role, double epsilon,
                                              const PrivacyOptions& options) {
  QPIR_RETURN_IF_ERROR(db.Validate());
  QPIR_RETURN_IF_ERROR(protocol.ValidateDatabase(db));
  const auto roles = protocol.roles();
  if (std::find(roles.begin(), roles.end(), role) == roles.end()) {
    return absl::InvalidArgumentError(
        absl::StrCat("protocol ", std::string(protocol.name()), " has no role '", std::string(role), "'"));
  }
  PrivacyReport report;
  report.protocol = std::string(protocol.name());
  report.role = std::string(role);
  report.epsilon = epsilon;
  report.indices = options.indices;
  if (report.indices.empty()) {
    for (uint64_t i = 0; i < protocol.IndexCount(db); ++i) report.indices.push_back(i);
  }
  for (uint64_t i : report.indices) QPIR_RETURN_IF_ERROR(protocol.ValidateIndex(db, i));

  const uint64_t coins = protocol.CoinSpace(db);
  report.exhaustive = coins > 0 && coins <= kExhaustiveCoinLimit;
  if (!report.exhaustive && options.samples < 1) {
    return absl::InvalidArgumentError("samples must be positive");
  }
  report.samples = report.exhaustive ? static_cast<int64_t>(coins) : options.samples;
  report.sample_error = report.exhaustive ? 0.0 : 1.0 / std::sqrt(static_cast<double>(report.samples));

  RunOptions run_options;
  run_options.capture.insert(std::string(role));
  const double weight = 1.0 / static_cast<double>(report.samples);
  for (uint64_t index : report.indices) {
    CqState averaged;
    for (int64_t k = 0; k < report.samples; ++k) {
      Rng rng = DeriveStream(options.seed, static_cast<uint64_t>(k));
      if (report.exhaustive) run_options.coin = static_cast<uint64_t>(k);
      QPIR_ASSIGN_OR_RETURN(RunResult run, protocol.Run(db, index, options.adversary, rng, run_options));
      auto it = run.views.find(std::string(role));
      if (it == run.views.end()) {
        return absl::InternalError(absl::StrCat("run did not capture a view for ", std::string(role)));
      }
      QPIR_RETURN_IF_ERROR(averaged.Add(it->second, weight));
    }
    report.views.push_back(std::move(averaged));
  }
  const size_t count = report.indices.size();
  report.distances.assign(count, std::vector<double>(count, 0.0));
  for (size_t a = 0; a < count; ++a) {
    for (size_t b = a + 1; b < count; ++b) {
      QPIR_ASSIGN_OR_RETURN(double d, CqState::TraceDistance(report.views[a], report.views[b]));
      report.distances[a][b] = report.distances[b][a] = d;
      report.max_distance = std::max(report.max_distance, d);
    }
  }
  report.pass = report.max_distance <= 2.0 * epsilon + kPassTolerance;
  return report;
}

nlohmann::ordered_json CorrectnessReport::ToJson() const {
  nlohmann::ordered_json j;
  j["protocol"] = protocol;
  j["min_success"] = min_success;
  j["mean_success"] = mean_success;
  j["delta"] = delta;
  j["pass"] = pass;
  j["inputs"] = inputs;
  j["runs"] = runs;
  j["aborts"] = aborts;
  j["worst_database"] = worst_database;
  j["worst_index"] = worst_index;
  return j;
}

absl::StatusOr<CorrectnessReport> EvaluateCorrectness(const Protocol& protocol,
                                                      const std::vector<Database>& family,
                                                      double delta,
                                                      const CorrectnessOptions& options) {
  if (family.empty()) return absl::InvalidArgumentError("empty database family");
  if (options.trials < 1) return absl::InvalidArgumentError("trials must be positive");
  CorrectnessReport report;
  report.protocol = std::string(protocol.name());
  report.delta = delta;
  double total = 0.0;
  uint64_t stream = 0;
  for (size_t d = 0; d < family.size(); ++d) {
    const Database& db = family[d];
    QPIR_RETURN_IF_ERROR(db.Validate());
    QPIR_RETURN_IF_ERROR(protocol.ValidateDatabase(db));
    for (uint64_t index = 0; index < protocol.IndexCount(db); ++index) {
      double success = 0.0;
      for (int t = 0; t < options.trials; ++t) {
        Rng rng = DeriveStream(options.seed, stream++);
        QPIR_ASSIGN_OR_RETURN(RunResult run, protocol.Run(db, index, options.adversary, rng));
        success += run.success_probability;
        report.aborts += run.aborted();
        ++report.runs;
      }
      success /= options.trials;
      total += success;
      ++report.inputs;
      if (success < report.min_success) {
        report.min_success = success;
        report.worst_database = d;
        report.worst_index = index;
      }
    }
  }
  report.mean_success = total / static_cast<double>(report.inputs);
  report.pass = report.min_success >= 1.0 - delta - kPassTolerance;
  return report;
}

nlohmann::ordered_json SpeciousnessReport::ToJson() const {
  nlohmann::ordered_json j;
  j["per_round"] = per_round;
  j["max_distance"] = max_distance;
  j["epsilon"] = epsilon;
  j["pass"] = pass;
  return j;
}

absl::StatusOr<SpeciousnessReport> EvaluateSpeciousness(const Protocol& protocol,
                                                        const Database& db, uint64_t index,
                                                        const AdversaryModel& adversary,
                                                        const RecoveryMap& recovery,
                                                        uint64_t seed) {
  RunOptions options;
  options.record_snapshots = true;
  Rng honest_rng(seed), deviated_rng(seed);
  QPIR_ASSIGN_OR_RETURN(RunResult honest, RunProtocol(protocol, db, index, AdversaryModel::Honest(),
                                                      honest_rng, options));
  QPIR_ASSIGN_OR_RETURN(RunResult deviated,
                        RunProtocol(protocol, db, index, adversary, deviated_rng, options));
  if (honest.snapshots.empty()) {
    return absl::FailedPreconditionError("protocol state too large to snapshot");
  }
  std::set<std::string> discard(recovery.discard_registers.begin(),
                                recovery.discard_registers.end());
  if (recovery.discard_scratch) {
    discard.insert(deviated.scratch_registers.begin(), deviated.scratch_registers.end());
  }

  SpeciousnessReport report;
  report.epsilon = adversary.epsilon;
  // Rounds in which the joint state was still empty carry no snapshot.
  std::map<int, const quantum::StateVector*> honest_by_round, deviated_by_round;
  for (const Snapshot& s : honest.snapshots) honest_by_round[s.round] = &s.state;
  for (const Snapshot& s : deviated.snapshots) deviated_by_round[s.round] = &s.state;
  std::set<int> rounds;
  for (const auto& [r, s] : honest_by_round) rounds.insert(r);
  for (const auto& [r, s] : deviated_by_round) rounds.insert(r);
  for (int r : rounds) {
    auto h_it = honest_by_round.find(r);
    auto v_it = deviated_by_round.find(r);
    std::vector<QubitLabel> kept;
    if (v_it != deviated_by_round.end()) {
      for (const QubitLabel& q : v_it->second->labels()) {
        if (discard.count(q.reg) == 0) kept.push_back(q);
      }
    }
    if (h_it == honest_by_round.end() || v_it == deviated_by_round.end()) {
      const bool both_empty = h_it == honest_by_round.end() && kept.empty();
      report.per_round.push_back(both_empty ? 0.0 : 1.0);
      continue;
    }
    const quantum::StateVector& h = *h_it->second;
    const quantum::StateVector& v = *v_it->second;
    std::vector<QubitLabel> honest_labels = h.labels();
    std::vector<QubitLabel> sorted_kept = kept;
    std::sort(honest_labels.begin(), honest_labels.end());
    std::sort(sorted_kept.begin(), sorted_kept.end());
    if (honest_labels != sorted_kept) {
      return absl::FailedPreconditionError(absl::StrCat(
          "recovery map does not return round ", r, " to the honest register space"));
    }
    QPIR_ASSIGN_OR_RETURN(quantum::DensityMatrix recovered, quantum::PartialTrace(v, kept));
    QPIR_ASSIGN_OR_RETURN(quantum::DensityMatrix reference, quantum::PartialTrace(h, kept));
    const double d = info::HermitianTraceNorm(recovered.matrix() - reference.matrix()) / 2.0;
    report.per_round.push_back(d);
  }
  for (double d : report.per_round) report.max_distance = std::max(report.max_distance, d);
  report.pass = report.max_distance <= adversary.epsilon + kPassTolerance;
  return report;
}

absl::StatusOr<info::BoundReport> EvaluateCommunicationBound(const PrivacyReport& report, int n,
                                                             double measured_cost) {
  QPIR_ASSIGN_OR_RETURN(info::Ensemble ensemble, ToEnsemble(report.views));
  return info::CommunicationLowerBound(ensemble, n, measured_cost);
}

}  // namespace qpir::runtime
