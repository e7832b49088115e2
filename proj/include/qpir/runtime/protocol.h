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

#ifndef QPIR_RUNTIME_PROTOCOL_H_
#define QPIR_RUNTIME_PROTOCOL_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "qpir/runtime/adversary.h"
#include "qpir/runtime/session.h"
#include "qpir/runtime/transcript.h"
#include "qpir/runtime/view.h"
#include "qpir/util/random.h"

namespace qpir::runtime {

// n entries of entry_bits bits each. Protocols index entries with a flat
// 0-based index; multi-dimensional layouts decode it themselves.
struct Database {
  std::vector<uint64_t> entries;
  int entry_bits = 1;

  size_t size() const { return entries.size(); }
  int64_t total_bits() const { return static_cast<int64_t>(entries.size()) * entry_bits; }
  absl::Status Validate() const;

  static Database FromBits(const std::vector<int>& bits);
  static Database Random(size_t size, int entry_bits, Rng& rng);
};

struct RunOptions {
  // When set, fixes the client's private coins to this value instead of
  // drawing them from the run's Rng (used to enumerate randomness).
  std::optional<uint64_t> coin;
  // Roles whose views the protocol should capture.
  std::set<std::string> capture;
  bool record_snapshots = false;
};

struct RunResult {
  std::optional<uint64_t> value;
  // Stage that detected a problem; empty if the run completed.
  std::string aborted_at;
  std::string abort_reason;
  Transcript transcript;
  std::vector<Snapshot> snapshots;
  // Adversary scratch registers created by a deviation.
  std::vector<std::string> scratch_registers;
  std::map<std::string, CqState> views;
  // Born probability, given the executed path up to the client's final
  // measurement, that it outputs the correct entry without aborting. Zero if
  // the run aborted before reaching that point.
  double success_probability = 0.0;
  nlohmann::ordered_json record = nlohmann::ordered_json::object();

  bool aborted() const { return !aborted_at.empty(); }
};

class Protocol {
 public:
  virtual ~Protocol() = default;

  virtual std::string_view name() const = 0;
  // Parties whose views can be captured.
  virtual std::vector<std::string> roles() const = 0;
  // Checks that `db` has the shape the protocol needs.
  virtual absl::Status ValidateDatabase(const Database& db) const = 0;
  virtual uint64_t IndexCount(const Database& db) const { return db.size(); }
  // Size of the client coin space when it is small enough to enumerate
  // through RunOptions::coin; 0 otherwise.
  virtual uint64_t CoinSpace(const Database& /*db*/) const { return 0; }

  virtual absl::StatusOr<RunResult> Run(const Database& db, uint64_t index,
                                        const AdversaryModel& adversary, Rng& rng,
                                        const RunOptions& options = {}) const = 0;

  absl::Status ValidateIndex(const Database& db, uint64_t index) const;
};

// Validates the inputs and runs the protocol. Captured views are returned
// only for `options.capture`.
absl::StatusOr<RunResult> RunProtocol(const Protocol& protocol, const Database& db,
                                      uint64_t index, const AdversaryModel& adversary, Rng& rng,
                                      const RunOptions& options = {});

// Helper for protocol implementations: fills the transcript, snapshots and a
// summary record from a finished session.
void FinishRun(const Session& session, RunResult& result);

}  // namespace qpir::runtime

#endif  // QPIR_RUNTIME_PROTOCOL_H_
