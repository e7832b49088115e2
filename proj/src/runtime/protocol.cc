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

#include "qpir/runtime/protocol.h"

#include "absl/strings/str_cat.h"
#include "qpir/util/status_macros.h"

namespace qpir::runtime {

absl::Status Database::Validate() const {
  if (entries.empty()) return absl::InvalidArgumentError("database is empty");
  if (entry_bits < 1 || entry_bits > 63) {
    return absl::InvalidArgumentError(absl::StrCat("entry bits ", entry_bits, " outside [1, 63]"));
  }
  const uint64_t limit = uint64_t{1} << entry_bits;
  for (size_t k = 0; k < entries.size(); ++k) {
    if (entries[k] >= limit) {
      return absl::InvalidArgumentError(
          absl::StrCat("entry ", k, " = ", entries[k], " exceeds ", entry_bits, " bits"));
    }
  }
  return absl::OkStatus();
}

Database Database::FromBits(const std::vector<int>& bits) {
  Database db;
  for (int b : bits) db.entries.push_back(static_cast<uint64_t>(b & 1));
  return db;
}

Database Database::Random(size_t size, int entry_bits, Rng& rng) {
  Database db;
  db.entry_bits = entry_bits;
  for (size_t k = 0; k < size; ++k) db.entries.push_back(UniformBits(rng, entry_bits));
  return db;
}

absl::Status Protocol::ValidateIndex(const Database& db, uint64_t index) const {
  const uint64_t count = IndexCount(db);
  if (index >= count) {
    return absl::OutOfRangeError(
        absl::StrCat("index ", index, " outside [0, ", count, ") for ", std::string(name())));
  }
  return absl::OkStatus();
}

absl::StatusOr<RunResult> RunProtocol(const Protocol& protocol, const Database& db, uint64_t index,
                                      const AdversaryModel& adversary, Rng& rng,
                                      const RunOptions& options) {
  QPIR_RETURN_IF_ERROR(db.Validate());
  QPIR_RETURN_IF_ERROR(protocol.ValidateDatabase(db));
  QPIR_RETURN_IF_ERROR(protocol.ValidateIndex(db, index));
  return protocol.Run(db, index, adversary, rng, options);
}

void FinishRun(const Session& session, RunResult& result) {
  result.transcript = session.transcript();
  result.snapshots = session.snapshots();
  auto& r = result.record;
  if (result.value.has_value()) {
    r["result"] = *result.value;
  } else {
    r["result"] = nullptr;
  }
  r["aborted_at"] = result.aborted() ? nlohmann::ordered_json(result.aborted_at) : nullptr;
  if (result.aborted()) r["abort_reason"] = result.abort_reason;
  r["qubit_cost"] = session.transcript().qubit_cost();
  r["classical_cost"] = session.transcript().classical_cost();
  r["messages"] = session.transcript().messages().size();
}

}  // namespace qpir::runtime
