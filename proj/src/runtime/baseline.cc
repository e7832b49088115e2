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

#include "qpir/runtime/baseline.h"

#include <bit>

#include "qpir/util/status_macros.h"

namespace qpir::runtime {
namespace {

int IndexWidth(uint64_t count) { return count <= 1 ? 1 : std::bit_width(count - 1); }

absl::StatusOr<CqState> EmptyQuantumView(const Session& session, std::string_view party) {
  return session.CaptureView(party, {});
}

}  // namespace

absl::Status SendEverythingProtocol::ValidateDatabase(const Database& db) const {
  return db.Validate();
}

absl::StatusOr<RunResult> SendEverythingProtocol::Run(const Database& db, uint64_t index,
                                                      const AdversaryModel& adversary, Rng& rng,
                                                      const RunOptions& options) const {
  Session session(adversary, rng);
  QPIR_RETURN_IF_ERROR(session.AddParty("client"));
  QPIR_RETURN_IF_ERROR(session.AddParty("server"));
  std::vector<Bits> payload;
  for (uint64_t entry : db.entries) payload.push_back(BitsOf(entry, db.entry_bits));
  QPIR_RETURN_IF_ERROR(session.SendClassical("server", "client", std::move(payload), "database"));
  RunResult result;
  if (options.capture.count("server")) {
    QPIR_ASSIGN_OR_RETURN(result.views["server"], EmptyQuantumView(session, "server"));
  }
  const std::vector<Bits>& received = session.transcript().messages().back().segments;
  result.value = ValueOf(received[index]);
  result.success_probability = *result.value == db.entries[index] ? 1.0 : 0.0;
  session.NextRound();
  FinishRun(session, result);
  return result;
}

absl::Status CleartextIndexProtocol::ValidateDatabase(const Database& db) const {
  return db.Validate();
}

absl::StatusOr<RunResult> CleartextIndexProtocol::Run(const Database& db, uint64_t index,
                                                      const AdversaryModel& adversary, Rng& rng,
                                                      const RunOptions& options) const {
  Session session(adversary, rng);
  QPIR_RETURN_IF_ERROR(session.AddParty("client"));
  QPIR_RETURN_IF_ERROR(session.AddParty("server"));
  const int width = IndexWidth(db.size());
  QPIR_RETURN_IF_ERROR(session.SendClassical("client", "server", {BitsOf(index, width)}, "index"));
  RunResult result;
  if (options.capture.count("server")) {
    QPIR_ASSIGN_OR_RETURN(result.views["server"], EmptyQuantumView(session, "server"));
  }
  session.NextRound();
  const uint64_t received = ValueOf(session.transcript().messages().back().segments[0]);
  uint64_t answer = db.entries[received];
  if (adversary.Deviates("server", "flip_answer", session.round())) {
    answer ^= (uint64_t{1} << db.entry_bits) - 1;
  }
  QPIR_RETURN_IF_ERROR(
      session.SendClassical("server", "client", {BitsOf(answer, db.entry_bits)}, "answer"));
  result.value = ValueOf(session.transcript().messages().back().segments[0]);
  result.success_probability = *result.value == db.entries[index] ? 1.0 : 0.0;
  session.NextRound();
  FinishRun(session, result);
  return result;
}

}  // namespace qpir::runtime
