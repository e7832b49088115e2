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

#ifndef QPIR_RUNTIME_BASELINE_H_
#define QPIR_RUNTIME_BASELINE_H_

#include "qpir/runtime/protocol.h"

namespace qpir::runtime {

// The server sends the whole database; the client reads its entry. Perfectly
// private, n * entry_bits classical bits.
class SendEverythingProtocol : public Protocol {
 public:
  std::string_view name() const override { return "baseline"; }
  std::vector<std::string> roles() const override { return {"server"}; }
  absl::Status ValidateDatabase(const Database& db) const override;
  uint64_t CoinSpace(const Database&) const override { return 1; }
  absl::StatusOr<RunResult> Run(const Database& db, uint64_t index, const AdversaryModel& adversary,
                                Rng& rng, const RunOptions& options = {}) const override;
};

// Strawman: the client sends its index in the clear and the server answers
// with the entry. Not private at all. The server deviation "flip_answer"
// inverts the returned entry.
class CleartextIndexProtocol : public Protocol {
 public:
  std::string_view name() const override { return "cleartext"; }
  std::vector<std::string> roles() const override { return {"server"}; }
  absl::Status ValidateDatabase(const Database& db) const override;
  uint64_t CoinSpace(const Database&) const override { return 1; }
  absl::StatusOr<RunResult> Run(const Database& db, uint64_t index, const AdversaryModel& adversary,
                                Rng& rng, const RunOptions& options = {}) const override;
};

}  // namespace qpir::runtime

#endif  // QPIR_RUNTIME_BASELINE_H_
