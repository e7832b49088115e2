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

#ifndef QPIR_MULTISERVER_TWO_SERVER_H_
#define QPIR_MULTISERVER_TWO_SERVER_H_

#include <cstdint>
#include <string_view>

#include "absl/status/statusor.h"
#include "qpir/runtime/protocol.h"
#include "qpir/util/random.h"

namespace qpir::multiserver {

// Subsets of [ell] travel as ell-bit masks; element k is bit k (0-based).
struct SubsetQuery {
  int ell = 0;
  uint64_t subset = 0;
  uint64_t partner = 0;  // subset with the membership of the target flipped
};

uint64_t FlipMembership(uint64_t subset, int element);
absl::StatusOr<SubsetQuery> GenerateTwoServerQuery(int ell, int target, Rng& rng);
// Query with a caller-chosen first subset.
absl::StatusOr<SubsetQuery> MakeTwoServerQuery(int ell, int target, uint64_t subset);

// XOR of the entries selected by `subset`; 0 for the empty set.
absl::StatusOr<uint64_t> SubsetParity(const runtime::Database& db, uint64_t subset);

enum class TwoServerVariant {
  // Value register QFT-encoded modulo 2^m; the client reads the sum mod 2^m.
  kQftModN,
  // m independent one-qubit phase instances; the client reads the XOR.
  kPerBitZ,
};

std::string_view TwoServerVariantName(TwoServerVariant variant);
absl::StatusOr<TwoServerVariant> ParseTwoServerVariant(std::string_view name);

// Two non-communicating servers holding the same database of ell entries of
// m = entry_bits bits.
//
// Server 1 encodes its subset parity as a phase on register c, copies the
// computational content of c into t with CNOTs and relays t through
// server 2, which multiplies in the phase of its own parity. Server 1 returns
// c directly. The client uncomputes t against c (a nonzero t is evidence of
// tampering) and decodes c.
//
// Client coins: the first subset (2^ell values).
class TwoServerProtocol : public runtime::Protocol {
 public:
  explicit TwoServerProtocol(TwoServerVariant variant = TwoServerVariant::kPerBitZ)
      : variant_(variant) {}

  std::string_view name() const override { return "two_server"; }
  std::vector<std::string> roles() const override { return {"server1", "server2"}; }
  absl::Status ValidateDatabase(const runtime::Database& db) const override;
  uint64_t CoinSpace(const runtime::Database& db) const override;
  absl::StatusOr<runtime::RunResult> Run(const runtime::Database& db, uint64_t index,
                                         const runtime::AdversaryModel& adversary, Rng& rng,
                                         const runtime::RunOptions& options = {}) const override;

  TwoServerVariant variant() const { return variant_; }

 private:
  TwoServerVariant variant_;
};

}  // namespace qpir::multiserver

#endif  // QPIR_MULTISERVER_TWO_SERVER_H_
