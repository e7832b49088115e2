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

#include "qpir/multiserver/two_server.h"

#include <numbers>

#include "absl/strings/str_cat.h"
#include "qpir/quantum/gates.h"
#include "qpir/util/status_macros.h"

namespace qpir::multiserver {

using quantum::QubitLabel;
using runtime::Bits;
using runtime::BitsOf;
using runtime::Database;
using runtime::RunResult;
using runtime::Session;
using runtime::ValueOf;

namespace {

constexpr int kMaxEll = 20;
// c, t and server 2's value register are live together.
constexpr int kMaxQftBits = 6;

absl::Status CheckEll(int ell) {
  if (ell < 1 || ell > kMaxEll) {
    return absl::InvalidArgumentError(absl::StrCat("ell must lie in [1, ", kMaxEll, "]"));
  }
  return absl::OkStatus();
}

// Sets a fresh register to |value>, big-endian.
absl::Status LoadValue(Session& session, std::string_view party,
                       const std::vector<QubitLabel>& reg, uint64_t value) {
  const int m = static_cast<int>(reg.size());
  for (int k = 0; k < m; ++k) {
    if ((value >> (m - 1 - k)) & 1) QPIR_RETURN_IF_ERROR(session.Apply(party, quantum::XGate{}, {reg[k]}));
  }
  return absl::OkStatus();
}

}  // namespace

uint64_t FlipMembership(uint64_t subset, int element) { return subset ^ (uint64_t{1} << element); }

absl::StatusOr<SubsetQuery> MakeTwoServerQuery(int ell, int target, uint64_t subset) {
  QPIR_RETURN_IF_ERROR(CheckEll(ell));
  if (target < 0 || target >= ell) return absl::OutOfRangeError("target outside [0, ell)");
  if (subset >> ell) return absl::InvalidArgumentError("subset has elements outside [0, ell)");
  return SubsetQuery{ell, subset, FlipMembership(subset, target)};
}

absl::StatusOr<SubsetQuery> GenerateTwoServerQuery(int ell, int target, Rng& rng) {
  QPIR_RETURN_IF_ERROR(CheckEll(ell));
  return MakeTwoServerQuery(ell, target, UniformBits(rng, ell));
}

absl::StatusOr<uint64_t> SubsetParity(const Database& db, uint64_t subset) {
  if (db.size() < 64 && (subset >> db.size())) {
    return absl::InvalidArgumentError("subset has elements outside the database");
  }
  uint64_t parity = 0;
  for (size_t k = 0; k < db.size(); ++k) {
    if ((subset >> k) & 1) parity ^= db.entries[k];
  }
  return parity;
}

std::string_view TwoServerVariantName(TwoServerVariant variant) {
  return variant == TwoServerVariant::kQftModN ? "qft_modN" : "per_bit_z";
}

absl::StatusOr<TwoServerVariant> ParseTwoServerVariant(std::string_view name) {
  if (name == "qft_modN") return TwoServerVariant::kQftModN;
  if (name == "per_bit_z") return TwoServerVariant::kPerBitZ;
  return absl::InvalidArgumentError(absl::StrCat("unknown two-server variant '", std::string(name), "'"));
}

absl::Status TwoServerProtocol::ValidateDatabase(const Database& db) const {
  QPIR_RETURN_IF_ERROR(CheckEll(static_cast<int>(db.size())));
  if (variant_ == TwoServerVariant::kQftModN && db.entry_bits > kMaxQftBits) {
    return absl::InvalidArgumentError(
        absl::StrCat("qft_modN supports at most ", kMaxQftBits, " bits per entry"));
  }
  return absl::OkStatus();
}

uint64_t TwoServerProtocol::CoinSpace(const Database& db) const {
  return uint64_t{1} << db.size();
}

absl::StatusOr<RunResult> TwoServerProtocol::Run(const Database& db, uint64_t index,
                                                 const runtime::AdversaryModel& adversary,
                                                 Rng& rng,
                                                 const runtime::RunOptions& options) const {
  const int ell = static_cast<int>(db.size());
  const int m = db.entry_bits;
  runtime::SessionOptions session_options;
  session_options.record_snapshots = options.record_snapshots;
  Session session(adversary, rng, session_options);
  for (const char* party : {"client", "server1", "server2"}) {
    QPIR_RETURN_IF_ERROR(session.AddParty(party));
  }
  RunResult result;
  result.record["protocol"] = "two_server";
  result.record["variant"] = std::string(TwoServerVariantName(variant_));

  // Round 1: the client distributes the two subsets.
  const uint64_t first = options.coin ? (*options.coin & ((uint64_t{1} << ell) - 1))
                                      : UniformBits(session.rng(), ell);
  QPIR_ASSIGN_OR_RETURN(SubsetQuery query, MakeTwoServerQuery(ell, static_cast<int>(index), first));
  QPIR_RETURN_IF_ERROR(session.SendClassical("client", "server1", {BitsOf(query.subset, ell)}, "subset"));
  QPIR_RETURN_IF_ERROR(session.SendClassical("client", "server2", {BitsOf(query.partner, ell)}, "subset"));
  if (adversary.Deviates("server2", "copy_query", session.round())) {
    // Keeps a quantum copy of the classical query it legitimately received.
    QPIR_ASSIGN_OR_RETURN(std::vector<Bits> received, session.LastReceived("server2", "subset"));
    QPIR_RETURN_IF_ERROR(session.Allocate("server2", {"server2_copy", ell}));
    QPIR_ASSIGN_OR_RETURN(auto copy, session.Register("server2", "server2_copy"));
    QPIR_RETURN_IF_ERROR(LoadValue(session, "server2", copy, ValueOf(received[0])));
    result.scratch_registers.push_back("server2_copy");
  }
  if (options.capture.count("server1")) {
    QPIR_ASSIGN_OR_RETURN(result.views["server1"], session.CaptureView("server1", {}));
  }
  session.NextRound();

  // Round 2: server 1 phase-encodes its parity and relays the copy t.
  QPIR_ASSIGN_OR_RETURN(std::vector<Bits> s1_query, session.LastReceived("server1", "subset"));
  QPIR_ASSIGN_OR_RETURN(uint64_t parity1, SubsetParity(db, ValueOf(s1_query[0])));
  QPIR_RETURN_IF_ERROR(session.Allocate("server1", {"c", m}));
  QPIR_RETURN_IF_ERROR(session.Allocate("server1", {"t", m}));
  QPIR_ASSIGN_OR_RETURN(std::vector<QubitLabel> c, session.Register("server1", "c"));
  QPIR_ASSIGN_OR_RETURN(std::vector<QubitLabel> t, session.Register("server1", "t"));
  QPIR_RETURN_IF_ERROR(LoadValue(session, "server1", c, parity1));
  if (variant_ == TwoServerVariant::kQftModN) {
    QPIR_RETURN_IF_ERROR(session.ApplyQft("server1", c));
  } else {
    for (const QubitLabel& q : c) QPIR_RETURN_IF_ERROR(session.Apply("server1", quantum::HGate{}, {q}));
  }
  for (int k = 0; k < m; ++k) {
    QPIR_RETURN_IF_ERROR(session.Apply("server1", quantum::CnotGate{}, {c[k], t[k]}));
  }
  QPIR_RETURN_IF_ERROR(session.SendQuantum("server1", "server2", t, "relay"));
  session.NextRound();

  // Round 3: server 2 multiplies in its own parity's phase and forwards t;
  // server 1 returns c.
  QPIR_ASSIGN_OR_RETURN(std::vector<Bits> s2_query, session.LastReceived("server2", "subset"));
  QPIR_ASSIGN_OR_RETURN(uint64_t parity2, SubsetParity(db, ValueOf(s2_query[0])));
  QPIR_RETURN_IF_ERROR(session.Allocate("server2", {"value2", m}));
  QPIR_ASSIGN_OR_RETURN(std::vector<QubitLabel> value2, session.Register("server2", "value2"));
  QPIR_RETURN_IF_ERROR(LoadValue(session, "server2", value2, parity2));
  if (options.capture.count("server2")) {
    std::vector<QubitLabel> seen = t;
    seen.insert(seen.end(), value2.begin(), value2.end());
    QPIR_ASSIGN_OR_RETURN(result.views["server2"], session.CaptureView("server2", seen));
  }
  if (variant_ == TwoServerVariant::kQftModN) {
    std::vector<QubitLabel> targets = t;
    targets.insert(targets.end(), value2.begin(), value2.end());
    QPIR_RETURN_IF_ERROR(session.Apply(
        "server2", quantum::ControlledPowerPhaseGate{m, uint64_t{1} << m}, targets));
  } else {
    for (int k = 0; k < m; ++k) {
      QPIR_RETURN_IF_ERROR(session.Apply("server2", quantum::CzGate{}, {t[k], value2[k]}));
    }
  }
  QPIR_RETURN_IF_ERROR(session.Compact("server2", value2));
  QPIR_RETURN_IF_ERROR(session.SendQuantum("server2", "client", t, "relay"));
  QPIR_RETURN_IF_ERROR(session.SendQuantum("server1", "client", c, "register"));
  session.NextRound();

  // Round 4: the client checks t and decodes c.
  for (int k = 0; k < m; ++k) {
    QPIR_RETURN_IF_ERROR(session.Apply("client", quantum::CnotGate{}, {c[k], t[k]}));
  }
  if (variant_ == TwoServerVariant::kQftModN) {
    QPIR_RETURN_IF_ERROR(session.ApplyInverseQft("client", c));
  } else {
    for (const QubitLabel& q : c) QPIR_RETURN_IF_ERROR(session.Apply("client", quantum::HGate{}, {q}));
  }
  std::vector<QubitLabel> both = t;
  both.insert(both.end(), c.begin(), c.end());
  QPIR_ASSIGN_OR_RETURN(std::vector<double> probs, session.Probabilities("client", both));
  const double success = probs[db.entries[index]];  // t = 0, c = x_i
  result.success_probability = success;
  QPIR_ASSIGN_OR_RETURN(const uint64_t relay, session.Measure("client", t));
  result.record["relay_outcome"] = relay;
  if (relay != 0) {
    result.aborted_at = "verify";
    result.abort_reason = "relay register did not return to zero";
  } else {
    QPIR_ASSIGN_OR_RETURN(result.value, session.Measure("client", c));
  }
  session.NextRound();
  runtime::FinishRun(session, result);
  return result;
}

}  // namespace qpir::multiserver
