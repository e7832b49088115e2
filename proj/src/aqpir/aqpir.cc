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

#include "qpir/aqpir/aqpir.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "absl/strings/str_cat.h"
#include "qpir/quantum/gates.h"
#include "qpir/quantum/measurement.h"
#include "qpir/tcf/tcf.h"
#include "qpir/util/status_macros.h"

namespace qpir::aqpir {

using quantum::QubitLabel;
using runtime::Bits;
using runtime::BitsOf;
using runtime::Capability;
using runtime::Database;
using runtime::RunResult;
using runtime::Session;
using runtime::ValueOf;

namespace {

constexpr char kClient[] = "client";
constexpr char kServer[] = "server";
constexpr int kHandleBits = 64;

std::vector<QubitLabel> Concat(std::initializer_list<const std::vector<QubitLabel>*> parts) {
  std::vector<QubitLabel> out;
  for (const auto* part : parts) out.insert(out.end(), part->begin(), part->end());
  return out;
}

// Hadamard on every qubit of `reg`.
absl::Status HadamardAll(Session& session, std::string_view party,
                         const std::vector<QubitLabel>& reg) {
  for (const QubitLabel& q : reg) QPIR_RETURN_IF_ERROR(session.Apply(party, quantum::HGate{}, {q}));
  return absl::OkStatus();
}

// Q_j ^= <R, a^j>, with Q read big-endian (Q_0 is the top bit).
absl::Status XorInnerProducts(Session& session, const Database& db,
                              const std::vector<QubitLabel>& reg_r,
                              const std::vector<QubitLabel>& reg_q) {
  return session.ApplyXorOracle(kServer, reg_r, reg_q,
                                [&db](uint64_t x) { return QueryPattern(db, x); });
}

std::string BitsText(uint64_t value, int width) {
  std::string text(static_cast<size_t>(width), '0');
  for (int k = 0; k < width; ++k) {
    if ((value >> (width - 1 - k)) & 1) text[k] = '1';
  }
  return text;
}

}  // namespace

absl::Status AqpirParams::Validate() const {
  if (ell < 2) return absl::InvalidArgumentError("ell must be at least 2");
  if (r < 1 || r > 12) return absl::InvalidArgumentError("r must lie in [1, 12]");
  if (tcf_bits < 1 || tcf_bits > tcf::kMaxDomainBits) {
    return absl::InvalidArgumentError(
        absl::StrCat("tcf_bits must lie in [1, ", tcf::kMaxDomainBits, "]"));
  }
  if (detection_pairs < 0) return absl::InvalidArgumentError("detection_pairs must be non-negative");
  if (!(bell_threshold >= 0.0 && bell_threshold <= 1.0)) {
    return absl::InvalidArgumentError("bell_threshold must lie in [0, 1]");
  }
  if (!(delta >= 0.0 && delta <= 1.0)) return absl::InvalidArgumentError("delta must lie in [0, 1]");
  // R, R' and Q form one dense factor.
  if (2 * r + ell > quantum::kDefaultQubitCap) {
    return absl::ResourceExhaustedError(absl::StrCat("2r + ell = ", 2 * r + ell,
                                                     " exceeds the qubit cap of ",
                                                     quantum::kDefaultQubitCap));
  }
  return absl::OkStatus();
}

int AqpirParams::pairs() const {
  if (detection_pairs > 0) return detection_pairs;
  return static_cast<int>(std::ceil(std::sqrt(static_cast<double>(ell))));
}

AqpirParams AqpirParams::ForDatabaseBits(int n) {
  AqpirParams params;
  params.r = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)))));
  params.ell = std::max(2, (n + params.r - 1) / params.r);
  return params;
}

Database PackBlocks(const std::vector<int>& bits, int r) {
  Database db;
  db.entry_bits = r;
  db.entries.assign((bits.size() + r - 1) / r, 0);
  for (size_t k = 0; k < bits.size(); ++k) {
    if (bits[k] & 1) db.entries[k / r] |= uint64_t{1} << (r - 1 - static_cast<int>(k % r));
  }
  return db;
}

int InnerProduct(uint64_t a, uint64_t b) { return std::popcount(a & b) & 1; }

uint64_t QueryPattern(const Database& db, uint64_t x) {
  uint64_t out = 0;
  for (uint64_t entry : db.entries) out = (out << 1) | static_cast<uint64_t>(InnerProduct(x, entry));
  return out;
}

absl::StatusOr<quantum::StateVector> PrepareQueryState(const Database& db) {
  QPIR_RETURN_IF_ERROR(db.Validate());
  const int r = db.entry_bits, ell = static_cast<int>(db.size());
  quantum::JointState state;
  QPIR_RETURN_IF_ERROR(state.AddRegister({"R", r}));
  QPIR_RETURN_IF_ERROR(state.AddRegister({"Rp", r}));
  QPIR_RETURN_IF_ERROR(state.AddRegister({"Q", ell}));
  QPIR_ASSIGN_OR_RETURN(const auto reg_r, state.Register("R"));
  QPIR_ASSIGN_OR_RETURN(const auto reg_rp, state.Register("Rp"));
  QPIR_ASSIGN_OR_RETURN(const auto reg_q, state.Register("Q"));
  for (int j = 0; j < r; ++j) {
    QPIR_RETURN_IF_ERROR(state.Apply(quantum::HGate{}, {reg_r[j]}));
    QPIR_RETURN_IF_ERROR(state.Apply(quantum::CnotGate{}, {reg_r[j], reg_rp[j]}));
  }
  QPIR_RETURN_IF_ERROR(
      state.ApplyXorOracle(reg_r, reg_q, [&db](uint64_t x) { return QueryPattern(db, x); }));
  return state.ToStateVector();
}

double PredictedAncillaAngle(uint64_t r_string, uint64_t x0, uint64_t x1, int d_branch,
                             uint64_t d_x) {
  const int v0 = InnerProduct(r_string, x0);
  if (v0 == InnerProduct(r_string, x1)) return v0 ? std::numbers::pi : 0.0;
  const int sign = d_branch ^ InnerProduct(d_x, x0 ^ x1);
  return sign ? -std::numbers::pi / 2 : std::numbers::pi / 2;
}

double PredictedZeroProbability(double ancilla_angle, double theta) {
  const double c = std::cos((theta - ancilla_angle) / 2.0);
  return c * c;
}

absl::Status AqpirProtocol::ValidateDatabase(const Database& db) const {
  QPIR_RETURN_IF_ERROR(params_.Validate());
  if (static_cast<int>(db.size()) != params_.ell) {
    return absl::InvalidArgumentError(
        absl::StrCat("database has ", db.size(), " blocks, expected ell = ", params_.ell));
  }
  if (db.entry_bits != params_.r) {
    return absl::InvalidArgumentError(
        absl::StrCat("blocks have ", db.entry_bits, " bits, expected r = ", params_.r));
  }
  return absl::OkStatus();
}

int64_t AqpirProtocol::QubitCost(int sampled) const {
  return 2 * params_.r + 3 * params_.ell + params_.pairs() + sampled;
}

absl::StatusOr<RunResult> AqpirProtocol::Run(const Database& db, uint64_t index,
                                             const runtime::AdversaryModel& adversary, Rng& rng,
                                             const runtime::RunOptions& options) const {
  QPIR_RETURN_IF_ERROR(ValidateDatabase(db));
  const int ell = params_.ell, r = params_.r, n = params_.tcf_bits, k = params_.pairs();
  runtime::SessionOptions session_options;
  session_options.record_snapshots = options.record_snapshots;
  Session session(adversary, rng, session_options);
  QPIR_RETURN_IF_ERROR(session.AddParty(kClient, {Capability::kTcfTrapdoor}));
  QPIR_RETURN_IF_ERROR(session.AddParty(kServer, {Capability::kTcfEvaluate}));
  QPIR_ASSIGN_OR_RETURN(auto keys, tcf::Generate(n, session.rng()));
  session.Provide(Capability::kTcfEvaluate, keys.first);
  session.Provide(Capability::kTcfTrapdoor, keys.second);

  RunResult result;
  auto& record = result.record;
  record["protocol"] = "aqpir";
  auto finish = [&]() -> absl::StatusOr<RunResult> {
    record["accepted"] = record.value("accepted", false);
    runtime::FinishRun(session, result);
    return result;
  };
  auto abort = [&](std::string stage, std::string reason) {
    result.aborted_at = std::move(stage);
    result.abort_reason = std::move(reason);
  };

  // Stage 1: claw state, |Phi_A> and detection pairs; the stream goes out.
  QPIR_ASSIGN_OR_RETURN(const tcf::TcfInstance* f,
                        session.Access<tcf::TcfInstance>(kServer, Capability::kTcfEvaluate));
  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"b", 1}));
  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"x", n}));
  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"y", n}));
  QPIR_ASSIGN_OR_RETURN(const auto reg_b, session.Register(kServer, "b"));
  QPIR_ASSIGN_OR_RETURN(const auto reg_x, session.Register(kServer, "x"));
  QPIR_ASSIGN_OR_RETURN(const auto reg_y, session.Register(kServer, "y"));
  const auto branch_x = Concat({&reg_b, &reg_x});
  QPIR_RETURN_IF_ERROR(HadamardAll(session, kServer, branch_x));
  QPIR_RETURN_IF_ERROR(session.ApplyXorOracle(kServer, branch_x, reg_y, [f, n](uint64_t bx) {
    return *f->EvalCode(static_cast<int>(bx >> n), bx & ((uint64_t{1} << n) - 1));
  }));
  QPIR_ASSIGN_OR_RETURN(const uint64_t image_code, session.Measure(kServer, reg_y));
  QPIR_ASSIGN_OR_RETURN(const tcf::ImageHandle image, f->HandleForCode(image_code));
  QPIR_RETURN_IF_ERROR(session.Remember(kServer, absl::StrCat("image=", image.tag)));

  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"R", r}));
  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"Rp", r}));
  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"Q", ell}));
  QPIR_ASSIGN_OR_RETURN(const auto reg_r, session.Register(kServer, "R"));
  QPIR_ASSIGN_OR_RETURN(const auto reg_rp, session.Register(kServer, "Rp"));
  QPIR_ASSIGN_OR_RETURN(const auto reg_q, session.Register(kServer, "Q"));
  QPIR_RETURN_IF_ERROR(HadamardAll(session, kServer, reg_r));
  for (int j = 0; j < r; ++j) {
    QPIR_RETURN_IF_ERROR(session.Apply(kServer, quantum::CnotGate{}, {reg_r[j], reg_rp[j]}));
  }
  QPIR_RETURN_IF_ERROR(XorInnerProducts(session, db, reg_r, reg_q));

  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"T", k}));
  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"B", k}));
  QPIR_ASSIGN_OR_RETURN(const auto reg_t, session.Register(kServer, "T"));
  QPIR_ASSIGN_OR_RETURN(const auto reg_bp, session.Register(kServer, "B"));
  for (int j = 0; j < k; ++j) {
    QPIR_RETURN_IF_ERROR(session.Apply(kServer, quantum::HGate{}, {reg_t[j]}));
    QPIR_RETURN_IF_ERROR(session.Apply(kServer, quantum::CnotGate{}, {reg_t[j], reg_bp[j]}));
  }
  // Detection halves go to k uniformly random slots of the stream.
  const int stream_length = r + ell + k;
  std::vector<int> slots(stream_length);
  for (int j = 0; j < stream_length; ++j) slots[j] = j;
  for (int j = 0; j < k; ++j) {
    const int pick = j + static_cast<int>(UniformBelow(session.rng(), stream_length - j));
    std::swap(slots[j], slots[pick]);
  }
  uint64_t position_mask = 0;
  for (int j = 0; j < k; ++j) position_mask |= uint64_t{1} << slots[j];
  std::vector<QubitLabel> stream;
  {
    const auto payload = Concat({&reg_rp, &reg_q});
    size_t next_payload = 0;
    int next_pair = 0;
    for (int slot = 0; slot < stream_length; ++slot) {
      stream.push_back(((position_mask >> slot) & 1) ? reg_bp[next_pair++]
                                                     : payload[next_payload++]);
    }
  }
  QPIR_RETURN_IF_ERROR(session.Remember(kServer, absl::StrCat("positions=", position_mask)));
  QPIR_RETURN_IF_ERROR(session.SendClassical(kServer, kClient, {BitsOf(image.tag, kHandleBits)}, "image"));
  QPIR_RETURN_IF_ERROR(session.SendQuantum(kServer, kClient, stream, "stream"));
  session.NextRound();

  // Stage 2: locate the detection halves, sample pairs, Bell-test them.
  QPIR_RETURN_IF_ERROR(
      session.SendClassical(kServer, kClient, {BitsOf(position_mask, stream_length)}, "positions"));
  QPIR_ASSIGN_OR_RETURN(const auto positions, session.LastReceived(kClient, "positions"));
  std::vector<QubitLabel> received_halves;
  for (int slot = 0; slot < stream_length; ++slot) {
    if (positions[0][slot]) received_halves.push_back(stream[slot]);
  }
  uint64_t sample_mask = 0;
  for (int j = 0; j < k; ++j) sample_mask |= static_cast<uint64_t>(CoinFlip(session.rng())) << j;
  QPIR_RETURN_IF_ERROR(session.SendClassical(kClient, kServer, {BitsOf(sample_mask, k)}, "sample"));
  std::vector<QubitLabel> sampled_t;
  for (int j = 0; j < k; ++j) {
    if ((sample_mask >> j) & 1) sampled_t.push_back(reg_t[j]);
  }
  const int sampled = static_cast<int>(sampled_t.size());
  if (sampled > 0) QPIR_RETURN_IF_ERROR(session.SendQuantum(kServer, kClient, sampled_t, "check"));
  int bell_errors = 0;
  for (int j = 0, s = 0; j < k; ++j) {
    if (!((sample_mask >> j) & 1)) continue;
    QPIR_ASSIGN_OR_RETURN(const quantum::BellLabel label,
                          session.MeasureBell(kClient, received_halves[j], sampled_t[s++]));
    bell_errors += label != quantum::BellLabel::kPhiPlus;
  }
  const double bell_rate = sampled == 0 ? 0.0 : static_cast<double>(bell_errors) / sampled;
  record["sampled_pairs"] = sampled;
  record["bell_error_rate"] = bell_rate;
  if (bell_rate > params_.bell_threshold) {
    abort("stage2", absl::StrCat("Bell error rate ", bell_rate, " exceeds ", params_.bell_threshold));
    session.NextRound();
    return finish();
  }
  session.NextRound();

  // Stage 3, client side: invert the image, imprint the index phase.
  QPIR_ASSIGN_OR_RETURN(const tcf::Trapdoor* trapdoor,
                        session.Access<tcf::Trapdoor>(kClient, Capability::kTcfTrapdoor));
  QPIR_ASSIGN_OR_RETURN(const auto image_msg, session.LastReceived(kClient, "image"));
  QPIR_ASSIGN_OR_RETURN(const tcf::ClawPair claw,
                        trapdoor->Invert(tcf::ImageHandle{ValueOf(image_msg[0])}));
  record["claw"] = {{"x0", claw.x0}, {"x1", claw.x1}};
  const uint64_t r_string = UniformBits(session.rng(), n);
  QPIR_RETURN_IF_ERROR(session.Apply(kClient, quantum::ZGate{}, {reg_q[index]}));
  QPIR_RETURN_IF_ERROR(session.SendClassical(kClient, kServer, {BitsOf(r_string, n)}, "rstring"));
  QPIR_RETURN_IF_ERROR(session.SendQuantum(kClient, kServer, reg_q, "query"));
  if (options.capture.count(kServer)) {
    const auto seen = Concat({&reg_b, &reg_x, &reg_r, &reg_q});
    QPIR_ASSIGN_OR_RETURN(result.views[kServer], session.CaptureView(kServer, seen));
  }
  session.NextRound();

  // Stage 3, server side: ancilla r.x, Hadamard-measure (b, x), uncompute Q.
  QPIR_ASSIGN_OR_RETURN(const auto rstring_msg, session.LastReceived(kServer, "rstring"));
  const uint64_t public_r = ValueOf(rstring_msg[0]);
  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"anc", 1}));
  QPIR_ASSIGN_OR_RETURN(const auto reg_anc, session.Register(kServer, "anc"));
  for (int j = 0; j < n; ++j) {
    if ((public_r >> (n - 1 - j)) & 1) {
      QPIR_RETURN_IF_ERROR(session.Apply(kServer, quantum::CnotGate{}, {reg_x[j], reg_anc[0]}));
    }
  }
  QPIR_RETURN_IF_ERROR(HadamardAll(session, kServer, branch_x));
  QPIR_ASSIGN_OR_RETURN(const uint64_t d, session.Measure(kServer, branch_x));
  record["d"] = BitsText(d, n + 1);
  if (!adversary.Deviates(kServer, "skip_uncompute", session.round())) {
    QPIR_RETURN_IF_ERROR(XorInnerProducts(session, db, reg_r, reg_q));
  }
  if (adversary.Deviates(kServer, "flip_answer", session.round())) {
    // A phase on R_0 flips the top bit of the decoded block.
    QPIR_RETURN_IF_ERROR(session.Apply(kServer, quantum::ZGate{}, {reg_r[0]}));
  }
  QPIR_RETURN_IF_ERROR(session.SendQuantum(kServer, kClient, Concat({&reg_r, &reg_q}), "answer"));
  QPIR_RETURN_IF_ERROR(session.SendClassical(kServer, kClient, {BitsOf(d, n + 1)}, "d"));

  // Stage 3, client side: uncompute R', check Q, decode R.
  for (int j = 0; j < r; ++j) {
    QPIR_RETURN_IF_ERROR(session.Apply(kClient, quantum::CnotGate{}, {reg_r[j], reg_rp[j]}));
  }
  QPIR_RETURN_IF_ERROR(HadamardAll(session, kClient, reg_r));
  {
    QPIR_ASSIGN_OR_RETURN(const auto probs,
                          session.Probabilities(kClient, Concat({&reg_q, &reg_r})));
    result.success_probability = probs[db.entries[index]];
  }
  QPIR_ASSIGN_OR_RETURN(const uint64_t q_outcome, session.Measure(kClient, reg_q));
  if (q_outcome != 0) {
    abort("stage3", absl::StrCat("query register returned ", BitsText(q_outcome, ell)));
    session.NextRound();
    return finish();
  }
  QPIR_ASSIGN_OR_RETURN(const uint64_t block, session.Measure(kClient, reg_r));
  result.value = block;
  record["retrieved"] = block;
  session.NextRound();

  // Stage 4: rotated check of the server's ancilla.
  const int theta_bit = CoinFlip(session.rng());
  const double theta = theta_bit ? -std::numbers::pi / 4 : std::numbers::pi / 4;
  QPIR_RETURN_IF_ERROR(session.SendClassical(kClient, kServer, {BitsOf(theta_bit, 1)}, "theta"));
  QubitLabel measured = reg_anc[0];
  if (adversary.Deviates(kServer, "mixed_ancilla", session.round())) {
    QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"anc_fake", 1}));
    QPIR_ASSIGN_OR_RETURN(const auto fake, session.Register(kServer, "anc_fake"));
    if (CoinFlip(session.rng())) QPIR_RETURN_IF_ERROR(session.Apply(kServer, quantum::XGate{}, {fake[0]}));
    measured = fake[0];
    result.scratch_registers.push_back("anc_fake");
  }
  QPIR_ASSIGN_OR_RETURN(const int bit, session.MeasureRotated(kServer, measured, theta));
  QPIR_RETURN_IF_ERROR(session.SendClassical(kServer, kClient, {BitsOf(bit, 1)}, "verify"));
  QPIR_ASSIGN_OR_RETURN(const auto verify, session.LastReceived(kClient, "verify"));
  const double angle = PredictedAncillaAngle(r_string, claw.x0, claw.x1,
                                             static_cast<int>(d >> n), d & ((uint64_t{1} << n) - 1));
  const int expected = PredictedZeroProbability(angle, theta) >= 0.5 ? 0 : 1;
  record["stage4_theta"] = theta;
  record["stage4_bit"] = static_cast<int>(verify[0][0]);
  record["stage4_expected"] = expected;
  record["accepted"] = static_cast<int>(verify[0][0]) == expected;
  session.NextRound();
  return finish();
}

nlohmann::ordered_json VerificationBatch::ToJson() const {
  return {{"rounds", rounds},
          {"completed", completed},
          {"agreements", agreements},
          {"agreement_rate", agreement_rate},
          {"threshold", kBatchAcceptThreshold},
          {"accept", accept}};
}

absl::StatusOr<VerificationBatch> RunVerificationBatch(const AqpirProtocol& protocol,
                                                       const Database& db, uint64_t index,
                                                       const runtime::AdversaryModel& adversary,
                                                       int rounds, uint64_t seed) {
  if (rounds < 1) return absl::InvalidArgumentError("rounds must be at least 1");
  VerificationBatch batch;
  batch.rounds = rounds;
  for (int j = 0; j < rounds; ++j) {
    Rng rng = DeriveStream(seed, static_cast<uint64_t>(j));
    QPIR_ASSIGN_OR_RETURN(RunResult run, runtime::RunProtocol(protocol, db, index, adversary, rng));
    if (run.aborted()) continue;
    ++batch.completed;
    batch.agreements += run.record["accepted"].get<bool>();
  }
  batch.agreement_rate =
      batch.completed == 0 ? 0.0 : static_cast<double>(batch.agreements) / batch.completed;
  batch.accept = batch.completed >= kMinBatchRounds && batch.agreement_rate >= kBatchAcceptThreshold;
  return batch;
}

}  // namespace qpir::aqpir
