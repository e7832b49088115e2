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

#ifndef QPIR_AQPIR_AQPIR_H_
#define QPIR_AQPIR_AQPIR_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "qpir/quantum/state_vector.h"
#include "qpir/runtime/protocol.h"
#include "qpir/util/random.h"

namespace qpir::aqpir {

inline constexpr double kDefaultBellThreshold = 0.05;
inline constexpr double kDefaultDelta = 0.05;
inline constexpr double kBatchAcceptThreshold = 0.75;
inline constexpr int kMinBatchRounds = 100;

// Shape of one run. The database holds `ell` blocks of `r` bits.
struct AqpirParams {
  int ell = 2;
  int r = 1;
  int tcf_bits = 2;
  // 0 selects ceil(sqrt(ell)).
  int detection_pairs = 0;
  double bell_threshold = kDefaultBellThreshold;
  double delta = kDefaultDelta;

  absl::Status Validate() const;
  int pairs() const;
  // Block packing for n database bits: r = ceil(sqrt(n)), ell = ceil(n / r).
  static AqpirParams ForDatabaseBits(int n);
};

// Packs a bit string into blocks of r bits; bit k of the string is bit k mod
// r (most significant first) of block k / r. Short final blocks pad with 0.
runtime::Database PackBlocks(const std::vector<int>& bits, int r);

// Inner product mod 2 of two bit strings given as integers.
int InnerProduct(uint64_t a, uint64_t b);

// Q register contents for R = x: bit j (Q_0 most significant) is <x, a^j>.
uint64_t QueryPattern(const runtime::Database& db, uint64_t x);

// 2^{-r/2} sum_x |x>_R |x>_R' |QueryPattern(x)>_Q as a standalone state.
absl::StatusOr<quantum::StateVector> PrepareQueryState(const runtime::Database& db);

// The ancilla state the client predicts after the server's Hadamard
// measurement, as a Bloch-circle angle phi: cos(phi/2)|0> + sin(phi/2)|1>.
// 0 and pi for |0>, |1>; +pi/2, -pi/2 for |+>, |->.
double PredictedAncillaAngle(uint64_t r_string, uint64_t x0, uint64_t x1, int d_branch,
                             uint64_t d_x);
// Probability that the server's theta-rotated measurement returns 0.
double PredictedZeroProbability(double ancilla_angle, double theta);

// Single-server protocol with detection pairs, Bell checks on a random half
// of the pairs, a trapdoor-claw query and a rotated-basis check of the
// server's ancilla.
//
// Stages, each a round (stage 3 spans two):
//   1  the server prepares the claw state and |Phi_A> plus Bell pairs, keeps
//      R and the pair halves T, and streams R', Q and B to the client in a
//      shuffled order; it also reports the measured image handle;
//   2  the server reveals where B sits in the stream, the client samples a
//      subset of pairs, receives their T halves and Bell-measures them;
//   3  the client imprints Z on Q_i and returns Q with a public random
//      string; the server computes the ancilla r.x, Hadamard-measures (b, x),
//      uncomputes every Q_j and returns R and Q; the client uncomputes R',
//      checks Q = 0 and decodes a^i from R;
//   4  the client picks theta in {pi/4, -pi/4}, the server measures its
//      ancilla at theta and the client checks the bit against its prediction.
//
// Server deviations: "skip_uncompute", "mixed_ancilla", "flip_answer".
class AqpirProtocol : public runtime::Protocol {
 public:
  explicit AqpirProtocol(AqpirParams params) : params_(params) {}

  std::string_view name() const override { return "aqpir"; }
  std::vector<std::string> roles() const override { return {"server"}; }
  absl::Status ValidateDatabase(const runtime::Database& db) const override;
  absl::StatusOr<runtime::RunResult> Run(const runtime::Database& db, uint64_t index,
                                         const runtime::AdversaryModel& adversary, Rng& rng,
                                         const runtime::RunOptions& options = {}) const override;

  const AqpirParams& params() const { return params_; }
  // Qubits sent when s pairs are sampled: 2r + 3 ell + k + s.
  int64_t QubitCost(int sampled) const;

 private:
  AqpirParams params_;
};

struct VerificationBatch {
  int rounds = 0;
  int completed = 0;  // runs that reached the rotated check
  int agreements = 0;
  double agreement_rate = 0.0;
  bool accept = false;

  nlohmann::ordered_json ToJson() const;
};

// Runs `rounds` independent protocol executions and scores the rotated
// check. Accepts iff at least kMinBatchRounds runs completed and the
// agreement rate is at least kBatchAcceptThreshold.
absl::StatusOr<VerificationBatch> RunVerificationBatch(const AqpirProtocol& protocol,
                                                       const runtime::Database& db,
                                                       uint64_t index,
                                                       const runtime::AdversaryModel& adversary,
                                                       int rounds, uint64_t seed);

}  // namespace qpir::aqpir

#endif  // QPIR_AQPIR_AQPIR_H_
