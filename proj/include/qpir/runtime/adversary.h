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

#ifndef QPIR_RUNTIME_ADVERSARY_H_
#define QPIR_RUNTIME_ADVERSARY_H_

#include <set>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"

namespace qpir::runtime {

enum class AdversaryKind { kHonest, kSpecious, kInterceptResend, kPhaseTamper };

std::string_view AdversaryKindName(AdversaryKind kind);
absl::StatusOr<AdversaryKind> ParseAdversaryKind(std::string_view name);

// Who deviates, how, and when.
//
// Channel kinds (intercept_resend, phase_tamper) act on every quantum message
// the target party sends: intercept_resend measures each in-flight qubit in
// the computational basis, phase_tamper applies Z. Named deviations are
// interpreted by the protocol that the target party runs (e.g.
// "skip_uncompute", "flip_answer") or by the channel ("x_tamper",
// "h_tamper").
struct AdversaryModel {
  AdversaryKind kind = AdversaryKind::kHonest;
  double epsilon = 0.0;
  // Party the model controls; empty means every party.
  std::string target;
  // Rounds in which the model acts; empty means all rounds.
  std::set<int> rounds;
  std::set<std::string> deviations;

  static AdversaryModel Honest() { return {}; }
  static AdversaryModel Channel(AdversaryKind kind, std::string target);
  // Specious party applying the named protocol-level deviations.
  static AdversaryModel Deviating(std::string target, std::set<std::string> deviations,
                                  double epsilon = 0.0);

  bool Controls(std::string_view party) const;
  bool ActiveIn(int round) const;
  // True iff `party` runs deviation `name` in `round`.
  bool Deviates(std::string_view party, std::string_view name, int round) const;
  bool IsHonest() const { return kind == AdversaryKind::kHonest && deviations.empty(); }
};

}  // namespace qpir::runtime

#endif  // QPIR_RUNTIME_ADVERSARY_H_
