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

#include "qpir/runtime/adversary.h"

#include <utility>

#include "absl/strings/str_cat.h"

namespace qpir::runtime {

std::string_view AdversaryKindName(AdversaryKind kind) {
  switch (kind) {
    case AdversaryKind::kHonest:
      return "honest";
    case AdversaryKind::kSpecious:
      return "specious";
    case AdversaryKind::kInterceptResend:
      return "intercept_resend";
    case AdversaryKind::kPhaseTamper:
      return "phase_tamper";
  }
  return "unknown";
}

absl::StatusOr<AdversaryKind> ParseAdversaryKind(std::string_view name) {
  for (AdversaryKind kind : {AdversaryKind::kHonest, AdversaryKind::kSpecious,
                             AdversaryKind::kInterceptResend, AdversaryKind::kPhaseTamper}) {
    if (AdversaryKindName(kind) == name) return kind;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown adversary kind '", std::string(name), "'"));
}

AdversaryModel AdversaryModel::Channel(AdversaryKind kind, std::string target) {
  AdversaryModel model;
  model.kind = kind;
  model.target = std::move(target);
  return model;
}

AdversaryModel AdversaryModel::Deviating(std::string target, std::set<std::string> deviations,
                                         double epsilon) {
  AdversaryModel model;
  model.kind = AdversaryKind::kSpecious;
  model.target = std::move(target);
  model.deviations = std::move(deviations);
  model.epsilon = epsilon;
  return model;
}

bool AdversaryModel::Controls(std::string_view party) const {
  if (kind == AdversaryKind::kHonest && deviations.empty()) return false;
  return target.empty() || target == party;
}

bool AdversaryModel::ActiveIn(int round) const { return rounds.empty() || rounds.count(round) > 0; }

bool AdversaryModel::Deviates(std::string_view party, std::string_view name, int round) const {
  return Controls(party) && ActiveIn(round) && deviations.count(std::string(name)) > 0;
}

}  // namespace qpir::runtime
