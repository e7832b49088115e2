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

#include "qpir/runtime/session.h"

#include <utility>

namespace qpir::runtime {

using quantum::QubitLabel;

namespace {

std::string LabelName(const QubitLabel& q) { return absl::StrCat(q.reg, "[", q.index, "]"); }

}  // namespace

std::string_view CapabilityName(Capability capability) {
  switch (capability) {
    case Capability::kTcfEvaluate:
      return "tcf_evaluate";
    case Capability::kTcfTrapdoor:
      return "tcf_trapdoor";
    case Capability::kQheEvaluate:
      return "qhe_evaluate";
    case Capability::kQheSecretKey:
      return "qhe_secret_key";
  }
  return "unknown";
}

Session::Session(AdversaryModel adversary, Rng& rng, SessionOptions options)
    : adversary_(std::move(adversary)),
      rng_(rng),
      options_(options),
      state_(options.qubit_cap) {}

absl::Status Session::AddParty(const std::string& name, std::set<Capability> capabilities) {
  if (name.empty()) return absl::InvalidArgumentError("party name must be nonempty");
  if (!parties_.try_emplace(name, Party{std::move(capabilities), {}}).second) {
    return absl::AlreadyExistsError(absl::StrCat("party '", name, "' already exists"));
  }
  return absl::OkStatus();
}

bool Session::HasParty(std::string_view name) const { return parties_.find(name) != parties_.end(); }

absl::StatusOr<const Session::Party*> Session::FindParty(std::string_view name) const {
  auto it = parties_.find(name);
  if (it == parties_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown party '", std::string(name), "'"));
  }
  return &it->second;
}

void Session::Provide(Capability capability, std::any resource) {
  resources_[capability] = std::move(resource);
}

absl::Status Session::Require(std::string_view party, Capability capability) const {
  QPIR_ASSIGN_OR_RETURN(const Party* p, FindParty(party));
  if (p->capabilities.count(capability) == 0) {
    return absl::PermissionDeniedError(absl::StrCat("party '", std::string(party),
                                                    "' lacks capability ",
                                                    std::string(CapabilityName(capability))));
  }
  return absl::OkStatus();
}

absl::Status Session::CheckOwned(std::string_view party, std::span<const QubitLabel> labels) const {
  QPIR_RETURN_IF_ERROR(FindParty(party).status());
  for (const QubitLabel& q : labels) {
    auto it = owner_.find(q);
    if (it == owner_.end()) return absl::NotFoundError(absl::StrCat("no qubit ", LabelName(q)));
    if (it->second != party) {
      return absl::PermissionDeniedError(absl::StrCat("party '", std::string(party),
                                                      "' does not own ", LabelName(q),
                                                      " (owner '", it->second, "')"));
    }
  }
  return absl::OkStatus();
}

absl::Status Session::RegisterOwnership(std::string_view party,
                                        std::span<const QubitLabel> labels) {
  for (const QubitLabel& q : labels) owner_[q] = std::string(party);
  return absl::OkStatus();
}

absl::Status Session::Allocate(std::string_view party, const quantum::RegisterSpec& spec) {
  QPIR_RETURN_IF_ERROR(FindParty(party).status());
  QPIR_RETURN_IF_ERROR(state_.AddRegister(spec));
  QPIR_ASSIGN_OR_RETURN(std::vector<QubitLabel> labels, state_.Register(spec.name));
  return RegisterOwnership(party, labels);
}

absl::Status Session::AddFactor(std::string_view party, quantum::StateVector factor) {
  QPIR_RETURN_IF_ERROR(FindParty(party).status());
  const std::vector<QubitLabel> labels = factor.labels();
  QPIR_RETURN_IF_ERROR(state_.AddFactor(std::move(factor)));
  return RegisterOwnership(party, labels);
}

absl::StatusOr<std::vector<QubitLabel>> Session::Register(std::string_view party,
                                                          std::string_view name) const {
  QPIR_ASSIGN_OR_RETURN(std::vector<QubitLabel> labels, state_.Register(name));
  QPIR_RETURN_IF_ERROR(CheckOwned(party, labels));
  return labels;
}

absl::Status Session::Apply(std::string_view party, const quantum::Gate& gate,
                            std::span<const QubitLabel> targets) {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, targets));
  return state_.Apply(gate, targets);
}

absl::Status Session::ApplySingle(std::string_view party, const quantum::Mat2& u,
                                  const QubitLabel& target) {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, {&target, 1}));
  return state_.ApplySingle(u, target);
}

absl::Status Session::ApplyXorOracle(std::string_view party, std::span<const QubitLabel> inputs,
                                     std::span<const QubitLabel> outputs,
                                     const std::function<uint64_t(uint64_t)>& f) {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, inputs));
  QPIR_RETURN_IF_ERROR(CheckOwned(party, outputs));
  return state_.ApplyXorOracle(inputs, outputs, f);
}

absl::Status Session::ApplyQft(std::string_view party, std::span<const QubitLabel> reg) {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, reg));
  return state_.ApplyQft(reg);
}

absl::Status Session::ApplyInverseQft(std::string_view party, std::span<const QubitLabel> reg) {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, reg));
  return state_.ApplyInverseQft(reg);
}

absl::StatusOr<uint64_t> Session::Measure(std::string_view party, std::span<const QubitLabel> labels,
                                          double* probability) {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, labels));
  return state_.Measure(labels, rng_, probability);
}

absl::StatusOr<quantum::BellLabel> Session::MeasureBell(std::string_view party,
                                                        const QubitLabel& a, const QubitLabel& b) {
  const QubitLabel pair[] = {a, b};
  QPIR_RETURN_IF_ERROR(CheckOwned(party, pair));
  return state_.MeasureBell(a, b, rng_);
}

absl::StatusOr<int> Session::MeasureRotated(std::string_view party, const QubitLabel& qubit,
                                            double theta) {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, {&qubit, 1}));
  return state_.MeasureRotated(qubit, theta, rng_);
}

absl::StatusOr<std::vector<double>> Session::Probabilities(
    std::string_view party, std::span<const QubitLabel> labels) const {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, labels));
  return state_.Probabilities(labels);
}

absl::Status Session::Compact(std::string_view party, std::span<const QubitLabel> group) {
  QPIR_RETURN_IF_ERROR(CheckOwned(party, group));
  return state_.TrySplit(group).status();
}

absl::StatusOr<std::string> Session::OwnerOf(const QubitLabel& label) const {
  auto it = owner_.find(label);
  if (it == owner_.end()) return absl::NotFoundError(absl::StrCat("no qubit ", LabelName(label)));
  return it->second;
}

std::vector<QubitLabel> Session::OwnedBy(std::string_view party) const {
  std::vector<QubitLabel> owned;
  for (const QubitLabel& q : state_.labels()) {
    auto it = owner_.find(q);
    if (it != owner_.end() && it->second == party) owned.push_back(q);
  }
  return owned;
}

absl::Status Session::TransitHook(std::string_view sender, std::span<const QubitLabel> labels) {
  if (!adversary_.Controls(sender) || !adversary_.ActiveIn(round_)) return absl::OkStatus();
  for (const QubitLabel& q : labels) {
    switch (adversary_.kind) {
      case AdversaryKind::kInterceptResend:
        QPIR_RETURN_IF_ERROR(state_.Measure({&q, 1}, rng_).status());
        break;
      case AdversaryKind::kPhaseTamper:
        QPIR_RETURN_IF_ERROR(state_.Apply(quantum::ZGate{}, {q}));
        break;
      default:
        break;
    }
    if (adversary_.deviations.count("x_tamper")) {
      QPIR_RETURN_IF_ERROR(state_.Apply(quantum::XGate{}, {q}));
    }
    if (adversary_.deviations.count("h_tamper")) {
      QPIR_RETURN_IF_ERROR(state_.Apply(quantum::HGate{}, {q}));
    }
    if (adversary_.deviations.count("z_tamper")) {
      QPIR_RETURN_IF_ERROR(state_.Apply(quantum::ZGate{}, {q}));
    }
  }
  return absl::OkStatus();
}

absl::Status Session::SendQuantum(std::string_view sender, std::string_view receiver,
                                  std::vector<QubitLabel> labels, std::string tag) {
  QPIR_RETURN_IF_ERROR(CheckOwned(sender, labels));
  QPIR_RETURN_IF_ERROR(FindParty(receiver).status());
  QPIR_RETURN_IF_ERROR(TransitHook(sender, labels));
  QPIR_RETURN_IF_ERROR(RegisterOwnership(receiver, labels));
  Message m;
  m.round = round_;
  m.sender = std::string(sender);
  m.receiver = std::string(receiver);
  m.kind = MessageKind::kQuantum;
  m.tag = std::move(tag);
  m.qubits = std::move(labels);
  transcript_.Append(std::move(m));
  return absl::OkStatus();
}

absl::Status Session::SendClassical(std::string_view sender, std::string_view receiver,
                                    std::vector<Bits> segments, std::string tag) {
  QPIR_RETURN_IF_ERROR(FindParty(sender).status());
  QPIR_RETURN_IF_ERROR(FindParty(receiver).status());
  std::string entry = absl::StrCat(tag, "=");
  for (size_t k = 0; k < segments.size(); ++k) {
    absl::StrAppend(&entry, k ? "," : "", BitString(segments[k]));
  }
  parties_.find(receiver)->second.memory.push_back(std::move(entry));
  Message m;
  m.round = round_;
  m.sender = std::string(sender);
  m.receiver = std::string(receiver);
  m.kind = MessageKind::kClassical;
  m.tag = std::move(tag);
  m.segments = std::move(segments);
  transcript_.Append(std::move(m));
  return absl::OkStatus();
}

absl::StatusOr<std::vector<Bits>> Session::LastReceived(std::string_view party,
                                                        std::string_view tag) const {
  const auto& messages = transcript_.messages();
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->kind == MessageKind::kClassical && it->receiver == party && it->tag == tag) {
      return it->segments;
    }
  }
  return absl::NotFoundError(absl::StrCat("party '", std::string(party),
                                          "' received no message '", std::string(tag), "'"));
}

absl::Status Session::Remember(std::string_view party, std::string entry) {
  QPIR_RETURN_IF_ERROR(FindParty(party).status());
  parties_.find(party)->second.memory.push_back(std::move(entry));
  return absl::OkStatus();
}

absl::StatusOr<std::vector<std::string>> Session::Memory(std::string_view party) const {
  QPIR_ASSIGN_OR_RETURN(const Party* p, FindParty(party));
  return p->memory;
}

void Session::NextRound() {
  if (options_.record_snapshots && state_.num_qubits() <= options_.snapshot_qubit_limit) {
    auto dense = state_.ToStateVector();
    if (dense.ok()) snapshots_.push_back({round_, *std::move(dense)});
  }
  ++round_;
}

absl::StatusOr<CqState> Session::CaptureView(std::string_view party,
                                             std::span<const QubitLabel> labels) const {
  QPIR_ASSIGN_OR_RETURN(const Party* p, FindParty(party));
  QPIR_RETURN_IF_ERROR(CheckOwned(party, labels));
  std::string record;
  for (size_t k = 0; k < p->memory.size(); ++k) absl::StrAppend(&record, k ? "|" : "", p->memory[k]);
  CqState view;
  if (labels.empty()) {
    QPIR_RETURN_IF_ERROR(view.Add(record, quantum::Matrix::Identity(1, 1)));
    return view;
  }
  QPIR_ASSIGN_OR_RETURN(quantum::DensityMatrix rho, state_.ReducedState(labels));
  QPIR_RETURN_IF_ERROR(view.Add(record, rho.matrix()));
  return view;
}

}  // namespace qpir::runtime
