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

#ifndef QPIR_RUNTIME_SESSION_H_
#define QPIR_RUNTIME_SESSION_H_

#include <any>
#include <functional>
#include <initializer_list>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_cat.h"
#include "qpir/quantum/joint_state.h"
#include "qpir/runtime/adversary.h"
#include "qpir/runtime/transcript.h"
#include "qpir/runtime/view.h"
#include "qpir/util/random.h"
#include "qpir/util/status_macros.h"

namespace qpir::runtime {

// Oracles and keys a party may be granted.
enum class Capability { kTcfEvaluate, kTcfTrapdoor, kQheEvaluate, kQheSecretKey };

std::string_view CapabilityName(Capability capability);

struct Snapshot {
  int round = 0;
  quantum::StateVector state;
};

struct SessionOptions {
  // Record the dense joint state at the end of every round.
  bool record_snapshots = false;
  // Snapshots are skipped when the joint state is larger than this.
  int snapshot_qubit_limit = 14;
  int qubit_cap = quantum::kDefaultQubitCap;
};

// One protocol execution: a shared JointState whose qubits are each owned by
// exactly one party, the channels between parties and the transcript.
//
// Every quantum operation names the acting party and fails with
// PermissionDenied if that party does not own all the qubits it touches.
// Quantum messages transfer ownership; an adversary controlling the sender
// gets to act on the qubits in flight.
class Session {
 public:
  Session(AdversaryModel adversary, Rng& rng, SessionOptions options = {});

  absl::Status AddParty(const std::string& name, std::set<Capability> capabilities = {});
  bool HasParty(std::string_view name) const;

  // Installs the resource behind a capability (e.g. a trapdoor).
  void Provide(Capability capability, std::any resource);
  absl::Status Require(std::string_view party, Capability capability) const;

  template <typename T>
  absl::StatusOr<const T*> Access(std::string_view party, Capability capability) const {
    QPIR_RETURN_IF_ERROR(Require(party, capability));
    auto it = resources_.find(capability);
    if (it == resources_.end()) {
      return absl::NotFoundError(
          absl::StrCat("no resource for ", std::string(CapabilityName(capability))));
    }
    const T* resource = std::any_cast<T>(&it->second);
    if (resource == nullptr) return absl::InternalError("resource has unexpected type");
    return resource;
  }

  absl::Status Allocate(std::string_view party, const quantum::RegisterSpec& spec);
  absl::Status AddFactor(std::string_view party, quantum::StateVector factor);
  // Labels of a register owned by `party`, sorted by index.
  absl::StatusOr<std::vector<quantum::QubitLabel>> Register(std::string_view party,
                                                            std::string_view name) const;

  absl::Status Apply(std::string_view party, const quantum::Gate& gate,
                     std::span<const quantum::QubitLabel> targets);
  absl::Status Apply(std::string_view party, const quantum::Gate& gate,
                     std::initializer_list<quantum::QubitLabel> targets) {
    return Apply(party, gate, std::span<const quantum::QubitLabel>(targets.begin(), targets.size()));
  }
  absl::Status ApplySingle(std::string_view party, const quantum::Mat2& u,
                           const quantum::QubitLabel& target);
  absl::Status ApplyXorOracle(std::string_view party, std::span<const quantum::QubitLabel> inputs,
                              std::span<const quantum::QubitLabel> outputs,
                              const std::function<uint64_t(uint64_t)>& f);
  absl::Status ApplyQft(std::string_view party, std::span<const quantum::QubitLabel> reg);
  absl::Status ApplyInverseQft(std::string_view party, std::span<const quantum::QubitLabel> reg);

  absl::StatusOr<uint64_t> Measure(std::string_view party,
                                   std::span<const quantum::QubitLabel> labels,
                                   double* probability = nullptr);
  absl::StatusOr<quantum::BellLabel> MeasureBell(std::string_view party,
                                                 const quantum::QubitLabel& a,
                                                 const quantum::QubitLabel& b);
  absl::StatusOr<int> MeasureRotated(std::string_view party, const quantum::QubitLabel& qubit,
                                     double theta);
  // Exact outcome distribution of a would-be measurement by `party`.
  absl::StatusOr<std::vector<double>> Probabilities(
      std::string_view party, std::span<const quantum::QubitLabel> labels) const;
  // Tries to factor a party's qubits out of the joint state; see JointState.
  absl::Status Compact(std::string_view party, std::span<const quantum::QubitLabel> group);

  absl::StatusOr<std::string> OwnerOf(const quantum::QubitLabel& label) const;
  std::vector<quantum::QubitLabel> OwnedBy(std::string_view party) const;

  absl::Status SendQuantum(std::string_view sender, std::string_view receiver,
                           std::vector<quantum::QubitLabel> labels, std::string tag);
  absl::Status SendClassical(std::string_view sender, std::string_view receiver,
                             std::vector<Bits> segments, std::string tag);
  // Payload of the most recent classical message `party` received under `tag`.
  absl::StatusOr<std::vector<Bits>> LastReceived(std::string_view party,
                                                 std::string_view tag) const;
  // Records a classical value the party learned locally.
  absl::Status Remember(std::string_view party, std::string entry);
  absl::StatusOr<std::vector<std::string>> Memory(std::string_view party) const;

  // Ends the current round (recording a snapshot if enabled).
  void NextRound();
  int round() const { return round_; }

  // The party's view: its classical memory as the record, and the reduced
  // state of `labels` (which it must own).
  absl::StatusOr<CqState> CaptureView(std::string_view party,
                                      std::span<const quantum::QubitLabel> labels) const;

  const quantum::JointState& state() const { return state_; }
  const Transcript& transcript() const { return transcript_; }
  const std::vector<Snapshot>& snapshots() const { return snapshots_; }
  const AdversaryModel& adversary() const { return adversary_; }
  Rng& rng() { return rng_; }

 private:
  struct Party {
    std::set<Capability> capabilities;
    std::vector<std::string> memory;
  };

  absl::StatusOr<const Party*> FindParty(std::string_view name) const;
  absl::Status CheckOwned(std::string_view party,
                          std::span<const quantum::QubitLabel> labels) const;
  absl::Status RegisterOwnership(std::string_view party,
                                 std::span<const quantum::QubitLabel> labels);
  absl::Status TransitHook(std::string_view sender, std::span<const quantum::QubitLabel> labels);

  AdversaryModel adversary_;
  Rng& rng_;
  SessionOptions options_;
  quantum::JointState state_;
  std::map<std::string, Party, std::less<>> parties_;
  std::map<quantum::QubitLabel, std::string> owner_;
  std::map<Capability, std::any> resources_;
  Transcript transcript_;
  std::vector<Snapshot> snapshots_;
  int round_ = 1;
};

}  // namespace qpir::runtime

#endif  // QPIR_RUNTIME_SESSION_H_
