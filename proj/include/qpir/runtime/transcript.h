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

#ifndef QPIR_RUNTIME_TRANSCRIPT_H_
#define QPIR_RUNTIME_TRANSCRIPT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "qpir/quantum/state_vector.h"

namespace qpir::runtime {

// Classical payload segment; element j is bit j (little-endian).
using Bits = std::vector<uint8_t>;

Bits BitsOf(uint64_t value, int width);
uint64_t ValueOf(const Bits& bits);
std::string BitString(const Bits& bits);

enum class MessageKind { kClassical, kQuantum };

struct Message {
  int round = 0;
  std::string sender;
  std::string receiver;
  MessageKind kind = MessageKind::kClassical;
  // Free-form name of the message (e.g. "query"), not part of the digest.
  std::string tag;
  std::vector<Bits> segments;
  std::vector<quantum::QubitLabel> qubits;

  int64_t size_qubits() const;
  int64_t size_bits() const;
};

// Byte encoding that the payload digest is computed over:
//   classical: 'C', then per segment a u32 LE bit count and the bits packed
//              eight per byte, least significant bit first;
//   quantum:   'Q', a u32 LE label count, then per label a u32 LE name
//              length, the name bytes and a u32 LE index.
std::string CanonicalEncoding(const Message& message);
// Lower-case hex SHA-256 of CanonicalEncoding.
std::string PayloadDigest(const Message& message);

// Append-only message log with running costs.
class Transcript {
 public:
  void Append(Message message);

  const std::vector<Message>& messages() const { return messages_; }
  int64_t qubit_cost() const { return qubit_cost_; }
  int64_t classical_cost() const { return classical_cost_; }

  // One JSON object per line: round, sender, receiver, kind, size_qubits,
  // size_bits, payload_digest, plus tag and a readable payload.
  std::string ToJsonLines() const;
  absl::Status WriteJsonLines(const std::string& path) const;

 private:
  std::vector<Message> messages_;
  int64_t qubit_cost_ = 0;
  int64_t classical_cost_ = 0;
};

}  // namespace qpir::runtime

#endif  // QPIR_RUNTIME_TRANSCRIPT_H_
