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

#include "qpir/runtime/transcript.h"

#include <openssl/evp.h>

#include <fstream>

#include "absl/strings/str_cat.h"
#include "json.hpp"

namespace qpir::runtime {
namespace {

void PutU32(std::string& out, uint32_t v) {
  for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
}

std::string Sha256Hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int k = 0; k < length; ++k) {
    hex.push_back(kHex[digest[k] >> 4]);
    hex.push_back(kHex[digest[k] & 0xf]);
  }
  return hex;
}

}  // namespace

Bits BitsOf(uint64_t value, int width) {
  Bits bits(static_cast<size_t>(width));
  for (int j = 0; j < width; ++j) bits[j] = (value >> j) & 1;
  return bits;
}

uint64_t ValueOf(const Bits& bits) {
  uint64_t value = 0;
  for (size_t j = 0; j < bits.size() && j < 64; ++j) value |= uint64_t{bits[j] & 1u} << j;
  return value;
}

std::string BitString(const Bits& bits) {
  std::string s;
  s.reserve(bits.size());
  for (uint8_t b : bits) s.push_back(b ? '1' : '0');
  return s;
}

int64_t Message::size_qubits() const {
  return kind == MessageKind::kQuantum ? static_cast<int64_t>(qubits.size()) : 0;
}

int64_t Message::size_bits() const {
  if (kind != MessageKind::kClassical) return 0;
  int64_t total = 0;
  for (const Bits& s : segments) total += static_cast<int64_t>(s.size());
  return total;
}

std::string CanonicalEncoding(const Message& message) {
  std::string out;
  if (message.kind == MessageKind::kClassical) {
    out.push_back('C');
    for (const Bits& segment : message.segments) {
      PutU32(out, static_cast<uint32_t>(segment.size()));
      for (size_t start = 0; start < segment.size(); start += 8) {
        uint8_t byte = 0;
        for (size_t j = start; j < segment.size() && j < start + 8; ++j) {
          byte |= static_cast<uint8_t>((segment[j] & 1) << (j - start));
        }
        out.push_back(static_cast<char>(byte));
      }
    }
  } else {
    out.push_back('Q');
    PutU32(out, static_cast<uint32_t>(message.qubits.size()));
    for (const auto& q : message.qubits) {
      PutU32(out, static_cast<uint32_t>(q.reg.size()));
      out += q.reg;
      PutU32(out, static_cast<uint32_t>(q.index));
    }
  }
  return out;
}

std::string PayloadDigest(const Message& message) { return Sha256Hex(CanonicalEncoding(message)); }

void Transcript::Append(Message message) {
  qubit_cost_ += message.size_qubits();
  classical_cost_ += message.size_bits();
  messages_.push_back(std::move(message));
}

std::string Transcript::ToJsonLines() const {
  std::string out;
  for (const Message& m : messages_) {
    nlohmann::ordered_json line;
    line["round"] = m.round;
    line["sender"] = m.sender;
    line["receiver"] = m.receiver;
    line["kind"] = m.kind == MessageKind::kQuantum ? "quantum" : "classical";
    line["size_qubits"] = m.size_qubits();
    line["size_bits"] = m.size_bits();
    line["payload_digest"] = PayloadDigest(m);
    line["tag"] = m.tag;
    nlohmann::ordered_json payload = nlohmann::ordered_json::array();
    if (m.kind == MessageKind::kClassical) {
      for (const Bits& s : m.segments) payload.push_back(BitString(s));
    } else {
      for (const auto& q : m.qubits) payload.push_back(absl::StrCat(q.reg, "[", q.index, "]"));
    }
    line["payload"] = std::move(payload);
    out += line.dump();
    out.push_back('\n');
  }
  return out;
}

absl::Status Transcript::WriteJsonLines(const std::string& path) const {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) return absl::UnavailableError(absl::StrCat("cannot open ", path));
  file << ToJsonLines();
  if (!file) return absl::DataLossError(absl::StrCat("write failed: ", path));
  return absl::OkStatus();
}

}  // namespace qpir::runtime
