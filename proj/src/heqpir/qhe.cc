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

#include "qpir/heqpir/qhe.h"

#include "absl/strings/str_cat.h"
#include "qpir/util/status_macros.h"

namespace qpir::heqpir {
namespace {

constexpr int kMaxPaddedQubits = 21;  // three coin bits per qubit

absl::Status CheckQubits(int qubits) {
  if (qubits < 1 || qubits > kMaxPaddedQubits) {
    return absl::InvalidArgumentError(
        absl::StrCat("padded qubit count must lie in [1, ", kMaxPaddedQubits, "]"));
  }
  return absl::OkStatus();
}

absl::Status SameKey(uint64_t expected, uint64_t actual) {
  if (expected != actual) {
    return absl::DataLossError(absl::StrCat("decryption integrity: ciphertext key ", actual,
                                            " does not match key ", expected));
  }
  return absl::OkStatus();
}

}  // namespace

void HeLedger::Publish(const std::string& tag, const std::vector<HeBit>& bits) {
  published_[tag] = bits;
}

absl::StatusOr<std::vector<HeBit>> HeLedger::Attach(const std::string& tag,
                                                    const std::vector<uint8_t>& values) const {
  auto it = published_.find(tag);
  if (it == published_.end()) return absl::NotFoundError(absl::StrCat("no ciphertexts under ", tag));
  if (it->second.size() != values.size()) {
    return absl::DataLossError("decryption integrity: ciphertext count mismatch");
  }
  std::vector<HeBit> out = it->second;
  for (size_t j = 0; j < out.size(); ++j) out[j].value = values[j] & 1;
  return out;
}

HeBit EvaluationKey::Zero() const {
  return HeBit{key_id_, 0, std::vector<uint8_t>(static_cast<size_t>(slots_), 0)};
}

absl::StatusOr<HeBit> EvaluationKey::Xor(const HeBit& a, const HeBit& b) const {
  QPIR_RETURN_IF_ERROR(SameKey(key_id_, a.key_id));
  QPIR_RETURN_IF_ERROR(SameKey(key_id_, b.key_id));
  if (a.terms.size() != b.terms.size()) return absl::InvalidArgumentError("ciphertext width mismatch");
  HeBit out = a;
  out.value ^= b.value;
  for (size_t j = 0; j < out.terms.size(); ++j) out.terms[j] ^= b.terms[j];
  return out;
}

absl::StatusOr<HeBit> SecretKey::Encrypt(int bit, int slot) const {
  if (slot < 0 || slot >= static_cast<int>(mask_.size())) return absl::OutOfRangeError("no such mask slot");
  HeBit out{key_id_, static_cast<uint8_t>((bit & 1) ^ mask_[slot]),
            std::vector<uint8_t>(mask_.size(), 0)};
  out.terms[slot] = 1;
  return out;
}

absl::StatusOr<int> SecretKey::Decrypt(const HeBit& bit) const {
  QPIR_RETURN_IF_ERROR(SameKey(key_id_, bit.key_id));
  if (bit.terms.size() != mask_.size()) return absl::DataLossError("decryption integrity: width mismatch");
  int plain = bit.value & 1;
  for (size_t j = 0; j < mask_.size(); ++j) plain ^= bit.terms[j] & mask_[j];
  return plain;
}

nlohmann::ordered_json SecretKey::ToJson() const {
  nlohmann::ordered_json pads = nlohmann::ordered_json::array();
  for (const PauliKey& p : pads_) pads.push_back({p.x, p.z});
  return {{"key_id", key_id_}, {"pads", pads}, {"mask", mask_}};
}

absl::StatusOr<SecretKey> SecretKey::FromJson(const nlohmann::ordered_json& json) {
  try {
    std::vector<PauliKey> pads;
    for (const auto& p : json.at("pads")) {
      pads.push_back({static_cast<uint8_t>(p.at(0).get<int>() & 1),
                      static_cast<uint8_t>(p.at(1).get<int>() & 1)});
    }
    auto mask = json.at("mask").get<std::vector<uint8_t>>();
    return SecretKey(json.at("key_id").get<uint64_t>(), std::move(pads), std::move(mask));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(absl::StrCat("malformed key file: ", e.what()));
  }
}

absl::StatusOr<QheKeys> KeyGenFromCoin(int qubits, uint64_t coin, uint64_t key_id) {
  QPIR_RETURN_IF_ERROR(CheckQubits(qubits));
  std::vector<PauliKey> pads(static_cast<size_t>(qubits));
  std::vector<uint8_t> mask(static_cast<size_t>(qubits));
  for (int v = 0; v < qubits; ++v) {
    pads[v].x = (coin >> v) & 1;
    pads[v].z = (coin >> (qubits + v)) & 1;
    mask[v] = (coin >> (2 * qubits + v)) & 1;
  }
  auto ledger = std::make_shared<HeLedger>();
  return QheKeys{EvaluationKey(key_id, qubits, ledger),
                 SecretKey(key_id, std::move(pads), std::move(mask), ledger)};
}

absl::StatusOr<QheKeys> KeyGen(int qubits, Rng& rng) {
  QPIR_RETURN_IF_ERROR(CheckQubits(qubits));
  const uint64_t key_id = rng();
  return KeyGenFromCoin(qubits, UniformBits(rng, 3 * qubits), key_id);
}

absl::StatusOr<std::vector<quantum::StateVector>> EncryptSelector(const SecretKey& sk, int width,
                                                                  int row, std::string_view name) {
  if (width != static_cast<int>(sk.pads().size())) {
    return absl::InvalidArgumentError("selector width does not match the key");
  }
  if (row < 0 || row >= width) return absl::OutOfRangeError("row outside the selector");
  std::vector<quantum::StateVector> qubits;
  for (int v = 0; v < width; ++v) {
    const PauliKey& pad = sk.pads()[v];
    const int bit = (v == row ? 1 : 0) ^ pad.x;
    // Z^z X^x |e>: the Z pad only signs the |1> component.
    const quantum::Complex one = pad.z ? -1.0 : 1.0;
    std::vector<quantum::Complex> amps = bit ? std::vector<quantum::Complex>{0.0, one}
                                             : std::vector<quantum::Complex>{1.0, 0.0};
    QPIR_ASSIGN_OR_RETURN(auto factor,
                          quantum::StateVector::FromAmplitudes({{std::string(name), v}}, amps));
    qubits.push_back(std::move(factor));
  }
  return qubits;
}

absl::StatusOr<std::vector<HeBit>> EncryptPads(const SecretKey& sk) {
  std::vector<HeBit> out;
  for (size_t v = 0; v < sk.pads().size(); ++v) {
    QPIR_ASSIGN_OR_RETURN(HeBit bit, sk.Encrypt(sk.pads()[v].x, static_cast<int>(v)));
    out.push_back(std::move(bit));
  }
  return out;
}

absl::StatusOr<std::vector<HeBit>> EvaluateKeyUpdates(
    const EvaluationKey& evk, const std::vector<std::vector<uint8_t>>& table,
    const std::vector<HeBit>& encrypted_pads) {
  if (table.size() != encrypted_pads.size()) {
    return absl::InvalidArgumentError("table rows do not match the encrypted pads");
  }
  const size_t cols = table.empty() ? 0 : table[0].size();
  std::vector<HeBit> updates(cols, evk.Zero());
  for (size_t v = 0; v < table.size(); ++v) {
    if (table[v].size() != cols) return absl::InvalidArgumentError("ragged lookup table");
    for (size_t c = 0; c < cols; ++c) {
      if (!table[v][c]) continue;
      QPIR_ASSIGN_OR_RETURN(updates[c], evk.Xor(updates[c], encrypted_pads[v]));
    }
  }
  return updates;
}

absl::StatusOr<std::vector<int>> DecryptRecords(const SecretKey& sk,
                                                const std::vector<int>& measured,
                                                const std::vector<HeBit>& updates) {
  if (measured.size() != updates.size()) {
    return absl::DataLossError("decryption integrity: record count does not match the key updates");
  }
  std::vector<int> plain(measured.size());
  for (size_t c = 0; c < measured.size(); ++c) {
    QPIR_ASSIGN_OR_RETURN(const int pad, sk.Decrypt(updates[c]));
    plain[c] = (measured[c] & 1) ^ pad;
  }
  return plain;
}

}  // namespace qpir::heqpir
