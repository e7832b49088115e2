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

#ifndef QPIR_HEQPIR_QHE_H_
#define QPIR_HEQPIR_QHE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "qpir/quantum/state_vector.h"
#include "qpir/util/random.h"

namespace qpir::heqpir {

// Per-qubit quantum one-time-pad key: the qubit carries X^x Z^z.
struct PauliKey {
  uint8_t x = 0;
  uint8_t z = 0;
  friend bool operator==(const PauliKey&, const PauliKey&) = default;
};

// A classically encrypted bit: value = plaintext XOR (XOR of the mask bits
// listed in `terms`). XOR-homomorphic and closed under plaintext scaling,
// which is all Clifford key updates need. Decryption needs the mask.
struct HeBit {
  uint64_t key_id = 0;
  uint8_t value = 0;
  // terms[j] = 1 iff mask bit j is folded in.
  std::vector<uint8_t> terms;
};

// On the wire an HeBit is its single value bit. The terms a real FHE
// ciphertext would carry internally are kept here instead, keyed by message
// tag, so that transcripts count one bit per encrypted bit.
class HeLedger {
 public:
  void Publish(const std::string& tag, const std::vector<HeBit>& bits);
  // Reattaches the published structure to the received value bits.
  absl::StatusOr<std::vector<HeBit>> Attach(const std::string& tag,
                                            const std::vector<uint8_t>& values) const;

 private:
  std::map<std::string, std::vector<HeBit>> published_;
};

// Public evaluation key. Grants homomorphic evaluation and nothing else.
class EvaluationKey {
 public:
  EvaluationKey() = default;
  EvaluationKey(uint64_t key_id, int slots, std::shared_ptr<HeLedger> ledger)
      : key_id_(key_id), slots_(slots), ledger_(std::move(ledger)) {}

  uint64_t key_id() const { return key_id_; }
  int slots() const { return slots_; }
  HeLedger& ledger() const { return *ledger_; }

  // Encryption of 0 with no mask terms, for accumulating sums.
  HeBit Zero() const;
  absl::StatusOr<HeBit> Xor(const HeBit& a, const HeBit& b) const;

 private:
  uint64_t key_id_ = 0;
  int slots_ = 0;
  std::shared_ptr<HeLedger> ledger_ = std::make_shared<HeLedger>();
};

// Secret key: the Pauli pads of the query qubits and the classical mask.
class SecretKey {
 public:
  SecretKey() = default;
  SecretKey(uint64_t key_id, std::vector<PauliKey> pads, std::vector<uint8_t> mask,
            std::shared_ptr<HeLedger> ledger = std::make_shared<HeLedger>())
      : key_id_(key_id), pads_(std::move(pads)), mask_(std::move(mask)), ledger_(std::move(ledger)) {}

  uint64_t key_id() const { return key_id_; }
  HeLedger& ledger() const { return *ledger_; }
  const std::vector<PauliKey>& pads() const { return pads_; }
  const std::vector<uint8_t>& mask() const { return mask_; }

  // Encrypts `bit` under mask slot `slot`.
  absl::StatusOr<HeBit> Encrypt(int bit, int slot) const;
  // DataLoss if the ciphertext was produced under another key.
  absl::StatusOr<int> Decrypt(const HeBit& bit) const;

  nlohmann::ordered_json ToJson() const;
  static absl::StatusOr<SecretKey> FromJson(const nlohmann::ordered_json& json);

 private:
  uint64_t key_id_ = 0;
  std::vector<PauliKey> pads_;
  std::vector<uint8_t> mask_;
  std::shared_ptr<HeLedger> ledger_;
};

struct QheKeys {
  EvaluationKey evk;
  SecretKey sk;
};

// Fresh keys for `qubits` padded qubits, with one mask slot per qubit. The
// key id is drawn from `rng`, so equal seeds give equal keys.
absl::StatusOr<QheKeys> KeyGen(int qubits, Rng& rng);
// Same, with the pad and mask bits taken from `coin` (x bits, then z bits,
// then mask bits, least significant first).
absl::StatusOr<QheKeys> KeyGenFromCoin(int qubits, uint64_t coin, uint64_t key_id);

// One-hot selector |e_row> over `width` qubits named `name`, each qubit
// padded with its key. Returned as one single-qubit factor per qubit.
absl::StatusOr<std::vector<quantum::StateVector>> EncryptSelector(const SecretKey& sk, int width,
                                                                  int row, std::string_view name);

// Encrypted X pads of the selector, one HeBit per qubit, sent with the query.
absl::StatusOr<std::vector<HeBit>> EncryptPads(const SecretKey& sk);

// X-key updates of the record qubits after CNOTs from selector qubit v to
// record c wherever table[v][c] = 1: update_c = XOR_v table[v][c] * x_v.
absl::StatusOr<std::vector<HeBit>> EvaluateKeyUpdates(const EvaluationKey& evk,
                                                      const std::vector<std::vector<uint8_t>>& table,
                                                      const std::vector<HeBit>& encrypted_pads);

// Strips the updated pads from the measured record bits.
absl::StatusOr<std::vector<int>> DecryptRecords(const SecretKey& sk,
                                                const std::vector<int>& measured,
                                                const std::vector<HeBit>& updates);

}  // namespace qpir::heqpir

#endif  // QPIR_HEQPIR_QHE_H_
