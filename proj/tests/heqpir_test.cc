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

#include "qpir/heqpir/heqpir.h"

#include <cmath>

#include <gtest/gtest.h>

#include "qpir/heqpir/qhe.h"
#include "qpir/quantum/density_matrix.h"
#include "qpir/quantum/joint_state.h"
#include "qpir/runtime/evaluators.h"

namespace qpir::heqpir {
namespace {

using runtime::AdversaryModel;
using runtime::Database;
using runtime::RunResult;

RunResult RunOnce(const HeqpirProtocol& protocol, const Database& db, uint64_t index,
                  uint64_t seed, const AdversaryModel& adversary = AdversaryModel::Honest()) {
  Rng rng(seed);
  auto run = runtime::RunProtocol(protocol, db, index, adversary, rng);
  EXPECT_TRUE(run.ok()) << run.status();
  return *std::move(run);
}

TEST(GridLayoutTest, Shapes) {
  const GridLayout g16 = *GridLayout::ForSize(16);
  EXPECT_EQ(g16.rows, 4);
  EXPECT_EQ(g16.cols, 4);
  const GridLayout g10 = *GridLayout::ForSize(10);
  EXPECT_EQ(g10.rows, 4);
  for (int64_t k = 0; k < 10; ++k) EXPECT_EQ(g10.Row(k) * g10.cols + g10.Col(k), k);
  EXPECT_FALSE(GridLayout::ForSize(1).ok());
  EXPECT_FALSE(GridLayout::ForSize(kMaxDatabaseSize + 1).ok());
}

TEST(KeyGenTest, SameSeedSameKeys) {
  Rng a(3), b(3);
  const QheKeys ka = *KeyGen(6, a), kb = *KeyGen(6, b);
  EXPECT_EQ(ka.sk.key_id(), kb.sk.key_id());
  EXPECT_EQ(ka.sk.pads(), kb.sk.pads());
  EXPECT_EQ(ka.sk.mask(), kb.sk.mask());
}

TEST(KeyGenTest, PadBitsUniform) {
  Rng rng(4);
  const int trials = 10000;
  int x_ones = 0, z_ones = 0;
  for (int t = 0; t < trials; ++t) {
    const QheKeys keys = *KeyGen(1, rng);
    x_ones += keys.sk.pads()[0].x;
    z_ones += keys.sk.pads()[0].z;
  }
  const double sigma = std::sqrt(0.25 / trials);
  EXPECT_NEAR(x_ones / static_cast<double>(trials), 0.5, 3 * sigma);
  EXPECT_NEAR(z_ones / static_cast<double>(trials), 0.5, 3 * sigma);
}

TEST(KeyGenTest, KeyFileRoundTrip) {
  Rng rng(5);
  const QheKeys keys = *KeyGen(4, rng);
  const SecretKey copy = *SecretKey::FromJson(keys.sk.ToJson());
  EXPECT_EQ(copy.key_id(), keys.sk.key_id());
  EXPECT_EQ(copy.pads(), keys.sk.pads());
  EXPECT_EQ(copy.mask(), keys.sk.mask());
  EXPECT_FALSE(SecretKey::FromJson(nlohmann::ordered_json{{"pads", 3}}).ok());
}

TEST(ClassicalLayerTest, EncryptXorDecrypt) {
  Rng rng(6);
  const QheKeys keys = *KeyGen(3, rng);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      const HeBit ea = *keys.sk.Encrypt(a, 0), eb = *keys.sk.Encrypt(b, 2);
      EXPECT_EQ(*keys.sk.Decrypt(*keys.evk.Xor(ea, eb)), a ^ b);
    }
  }
  EXPECT_EQ(*keys.sk.Decrypt(keys.evk.Zero()), 0);
}

TEST(ClassicalLayerTest, ForeignKeyIsIntegrityError) {
  Rng rng(7);
  const QheKeys one = *KeyGen(2, rng), other = *KeyGen(2, rng);
  const HeBit bit = *one.sk.Encrypt(1, 0);
  EXPECT_EQ(other.sk.Decrypt(bit).status().code(), absl::StatusCode::kDataLoss);
  EXPECT_EQ(other.evk.Xor(bit, bit).status().code(), absl::StatusCode::kDataLoss);
}

TEST(SelectorTest, EncryptDecryptRoundTrip) {
  Rng rng(8);
  for (int row = 0; row < 4; ++row) {
    const QheKeys keys = *KeyGen(4, rng);
    const auto qubits = *EncryptSelector(keys.sk, 4, row, "sel");
    ASSERT_EQ(qubits.size(), 4u);
    for (int v = 0; v < 4; ++v) {
      const int bit = std::abs(qubits[v].amplitudes()[1]) > 0.5 ? 1 : 0;
      EXPECT_EQ(bit ^ keys.sk.pads()[v].x, v == row ? 1 : 0);
    }
  }
  const QheKeys keys = *KeyGen(4, rng);
  EXPECT_EQ(EncryptSelector(keys.sk, 4, 4, "sel").status().code(), absl::StatusCode::kOutOfRange);
}

TEST(SelectorTest, AveragedOverKeysIsMaximallyMixed) {
  // Sum over every pad of a 2-qubit selector, for both rows.
  for (int row = 0; row < 2; ++row) {
    quantum::Matrix average = quantum::Matrix::Zero(4, 4);
    for (uint64_t coin = 0; coin < 64; ++coin) {
      const QheKeys keys = *KeyGenFromCoin(2, coin, 1);
      quantum::JointState state;
      const auto qubits = *EncryptSelector(keys.sk, 2, row, "sel");
      for (const auto& q : qubits) ASSERT_TRUE(state.AddFactor(q).ok());
      const auto labels = *state.Register("sel");
      average += state.ReducedState(labels)->matrix() / 64.0;
    }
    EXPECT_NEAR((average - quantum::Matrix::Identity(4, 4) / 4.0).norm(), 0.0, 1e-12);
  }
}

TEST(KeyUpdateTest, MatchesUnpaddedReference) {
  // Lookup on the padded selector equals the unpadded lookup XOR the updates.
  Rng rng(9);
  const std::vector<std::vector<uint8_t>> table = {{1, 0, 1}, {0, 1, 1}, {1, 1, 0}};
  for (int trial = 0; trial < 16; ++trial) {
    const QheKeys keys = *KeyGen(3, rng);
    const int row = trial % 3;
    const auto updates = *EvaluateKeyUpdates(keys.evk, table, *EncryptPads(keys.sk));
    for (int c = 0; c < 3; ++c) {
      int padded = 0;
      for (int v = 0; v < 3; ++v) padded ^= table[v][c] & ((v == row) ^ keys.sk.pads()[v].x);
      EXPECT_EQ(padded ^ *keys.sk.Decrypt(updates[c]), table[row][c]);
    }
  }
}

TEST(HeqpirRunTest, FourRecordExample) {
  const HeqpirProtocol protocol;
  const Database db = Database::FromBits({1, 0, 1, 1});
  const RunResult run = RunOnce(protocol, db, 2, 1);
  EXPECT_EQ(run.value, 1u);
  EXPECT_NEAR(run.success_probability, 1.0, 1e-12);
}

TEST(HeqpirRunTest, ExhaustiveFourRecords) {
  const HeqpirProtocol protocol;
  std::vector<Database> family;
  for (int bits = 0; bits < 16; ++bits) {
    family.push_back(Database::FromBits({bits & 1, (bits >> 1) & 1, (bits >> 2) & 1, (bits >> 3) & 1}));
  }
  const auto report = *runtime::EvaluateCorrectness(protocol, family, 0.0);
  EXPECT_TRUE(report.pass);
  EXPECT_NEAR(report.min_success, 1.0, 1e-12);
  EXPECT_EQ(report.aborts, 0);
}

TEST(HeqpirRunTest, SixteenRecordSweep) {
  const HeqpirProtocol protocol;
  Rng rng(10);
  for (int t = 0; t < 40; ++t) {
    const Database db = Database::Random(16, 1, rng);
    for (uint64_t k = 0; k < 16; ++k) {
      const RunResult run = RunOnce(protocol, db, k, 100 * t + k);
      ASSERT_EQ(run.value, db.entries[k]);
    }
  }
}

TEST(HeqpirRunTest, AllZeroAndParityDatabases) {
  const HeqpirProtocol protocol;
  std::vector<int> zeros(9, 0), parity(9);
  for (int k = 0; k < 9; ++k) parity[k] = k % 2;
  for (uint64_t k = 0; k < 9; ++k) {
    EXPECT_EQ(RunOnce(protocol, Database::FromBits(zeros), k, k).record["decrypted_row"], "000");
    EXPECT_EQ(RunOnce(protocol, Database::FromBits(parity), k, k).value, k % 2);
  }
}

TEST(HeqpirRunTest, UnevenSizePadsWithZeros) {
  const HeqpirProtocol protocol;
  const Database db = Database::FromBits({1, 1, 0, 1, 1});
  for (uint64_t k = 0; k < 5; ++k) EXPECT_EQ(RunOnce(protocol, db, k, k).value, db.entries[k]);
}

TEST(HeqpirRunTest, Costs) {
  const HeqpirProtocol protocol;
  for (int64_t n : {4, 16, 64, 256}) {
    Rng rng(11);
    const Database db = Database::Random(static_cast<size_t>(n), 1, rng);
    const RunResult run = RunOnce(protocol, db, static_cast<uint64_t>(n - 1), 12);
    const GridLayout grid = *GridLayout::ForSize(n);
    EXPECT_EQ(run.transcript.qubit_cost(), 2 * grid.rows);
    EXPECT_EQ(run.transcript.qubit_cost(), protocol.QubitCost(grid));
    EXPECT_EQ(run.transcript.classical_cost(), 2 * grid.rows);
    EXPECT_EQ(run.value, db.entries[n - 1]);
  }
}

TEST(HeqpirRunTest, SecretKeyDeniedToServer) {
  // The server's capability set reaches the evaluation key only.
  Rng rng(13);
  runtime::Session session(AdversaryModel::Honest(), rng);
  ASSERT_TRUE(session.AddParty("server", {runtime::Capability::kQheEvaluate}).ok());
  const QheKeys keys = *KeyGen(2, rng);
  session.Provide(runtime::Capability::kQheEvaluate, keys.evk);
  session.Provide(runtime::Capability::kQheSecretKey, keys.sk);
  EXPECT_TRUE(session.Access<EvaluationKey>("server", runtime::Capability::kQheEvaluate).ok());
  EXPECT_EQ(session.Access<SecretKey>("server", runtime::Capability::kQheSecretKey).status().code(),
            absl::StatusCode::kPermissionDenied);
}

TEST(HeqpirTamperTest, FlippedRecordsAreCaughtByChecksum) {
  const Database db = Database::FromBits({1, 0, 1, 1, 0, 0, 1, 0, 1, 1, 1, 0, 0, 1, 0, 0});
  const auto tamper = AdversaryModel::Deviating("server", {"x_tamper"}, 0.0);
  const RunResult plain = RunOnce(HeqpirProtocol(), db, 5, 3, tamper);
  ASSERT_FALSE(plain.aborted());
  EXPECT_EQ(plain.value, 1 - db.entries[5]);
  EXPECT_NEAR(plain.success_probability, 0.0, 1e-12);
  const RunResult checked = RunOnce(HeqpirProtocol({.checksum = true}), db, 5, 3, tamper);
  EXPECT_EQ(checked.aborted_at, "checksum");
  const RunResult honest = RunOnce(HeqpirProtocol({.checksum = true}), db, 5, 3);
  EXPECT_FALSE(honest.aborted());
  EXPECT_EQ(honest.value, db.entries[5]);
}

TEST(HeqpirPrivacyTest, QueryViewIndependentOfIndex) {
  for (int64_t n : {4, 16}) {
    Rng rng(14);
    const Database db = Database::Random(static_cast<size_t>(n), 1, rng);
    const auto report = *runtime::EvaluatePrivacy(HeqpirProtocol(), db, "server", 0.0);
    EXPECT_TRUE(report.exhaustive);
    EXPECT_LE(report.max_distance, 1e-9);
    // Each view is the maximally mixed selector.
    const int rows = GridLayout::ForSize(n)->rows;
    quantum::Matrix total = quantum::Matrix::Zero(1 << rows, 1 << rows);
    for (const auto& [record, block] : report.views[0].blocks()) total += block;
    EXPECT_NEAR((total - quantum::Matrix::Identity(1 << rows, 1 << rows) / (1 << rows)).norm(), 0.0,
                1e-9);
  }
}

TEST(HeqpirRunTest, InvalidInputs) {
  Rng rng(15);
  Database wide = Database::FromBits({1, 0, 1, 1});
  wide.entry_bits = 2;
  EXPECT_FALSE(runtime::RunProtocol(HeqpirProtocol(), wide, 0, AdversaryModel::Honest(), rng).ok());
  EXPECT_EQ(runtime::RunProtocol(HeqpirProtocol(), Database::FromBits({1, 0, 1, 1}), 4,
                                 AdversaryModel::Honest(), rng)
                .status()
                .code(),
            absl::StatusCode::kOutOfRange);
}

}  // namespace
}  // namespace qpir::heqpir
