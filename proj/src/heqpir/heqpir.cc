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
#include <string>

#include "absl/strings/str_cat.h"
#include "qpir/heqpir/qhe.h"
#include "qpir/quantum/gates.h"
#include "qpir/util/status_macros.h"

namespace qpir::heqpir {

using quantum::QubitLabel;
using runtime::Bits;
using runtime::Capability;
using runtime::Database;
using runtime::RunResult;
using runtime::Session;

namespace {

constexpr char kClient[] = "client";
constexpr char kServer[] = "server";
constexpr char kPadsTag[] = "pads";
constexpr char kUpdatesTag[] = "updates";

Bits ValueBits(const std::vector<HeBit>& bits) {
  Bits out;
  for (const HeBit& b : bits) out.push_back(b.value);
  return out;
}

}  // namespace

absl::StatusOr<GridLayout> GridLayout::ForSize(int64_t size) {
  if (size < 2 || size > kMaxDatabaseSize) {
    return absl::InvalidArgumentError(
        absl::StrCat("database size must lie in [2, ", kMaxDatabaseSize, "], got ", size));
  }
  int side = static_cast<int>(std::sqrt(static_cast<double>(size)));
  while (static_cast<int64_t>(side) * side < size) ++side;
  return GridLayout{size, side, side};
}

std::vector<std::vector<uint8_t>> LookupTable(const GridLayout& grid, const Database& db,
                                              bool checksum) {
  std::vector<std::vector<uint8_t>> table(grid.rows, std::vector<uint8_t>(grid.cols + checksum, 0));
  for (int64_t k = 0; k < grid.size && k < static_cast<int64_t>(db.size()); ++k) {
    table[grid.Row(k)][grid.Col(k)] = db.entries[k] & 1;
  }
  if (checksum) {
    for (auto& row : table) {
      for (int c = 0; c < grid.cols; ++c) row[grid.cols] ^= row[c];
    }
  }
  return table;
}

absl::Status HeqpirProtocol::ValidateDatabase(const Database& db) const {
  if (db.entry_bits != 1) return absl::InvalidArgumentError("records must be single bits");
  return GridLayout::ForSize(static_cast<int64_t>(db.size())).status();
}

uint64_t HeqpirProtocol::CoinSpace(const Database& db) const {
  auto grid = GridLayout::ForSize(static_cast<int64_t>(db.size()));
  if (!grid.ok() || 3 * grid->rows >= 64) return 0;
  return uint64_t{1} << (3 * grid->rows);
}

int64_t HeqpirProtocol::QubitCost(const GridLayout& grid) const {
  return grid.rows + grid.cols + (options_.checksum ? 1 : 0);
}

absl::StatusOr<RunResult> HeqpirProtocol::Run(const Database& db, uint64_t index,
                                              const runtime::AdversaryModel& adversary, Rng& rng,
                                              const runtime::RunOptions& options) const {
  QPIR_RETURN_IF_ERROR(ValidateDatabase(db));
  QPIR_ASSIGN_OR_RETURN(const GridLayout grid, GridLayout::ForSize(static_cast<int64_t>(db.size())));
  const int width = grid.cols + (options_.checksum ? 1 : 0);
  runtime::SessionOptions session_options;
  session_options.record_snapshots = options.record_snapshots;
  Session session(adversary, rng, session_options);
  QPIR_RETURN_IF_ERROR(session.AddParty(kClient, {Capability::kQheSecretKey}));
  QPIR_RETURN_IF_ERROR(session.AddParty(kServer, {Capability::kQheEvaluate}));
  RunResult result;
  result.record["protocol"] = "heqpir";
  result.record["rows"] = grid.rows;
  result.record["cols"] = grid.cols;
  result.record["checksum"] = options_.checksum;

  // Round 1: keys, padded selector and encrypted pads.
  QheKeys keys;
  if (options.coin) {
    QPIR_ASSIGN_OR_RETURN(keys, KeyGenFromCoin(grid.rows, *options.coin, session.rng()()));
  } else {
    QPIR_ASSIGN_OR_RETURN(keys, KeyGen(grid.rows, session.rng()));
  }
  session.Provide(Capability::kQheEvaluate, keys.evk);
  session.Provide(Capability::kQheSecretKey, keys.sk);
  QPIR_ASSIGN_OR_RETURN(const SecretKey* sk, session.Access<SecretKey>(kClient, Capability::kQheSecretKey));
  QPIR_ASSIGN_OR_RETURN(auto selector, EncryptSelector(*sk, grid.rows, grid.Row(index), "sel"));
  for (auto& qubit : selector) QPIR_RETURN_IF_ERROR(session.AddFactor(kClient, std::move(qubit)));
  QPIR_ASSIGN_OR_RETURN(const auto reg_sel, session.Register(kClient, "sel"));
  QPIR_ASSIGN_OR_RETURN(const auto pads, EncryptPads(*sk));
  sk->ledger().Publish(kPadsTag, pads);
  QPIR_RETURN_IF_ERROR(session.SendClassical(kClient, kServer, {ValueBits(pads)}, kPadsTag));
  QPIR_RETURN_IF_ERROR(session.SendQuantum(kClient, kServer, reg_sel, "query"));
  if (options.capture.count(kServer)) {
    QPIR_ASSIGN_OR_RETURN(result.views[kServer], session.CaptureView(kServer, reg_sel));
  }
  session.NextRound();

  // Round 2: multiplexed XOR lookup and homomorphic pad updates.
  QPIR_ASSIGN_OR_RETURN(const EvaluationKey* evk,
                        session.Access<EvaluationKey>(kServer, Capability::kQheEvaluate));
  const auto table = LookupTable(grid, db, options_.checksum);
  QPIR_RETURN_IF_ERROR(session.Allocate(kServer, {"rec", width}));
  QPIR_ASSIGN_OR_RETURN(const auto reg_rec, session.Register(kServer, "rec"));
  int64_t cnots = 0;
  for (int v = 0; v < grid.rows; ++v) {
    for (int c = 0; c < width; ++c) {
      if (!table[v][c]) continue;
      QPIR_RETURN_IF_ERROR(session.Apply(kServer, quantum::CnotGate{}, {reg_sel[v], reg_rec[c]}));
      ++cnots;
      // The control is a padded basis state, so the pair stays a product.
      const QubitLabel control[] = {reg_sel[v]};
      QPIR_RETURN_IF_ERROR(session.Compact(kServer, control));
    }
  }
  result.record["gate_count"] = cnots;
  QPIR_ASSIGN_OR_RETURN(const auto pad_bits, session.LastReceived(kServer, kPadsTag));
  QPIR_ASSIGN_OR_RETURN(const auto encrypted_pads, evk->ledger().Attach(kPadsTag, pad_bits[0]));
  QPIR_ASSIGN_OR_RETURN(const auto updates, EvaluateKeyUpdates(*evk, table, encrypted_pads));
  evk->ledger().Publish(kUpdatesTag, updates);
  QPIR_RETURN_IF_ERROR(session.SendQuantum(kServer, kClient, reg_rec, "answer"));
  QPIR_RETURN_IF_ERROR(session.SendClassical(kServer, kClient, {ValueBits(updates)}, kUpdatesTag));
  session.NextRound();

  // Round 3: decrypt the records and read the column.
  QPIR_ASSIGN_OR_RETURN(const auto update_bits, session.LastReceived(kClient, kUpdatesTag));
  QPIR_ASSIGN_OR_RETURN(const auto received_updates, sk->ledger().Attach(kUpdatesTag, update_bits[0]));
  std::vector<int> pad_of(width);
  for (int c = 0; c < width; ++c) {
    QPIR_ASSIGN_OR_RETURN(pad_of[c], sk->Decrypt(received_updates[c]));
  }
  const int col = grid.Col(static_cast<int64_t>(index));
  const int expected = static_cast<int>(db.entries[index] & 1);
  {
    // Exact success: the decrypted column is right and, with a checksum,
    // the decrypted row is consistent.
    QPIR_ASSIGN_OR_RETURN(const auto probs, session.Probabilities(kClient, reg_rec));
    double success = 0.0;
    for (uint64_t v = 0; v < probs.size(); ++v) {
      if (probs[v] == 0.0) continue;
      int parity = 0, bit = 0;
      for (int c = 0; c < width; ++c) {
        const int plain = static_cast<int>((v >> (width - 1 - c)) & 1) ^ pad_of[c];
        if (c == col) bit = plain;
        if (options_.checksum) parity ^= plain;
      }
      if (bit == expected && parity == 0) success += probs[v];
    }
    result.success_probability = success;
  }
  std::vector<int> measured(width);
  for (int c = 0; c < width; ++c) {
    const QubitLabel one[] = {reg_rec[c]};
    QPIR_ASSIGN_OR_RETURN(uint64_t bit, session.Measure(kClient, one));
    measured[c] = static_cast<int>(bit);
  }
  QPIR_ASSIGN_OR_RETURN(const auto plain, DecryptRecords(*sk, measured, received_updates));
  std::string row_text;
  for (int c = 0; c < grid.cols; ++c) row_text += plain[c] ? '1' : '0';
  result.record["decrypted_row"] = row_text;
  if (options_.checksum) {
    int parity = 0;
    for (int c = 0; c <= grid.cols; ++c) parity ^= plain[c];
    if (parity != 0) {
      result.aborted_at = "checksum";
      result.abort_reason = "decrypted row fails its parity record";
    }
  }
  if (!result.aborted()) {
    result.value = static_cast<uint64_t>(plain[col]);
    result.record["retrieved"] = plain[col];
  }
  session.NextRound();
  runtime::FinishRun(session, result);
  return result;
}

}  // namespace qpir::heqpir
