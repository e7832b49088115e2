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

#ifndef QPIR_HEQPIR_HEQPIR_H_
#define QPIR_HEQPIR_HEQPIR_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "qpir/runtime/protocol.h"

namespace qpir::heqpir {

inline constexpr int64_t kMaxDatabaseSize = 256;

// N one-bit records laid out on a square grid, row-major.
struct GridLayout {
  int64_t size = 0;
  int rows = 0;
  int cols = 0;

  static absl::StatusOr<GridLayout> ForSize(int64_t size);
  int Row(int64_t k) const { return static_cast<int>(k / cols); }
  int Col(int64_t k) const { return static_cast<int>(k % cols); }
};

// rows x (cols [+ 1]) lookup table; cells past the end of the database are
// 0. The optional last column holds each row's parity.
std::vector<std::vector<uint8_t>> LookupTable(const GridLayout& grid, const runtime::Database& db,
                                              bool checksum);

struct HeqpirOptions {
  // Append a parity record to each row so answer tampering is caught.
  bool checksum = false;
};

// Single-server retrieval through a Clifford-only quantum homomorphic scheme.
//
// The client one-time-pads a one-hot row selector and sends it with the
// classically encrypted X pads. The server XORs every record of each row
// into a fresh record register under control of that row's selector qubit,
// evaluates the pad updates homomorphically and returns the records with
// the encrypted updates. The client strips the pads and reads its column.
class HeqpirProtocol : public runtime::Protocol {
 public:
  explicit HeqpirProtocol(HeqpirOptions options = {}) : options_(options) {}

  std::string_view name() const override { return "heqpir"; }
  std::vector<std::string> roles() const override { return {"server"}; }
  absl::Status ValidateDatabase(const runtime::Database& db) const override;
  // Pad and mask bits: 3 per selector qubit.
  uint64_t CoinSpace(const runtime::Database& db) const override;
  absl::StatusOr<runtime::RunResult> Run(const runtime::Database& db, uint64_t index,
                                         const runtime::AdversaryModel& adversary, Rng& rng,
                                         const runtime::RunOptions& options = {}) const override;

  // Qubits on the wire: rows up, cols (+1) down.
  int64_t QubitCost(const GridLayout& grid) const;

 private:
  HeqpirOptions options_;
};

}  // namespace qpir::heqpir

#endif  // QPIR_HEQPIR_HEQPIR_H_
