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

#ifndef QPIR_MULTISERVER_CUBE_H_
#define QPIR_MULTISERVER_CUBE_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "qpir/runtime/protocol.h"
#include "qpir/util/random.h"

namespace qpir::multiserver {

// Database of ell^d bits laid out as a d-dimensional cube. Flat index k and
// coordinates (i_1, ..., i_d) relate by k = sum_t i_t ell^(d-t), i.e. i_1 is
// the most significant digit. Coordinates are 0-based.
struct CubeShape {
  int ell = 2;
  int d = 1;

  absl::Status Validate() const;
  uint64_t size() const;
  std::vector<int> Decode(uint64_t flat) const;
  uint64_t Encode(std::span<const int> coords) const;
};

// Server sigma in {0,1}^d is named "server" followed by sigma_1 ... sigma_d.
std::string CubeServerName(uint32_t sigma, int d);
inline int SigmaBit(uint32_t sigma, int d, int t) { return (sigma >> (d - 1 - t)) & 1; }

struct CubeQuery {
  CubeShape shape;
  std::vector<int> target;
  std::vector<uint64_t> base;  // Q_t^0 as ell-bit masks

  // Q_t^bit; Q_t^1 flips the membership of target t.
  uint64_t Subset(int t, int bit) const;
  // The d subsets sent to server sigma.
  std::vector<uint64_t> ForServer(uint32_t sigma) const;
};

absl::StatusOr<CubeQuery> MakeCubeQuery(const CubeShape& shape, std::vector<int> target,
                                        std::vector<uint64_t> base);
absl::StatusOr<CubeQuery> GenerateCubeQuery(const CubeShape& shape, std::vector<int> target,
                                            Rng& rng);

// Parity of the subcube Q_1 x ... x Q_d.
absl::StatusOr<int> CubeAnswer(const runtime::Database& db, const CubeShape& shape,
                               std::span<const uint64_t> subsets);
// XOR of all 2^d answers; errors if any is missing.
absl::StatusOr<int> CubeReconstruct(std::span<const std::optional<int>> answers);

struct CubeCost {
  int64_t bits_up = 0;
  int64_t bits_down = 0;
};
// bits_up = 2^d * d * ell, bits_down = 2^d.
CubeCost ComputeCubeCost(const CubeShape& shape);

// 2^d purely classical servers. Client coins: the d base subsets, packed as
// d * ell bits (t-th subset in bits [t * ell, (t + 1) * ell)).
class CubeProtocol : public runtime::Protocol {
 public:
  explicit CubeProtocol(CubeShape shape) : shape_(shape) {}

  std::string_view name() const override { return "cube"; }
  std::vector<std::string> roles() const override;
  absl::Status ValidateDatabase(const runtime::Database& db) const override;
  uint64_t CoinSpace(const runtime::Database& db) const override;
  absl::StatusOr<runtime::RunResult> Run(const runtime::Database& db, uint64_t index,
                                         const runtime::AdversaryModel& adversary, Rng& rng,
                                         const runtime::RunOptions& options = {}) const override;

  const CubeShape& shape() const { return shape_; }

 private:
  CubeShape shape_;
};

struct CollusionOptions {
  int64_t samples = 10000;
  uint64_t seed = 1;
  // Enumerate exactly when ell^d * 2^(d ell) is at most this.
  uint64_t exact_limit = uint64_t{1} << 20;
  bool force_sampling = false;
};

struct CollusionReport {
  CubeShape shape;
  std::vector<uint32_t> coalition;
  // Coordinates on which coalition members received different subsets.
  int exposed = 0;
  // Probability that the coalition's best guess equals the whole index.
  double success = 0.0;
  double bound = 0.0;  // 2^-(d - exposed)
  double sigma = 0.0;  // binomial standard error at `bound`, when sampled
  bool exact = false;
  int64_t samples = 0;
  bool pass = false;

  nlohmann::ordered_json ToJson() const;
};

// Guessing success of colluding servers pooling their queries, with a
// uniformly random target index. Exact maximum a posteriori success when
// enumerable, otherwise a Monte Carlo estimate of the same MAP rule. Pass iff
// success <= bound (+ 3 sigma when sampled).
absl::StatusOr<CollusionReport> EvaluateCollusion(const CubeShape& shape,
                                                  std::vector<uint32_t> coalition,
                                                  const CollusionOptions& options = {});

}  // namespace qpir::multiserver

#endif  // QPIR_MULTISERVER_CUBE_H_
