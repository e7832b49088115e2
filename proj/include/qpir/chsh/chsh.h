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

#ifndef QPIR_CHSH_CHSH_H_
#define QPIR_CHSH_CHSH_H_

#include <array>
#include <cstdint>
#include <numbers>
#include <string_view>

#include "absl/status/statusor.h"
#include "qpir/util/random.h"

namespace qpir::chsh {

inline constexpr double kClassicalBound = 0.75;
// cos^2(pi/8) = 1/2 + sqrt(2)/4.
inline constexpr double kQuantumValue = 0.5 + std::numbers::sqrt2 / 4.0;

enum class Strategy { kClassical, kQuantum };
std::string_view StrategyName(Strategy strategy);

struct ChshRound {
  int x = 0;
  int y = 0;
  int a = 0;
  int b = 0;
  bool won = false;
};

struct ChshStats {
  int64_t rounds = 0;
  int64_t wins = 0;
  double win_rate = 0.0;
  Strategy strategy = Strategy::kClassical;
};

// Rotated-basis angles indexed by the input bit.
struct MeasurementAngles {
  std::array<double, 2> alice = {0.0, std::numbers::pi / 2};
  std::array<double, 2> bob = {std::numbers::pi / 4, -std::numbers::pi / 4};
};

bool Wins(int x, int y, int a, int b);

// Deterministic a = b = 0 strategy on uniform inputs.
absl::StatusOr<ChshStats> PlayClassical(int64_t rounds, Rng& rng);
// Shared |Phi+> per round, both halves measured in the rotated basis.
absl::StatusOr<ChshStats> PlayQuantum(int64_t rounds, Rng& rng,
                                      const MeasurementAngles& angles = {});
absl::StatusOr<ChshRound> PlayQuantumRound(int x, int y, Rng& rng,
                                           const MeasurementAngles& angles = {});

// Exact Born-rule win probability for one input pair.
double QuantumWinProbability(int x, int y, const MeasurementAngles& angles = {});
// Best average win rate over all 16 deterministic strategy pairs.
double BestDeterministicWinRate();

struct ThresholdResult {
  bool accept = false;
  // win_rate minus the one-sided Hoeffding radius.
  double lower_bound = 0.0;
  int64_t minimum_rounds = 0;
};

// Smallest n with exp(-2 n excess^2) <= 1 - confidence.
int64_t MinimumRounds(double required_excess, double confidence);

// Accepts iff the Hoeffding lower confidence bound on the win probability is
// at least classical_bound + required_excess. Fails with FailedPrecondition
// when the sample is too small to ever certify the excess.
absl::StatusOr<ThresholdResult> ThresholdTest(const ChshStats& stats, double classical_bound,
                                              double required_excess, double confidence);

}  // namespace qpir::chsh

#endif  // QPIR_CHSH_CHSH_H_
