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

#include "qpir/chsh/chsh.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "qpir/quantum/measurement.h"
#include "qpir/quantum/state_vector.h"
#include "qpir/util/status_macros.h"

namespace qpir::chsh {
namespace {

using quantum::QubitLabel;
using quantum::StateVector;

const QubitLabel kAlice{"alice", 0};
const QubitLabel kBob{"bob", 0};

StateVector SharedPair() {
  const double h = 1.0 / std::sqrt(2.0);
  return *StateVector::FromAmplitudes({kAlice, kBob}, {h, 0.0, 0.0, h});
}

absl::Status CheckRounds(int64_t rounds) {
  if (rounds < 1) return absl::InvalidArgumentError("rounds must be at least 1");
  return absl::OkStatus();
}

ChshStats Finish(int64_t rounds, int64_t wins, Strategy strategy) {
  return ChshStats{rounds, wins, static_cast<double>(wins) / static_cast<double>(rounds),
                   strategy};
}

}  // namespace

std::string_view StrategyName(Strategy strategy) {
  return strategy == Strategy::kQuantum ? "quantum" : "classical";
}

bool Wins(int x, int y, int a, int b) { return (a ^ b) == (x & y); }

absl::StatusOr<ChshStats> PlayClassical(int64_t rounds, Rng& rng) {
  QPIR_RETURN_IF_ERROR(CheckRounds(rounds));
  int64_t wins = 0;
  for (int64_t k = 0; k < rounds; ++k) {
    const int x = CoinFlip(rng), y = CoinFlip(rng);
    wins += Wins(x, y, 0, 0);
  }
  return Finish(rounds, wins, Strategy::kClassical);
}

absl::StatusOr<ChshRound> PlayQuantumRound(int x, int y, Rng& rng,
                                           const MeasurementAngles& angles) {
  StateVector pair = SharedPair();
  QPIR_ASSIGN_OR_RETURN(int a, quantum::MeasureRotatedInPlace(pair, kAlice, angles.alice[x], rng));
  QPIR_ASSIGN_OR_RETURN(int b, quantum::MeasureRotatedInPlace(pair, kBob, angles.bob[y], rng));
  return ChshRound{x, y, a, b, Wins(x, y, a, b)};
}

absl::StatusOr<ChshStats> PlayQuantum(int64_t rounds, Rng& rng, const MeasurementAngles& angles) {
  QPIR_RETURN_IF_ERROR(CheckRounds(rounds));
  int64_t wins = 0;
  for (int64_t k = 0; k < rounds; ++k) {
    const int x = CoinFlip(rng), y = CoinFlip(rng);
    QPIR_ASSIGN_OR_RETURN(ChshRound round, PlayQuantumRound(x, y, rng, angles));
    wins += round.won;
  }
  return Finish(rounds, wins, Strategy::kQuantum);
}

double QuantumWinProbability(int x, int y, const MeasurementAngles& angles) {
  // Sum the joint Born probabilities of winning outcome pairs.
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    StateVector pair = SharedPair();
    (void)pair.ApplySingle(quantum::RotationYMatrix(-angles.alice[x]), kAlice);
    (void)pair.ApplySingle(quantum::RotationYMatrix(-angles.bob[y]), kBob);
    for (int b = 0; b < 2; ++b) {
      if (!Wins(x, y, a, b)) continue;
      const QubitLabel both[] = {kAlice, kBob};
      total += *pair.ProbabilityOf(both, static_cast<uint64_t>(a * 2 + b));
    }
  }
  return total;
}

double BestDeterministicWinRate() {
  // A deterministic player is a map {0,1} -> {0,1}: four per player.
  double best = 0.0;
  for (int fa = 0; fa < 4; ++fa) {
    for (int fb = 0; fb < 4; ++fb) {
      int wins = 0;
      for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) wins += Wins(x, y, (fa >> x) & 1, (fb >> y) & 1);
      }
      best = std::max(best, wins / 4.0);
    }
  }
  return best;
}

int64_t MinimumRounds(double required_excess, double confidence) {
  const double alpha = 1.0 - confidence;
  return static_cast<int64_t>(
      std::ceil(std::log(1.0 / alpha) / (2.0 * required_excess * required_excess)));
}

absl::StatusOr<ThresholdResult> ThresholdTest(const ChshStats& stats, double classical_bound,
                                              double required_excess, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    return absl::InvalidArgumentError("confidence must lie in (0, 1)");
  }
  if (!(required_excess > 0.0)) return absl::InvalidArgumentError("excess must be positive");
  const int64_t minimum = MinimumRounds(required_excess, confidence);
  if (stats.rounds < minimum) {
    return absl::FailedPreconditionError(
        absl::StrCat("insufficient rounds: ", stats.rounds, " < ", minimum, " needed for excess ",
                     required_excess, " at confidence ", confidence));
  }
  const double radius =
      std::sqrt(std::log(1.0 / (1.0 - confidence)) / (2.0 * static_cast<double>(stats.rounds)));
  const double lower = stats.win_rate - radius;
  return ThresholdResult{lower >= classical_bound + required_excess, lower, minimum};
}

}  // namespace qpir::chsh
