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

#include <cmath>

#include <gtest/gtest.h>

namespace qpir::chsh {
namespace {

TEST(WinsTest, Predicate) {
  EXPECT_FALSE(Wins(1, 1, 0, 0));
  EXPECT_TRUE(Wins(1, 1, 1, 0));
  EXPECT_TRUE(Wins(0, 1, 0, 0));
  EXPECT_TRUE(Wins(1, 0, 1, 1));
}

TEST(ClassicalTest, WinRate) {
  Rng rng(1);
  const ChshStats stats = *PlayClassical(100000, rng);
  EXPECT_NEAR(stats.win_rate, 0.75, 0.01);
  EXPECT_EQ(stats.strategy, Strategy::kClassical);
}

TEST(ClassicalTest, DeterministicStrategiesMaxOutAtThreeQuarters) {
  EXPECT_DOUBLE_EQ(BestDeterministicWinRate(), 0.75);
}

TEST(QuantumTest, AnalyticWinPerInput) {
  const double expected = std::pow(std::cos(std::numbers::pi / 8), 2);
  EXPECT_NEAR(kQuantumValue, expected, 1e-12);
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      EXPECT_NEAR(QuantumWinProbability(x, y), expected, 1e-9) << x << y;
    }
  }
}

TEST(QuantumTest, SampledWinRate) {
  Rng rng(2);
  const ChshStats stats = *PlayQuantum(100000, rng);
  EXPECT_NEAR(stats.win_rate, 0.85355, 0.01);
}

TEST(QuantumTest, AllZeroAnglesMatchClassical) {
  MeasurementAngles angles;
  angles.alice = {0.0, 0.0};
  angles.bob = {0.0, 0.0};
  double average = 0.0;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) average += QuantumWinProbability(x, y, angles) / 4.0;
  }
  EXPECT_NEAR(average, 0.75, 1e-9);
}

TEST(QuantumTest, SameSeedSameOutcomes) {
  Rng a(77), b(77);
  for (int k = 0; k < 50; ++k) {
    const ChshRound ra = *PlayQuantumRound(k & 1, (k >> 1) & 1, a);
    const ChshRound rb = *PlayQuantumRound(k & 1, (k >> 1) & 1, b);
    EXPECT_EQ(ra.a, rb.a);
    EXPECT_EQ(ra.b, rb.b);
  }
}

TEST(QuantumTest, RejectsNonPositiveRounds) {
  Rng rng(3);
  EXPECT_FALSE(PlayQuantum(0, rng).ok());
  EXPECT_FALSE(PlayClassical(-1, rng).ok());
}

TEST(ThresholdTest, QuantumAcceptsClassicalRejects) {
  Rng rng(4);
  const ChshStats quantum = *PlayQuantum(10000, rng);
  const ChshStats classical = *PlayClassical(10000, rng);
  const ThresholdResult q = *ThresholdTest(quantum, kClassicalBound, 0.05, 0.99);
  const ThresholdResult c = *ThresholdTest(classical, kClassicalBound, 0.05, 0.99);
  EXPECT_TRUE(q.accept);
  EXPECT_FALSE(c.accept);
  EXPECT_LT(q.lower_bound, quantum.win_rate);
}

TEST(ThresholdTest, InsufficientRounds) {
  Rng rng(5);
  const ChshStats stats = *PlayQuantum(10, rng);
  const auto result = ThresholdTest(stats, kClassicalBound, 0.05, 0.999);
  EXPECT_EQ(result.status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(ThresholdTest, MinimumRoundsFormula) {
  EXPECT_EQ(MinimumRounds(0.05, 0.999), 1382);
  EXPECT_EQ(MinimumRounds(0.1, 0.99), static_cast<int64_t>(std::ceil(std::log(100.0) / 0.02)));
}

TEST(ThresholdTest, BadArguments) {
  ChshStats stats{100, 80, 0.8, Strategy::kQuantum};
  EXPECT_FALSE(ThresholdTest(stats, 0.75, 0.05, 1.0).ok());
  EXPECT_FALSE(ThresholdTest(stats, 0.75, 0.0, 0.9).ok());
}

}  // namespace
}  // namespace qpir::chsh
