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

#include "qpir/tcf/tcf.h"

#include <bit>
#include <map>
#include <set>

#include <gtest/gtest.h>

#include "qpir/quantum/gates.h"

namespace qpir::tcf {
namespace {

using quantum::QubitLabel;

TEST(GenerateTest, DomainRange) {
  Rng rng(1);
  EXPECT_FALSE(Generate(0, rng).ok());
  EXPECT_FALSE(Generate(13, rng).ok());
  EXPECT_TRUE(Generate(12, rng).ok());
  EXPECT_FALSE(GenerateWithShift(3, 0, rng).ok());
  EXPECT_FALSE(GenerateWithShift(3, 8, rng).ok());
}

TEST(GenerateTest, OneBitClaws) {
  Rng rng(2);
  auto [f, t] = *GenerateWithShift(1, 1, rng);
  std::set<std::pair<uint64_t, uint64_t>> claws;
  for (uint64_t x = 0; x < 2; ++x) {
    const ClawPair claw = *t.Invert(*f.Eval(0, x));
    claws.insert({claw.x0, claw.x1});
  }
  EXPECT_EQ(claws, (std::set<std::pair<uint64_t, uint64_t>>{{0, 1}, {1, 0}}));
}

TEST(GenerateTest, ConstructionIdentity) {
  Rng rng(3);
  for (int n = 1; n <= 8; ++n) {
    auto [f, t] = *Generate(n, rng);
    const uint64_t size = uint64_t{1} << n;
    for (uint64_t x = 0; x < size; ++x) {
      EXPECT_EQ(*f.Eval(0, x), *f.Eval(1, (x - t.shift()) & (size - 1)));
    }
  }
}

TEST(GenerateTest, SeedFixedInversion) {
  Rng rng(42);
  auto [f, t] = *Generate(3, rng);
  const ClawPair claw = *t.Invert(*f.Eval(0, 5));
  EXPECT_EQ(claw.x0, 5u);
  EXPECT_EQ(claw.x1, (5 - t.shift()) & 7);
}

TEST(GenerateTest, SameSeedSameInstance) {
  Rng a(9), b(9);
  auto [fa, ta] = *Generate(5, a);
  auto [fb, tb] = *Generate(5, b);
  EXPECT_EQ(ta.shift(), tb.shift());
  for (uint64_t x = 0; x < 32; ++x) EXPECT_EQ(*fa.Eval(1, x), *fb.Eval(1, x));
}

TEST(EvalTest, DomainViolation) {
  Rng rng(4);
  auto [f, t] = *Generate(3, rng);
  EXPECT_EQ(f.Eval(0, 8).status().code(), absl::StatusCode::kOutOfRange);
  EXPECT_FALSE(f.Eval(2, 0).ok());
}

TEST(EvalTest, TwoToOneExhaustive) {
  Rng rng(5);
  for (int n = 1; n <= 6; ++n) {
    auto [f, t] = *Generate(n, rng);
    std::map<uint64_t, std::set<int>> branches;
    std::map<uint64_t, int> hits;
    std::set<uint64_t> branch0;
    for (int b = 0; b < 2; ++b) {
      for (uint64_t x = 0; x < (uint64_t{1} << n); ++x) {
        const uint64_t tag = f.Eval(b, x)->tag;
        ++hits[tag];
        branches[tag].insert(b);
        if (b == 0) {
          EXPECT_TRUE(branch0.insert(tag).second) << "f_0 not injective";
        }
      }
    }
    EXPECT_EQ(hits.size(), uint64_t{1} << n);
    for (const auto& [tag, count] : hits) {
      EXPECT_EQ(count, 2);
      EXPECT_EQ(branches[tag].size(), 2u);
    }
  }
}

TEST(InvertTest, FixedShiftExample) {
  Rng rng(6);
  auto [f, t] = *GenerateWithShift(2, 3, rng);
  const ClawPair claw = *t.Invert(*f.Eval(1, 0));
  EXPECT_EQ(claw.x1, 0u);
  EXPECT_EQ(claw.x0, 3u);
}

TEST(InvertTest, RoundTripExhaustive) {
  Rng rng(7);
  for (int n = 1; n <= 4; ++n) {
    auto [f, t] = *Generate(n, rng);
    for (int b = 0; b < 2; ++b) {
      for (uint64_t x = 0; x < (uint64_t{1} << n); ++x) {
        const ImageHandle y = *f.Eval(b, x);
        const ClawPair claw = *t.Invert(y);
        EXPECT_EQ(*f.Eval(0, claw.x0), y);
        EXPECT_EQ(*f.Eval(1, claw.x1), y);
        EXPECT_EQ(b == 0 ? claw.x0 : claw.x1, x);
      }
    }
  }
}

TEST(InvertTest, UnknownImageIsError) {
  Rng rng(8);
  auto [f, t] = *Generate(3, rng);
  uint64_t bogus = 0;
  while (true) {
    bool clash = false;
    for (uint64_t x = 0; x < 8; ++x) clash |= f.Eval(0, x)->tag == bogus;
    if (!clash) break;
    ++bogus;
  }
  EXPECT_EQ(t.Invert(ImageHandle{bogus}).status().code(), absl::StatusCode::kNotFound);
}

TEST(ClawSuperpositionTest, NormAndCollapse) {
  Rng rng(10);
  for (int n = 1; n <= 4; ++n) {
    auto [f, t] = *Generate(n, rng);
    quantum::JointState state;
    ASSERT_TRUE(PrepareClawSuperposition(f, state).ok());
    EXPECT_NEAR(state.ToStateVector()->NormSquared(), 1.0, 1e-9);
    const auto y = *state.Register("y");
    const uint64_t code = *state.Measure(y, rng);
    const ClawPair claw = *t.Invert(*f.HandleForCode(code));
    std::vector<QubitLabel> bx = {{"b", 0}};
    const auto x = *state.Register("x");
    bx.insert(bx.end(), x.begin(), x.end());
    const auto probs = *state.Probabilities(bx);
    const uint64_t size = uint64_t{1} << n;
    for (uint64_t v = 0; v < probs.size(); ++v) {
      const bool support = v == claw.x0 || v == size + claw.x1;
      EXPECT_NEAR(probs[v], support ? 0.5 : 0.0, 1e-9);
    }
  }
}

TEST(ClawSuperpositionTest, HadamardOutcomeFixesRelativePhase) {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    auto [f, t] = *Generate(n, rng);
    quantum::JointState state;
    ASSERT_TRUE(PrepareClawSuperposition(f, state).ok());
    const ClawPair claw = *t.Invert(*f.HandleForCode(*state.Measure(*state.Register("y"), rng)));
    std::vector<QubitLabel> bx = {{"b", 0}};
    const auto x = *state.Register("x");
    bx.insert(bx.end(), x.begin(), x.end());
    for (const auto& q : bx) ASSERT_TRUE(state.Apply(quantum::HGate{}, {q}).ok());
    const uint64_t d = *state.Measure(bx, rng);
    const uint64_t d_branch = d >> n;
    const uint64_t d_x = d & ((uint64_t{1} << n) - 1);
    EXPECT_EQ(d_branch, static_cast<uint64_t>(std::popcount(d_x & (claw.x0 ^ claw.x1)) & 1));
  }
}

}  // namespace
}  // namespace qpir::tcf
