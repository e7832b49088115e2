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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qpir/info/bound_sweep.h"
#include "qpir/info/metrics.h"
#include "qpir/quantum/gates.h"

namespace qpir::info {
namespace {

using quantum::QubitLabel;
using quantum::StateVector;

constexpr double kEps = 1e-9;

Distribution Dist(std::vector<double> p) { return *Distribution::Create(std::move(p)); }

DensityMatrix Pure(std::vector<quantum::Complex> amps) {
  const int qubits = amps.size() == 2 ? 1 : 2;
  return DensityMatrix::FromPure(
      *StateVector::FromAmplitudes(quantum::RegisterLabels("s", qubits), std::move(amps)));
}

DensityMatrix Mixed() {
  return DensityMatrix::MaximallyMixed(quantum::RegisterLabels("s", 1));
}

const double kH = 1.0 / std::sqrt(2.0);

TEST(DistributionTest, Validation) {
  EXPECT_FALSE(Distribution::Create({0.5, 0.6}).ok());
  EXPECT_FALSE(Distribution::Create({1.5, -0.5}).ok());
  EXPECT_TRUE(Distribution::Create({0.25, 0.75}).ok());
}

TEST(ClassicalRelativeEntropyTest, Examples) {
  EXPECT_NEAR(*ClassicalRelativeEntropy(Dist({1, 0}), Dist({1, 0})), 0.0, kEps);
  EXPECT_NEAR(*ClassicalRelativeEntropy(Dist({1, 0}), Dist({0.5, 0.5})), 1.0, kEps);
  EXPECT_TRUE(std::isinf(*ClassicalRelativeEntropy(Dist({0.5, 0.5}), Dist({0, 1}))));
  EXPECT_FALSE(ClassicalRelativeEntropy(Dist({1, 0}), Dist({1, 0, 0})).ok());
}

TEST(PinskerTest, Examples) {
  auto same = *CheckPinsker(Dist({0.3, 0.7}), Dist({0.3, 0.7}));
  EXPECT_NEAR(same.lhs, 0.0, kEps);
  EXPECT_NEAR(same.rhs, 0.0, kEps);
  EXPECT_TRUE(same.holds);
  auto c = *CheckPinsker(Dist({1, 0}), Dist({0.5, 0.5}));
  EXPECT_NEAR(c.lhs, 1.0, kEps);
  EXPECT_NEAR(c.rhs, 1.0 / (2 * std::numbers::ln2), kEps);
  EXPECT_NEAR(c.rhs, 0.7213, 1e-4);
  EXPECT_TRUE(c.holds);
}

TEST(PinskerTest, RandomSweepHolds) {
  Rng rng(1);
  SweepOptions options;
  const SweepResult r = SweepClassicalPinsker(options, rng);
  EXPECT_EQ(r.instances, 1000);
  EXPECT_EQ(r.violations, 0);
  EXPECT_GT(r.infinite_cases, 0);
}

TEST(QuantumMeasuresTest, EntropyTraceDistanceFidelity) {
  EXPECT_NEAR(VonNeumannEntropy(Mixed()), 1.0, kEps);
  EXPECT_NEAR(VonNeumannEntropy(Pure({1, 0})), 0.0, kEps);
  EXPECT_NEAR(*TraceDistance(Pure({1, 0}), Pure({kH, kH})), 1.0 / std::sqrt(2.0), kEps);
  EXPECT_NEAR(*TraceDistance(Pure({1, 0}), Pure({kH, kH})), 0.70711, 1e-5);
  Rng rng(3);
  const DensityMatrix rho = RandomDensityMatrix(4, rng);
  EXPECT_NEAR(*Fidelity(rho, rho), 1.0, 1e-7);
  EXPECT_NEAR(*Fidelity(Pure({1, 0}), Pure({0, 1})), 0.0, kEps);
  // Root fidelity of pure states is the overlap modulus.
  EXPECT_NEAR(*Fidelity(Pure({1, 0}), Pure({kH, kH})), kH, kEps);
}

TEST(QuantumMeasuresTest, DimensionMismatchIsError) {
  EXPECT_FALSE(TraceDistance(Mixed(), Pure({1, 0, 0, 0})).ok());
  EXPECT_FALSE(QuantumRelativeEntropy(Mixed(), Pure({1, 0, 0, 0})).ok());
  EXPECT_FALSE(Fidelity(Mixed(), Pure({1, 0, 0, 0})).ok());
}

TEST(QuantumMeasuresTest, RelativeEntropySupportSentinel) {
  EXPECT_TRUE(std::isinf(*QuantumRelativeEntropy(Mixed(), Pure({1, 0}))));
  EXPECT_NEAR(*QuantumRelativeEntropy(Pure({1, 0}), Mixed()), 1.0, kEps);
}

TEST(QuantumPinskerTest, Examples) {
  auto same = *CheckQuantumPinsker(Mixed(), Mixed());
  EXPECT_NEAR(same.l1, 0.0, kEps);
  EXPECT_NEAR(same.bound, 0.0, 1e-6);
  EXPECT_TRUE(same.holds);
  auto c = *CheckQuantumPinsker(Pure({1, 0}), Mixed());
  EXPECT_NEAR(c.l1, 1.0, kEps);
  EXPECT_NEAR(c.bound, std::sqrt(2 * std::numbers::ln2), kEps);
  EXPECT_NEAR(c.bound, 1.1774, 1e-4);
  EXPECT_TRUE(c.holds);
}

TEST(QuantumPinskerTest, RandomSweepHolds) {
  Rng rng(2);
  const SweepResult r = SweepQuantumPinsker(SweepOptions{}, rng);
  EXPECT_EQ(r.instances, 1000);
  EXPECT_EQ(r.violations, 0);
  EXPECT_GT(r.infinite_cases, 0);
}

TEST(UhlmannTest, IdenticalPurifications) {
  Rng rng(4);
  const DensityMatrix rho = RandomQubitDensityMatrix(2, rng);
  auto psi = *quantum::Purify(rho, "anc");
  auto r = *UhlmannUnitary(psi, psi, rho.labels());
  EXPECT_NEAR(r.overlap_sq, 1.0, 1e-9);
}

TEST(UhlmannTest, AncillaSwapOfMaximallyMixedPurification) {
  // Bell pair over (sys, anc) versus the same pair with anc flipped.
  auto rho = DensityMatrix::MaximallyMixed(quantum::RegisterLabels("sys", 1));
  auto psi = *quantum::Purify(rho, "anc");
  StateVector phi = psi;
  ASSERT_TRUE(quantum::ApplyGate(phi, quantum::XGate{}, {{"anc", 0}}).ok());
  auto before = *psi.InnerProduct(phi);
  EXPECT_NEAR(std::abs(before), 0.0, kEps);
  auto r = *UhlmannUnitary(psi, phi, rho.labels());
  EXPECT_NEAR(r.overlap_sq, 1.0, 1e-9);
  // The optimizer undoes the flip.
  EXPECT_NEAR(std::abs(r.unitary(0, 1)), 1.0, 1e-9);
}

TEST(UhlmannTest, MismatchedAncillaIsError) {
  auto psi = *StateVector::Create({{"sys", 1}, {"anc", 1}});
  auto phi = *StateVector::Create({{"sys", 1}, {"anc", 2}});
  const QubitLabel sys[] = {{"sys", 0}};
  EXPECT_FALSE(UhlmannUnitary(psi, phi, sys).ok());
}

TEST(UhlmannTest, RandomSweepMatchesFidelityAndBound) {
  Rng rng(5);
  const SweepResult r = SweepUhlmann(SweepOptions{}, rng);
  EXPECT_EQ(r.instances, 1000);
  EXPECT_EQ(r.violations, 0);
}

TEST(HolevoTest, Examples) {
  EXPECT_NEAR(HolevoQuantity(*Ensemble::Uniform({Mixed(), Mixed()})), 0.0, kEps);
  EXPECT_NEAR(HolevoQuantity(*Ensemble::Uniform({Pure({1, 0}), Pure({0, 1})})), 1.0, kEps);
  const double c2 = std::pow(std::cos(std::numbers::pi / 8), 2);
  const double expected = -c2 * std::log2(c2) - (1 - c2) * std::log2(1 - c2);
  const double chi = HolevoQuantity(*Ensemble::Uniform({Pure({1, 0}), Pure({kH, kH})}));
  EXPECT_NEAR(chi, expected, kEps);
  EXPECT_NEAR(chi, 0.6009, 1e-4);
}

TEST(HolevoTest, NonnegativeOnRandomEnsembles) {
  Rng rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<DensityMatrix> states;
    for (int k = 0; k < 3; ++k) states.push_back(RandomDensityMatrix(4, rng, 1 + trial % 4));
    EXPECT_GE(HolevoQuantity(*Ensemble::Uniform(std::move(states))), -kEps);
  }
}

TEST(FanoTest, Examples) {
  EXPECT_NEAR(*BinaryEntropy(0.5), 1.0, kEps);
  EXPECT_NEAR(*BinaryEntropy(0.0), 0.0, kEps);
  EXPECT_NEAR(*BinaryEntropy(1.0), 0.0, kEps);
  EXPECT_NEAR(*FanoBound(0.11, 4), 0.7199, 1e-4);
  EXPECT_FALSE(BinaryEntropy(1.5).ok());
  EXPECT_FALSE(FanoBound(0.1, 1).ok());
}

TEST(CommunicationLowerBoundTest, IndexIndependentViewGivesN) {
  std::vector<DensityMatrix> views(4, Pure({kH, kH}));
  auto report = *CommunicationLowerBound(*Ensemble::Uniform(views), 8, 8.0);
  EXPECT_DOUBLE_EQ(report.bound_value, 8.0);
  EXPECT_TRUE(report.satisfied);
  EXPECT_NEAR(report.slack, 0.0, kEps);
}

TEST(CommunicationLowerBoundTest, OrthogonalViewsClampToZero) {
  // Against the average prior the divergence is exactly one bit.
  auto views = *Ensemble::Uniform({Pure({1, 0}), Pure({0, 1})});
  EXPECT_NEAR(*QuantumRelativeEntropy(views.states[0], views.Average()), 1.0, kEps);
  auto report = *CommunicationLowerBound(views, 2, 0.0);
  EXPECT_NEAR(report.bound_value, 0.0, kEps);
  EXPECT_TRUE(report.satisfied);
  auto avg = *CommunicationBoundAverage(views, 2, 0.0);
  EXPECT_NEAR(avg.bound_value, 0.0, kEps);
}

TEST(CommunicationLowerBoundTest, ViolationIsReported) {
  std::vector<DensityMatrix> views(2, Mixed());
  auto report = *CommunicationLowerBound(*Ensemble::Uniform(views), 4, 3.0);
  EXPECT_FALSE(report.satisfied);
  EXPECT_NEAR(report.slack, -1.0, kEps);
}

TEST(BoundSweepTest, OptionValidation) {
  Rng rng(1);
  SweepOptions bad;
  bad.max_dim = 16;
  EXPECT_FALSE(RunBoundSweeps(bad, rng).ok());
}

}  // namespace
}  // namespace qpir::info
