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
#include <map>

#include <gtest/gtest.h>

#include "qpir/multiserver/cube.h"
#include "qpir/multiserver/two_server.h"
#include "qpir/quantum/density_matrix.h"
#include "qpir/runtime/evaluators.h"

namespace qpir::multiserver {
namespace {

using runtime::AdversaryKind;
using runtime::AdversaryModel;
using runtime::Database;
using runtime::RunOptions;
using runtime::RunResult;

Database Blocks(std::vector<uint64_t> entries, int bits) {
  Database db;
  db.entries = std::move(entries);
  db.entry_bits = bits;
  return db;
}

std::vector<Database> AllBitDatabases(int n) {
  std::vector<Database> family;
  for (uint64_t mask = 0; mask < (uint64_t{1} << n); ++mask) {
    Database db;
    for (int k = 0; k < n; ++k) db.entries.push_back((mask >> k) & 1);
    family.push_back(db);
  }
  return family;
}

TEST(SubsetQueryTest, MembershipFlip) {
  // Elements 1 and 2 of [3] are bits 0 and 1.
  EXPECT_EQ(MakeTwoServerQuery(3, 1, 0b001)->partner, 0b011u);
  EXPECT_EQ(MakeTwoServerQuery(3, 1, 0b011)->partner, 0b001u);
  EXPECT_FALSE(MakeTwoServerQuery(3, 3, 0).ok());
}

TEST(SubsetQueryTest, PartnerMarginalUniform) {
  Rng rng(17);
  const int samples = 10000;
  std::map<uint64_t, int> counts;
  for (int s = 0; s < samples; ++s) ++counts[GenerateTwoServerQuery(3, 1, rng)->partner];
  double chi2 = 0.0;
  const double expected = samples / 8.0;
  for (uint64_t v = 0; v < 8; ++v) chi2 += std::pow(counts[v] - expected, 2) / expected;
  EXPECT_LT(chi2, 18.475);  // chi-square, 7 dof, p = 0.01
}

TEST(SubsetParityTest, Examples) {
  const Database db = Blocks({0b01, 0b11, 0b10}, 2);
  EXPECT_EQ(*SubsetParity(db, 0), 0u);
  EXPECT_EQ(*SubsetParity(db, 0b101), 0b11u);
  EXPECT_FALSE(SubsetParity(db, 0b1000).ok());
}

TEST(SubsetParityTest, PartnerParityRecoversTarget) {
  for (int ell = 1; ell <= 4; ++ell) {
    for (int m = 1; m <= 2; ++m) {
      const uint64_t values = uint64_t{1} << m;
      uint64_t total = 1;
      for (int k = 0; k < ell; ++k) total *= values;
      for (uint64_t code = 0; code < total; ++code) {
        Database db;
        db.entry_bits = m;
        for (uint64_t c = code; db.entries.size() < static_cast<size_t>(ell); c /= values) {
          db.entries.push_back(c % values);
        }
        for (int i = 0; i < ell; ++i) {
          for (uint64_t q = 0; q < (uint64_t{1} << ell); ++q) {
            EXPECT_EQ(*SubsetParity(db, q) ^ *SubsetParity(db, FlipMembership(q, i)), db.entries[i]);
          }
        }
      }
    }
  }
}

TEST(TwoServerTest, PerBitExactCorrectness) {
  const runtime::CorrectnessReport report =
      *runtime::EvaluateCorrectness(TwoServerProtocol(), AllBitDatabases(4), 0.0);
  EXPECT_EQ(report.inputs, 64);
  EXPECT_NEAR(report.min_success, 1.0, 1e-12);
  EXPECT_EQ(report.aborts, 0);
  EXPECT_TRUE(report.pass);
}

TEST(TwoServerTest, MultiBitBlocks) {
  Rng rng(4);
  for (TwoServerVariant variant : {TwoServerVariant::kPerBitZ, TwoServerVariant::kQftModN}) {
    const TwoServerProtocol protocol(variant);
    const Database db = Blocks({0b010, 0b111, 0b001}, 3);
    for (uint64_t i = 0; i < 3; ++i) {
      const RunResult run = *runtime::RunProtocol(protocol, db, i, AdversaryModel::Honest(), rng);
      ASSERT_FALSE(run.aborted());
      if (variant == TwoServerVariant::kPerBitZ) {
        EXPECT_EQ(*run.value, db.entries[i]);
      }
      EXPECT_EQ(run.transcript.qubit_cost(), 3 * 3);
      EXPECT_EQ(run.transcript.classical_cost(), 2 * 3);
    }
  }
}

TEST(TwoServerTest, QftVariantAddsInsteadOfXor) {
  // x_Q = 01 from Q = {1}; Q' = {1, 2} gives x_Q' = 01 xor 10 = 11.
  const Database db = Blocks({0b01, 0b10}, 2);
  const TwoServerProtocol protocol(TwoServerVariant::kQftModN);
  RunOptions options;
  options.coin = 0b01;
  Rng rng(2);
  const RunResult run = *runtime::RunProtocol(protocol, db, 1, AdversaryModel::Honest(), rng, options);
  ASSERT_FALSE(run.aborted());
  EXPECT_EQ(*run.value, 0u);  // (1 + 3) mod 4
  EXPECT_NEAR(run.success_probability, 0.0, 1e-12);
}

double AbortRate(const AdversaryModel& adversary, int trials) {
  const Database db = Database::FromBits({1, 0, 1, 1});
  TwoServerProtocol protocol;
  int aborts = 0;
  for (int k = 0; k < trials; ++k) {
    Rng rng = DeriveStream(99, static_cast<uint64_t>(k));
    aborts += runtime::RunProtocol(protocol, db, k % 4, adversary, rng)->aborted();
  }
  return static_cast<double>(aborts) / trials;
}

TEST(TwoServerTest, TamperingDetection) {
  EXPECT_EQ(AbortRate(AdversaryModel::Honest(), 200), 0.0);
  EXPECT_EQ(AbortRate(AdversaryModel::Deviating("server2", {"x_tamper"}), 200), 1.0);
  EXPECT_NEAR(AbortRate(AdversaryModel::Deviating("server2", {"h_tamper"}), 1000), 0.5, 0.05);
  // A Z on t only changes phases, which the computational-basis check on t
  // cannot see.
  EXPECT_EQ(AbortRate(AdversaryModel::Deviating("server2", {"z_tamper"}), 200), 0.0);
}

TEST(TwoServerTest, ServerViewsIndexIndependent) {
  for (int ell = 2; ell <= 4; ++ell) {
    Rng rng(ell);
    const Database db = Database::Random(static_cast<size_t>(ell), 2, rng);
    for (const char* role : {"server1", "server2"}) {
      const runtime::PrivacyReport report =
          *runtime::EvaluatePrivacy(TwoServerProtocol(), db, role, 0.0);
      EXPECT_TRUE(report.exhaustive);
      EXPECT_NEAR(report.max_distance, 0.0, 1e-9) << role << " ell=" << ell;
    }
  }
}

TEST(TwoServerTest, RelayRegisterCarriesNoPhase) {
  for (TwoServerVariant variant : {TwoServerVariant::kPerBitZ, TwoServerVariant::kQftModN}) {
    for (uint64_t x0 = 0; x0 < 4; ++x0) {
      const Database db = Blocks({x0, 3 - x0}, 2);
      RunOptions options;
      options.coin = 0b01;
      options.capture = {"server2"};
      Rng rng(1);
      const RunResult run =
          *runtime::RunProtocol(TwoServerProtocol(variant), db, 0, AdversaryModel::Honest(), rng, options);
      const runtime::CqState& view = run.views.at("server2");
      ASSERT_EQ(view.blocks().size(), 1u);
      const std::vector<quantum::QubitLabel> labels = {{"t", 0}, {"t", 1}, {"value2", 0}, {"value2", 1}};
      const auto rho = *quantum::DensityMatrix::Create(labels, view.blocks().begin()->second);
      const std::vector<quantum::QubitLabel> t = {{"t", 0}, {"t", 1}};
      const auto reduced = *quantum::PartialTrace(rho, t);
      EXPECT_TRUE(reduced.matrix().isApprox(quantum::Matrix::Identity(4, 4) / 4.0, 1e-9));
    }
  }
}

TEST(SpeciousnessTest, HonestCopyAndPhaseTamper) {
  const Database db = Database::FromBits({1, 0, 1});
  const TwoServerProtocol protocol;
  const auto honest = *runtime::EvaluateSpeciousness(protocol, db, 1, AdversaryModel::Honest(),
                                                     runtime::RecoveryMap::Identity());
  EXPECT_NEAR(honest.max_distance, 0.0, 1e-12);
  EXPECT_TRUE(honest.pass);

  const AdversaryModel copier = AdversaryModel::Deviating("server2", {"copy_query"});
  const auto copy = *runtime::EvaluateSpeciousness(protocol, db, 1, copier, runtime::RecoveryMap{});
  EXPECT_NEAR(copy.max_distance, 0.0, 1e-9);
  EXPECT_TRUE(copy.pass);
  EXPECT_FALSE(
      runtime::EvaluateSpeciousness(protocol, db, 1, copier, runtime::RecoveryMap::Identity()).ok());

  AdversaryModel tamper = AdversaryModel::Channel(AdversaryKind::kPhaseTamper, "server2");
  tamper.epsilon = 0.1;
  const auto tampered =
      *runtime::EvaluateSpeciousness(protocol, db, 1, tamper, runtime::RecoveryMap::Identity());
  EXPECT_GT(tampered.max_distance, 0.5);
  EXPECT_FALSE(tampered.pass);
}

TEST(CubeTest, IndexLayout) {
  const CubeShape shape{3, 2};
  EXPECT_EQ(shape.size(), 9u);
  EXPECT_EQ(shape.Decode(5), (std::vector<int>{1, 2}));
  for (uint64_t k = 0; k < 9; ++k) EXPECT_EQ(shape.Encode(shape.Decode(k)), k);
  EXPECT_EQ(CubeServerName(0b10, 2), "server10");
}

TEST(CubeTest, OneDimensionalHandExample) {
  const CubeShape shape{2, 1};
  const Database db = Database::FromBits({1, 0});
  const CubeQuery q = *MakeCubeQuery(shape, {0}, {0});
  const int a0 = *CubeAnswer(db, shape, q.ForServer(0));
  const int a1 = *CubeAnswer(db, shape, q.ForServer(1));
  EXPECT_EQ(a0, 0);
  EXPECT_EQ(a1, 1);
  const std::vector<std::optional<int>> answers = {a0, a1};
  EXPECT_EQ(*CubeReconstruct(answers), 1);
}

TEST(CubeTest, MissingAnswerIsError) {
  const std::vector<std::optional<int>> answers = {1, std::nullopt};
  EXPECT_EQ(CubeReconstruct(answers).status().code(), absl::StatusCode::kFailedPrecondition);
}

TEST(CubeTest, ExhaustiveTwoByTwo) {
  const CubeShape shape{2, 2};
  const CubeProtocol protocol(shape);
  for (const Database& db : AllBitDatabases(4)) {
    for (uint64_t i = 0; i < 4; ++i) {
      for (uint64_t coin = 0; coin < protocol.CoinSpace(db); ++coin) {
        RunOptions options;
        options.coin = coin;
        Rng rng(coin);
        const RunResult run = *runtime::RunProtocol(protocol, db, i, AdversaryModel::Honest(), rng, options);
        ASSERT_EQ(*run.value, db.entries[i]);
      }
    }
  }
}

TEST(CubeTest, AllZeroDatabase) {
  const CubeShape shape{3, 3};
  Database db;
  db.entries.assign(27, 0);
  Rng rng(8);
  const CubeQuery q = *GenerateCubeQuery(shape, {2, 0, 1}, rng);
  for (uint32_t sigma = 0; sigma < 8; ++sigma) EXPECT_EQ(*CubeAnswer(db, shape, q.ForServer(sigma)), 0);
}

TEST(CubeTest, Costs) {
  EXPECT_EQ(ComputeCubeCost({4, 1}).bits_up, 8);
  EXPECT_EQ(ComputeCubeCost({4, 1}).bits_down, 2);
  EXPECT_EQ(ComputeCubeCost({2, 3}).bits_up, 48);
  EXPECT_EQ(ComputeCubeCost({2, 3}).bits_down, 8);
  for (int ell : {2, 3, 5}) {
    const CubeCost c = ComputeCubeCost({ell, 1});
    EXPECT_EQ(c.bits_up + c.bits_down, 2 * ell + 2);
  }
  Rng rng(7);
  const Database db = Database::Random(9, 1, rng);
  const RunResult run = *runtime::RunProtocol(CubeProtocol({3, 2}), db, 5, AdversaryModel::Honest(), rng);
  EXPECT_EQ(run.transcript.classical_cost(), 28);
  EXPECT_EQ(run.transcript.qubit_cost(), 0);
  const RunResult single = *runtime::RunProtocol(CubeProtocol({4, 1}), Database::Random(4, 1, rng), 2,
                                                 AdversaryModel::Honest(), rng);
  EXPECT_EQ(single.transcript.classical_cost(), 10);
}

TEST(CubeTest, FlippedAnswerBreaksCorrectness) {
  runtime::CorrectnessOptions options;
  options.adversary = AdversaryModel::Deviating("server01", {"flip_answer"});
  const auto report =
      *runtime::EvaluateCorrectness(CubeProtocol({2, 2}), AllBitDatabases(4), 0.05, options);
  EXPECT_DOUBLE_EQ(report.min_success, 0.0);
  EXPECT_FALSE(report.pass);
}

TEST(CubePrivacyTest, EachServerViewIndexIndependent) {
  for (int d = 1; d <= 2; ++d) {
    for (int ell = 2; ell <= 3; ++ell) {
      const CubeShape shape{ell, d};
      const CubeProtocol protocol(shape);
      Rng rng(d * 10 + ell);
      const Database db = Database::Random(shape.size(), 1, rng);
      for (const std::string& role : protocol.roles()) {
        const auto report = *runtime::EvaluatePrivacy(protocol, db, role, 0.0);
        EXPECT_TRUE(report.exhaustive);
        EXPECT_NEAR(report.max_distance, 0.0, 1e-12) << role;
      }
    }
  }
}

TEST(CollusionTest, FullCoalitionLearnsEverything) {
  const auto report = *EvaluateCollusion({2, 2}, {0b00, 0b11});
  EXPECT_EQ(report.exposed, 2);
  EXPECT_NEAR(report.success, 1.0, 1e-12);
  EXPECT_TRUE(report.exact);
}

TEST(CollusionTest, ExactHalfForOneExposedCoordinate) {
  const auto report = *EvaluateCollusion({2, 2}, {0b00, 0b01});
  EXPECT_EQ(report.exposed, 1);
  EXPECT_NEAR(report.success, 0.5, 1e-12);
  EXPECT_TRUE(report.pass);
  const auto single = *EvaluateCollusion({2, 2}, {0b10});
  EXPECT_NEAR(single.success, 0.25, 1e-12);
}

TEST(CollusionTest, SampledThreeDimensions) {
  CollusionOptions options;
  options.force_sampling = true;
  for (const std::vector<uint32_t>& coalition :
       {std::vector<uint32_t>{0b000, 0b001}, std::vector<uint32_t>{0b000, 0b011}}) {
    const auto report = *EvaluateCollusion({2, 3}, coalition, options);
    EXPECT_FALSE(report.exact);
    EXPECT_EQ(report.samples, 10000);
    EXPECT_TRUE(report.pass) << report.success << " vs " << report.bound;
    EXPECT_NEAR(report.success, report.bound, 4 * report.sigma);
  }
  const auto exact = *EvaluateCollusion({2, 3}, {0b000, 0b001});
  EXPECT_TRUE(exact.exact);
  EXPECT_NEAR(exact.success, 0.25, 1e-12);
}

TEST(CollusionTest, LargerAlphabetStaysBelowBound) {
  const auto report = *EvaluateCollusion({3, 2}, {0b00, 0b10});
  EXPECT_TRUE(report.exact);
  EXPECT_NEAR(report.success, 1.0 / 3.0, 1e-12);
  EXPECT_TRUE(report.pass);
}

}  // namespace
}  // namespace qpir::multiserver
