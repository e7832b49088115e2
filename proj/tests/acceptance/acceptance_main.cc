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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "absl/strings/str_cat.h"
#include "qpir/aqpir/aqpir.h"
#include "qpir/chsh/chsh.h"
#include "qpir/cli/commands.h"
#include "qpir/cli/config.h"
#include "qpir/heqpir/heqpir.h"
#include "qpir/info/bound_sweep.h"
#include "qpir/info/metrics.h"
#include "qpir/multiserver/cube.h"
#include "qpir/multiserver/two_server.h"
#include "qpir/quantum/density_matrix.h"
#include "qpir/runtime/baseline.h"
#include "qpir/runtime/evaluators.h"

namespace qpir {
namespace {

using runtime::AdversaryKind;
using runtime::AdversaryModel;
using runtime::Database;
using runtime::Protocol;
using runtime::RunOptions;
using runtime::RunResult;

struct Verdict {
  bool pass = true;
  std::string detail;

  // Records a failed check; keeps the first few messages.
  void Check(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || detail.size() < 400) absl::StrAppend(&detail, detail.empty() ? "" : "; ", what);
    pass = false;
  }
  void Note(const std::string& what) {
    if (pass) absl::StrAppend(&detail, detail.empty() ? "" : ", ", what);
  }
};

std::string Fixed(double v, int digits = 4) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.*f", digits, v);
  return buffer;
}

Database BitsDatabase(uint64_t bits, size_t n) {
  Database db;
  for (size_t k = 0; k < n; ++k) db.entries.push_back((bits >> k) & 1);
  return db;
}

absl::StatusOr<RunResult> RunSeeded(const Protocol& protocol, const Database& db, uint64_t index,
                                    const AdversaryModel& adversary, uint64_t seed,
                                    const RunOptions& options = {}) {
  Rng rng(seed);
  return runtime::RunProtocol(protocol, db, index, adversary, rng, options);
}

Verdict Chsh() {
  Verdict v;
  Rng rng(2024);
  auto stats = chsh::PlayQuantum(100000, rng);
  if (!stats.ok()) {
    v.Check(false, std::string(stats.status().message()));
    return v;
  }
  v.Check(std::abs(stats->win_rate - chsh::kQuantumValue) <= 0.01,
          absl::StrCat("quantum win rate ", Fixed(stats->win_rate), " not within 0.01 of ",
                       Fixed(chsh::kQuantumValue, 5)));
  const double classical = chsh::BestDeterministicWinRate();
  v.Check(classical <= 0.75, absl::StrCat("deterministic strategy reached ", classical));
  v.Note(absl::StrCat("quantum ", Fixed(stats->win_rate), " vs ", Fixed(chsh::kQuantumValue, 5),
                      ", best deterministic ", Fixed(classical, 2)));
  return v;
}

Verdict CubeCorrectness() {
  Verdict v;
  int64_t runs = 0;
  for (int d = 1; d <= 3; ++d) {
    for (int ell = 2; ell <= 3; ++ell) {
      const multiserver::CubeShape shape{ell, d};
      const multiserver::CubeProtocol protocol(shape);
      const size_t n = shape.size();
      std::vector<Database> family;
      if (n <= 9) {
        for (uint64_t bits = 0; bits < (uint64_t{1} << n); ++bits) family.push_back(BitsDatabase(bits, n));
      } else {
        Rng rng(DeriveStream(31, static_cast<uint64_t>(d * 10 + ell)));
        for (int k = 0; k < 1000; ++k) family.push_back(Database::Random(n, 1, rng));
      }
      const bool enumerate_coins = d <= 2;
      int failures = 0;
      for (size_t f = 0; f < family.size(); ++f) {
        const Database& db = family[f];
        const uint64_t coins = enumerate_coins ? protocol.CoinSpace(db) : 1;
        for (uint64_t i = 0; i < n; ++i) {
          for (uint64_t coin = 0; coin < coins; ++coin) {
            RunOptions options;
            if (enumerate_coins) options.coin = coin;
            auto run = RunSeeded(protocol, db, i, AdversaryModel::Honest(), f * 1000003 + i, options);
            ++runs;
            if (!run.ok() || run->aborted() || run->value != db.entries[i]) ++failures;
          }
        }
      }
      v.Check(failures == 0, absl::StrCat(failures, " failures at d=", d, " ell=", ell));
    }
  }
  v.Note(absl::StrCat(runs, " runs, 0 failures"));
  return v;
}

Verdict CubePrivacy() {
  Verdict v;
  double worst = 0.0;
  for (int d = 1; d <= 2; ++d) {
    for (int ell = 2; ell <= 3; ++ell) {
      const multiserver::CubeProtocol protocol({ell, d});
      Rng rng(DeriveStream(41, static_cast<uint64_t>(d * 10 + ell)));
      const Database db = Database::Random(protocol.shape().size(), 1, rng);
      for (const std::string& role : protocol.roles()) {
        runtime::PrivacyOptions options;
        options.seed = 3;
        auto report = runtime::EvaluatePrivacy(protocol, db, role, 0.0, options);
        if (!report.ok()) {
          v.Check(false, std::string(report.status().message()));
          continue;
        }
        worst = std::max(worst, report->max_distance);
        v.Check(report->exhaustive, absl::StrCat("randomness not enumerated for ", role));
        v.Check(report->max_distance <= 1e-12,
                absl::StrCat(role, " at d=", d, " ell=", ell, " distance ", report->max_distance));
      }
    }
  }
  // Coalitions of d = 3 servers exposing t = 1 and t = 2 coordinates.
  const multiserver::CubeShape shape{2, 3};
  for (const std::vector<uint32_t>& coalition :
       {std::vector<uint32_t>{0b000, 0b001}, std::vector<uint32_t>{0b000, 0b011},
        std::vector<uint32_t>{0b000, 0b100}}) {
    multiserver::CollusionOptions options;
    options.samples = 10000;
    options.seed = 17;
    options.force_sampling = true;
    auto report = multiserver::EvaluateCollusion(shape, coalition, options);
    if (!report.ok()) {
      v.Check(false, std::string(report.status().message()));
      continue;
    }
    v.Check(report->pass, absl::StrCat("coalition with t=", report->exposed, " guessed ",
                                       Fixed(report->success), " > ", Fixed(report->bound),
                                       " + 3 sigma"));
    v.Note(absl::StrCat("t=", report->exposed, " success ", Fixed(report->success), " <= ",
                        Fixed(report->bound), "+3*", Fixed(report->sigma)));
  }
  v.Note(absl::StrCat("max single-server distance ", worst));
  return v;
}

Verdict TwoServer() {
  Verdict v;
  const multiserver::TwoServerProtocol protocol(multiserver::TwoServerVariant::kPerBitZ);
  double min_success = 1.0;
  int honest_aborts = 0;
  for (size_t n = 2; n <= 4; ++n) {
    for (uint64_t bits = 0; bits < (uint64_t{1} << n); ++bits) {
      const Database db = BitsDatabase(bits, n);
      for (uint64_t i = 0; i < n; ++i) {
        for (uint64_t coin = 0; coin < protocol.CoinSpace(db); ++coin) {
          RunOptions options;
          options.coin = coin;
          auto run = RunSeeded(protocol, db, i, AdversaryModel::Honest(), coin, options);
          if (!run.ok()) {
            v.Check(false, std::string(run.status().message()));
            return v;
          }
          honest_aborts += run->aborted();
          min_success = std::min(min_success, run->success_probability);
          v.Check(run->value == db.entries[i], absl::StrCat("wrong entry n=", n, " i=", i));
        }
      }
    }
  }
  v.Check(std::abs(min_success - 1.0) <= 1e-9, absl::StrCat("min success ", min_success));
  v.Check(honest_aborts == 0, absl::StrCat(honest_aborts, " honest aborts"));
  const Database db = BitsDatabase(0b1011, 4);
  const AdversaryModel tamper = AdversaryModel::Deviating("server2", {"z_tamper"});
  int aborts = 0;
  const int trials = 1000;
  for (int k = 0; k < trials; ++k) {
    auto run = RunSeeded(protocol, db, k % 4, tamper, DeriveStream(77, k)());
    aborts += run.ok() && run->aborted();
  }
  const double rate = static_cast<double>(aborts) / trials;
  v.Check(rate >= 0.5, absl::StrCat("Z-tamper abort rate ", Fixed(rate, 3), " < 0.5"));
  v.Note(absl::StrCat("exact success 1 on all inputs, Z-tamper abort rate ", Fixed(rate, 3)));
  return v;
}

Verdict Aqpir() {
  Verdict v;
  double min_success = 1.0;
  for (int ell = 2; ell <= 4; ++ell) {
    for (int r = 1; r <= 2; ++r) {
      aqpir::AqpirParams params;
      params.ell = ell;
      params.r = r;
      const aqpir::AqpirProtocol protocol(params);
      std::vector<Database> family;
      for (uint64_t bits = 0; bits < (uint64_t{1} << (ell * r)); ++bits) {
        Database db;
        db.entry_bits = r;
        for (int j = 0; j < ell; ++j) db.entries.push_back((bits >> (j * r)) & ((1u << r) - 1));
        family.push_back(db);
      }
      runtime::CorrectnessOptions options;
      options.seed = static_cast<uint64_t>(ell * 10 + r);
      auto report = runtime::EvaluateCorrectness(protocol, family, aqpir::kDefaultDelta, options);
      if (!report.ok()) {
        v.Check(false, std::string(report.status().message()));
        continue;
      }
      min_success = std::min(min_success, report->min_success);
      v.Check(report->pass, absl::StrCat("correctness ", report->min_success, " at ell=", ell, " r=", r));
    }
  }
  double worst = 0.0;
  for (const auto& [ell, r] : {std::pair{2, 1}, std::pair{4, 2}}) {
    aqpir::AqpirParams params;
    params.ell = ell;
    params.r = r;
    const aqpir::AqpirProtocol protocol(params);
    Rng rng(ell);
    const Database db = Database::Random(static_cast<size_t>(ell), r, rng);
    runtime::PrivacyOptions options;
    options.samples = 48;
    options.seed = 5;
    auto report = runtime::EvaluatePrivacy(protocol, db, "server", 0.0, options);
    if (!report.ok()) {
      v.Check(false, std::string(report.status().message()));
      continue;
    }
    worst = std::max(worst, report->max_distance);
    v.Check(report->max_distance <= 1e-9, absl::StrCat("server view distance ", report->max_distance));
  }
  std::string detection;
  for (int pairs : {2, 4, 8}) {
    aqpir::AqpirParams params;
    params.tcf_bits = 1;
    params.detection_pairs = pairs;
    const aqpir::AqpirProtocol protocol(params);
    AdversaryModel adversary = AdversaryModel::Channel(AdversaryKind::kInterceptResend, "server");
    adversary.rounds = {1};
    Database db;
    db.entries = {1, 0};
    int aborts = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
      auto run = RunSeeded(protocol, db, t % 2, adversary, DeriveStream(91, t)());
      aborts += run.ok() && run->aborted_at == "stage2";
    }
    const double rate = static_cast<double>(aborts) / trials;
    const double expected = 1.0 - std::pow(0.75, pairs);
    v.Check(std::abs(rate - expected) <= 0.05,
            absl::StrCat("intercept-resend with ", pairs, " pairs detected ", Fixed(rate, 3),
                         ", expected ", Fixed(expected, 3)));
    absl::StrAppend(&detection, detection.empty() ? "" : " ", pairs, ":", Fixed(rate, 3), "/",
                    Fixed(expected, 3));
  }
  aqpir::AqpirParams params;
  params.tcf_bits = 2;
  const aqpir::AqpirProtocol protocol(params);
  Database db;
  db.entries = {1, 0};
  auto honest = aqpir::RunVerificationBatch(protocol, db, 0, AdversaryModel::Honest(), 200, 7);
  auto mixed = aqpir::RunVerificationBatch(
      protocol, db, 0, AdversaryModel::Deviating("server", {"mixed_ancilla"}), 200, 7);
  if (!honest.ok() || !mixed.ok()) {
    v.Check(false, "verification batch failed to run");
    return v;
  }
  v.Check(honest->agreement_rate >= 0.80 && honest->accept,
          absl::StrCat("honest acceptance ", Fixed(honest->agreement_rate, 3)));
  v.Check(std::abs(mixed->agreement_rate - 0.5) <= 0.05 && !mixed->accept,
          absl::StrCat("mixed-ancilla acceptance ", Fixed(mixed->agreement_rate, 3)));
  v.Note(absl::StrCat("min success ", Fixed(min_success, 6), ", view distance ", worst,
                      ", detection ", detection, ", check honest ", Fixed(honest->agreement_rate, 3),
                      " mixed ", Fixed(mixed->agreement_rate, 3)));
  return v;
}

Verdict Heqpir() {
  Verdict v;
  const heqpir::HeqpirProtocol protocol;
  int64_t runs = 0;
  auto round_trip = [&](const Database& db, uint64_t seed) {
    for (uint64_t k = 0; k < db.size(); ++k) {
      auto run = RunSeeded(protocol, db, k, AdversaryModel::Honest(), seed * 131 + k);
      ++runs;
      v.Check(run.ok() && !run->aborted() && run->value == db.entries[k] &&
                  std::abs(run->success_probability - 1.0) <= 1e-9,
              absl::StrCat("round trip failed at N=", db.size(), " k=", k));
    }
  };
  for (uint64_t bits = 0; bits < 16; ++bits) round_trip(BitsDatabase(bits, 4), bits);
  Rng rng(57);
  for (int k = 0; k < 1000; ++k) round_trip(Database::Random(16, 1, rng), 100 + k);
  double worst = 0.0;
  for (size_t n : {4, 16}) {
    Rng db_rng(n);
    const Database db = Database::Random(n, 1, db_rng);
    auto report = runtime::EvaluatePrivacy(protocol, db, "server", 0.0);
    if (!report.ok()) {
      v.Check(false, std::string(report.status().message()));
      continue;
    }
    worst = std::max(worst, report->max_distance);
    v.Check(report->max_distance <= 1e-9, absl::StrCat("query view distance ", report->max_distance));
  }
  auto rows = cli::RunBench({{"heqpir"}, {4, 16, 64}, 2, 1});
  if (!rows.ok()) {
    v.Check(false, std::string(rows.status().message()));
    return v;
  }
  std::vector<double> sizes, cost;
  for (const auto& row : *rows) {
    sizes.push_back(static_cast<double>(row.n));
    cost.push_back(static_cast<double>(row.qubit_cost + row.bit_cost));
  }
  auto fit = cli::FitPowerLaw(sizes, cost);
  v.Check(fit.ok() && std::abs(fit->exponent - 0.5) <= 0.1,
          absl::StrCat("communication exponent ", fit.ok() ? Fixed(fit->exponent, 3) : "n/a"));
  v.Note(absl::StrCat(runs, " round trips, view distance ", worst, ", exponent ",
                      fit.ok() ? Fixed(fit->exponent, 3) : "n/a"));
  return v;
}

Verdict BoundSuites() {
  Verdict v;
  info::SweepOptions options;
  options.samples = 1000;
  options.max_dim = 8;
  options.tolerance = 1e-6;
  Rng rng(123);
  auto sweeps = info::RunBoundSweeps(options, rng);
  if (!sweeps.ok()) {
    v.Check(false, std::string(sweeps.status().message()));
    return v;
  }
  for (const auto& s : *sweeps) {
    v.Check(s.instances >= 1000 && s.violations == 0,
            absl::StrCat(s.name, ": ", s.violations, " violations in ", s.instances));
  }
  // Every index sees the same state: no information, so the bound is n.
  Rng state_rng(5);
  const quantum::DensityMatrix rho = info::RandomDensityMatrix(4, state_rng);
  for (int n : {2, 4, 8}) {
    auto ensemble = info::Ensemble::Uniform(std::vector<quantum::DensityMatrix>(n, rho));
    auto bound = ensemble.ok() ? info::CommunicationLowerBound(*ensemble, n, n) : ensemble.status();
    v.Check(bound.ok() && bound->bound_value == static_cast<double>(n),
            absl::StrCat("index-independent bound for n=", n));
  }
  const runtime::SendEverythingProtocol baseline;
  for (int n : {2, 4, 8}) {
    Rng db_rng(DeriveStream(9, n));
    const Database db = Database::Random(static_cast<size_t>(n), 1, db_rng);
    auto privacy = runtime::EvaluatePrivacy(baseline, db, "server", 0.0);
    auto run = RunSeeded(baseline, db, 0, AdversaryModel::Honest(), 1);
    if (!privacy.ok() || !run.ok()) {
      v.Check(false, "baseline failed to run");
      continue;
    }
    const double cost = static_cast<double>(run->transcript.qubit_cost() + run->transcript.classical_cost());
    auto bound = runtime::EvaluateCommunicationBound(*privacy, n, cost);
    v.Check(bound.ok() && bound->satisfied && bound->bound_value == static_cast<double>(n),
            absl::StrCat("baseline at n=", n, " cost ", cost));
  }
  std::string summary;
  for (const auto& s : *sweeps) absl::StrAppend(&summary, summary.empty() ? "" : ", ", s.name, " ", s.instances, "/0");
  v.Note(absl::StrCat(summary, ", bound = n for n in {2,4,8}"));
  return v;
}

std::string Slurp(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  std::stringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

Verdict Determinism() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path() / "qpir_acceptance";
  std::filesystem::create_directories(dir);
  const std::vector<std::vector<std::string>> scenarios = {
      {"--protocol", "aqpir", "--n", "16", "--seed", "7"},
      {"--protocol", "aqpir", "--ell", "2", "--r", "1", "--adversary", "intercept_resend",
       "--rounds", "1", "--seed", "8"},
      {"--protocol", "heqpir", "--n", "64", "--checksum", "--seed", "7"},
      {"--protocol", "two_server", "--n", "4", "--index", "3", "--seed", "1"},
      {"--protocol", "cube", "--d", "2", "--ell", "3", "--index", "1,2", "--seed", "7"},
      {"--protocol", "baseline", "--n", "8", "--seed", "2"},
  };
  int compared = 0;
  for (const auto& scenario : scenarios) {
    std::string files[2][2];
    for (int rep = 0; rep < 2; ++rep) {
      const auto transcript = dir / absl::StrCat("t", compared, "_", rep, ".jsonl");
      const auto report = dir / absl::StrCat("r", compared, "_", rep, ".json");
      std::vector<std::string> args = {"run"};
      args.insert(args.end(), scenario.begin(), scenario.end());
      args.insert(args.end(), {"--transcript", transcript.string(), "--report", report.string()});
      std::ostringstream out, err;
      const int code = cli::Main(args, out, err);
      v.Check(code == cli::kExitOk || code == cli::kExitAborted,
              absl::StrCat("run ", scenario[1], " exited ", code));
      files[rep][0] = Slurp(transcript);
      files[rep][1] = Slurp(report);
    }
    v.Check(!files[0][0].empty(), absl::StrCat(scenario[1], " wrote no transcript"));
    v.Check(files[0][0] == files[1][0], absl::StrCat(scenario[1], " transcripts differ"));
    v.Check(files[0][1] == files[1][1], absl::StrCat(scenario[1], " reports differ"));
    ++compared;
  }
  std::ostringstream a, b, err;
  const std::vector<std::string> bench = {"bench", "--protocols", "aqpir,heqpir,cube,baseline",
                                          "--sizes", "4,16,64", "--seed", "3"};
  cli::Main(bench, a, err);
  cli::Main(bench, b, err);
  v.Check(!a.str().empty() && a.str() == b.str(), "bench tables differ");
  std::filesystem::remove_all(dir);
  v.Note(absl::StrCat(compared, " run scenarios and one bench table byte-identical"));
  return v;
}

struct Criterion {
  std::string name;
  double time_limit_s;  // 0 means no limit
  std::function<Verdict()> check;
};

int Main() {
  const std::vector<Criterion> criteria = {
      {"chsh-constants", 10, Chsh},
      {"cube-correctness", 60, CubeCorrectness},
      {"cube-privacy", 0, CubePrivacy},
      {"two-server", 30, TwoServer},
      {"aqpir", 120, Aqpir},
      {"heqpir", 60, Heqpir},
      {"bound-suites", 60, BoundSuites},
      {"determinism", 0, Determinism},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v = c.check();
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit_s > 0) {
      v.Check(seconds < c.time_limit_s,
              absl::StrCat("took ", Fixed(seconds, 1), " s, limit ", c.time_limit_s, " s"));
    }
    failed += !v.pass;
    std::printf("%s %s (%.1f s): %s\n", v.pass ? "PASS" : "FAIL", c.name.c_str(), seconds,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace qpir

int main() { return qpir::Main(); }
