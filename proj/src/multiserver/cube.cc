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

#include "qpir/multiserver/cube.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "absl/strings/str_cat.h"
#include "qpir/util/status_macros.h"

namespace qpir::multiserver {

using runtime::Bits;
using runtime::BitsOf;
using runtime::Database;
using runtime::RunResult;
using runtime::Session;
using runtime::ValueOf;

namespace {

constexpr int kMaxEll = 16;
constexpr int kMaxDimension = 6;
constexpr uint64_t kMaxCells = uint64_t{1} << 20;

bool InSubset(uint64_t subset, int element) { return (subset >> element) & 1; }

}  // namespace

absl::Status CubeShape::Validate() const {
  if (ell < 1 || ell > kMaxEll) {
    return absl::InvalidArgumentError(absl::StrCat("ell must lie in [1, ", kMaxEll, "]"));
  }
  if (d < 1 || d > kMaxDimension) {
    return absl::InvalidArgumentError(absl::StrCat("d must lie in [1, ", kMaxDimension, "]"));
  }
  double cells = std::pow(static_cast<double>(ell), d);
  if (cells > static_cast<double>(kMaxCells)) {
    return absl::InvalidArgumentError("ell^d exceeds the supported database size");
  }
  return absl::OkStatus();
}

uint64_t CubeShape::size() const {
  uint64_t n = 1;
  for (int t = 0; t < d; ++t) n *= static_cast<uint64_t>(ell);
  return n;
}

std::vector<int> CubeShape::Decode(uint64_t flat) const {
  std::vector<int> coords(static_cast<size_t>(d));
  for (int t = d - 1; t >= 0; --t) {
    coords[t] = static_cast<int>(flat % static_cast<uint64_t>(ell));
    flat /= static_cast<uint64_t>(ell);
  }
  return coords;
}

uint64_t CubeShape::Encode(std::span<const int> coords) const {
  uint64_t flat = 0;
  for (int c : coords) flat = flat * static_cast<uint64_t>(ell) + static_cast<uint64_t>(c);
  return flat;
}

std::string CubeServerName(uint32_t sigma, int d) {
  std::string name = "server";
  for (int t = 0; t < d; ++t) name.push_back(SigmaBit(sigma, d, t) ? '1' : '0');
  return name;
}

uint64_t CubeQuery::Subset(int t, int bit) const {
  return bit ? base[t] ^ (uint64_t{1} << target[t]) : base[t];
}

std::vector<uint64_t> CubeQuery::ForServer(uint32_t sigma) const {
  std::vector<uint64_t> subsets;
  for (int t = 0; t < shape.d; ++t) subsets.push_back(Subset(t, SigmaBit(sigma, shape.d, t)));
  return subsets;
}

absl::StatusOr<CubeQuery> MakeCubeQuery(const CubeShape& shape, std::vector<int> target,
                                        std::vector<uint64_t> base) {
  QPIR_RETURN_IF_ERROR(shape.Validate());
  if (static_cast<int>(target.size()) != shape.d || static_cast<int>(base.size()) != shape.d) {
    return absl::InvalidArgumentError("target and base need one entry per dimension");
  }
  for (int t = 0; t < shape.d; ++t) {
    if (target[t] < 0 || target[t] >= shape.ell) {
      return absl::OutOfRangeError(absl::StrCat("coordinate ", t, " outside [0, ell)"));
    }
    if (base[t] >> shape.ell) return absl::InvalidArgumentError("base subset outside [0, ell)");
  }
  return CubeQuery{shape, std::move(target), std::move(base)};
}

absl::StatusOr<CubeQuery> GenerateCubeQuery(const CubeShape& shape, std::vector<int> target,
                                            Rng& rng) {
  QPIR_RETURN_IF_ERROR(shape.Validate());
  std::vector<uint64_t> base;
  for (int t = 0; t < shape.d; ++t) base.push_back(UniformBits(rng, shape.ell));
  return MakeCubeQuery(shape, std::move(target), std::move(base));
}

absl::StatusOr<int> CubeAnswer(const Database& db, const CubeShape& shape,
                               std::span<const uint64_t> subsets) {
  QPIR_RETURN_IF_ERROR(shape.Validate());
  if (db.size() != shape.size()) return absl::InvalidArgumentError("database is not ell^d");
  if (static_cast<int>(subsets.size()) != shape.d) {
    return absl::InvalidArgumentError("need one subset per dimension");
  }
  int parity = 0;
  for (uint64_t flat = 0; flat < db.size(); ++flat) {
    const std::vector<int> coords = shape.Decode(flat);
    bool inside = true;
    for (int t = 0; t < shape.d && inside; ++t) inside = InSubset(subsets[t], coords[t]);
    if (inside) parity ^= static_cast<int>(db.entries[flat] & 1);
  }
  return parity;
}

absl::StatusOr<int> CubeReconstruct(std::span<const std::optional<int>> answers) {
  if (answers.empty()) return absl::InvalidArgumentError("no answers");
  int bit = 0;
  for (size_t k = 0; k < answers.size(); ++k) {
    if (!answers[k].has_value()) {
      return absl::FailedPreconditionError(absl::StrCat("missing answer from server ", k));
    }
    bit ^= *answers[k] & 1;
  }
  return bit;
}

CubeCost ComputeCubeCost(const CubeShape& shape) {
  const int64_t servers = int64_t{1} << shape.d;
  return {servers * shape.d * shape.ell, servers};
}

std::vector<std::string> CubeProtocol::roles() const {
  std::vector<std::string> names;
  for (uint32_t sigma = 0; sigma < (1u << shape_.d); ++sigma) {
    names.push_back(CubeServerName(sigma, shape_.d));
  }
  return names;
}

absl::Status CubeProtocol::ValidateDatabase(const Database& db) const {
  QPIR_RETURN_IF_ERROR(shape_.Validate());
  if (db.entry_bits != 1) return absl::InvalidArgumentError("cube entries are single bits");
  if (db.size() != shape_.size()) {
    return absl::InvalidArgumentError(
        absl::StrCat("cube needs ", shape_.size(), " entries, got ", db.size()));
  }
  return absl::OkStatus();
}

uint64_t CubeProtocol::CoinSpace(const Database&) const {
  const int bits = shape_.d * shape_.ell;
  return bits >= 63 ? 0 : uint64_t{1} << bits;
}

absl::StatusOr<RunResult> CubeProtocol::Run(const Database& db, uint64_t index,
                                            const runtime::AdversaryModel& adversary, Rng& rng,
                                            const runtime::RunOptions& options) const {
  const int d = shape_.d;
  const int ell = shape_.ell;
  const uint32_t servers = 1u << d;
  Session session(adversary, rng);
  QPIR_RETURN_IF_ERROR(session.AddParty("client"));
  const std::vector<std::string> names = roles();
  for (const std::string& name : names) QPIR_RETURN_IF_ERROR(session.AddParty(name));

  std::vector<uint64_t> base;
  for (int t = 0; t < d; ++t) {
    base.push_back(options.coin ? (*options.coin >> (t * ell)) & ((uint64_t{1} << ell) - 1)
                                : UniformBits(session.rng(), ell));
  }
  QPIR_ASSIGN_OR_RETURN(CubeQuery query, MakeCubeQuery(shape_, shape_.Decode(index), base));

  RunResult result;
  result.record["protocol"] = "cube";
  result.record["d"] = d;
  result.record["ell"] = ell;
  for (uint32_t sigma = 0; sigma < servers; ++sigma) {
    std::vector<Bits> segments;
    for (uint64_t subset : query.ForServer(sigma)) segments.push_back(BitsOf(subset, ell));
    QPIR_RETURN_IF_ERROR(session.SendClassical("client", names[sigma], std::move(segments), "query"));
    if (options.capture.count(names[sigma])) {
      QPIR_ASSIGN_OR_RETURN(result.views[names[sigma]], session.CaptureView(names[sigma], {}));
    }
  }
  session.NextRound();

  for (uint32_t sigma = 0; sigma < servers; ++sigma) {
    QPIR_ASSIGN_OR_RETURN(std::vector<Bits> received, session.LastReceived(names[sigma], "query"));
    std::vector<uint64_t> subsets;
    for (const Bits& b : received) subsets.push_back(ValueOf(b));
    QPIR_ASSIGN_OR_RETURN(int answer, CubeAnswer(db, shape_, subsets));
    if (adversary.Deviates(names[sigma], "flip_answer", session.round())) answer ^= 1;
    QPIR_RETURN_IF_ERROR(session.SendClassical(names[sigma], "client",
                                               {BitsOf(static_cast<uint64_t>(answer), 1)}, "answer"));
  }
  std::vector<std::optional<int>> answers;
  for (const runtime::Message& m : session.transcript().messages()) {
    if (m.receiver == "client" && m.tag == "answer") answers.push_back(static_cast<int>(m.segments[0][0]));
  }
  QPIR_ASSIGN_OR_RETURN(int bit, CubeReconstruct(answers));
  result.value = static_cast<uint64_t>(bit);
  result.success_probability = *result.value == db.entries[index] ? 1.0 : 0.0;
  session.NextRound();
  runtime::FinishRun(session, result);
  return result;
}

nlohmann::ordered_json CollusionReport::ToJson() const {
  nlohmann::ordered_json j;
  j["d"] = shape.d;
  j["ell"] = shape.ell;
  std::vector<std::string> names;
  for (uint32_t sigma : coalition) names.push_back(CubeServerName(sigma, shape.d));
  j["coalition"] = names;
  j["exposed"] = exposed;
  j["success"] = success;
  j["bound"] = bound;
  j["sigma"] = sigma;
  j["exact"] = exact;
  j["samples"] = samples;
  j["pass"] = pass;
  return j;
}

absl::StatusOr<CollusionReport> EvaluateCollusion(const CubeShape& shape,
                                                  std::vector<uint32_t> coalition,
                                                  const CollusionOptions& options) {
  QPIR_RETURN_IF_ERROR(shape.Validate());
  const int d = shape.d;
  const int ell = shape.ell;
  if (coalition.empty()) return absl::InvalidArgumentError("empty coalition");
  std::sort(coalition.begin(), coalition.end());
  coalition.erase(std::unique(coalition.begin(), coalition.end()), coalition.end());
  for (uint32_t sigma : coalition) {
    if (sigma >= (1u << d)) return absl::OutOfRangeError("server outside {0,1}^d");
  }
  CollusionReport report;
  report.shape = shape;
  report.coalition = coalition;
  for (int t = 0; t < d; ++t) {
    std::set<int> bits;
    for (uint32_t sigma : coalition) bits.insert(SigmaBit(sigma, d, t));
    report.exposed += bits.size() == 2;
  }
  report.bound = std::pow(2.0, -(d - report.exposed));

  const uint64_t indices = shape.size();
  const int coin_bits = d * ell;
  const double work = static_cast<double>(indices) * std::pow(2.0, coin_bits);
  report.exact = !options.force_sampling && coin_bits < 63 &&
                 work <= static_cast<double>(options.exact_limit);

  // The pooled view: every subset each member received, in coalition order.
  auto view_of = [&](const CubeQuery& q) {
    std::vector<uint64_t> v;
    for (uint32_t sigma : coalition) {
      for (uint64_t s : q.ForServer(sigma)) v.push_back(s);
    }
    return v;
  };

  if (report.exact) {
    // success = sum_v max_i P(i, v); every (i, coin) pair is equally likely.
    std::map<std::vector<uint64_t>, std::map<uint64_t, int64_t>> counts;
    for (uint64_t flat = 0; flat < indices; ++flat) {
      for (uint64_t coin = 0; coin < (uint64_t{1} << coin_bits); ++coin) {
        std::vector<uint64_t> base;
        for (int t = 0; t < d; ++t) base.push_back((coin >> (t * ell)) & ((uint64_t{1} << ell) - 1));
        QPIR_ASSIGN_OR_RETURN(CubeQuery q, MakeCubeQuery(shape, shape.Decode(flat), base));
        ++counts[view_of(q)][flat];
      }
    }
    int64_t best_total = 0;
    for (const auto& [view, by_index] : counts) {
      int64_t best = 0;
      for (const auto& [flat, count] : by_index) best = std::max(best, count);
      best_total += best;
    }
    report.success = static_cast<double>(best_total) / work;
    report.samples = static_cast<int64_t>(work);
    report.pass = report.success <= report.bound + 1e-9;
    return report;
  }

  if (options.samples < 1) return absl::InvalidArgumentError("samples must be positive");
  Rng rng(options.seed);
  int64_t hits = 0;
  for (int64_t s = 0; s < options.samples; ++s) {
    const uint64_t flat = UniformBelow(rng, indices);
    QPIR_ASSIGN_OR_RETURN(CubeQuery q, GenerateCubeQuery(shape, shape.Decode(flat), rng));
    const std::vector<uint64_t> view = view_of(q);
    // The likelihood factorizes over coordinates. A coordinate seen under
    // both subsets pins the target to their symmetric difference; otherwise
    // every value is equally likely.
    std::vector<int> guess(static_cast<size_t>(d));
    for (int t = 0; t < d; ++t) {
      std::set<uint64_t> seen;
      for (size_t m = 0; m < coalition.size(); ++m) seen.insert(view[m * d + t]);
      std::vector<int> candidates;
      if (seen.size() == 2) {
        const uint64_t diff = *seen.begin() ^ *seen.rbegin();
        for (int e = 0; e < ell; ++e) {
          if (diff == (uint64_t{1} << e)) candidates.push_back(e);
        }
      } else {
        for (int e = 0; e < ell; ++e) candidates.push_back(e);
      }
      guess[t] = candidates[UniformBelow(rng, candidates.size())];
    }
    hits += shape.Encode(guess) == flat;
  }
  report.samples = options.samples;
  report.success = static_cast<double>(hits) / static_cast<double>(options.samples);
  report.sigma = std::sqrt(report.bound * (1.0 - report.bound) / static_cast<double>(options.samples));
  report.pass = report.success <= report.bound + 3.0 * report.sigma + 1e-12;
  return report;
}

}  // namespace qpir::multiserver
