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

#ifndef QPIR_CLI_CONFIG_H_
#define QPIR_CLI_CONFIG_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"
#include "qpir/runtime/adversary.h"
#include "qpir/runtime/protocol.h"

namespace qpir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitAborted = 3;

// Everything `run` and `analyze` need. Sizes that do not apply to the
// chosen protocol are ignored.
struct RunConfig {
  std::string protocol;
  int64_t n = 0;
  int ell = 0;
  int d = 0;
  int m = 1;
  int r = 0;
  int n_tcf = 2;
  int k_detect = 0;
  std::string variant = "per_bit_z";
  bool checksum = false;
  // 1-based; comma-separated coordinates for the cube.
  std::string index = "1";
  // Bit string; random from the seed when empty.
  std::string database;
  std::string adversary = "honest";
  std::string target;
  std::vector<std::string> deviations;
  std::vector<int> rounds;
  double epsilon = 0.0;
  double delta = 0.05;
  std::optional<uint64_t> seed;
  std::string transcript_path;
  std::string report_path;
};

// A validated protocol instance ready to run.
struct Scenario {
  std::unique_ptr<runtime::Protocol> protocol;
  runtime::Database database;
  uint64_t index = 0;  // 0-based flat index
  runtime::AdversaryModel adversary;
  uint64_t seed = 0;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
};

// Random stream ids derived from the seed.
inline constexpr uint64_t kDatabaseStream = 1;
inline constexpr uint64_t kRunStream = 2;

absl::StatusOr<Scenario> BuildScenario(const RunConfig& config);

// Parses a comma-separated list of 1-based positions.
absl::StatusOr<std::vector<int64_t>> ParseIndexList(const std::string& text);

// Reads a TOML file and turns its top-level keys into `--key value`
// arguments, so that flags given afterwards override them.
absl::StatusOr<std::vector<std::string>> ConfigFileArguments(const std::string& path);

std::string DatabaseBits(const runtime::Database& db);

}  // namespace qpir::cli

#endif  // QPIR_CLI_CONFIG_H_
