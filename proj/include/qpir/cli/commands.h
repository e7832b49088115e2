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

#ifndef QPIR_CLI_COMMANDS_H_
#define QPIR_CLI_COMMANDS_H_

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "json.hpp"

namespace qpir::cli {

// Entry point of the qpir tool. `args` excludes the program name. Reports
// go to `out`, human-readable summaries and errors to `err`.
int Main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct BenchRow {
  std::string protocol;
  int64_t n = 0;
  int64_t qubit_cost = 0;
  int64_t bit_cost = 0;
  uint64_t seed = 0;
};

struct BenchOptions {
  std::vector<std::string> protocols;
  std::vector<int64_t> sizes;
  // Cube dimension; a size n maps to ell = n^(1/d).
  int cube_d = 2;
  uint64_t seed = 0;
};

// One honest run per (protocol, size). All sizes are validated first.
absl::StatusOr<std::vector<BenchRow>> RunBench(const BenchOptions& options);
std::string BenchCsv(const std::vector<BenchRow>& rows);

struct PowerLawFit {
  double exponent = 0.0;
  double prefactor = 0.0;
};

// Least squares on log y = log a + b log x. Needs two distinct x and y > 0.
absl::StatusOr<PowerLawFit> FitPowerLaw(const std::vector<double>& x, const std::vector<double>& y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  // max |y - fit| / y
  double max_relative_residual = 0.0;
};

absl::StatusOr<LinearFit> FitLinear(const std::vector<double>& x, const std::vector<double>& y);

// Per-protocol fits over the bench rows.
nlohmann::ordered_json BenchFits(const std::vector<BenchRow>& rows);

}  // namespace qpir::cli

#endif  // QPIR_CLI_COMMANDS_H_
