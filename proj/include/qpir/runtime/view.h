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

#ifndef QPIR_RUNTIME_VIEW_H_
#define QPIR_RUNTIME_VIEW_H_

#include <map>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "qpir/info/metrics.h"
#include "qpir/quantum/density_matrix.h"

namespace qpir::runtime {

// Classical-quantum state sum_c |c><c| (x) A_c, where each block A_c = p_c rho_c
// is keyed by the party's classical record c. Blocks share one dimension.
class CqState {
 public:
  absl::Status Add(const std::string& record, const quantum::Matrix& block, double weight = 1.0);
  absl::Status Add(const CqState& other, double weight);

  const std::map<std::string, quantum::Matrix>& blocks() const { return blocks_; }
  int dimension() const { return dimension_; }
  double Trace() const;

  // (1/2) sum_c ||A_c - B_c||_1, absent records counting as zero blocks.
  static absl::StatusOr<double> TraceDistance(const CqState& a, const CqState& b);

 private:
  int dimension_ = 0;
  std::map<std::string, quantum::Matrix> blocks_;
};

// Block-diagonal density matrices over the union of records, one per view,
// each normalized to unit trace. Views must share a dimension.
absl::StatusOr<info::Ensemble> ToEnsemble(const std::vector<CqState>& views);

}  // namespace qpir::runtime

#endif  // QPIR_RUNTIME_VIEW_H_
