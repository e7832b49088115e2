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

#include "qpir/runtime/view.h"

#include <set>

#include "absl/strings/str_cat.h"

namespace qpir::runtime {

using quantum::Matrix;

absl::Status CqState::Add(const std::string& record, const Matrix& block, double weight) {
  if (block.rows() != block.cols() || block.rows() == 0) {
    return absl::InvalidArgumentError("view block must be a nonempty square matrix");
  }
  const int dim = static_cast<int>(block.rows());
  if (dimension_ == 0) dimension_ = dim;
  if (dim != dimension_) {
    return absl::InvalidArgumentError(
        absl::StrCat("view block dimension ", dim, " differs from ", dimension_));
  }
  auto [it, inserted] = blocks_.try_emplace(record, Matrix::Zero(dim, dim));
  it->second += weight * block;
  return absl::OkStatus();
}

absl::Status CqState::Add(const CqState& other, double weight) {
  for (const auto& [record, block] : other.blocks_) {
    if (absl::Status s = Add(record, block, weight); !s.ok()) return s;
  }
  return absl::OkStatus();
}

double CqState::Trace() const {
  double total = 0.0;
  for (const auto& [record, block] : blocks_) total += block.trace().real();
  return total;
}

absl::StatusOr<double> CqState::TraceDistance(const CqState& a, const CqState& b) {
  if (a.dimension_ != 0 && b.dimension_ != 0 && a.dimension_ != b.dimension_) {
    return absl::InvalidArgumentError("views have different dimensions");
  }
  double norm = 0.0;
  for (const auto& [record, block] : a.blocks_) {
    auto it = b.blocks_.find(record);
    norm += info::HermitianTraceNorm(it == b.blocks_.end() ? block : Matrix(block - it->second));
  }
  for (const auto& [record, block] : b.blocks_) {
    if (a.blocks_.count(record) == 0) norm += info::HermitianTraceNorm(block);
  }
  return norm / 2.0;
}

absl::StatusOr<info::Ensemble> ToEnsemble(const std::vector<CqState>& views) {
  if (views.empty()) return absl::InvalidArgumentError("no views");
  std::set<std::string> records;
  int dim = 0;
  for (const CqState& v : views) {
    if (v.dimension() == 0) return absl::InvalidArgumentError("empty view");
    if (dim == 0) dim = v.dimension();
    if (v.dimension() != dim) return absl::InvalidArgumentError("views have different dimensions");
    for (const auto& [record, block] : v.blocks()) records.insert(record);
  }
  const int total = dim * static_cast<int>(records.size());
  std::vector<quantum::DensityMatrix> states;
  for (const CqState& v : views) {
    Matrix m = Matrix::Zero(total, total);
    int offset = 0;
    for (const std::string& record : records) {
      auto it = v.blocks().find(record);
      if (it != v.blocks().end()) m.block(offset, offset, dim, dim) = it->second;
      offset += dim;
    }
    const double trace = m.trace().real();
    if (trace <= 0.0) return absl::InvalidArgumentError("view has zero trace");
    m /= trace;
    m = (m + m.adjoint()) / 2.0;
    auto rho = quantum::DensityMatrix::FromMatrix(std::move(m));
    if (!rho.ok()) return rho.status();
    states.push_back(*std::move(rho));
  }
  return info::Ensemble::Uniform(std::move(states));
}

}  // namespace qpir::runtime
