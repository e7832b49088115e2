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

#include "qpir/quantum/density_matrix.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "qpir/util/status_macros.h"

namespace qpir::quantum {
namespace {

uint64_t ReadBits(uint64_t index, int width, std::span<const int> positions) {
  uint64_t value = 0;
  for (int pos : positions) value = (value << 1) | ((index >> (width - 1 - pos)) & 1);
  return value;
}

}  // namespace

absl::Status ValidateDensityMatrix(const Matrix& matrix) {
  if (matrix.rows() != matrix.cols() || matrix.rows() == 0) {
    return absl::InvalidArgumentError("density matrix must be square and nonempty");
  }
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
    return absl::InvalidArgumentError("density matrix is not Hermitian");
  }
  if (std::abs(matrix.trace() - Complex(1.0)) > kTolerance) {
    return absl::InvalidArgumentError(
        absl::StrCat("density matrix trace is ", matrix.trace().real(), ", expected 1"));
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kTolerance) {
    return absl::InvalidArgumentError("density matrix is not positive semidefinite");
  }
  return absl::OkStatus();
}

absl::StatusOr<DensityMatrix> DensityMatrix::Create(std::vector<QubitLabel> labels,
                                                    Matrix matrix) {
  if (matrix.rows() != (Eigen::Index{1} << labels.size())) {
    return absl::InvalidArgumentError("matrix dimension does not match label count");
  }
  QPIR_RETURN_IF_ERROR(ValidateDensityMatrix(matrix));
  return DensityMatrix(std::move(labels), std::move(matrix));
}

absl::StatusOr<DensityMatrix> DensityMatrix::FromMatrix(Matrix matrix) {
  QPIR_RETURN_IF_ERROR(ValidateDensityMatrix(matrix));
  return DensityMatrix({}, std::move(matrix));
}

DensityMatrix DensityMatrix::FromPure(const StateVector& state) {
  const auto amps = state.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> v(amps.data(), static_cast<Eigen::Index>(amps.size()));
  return DensityMatrix(state.labels(), v * v.adjoint());
}

DensityMatrix DensityMatrix::MaximallyMixed(std::vector<QubitLabel> labels) {
  const Eigen::Index dim = Eigen::Index{1} << labels.size();
  return DensityMatrix(std::move(labels),
                       Matrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::MaximallyMixed(int dimension) {
  return DensityMatrix({}, Matrix::Identity(dimension, dimension) /
                               static_cast<double>(dimension));
}

absl::StatusOr<DensityMatrix> DensityMatrix::Diagonal(std::span<const double> probabilities) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(probabilities.size()),
                          static_cast<Eigen::Index>(probabilities.size()));
  for (size_t i = 0; i < probabilities.size(); ++i) m(i, i) = probabilities[i];
  return FromMatrix(std::move(m));
}

DensityMatrix DensityMatrix::Tensor(const DensityMatrix& other) const {
  const Eigen::Index da = matrix_.rows(), db = other.matrix_.rows();
  Matrix out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = matrix_(i, j) * other.matrix_;
    }
  }
  std::vector<QubitLabel> labels = labels_;
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  return DensityMatrix(std::move(labels), std::move(out));
}

absl::StatusOr<DensityMatrix> DensityMatrix::Reordered(std::span<const QubitLabel> order) const {
  const int n = static_cast<int>(labels_.size());
  if (static_cast<int>(order.size()) != n) {
    return absl::InvalidArgumentError("reorder must list every qubit exactly once");
  }
  std::vector<int> pos;
  for (const auto& label : order) {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
      return absl::NotFoundError(absl::StrCat("unknown qubit ", label.ToString()));
    }
    pos.push_back(static_cast<int>(it - labels_.begin()));
  }
  const Eigen::Index dim = matrix_.rows();
  // perm[old index] = new index.
  std::vector<Eigen::Index> perm(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    perm[idx] = static_cast<Eigen::Index>(ReadBits(idx, n, pos));
  }
  Matrix out(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) out(perm[r], perm[c]) = matrix_(r, c);
  }
  return DensityMatrix(std::vector<QubitLabel>(order.begin(), order.end()), std::move(out));
}

absl::StatusOr<DensityMatrix> PartialTrace(const StateVector& state,
                                           std::span<const QubitLabel> keep) {
  if (keep.empty()) return absl::InvalidArgumentError("partial trace needs a nonempty keep set");
  QPIR_ASSIGN_OR_RETURN(std::vector<int> keep_pos, state.PositionsOf(keep));
  std::vector<int> rest_pos;
  for (int p = 0; p < state.num_qubits(); ++p) {
    if (std::find(keep_pos.begin(), keep_pos.end(), p) == keep_pos.end()) rest_pos.push_back(p);
  }
  const int n = state.num_qubits();
  const Eigen::Index dk = Eigen::Index{1} << keep_pos.size();
  const Eigen::Index dr = Eigen::Index{1} << rest_pos.size();
  Matrix m = Matrix::Zero(dk, dr);
  const auto amps = state.amplitudes();
  for (uint64_t index = 0; index < amps.size(); ++index) {
    m(ReadBits(index, n, keep_pos), ReadBits(index, n, rest_pos)) = amps[index];
  }
  return DensityMatrix::Create(std::vector<QubitLabel>(keep.begin(), keep.end()),
                               m * m.adjoint());
}

absl::StatusOr<DensityMatrix> PartialTrace(const DensityMatrix& rho,
                                           std::span<const QubitLabel> keep) {
  if (keep.empty()) return absl::InvalidArgumentError("partial trace needs a nonempty keep set");
  const auto& labels = rho.labels();
  const int n = static_cast<int>(labels.size());
  std::vector<int> keep_pos, rest_pos;
  for (const auto& label : keep) {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) {
      return absl::NotFoundError(absl::StrCat("unknown qubit ", label.ToString()));
    }
    keep_pos.push_back(static_cast<int>(it - labels.begin()));
  }
  for (int p = 0; p < n; ++p) {
    if (std::find(keep_pos.begin(), keep_pos.end(), p) == keep_pos.end()) rest_pos.push_back(p);
  }
  const Eigen::Index dk = Eigen::Index{1} << keep_pos.size();
  const Eigen::Index dim = rho.dimension();
  Matrix out = Matrix::Zero(dk, dk);
  std::vector<uint64_t> kv(dim), rv(dim);
  for (Eigen::Index idx = 0; idx < dim; ++idx) {
    kv[idx] = ReadBits(idx, n, keep_pos);
    rv[idx] = ReadBits(idx, n, rest_pos);
  }
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (rv[r] == rv[c]) out(kv[r], kv[c]) += rho.matrix()(r, c);
    }
  }
  return DensityMatrix::Create(std::vector<QubitLabel>(keep.begin(), keep.end()),
                               std::move(out));
}

absl::StatusOr<DensityMatrix> PartialTraceRegisters(const StateVector& state,
                                                    std::span<const std::string> registers) {
  std::vector<QubitLabel> keep;
  for (const auto& name : registers) {
    QPIR_ASSIGN_OR_RETURN(std::vector<QubitLabel> reg, state.Register(name));
    keep.insert(keep.end(), reg.begin(), reg.end());
  }
  return PartialTrace(state, keep);
}

absl::StatusOr<StateVector> Purify(const DensityMatrix& rho, std::string_view ancilla_register) {
  QPIR_RETURN_IF_ERROR(ValidateDensityMatrix(rho.matrix()));
  std::vector<QubitLabel> labels = rho.labels();
  const Eigen::Index dim = rho.dimension();
  if (labels.empty()) {
    int n = 0;
    while ((Eigen::Index{1} << n) < dim) ++n;
    if ((Eigen::Index{1} << n) != dim) {
      return absl::InvalidArgumentError("purification needs a qubit-dimensional state");
    }
    labels = RegisterLabels("sys", n);
  }
  const int n = static_cast<int>(labels.size());
  for (int i = 0; i < n; ++i) labels.push_back({std::string(ancilla_register), i});

  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
  std::vector<Eigen::Index> order(dim);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return solver.eigenvalues()(a) > solver.eigenvalues()(b);
  });
  std::vector<Complex> amps(static_cast<size_t>(dim * dim), Complex(0.0));
  for (Eigen::Index k = 0; k < dim; ++k) {
    const double lambda = std::max(0.0, solver.eigenvalues()(order[k]));
    if (lambda <= 0.0) continue;
    Eigen::VectorXcd v = solver.eigenvectors().col(order[k]);
    // Fix the eigenvector phase: largest component real and positive.
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    v *= std::conj(v(arg)) / std::abs(v(arg));
    for (Eigen::Index s = 0; s < dim; ++s) {
      amps[static_cast<size_t>(s * dim + k)] = std::sqrt(lambda) * v(s);
    }
  }
  // Renormalize away clipped negative eigenvalues.
  double norm = 0.0;
  for (const auto& a : amps) norm += std::norm(a);
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector::FromAmplitudes(std::move(labels), std::move(amps));
}

}  // namespace qpir::quantum
