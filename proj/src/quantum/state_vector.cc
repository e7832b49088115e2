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

#include "qpir/quantum/state_vector.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "qpir/util/status_macros.h"

namespace qpir::quantum {
namespace {

absl::Status CheckCap(size_t qubits, int cap) {
  if (static_cast<int>(qubits) > cap) {
    return absl::ResourceExhaustedError(
        absl::StrCat("state would need ", qubits, " qubits, cap is ", cap));
  }
  return absl::OkStatus();
}

absl::Status CheckDistinct(std::span<const QubitLabel> labels) {
  std::set<QubitLabel> seen;
  for (const auto& label : labels) {
    if (!seen.insert(label).second) {
      return absl::InvalidArgumentError(
          absl::StrCat("label ", label.ToString(), " used twice"));
    }
  }
  return absl::OkStatus();
}

}  // namespace

std::string QubitLabel::ToString() const { return absl::StrCat(reg, "[", index, "]"); }

std::vector<QubitLabel> RegisterLabels(std::string_view name, int qubits) {
  std::vector<QubitLabel> out;
  out.reserve(qubits);
  for (int i = 0; i < qubits; ++i) out.push_back({std::string(name), i});
  return out;
}

absl::StatusOr<StateVector> StateVector::Create(std::span<const RegisterSpec> registers,
                                                int qubit_cap) {
  std::vector<QubitLabel> labels;
  for (const auto& spec : registers) {
    if (spec.name.empty()) return absl::InvalidArgumentError("empty register name");
    if (spec.qubits <= 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("register ", spec.name, " needs a positive qubit count"));
    }
    for (int i = 0; i < spec.qubits; ++i) labels.push_back({spec.name, i});
  }
  QPIR_RETURN_IF_ERROR(CheckCap(labels.size(), qubit_cap));
  QPIR_RETURN_IF_ERROR(CheckDistinct(labels));
  std::vector<Complex> amps(size_t{1} << labels.size(), Complex(0.0));
  amps[0] = 1.0;
  return StateVector(std::move(labels), std::move(amps));
}

absl::StatusOr<StateVector> StateVector::FromAmplitudes(std::vector<QubitLabel> labels,
                                                        std::vector<Complex> amplitudes) {
  QPIR_RETURN_IF_ERROR(CheckDistinct(labels));
  if (amplitudes.size() != (size_t{1} << labels.size())) {
    return absl::InvalidArgumentError(
        absl::StrCat("expected 2^", labels.size(), " amplitudes, got ", amplitudes.size()));
  }
  StateVector state(std::move(labels), std::move(amplitudes));
  if (std::abs(state.NormSquared() - 1.0) > kTolerance) {
    return absl::InvalidArgumentError("amplitudes are not normalized");
  }
  return state;
}

bool StateVector::Contains(const QubitLabel& label) const {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

absl::StatusOr<int> StateVector::PositionOf(const QubitLabel& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) {
    return absl::NotFoundError(absl::StrCat("unknown qubit ", label.ToString()));
  }
  return static_cast<int>(it - labels_.begin());
}

absl::StatusOr<std::vector<int>> StateVector::PositionsOf(
    std::span<const QubitLabel> labels) const {
  QPIR_RETURN_IF_ERROR(CheckDistinct(labels));
  std::vector<int> out;
  out.reserve(labels.size());
  for (const auto& label : labels) {
    QPIR_ASSIGN_OR_RETURN(int pos, PositionOf(label));
    out.push_back(pos);
  }
  return out;
}

absl::StatusOr<std::vector<QubitLabel>> StateVector::Register(std::string_view name) const {
  std::vector<QubitLabel> out;
  for (const auto& label : labels_) {
    if (label.reg == name) out.push_back(label);
  }
  if (out.empty()) return absl::NotFoundError(absl::StrCat("unknown register ", std::string(name)));
  std::sort(out.begin(), out.end());
  return out;
}

double StateVector::NormSquared() const {
  double total = 0.0;
  for (const auto& a : amplitudes_) total += std::norm(a);
  return total;
}

uint64_t StateVector::ReadValue(uint64_t index, std::span<const int> positions) const {
  uint64_t value = 0;
  for (int pos : positions) value = (value << 1) | ((index & BitMask(pos)) ? 1 : 0);
  return value;
}

absl::StatusOr<StateVector> StateVector::Tensor(const StateVector& other,
                                                int qubit_cap) const {
  std::vector<QubitLabel> labels = labels_;
  labels.insert(labels.end(), other.labels_.begin(), other.labels_.end());
  QPIR_RETURN_IF_ERROR(CheckCap(labels.size(), qubit_cap));
  QPIR_RETURN_IF_ERROR(CheckDistinct(labels));
  std::vector<Complex> amps(dimension() * other.dimension());
  for (size_t i = 0; i < dimension(); ++i) {
    if (amplitudes_[i] == Complex(0.0)) continue;
    for (size_t j = 0; j < other.dimension(); ++j) {
      amps[i * other.dimension() + j] = amplitudes_[i] * other.amplitudes_[j];
    }
  }
  return StateVector(std::move(labels), std::move(amps));
}

absl::StatusOr<StateVector> StateVector::Reordered(std::span<const QubitLabel> order) const {
  if (order.size() != labels_.size()) {
    return absl::InvalidArgumentError("reorder must list every qubit exactly once");
  }
  QPIR_ASSIGN_OR_RETURN(std::vector<int> positions, PositionsOf(order));
  const int n = num_qubits();
  std::vector<Complex> amps(dimension());
  for (uint64_t index = 0; index < dimension(); ++index) {
    uint64_t target = 0;
    for (int k = 0; k < n; ++k) {
      if (index & BitMask(positions[k])) target |= uint64_t{1} << (n - 1 - k);
    }
    amps[target] = amplitudes_[index];
  }
  return StateVector(std::vector<QubitLabel>(order.begin(), order.end()), std::move(amps));
}

absl::Status StateVector::ApplySingle(const Mat2& u, const QubitLabel& target) {
  QPIR_ASSIGN_OR_RETURN(int pos, PositionOf(target));
  const uint64_t mask = BitMask(pos);
  for (uint64_t i = 0; i < dimension(); ++i) {
    if (i & mask) continue;
    const Complex a0 = amplitudes_[i];
    const Complex a1 = amplitudes_[i | mask];
    amplitudes_[i] = u[0] * a0 + u[1] * a1;
    amplitudes_[i | mask] = u[2] * a0 + u[3] * a1;
  }
  return absl::OkStatus();
}

absl::Status StateVector::ApplyControlledSingle(const Mat2& u, const QubitLabel& control,
                                                const QubitLabel& target) {
  if (control == target) return absl::InvalidArgumentError("control equals target");
  QPIR_ASSIGN_OR_RETURN(int cpos, PositionOf(control));
  QPIR_ASSIGN_OR_RETURN(int tpos, PositionOf(target));
  const uint64_t cmask = BitMask(cpos);
  const uint64_t tmask = BitMask(tpos);
  for (uint64_t i = 0; i < dimension(); ++i) {
    if ((i & tmask) || !(i & cmask)) continue;
    const Complex a0 = amplitudes_[i];
    const Complex a1 = amplitudes_[i | tmask];
    amplitudes_[i] = u[0] * a0 + u[1] * a1;
    amplitudes_[i | tmask] = u[2] * a0 + u[3] * a1;
  }
  return absl::OkStatus();
}

absl::Status StateVector::ApplyXorOracle(std::span<const QubitLabel> inputs,
                                         std::span<const QubitLabel> outputs,
                                         const std::function<uint64_t(uint64_t)>& f) {
  std::vector<QubitLabel> all(inputs.begin(), inputs.end());
  all.insert(all.end(), outputs.begin(), outputs.end());
  QPIR_RETURN_IF_ERROR(CheckDistinct(all));
  QPIR_ASSIGN_OR_RETURN(std::vector<int> in_pos, PositionsOf(inputs));
  QPIR_ASSIGN_OR_RETURN(std::vector<int> out_pos, PositionsOf(outputs));
  const int out_width = static_cast<int>(out_pos.size());
  std::vector<Complex> next(dimension(), Complex(0.0));
  for (uint64_t index = 0; index < dimension(); ++index) {
    if (amplitudes_[index] == Complex(0.0)) continue;
    const uint64_t flip = f(ReadValue(index, in_pos));
    uint64_t target = index;
    for (int k = 0; k < out_width; ++k) {
      if ((flip >> (out_width - 1 - k)) & 1) target ^= BitMask(out_pos[k]);
    }
    next[target] = amplitudes_[index];
  }
  amplitudes_ = std::move(next);
  return absl::OkStatus();
}

absl::Status StateVector::ApplyPhaseOracle(std::span<const QubitLabel> inputs,
                                           const std::function<double(uint64_t)>& angle) {
  QPIR_ASSIGN_OR_RETURN(std::vector<int> pos, PositionsOf(inputs));
  for (uint64_t index = 0; index < dimension(); ++index) {
    const double phi = angle(ReadValue(index, pos));
    if (phi != 0.0) amplitudes_[index] *= std::polar(1.0, phi);
  }
  return absl::OkStatus();
}

absl::Status StateVector::ApplyDft(std::span<const QubitLabel> reg, bool inverse) {
  if (reg.empty()) return absl::InvalidArgumentError("empty register");
  QPIR_ASSIGN_OR_RETURN(std::vector<int> pos, PositionsOf(reg));
  const int m = static_cast<int>(pos.size());
  const uint64_t size = uint64_t{1} << m;
  uint64_t reg_mask = 0;
  for (int p : pos) reg_mask |= BitMask(p);
  // offsets[v] is the index contribution of register value v.
  std::vector<uint64_t> offsets(size, 0);
  for (uint64_t v = 0; v < size; ++v) {
    for (int k = 0; k < m; ++k) {
      if ((v >> (m - 1 - k)) & 1) offsets[v] |= BitMask(pos[k]);
    }
  }
  std::vector<Complex> roots(size);
  const double sign = inverse ? -1.0 : 1.0;
  for (uint64_t k = 0; k < size; ++k) {
    roots[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) /
                                   static_cast<double>(size));
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(size));
  std::vector<Complex> block(size), out(size);
  for (uint64_t base = 0; base < dimension(); ++base) {
    if (base & reg_mask) continue;
    for (uint64_t v = 0; v < size; ++v) block[v] = amplitudes_[base | offsets[v]];
    for (uint64_t j = 0; j < size; ++j) {
      Complex acc(0.0);
      for (uint64_t x = 0; x < size; ++x) acc += roots[(x * j) % size] * block[x];
      out[j] = acc * scale;
    }
    for (uint64_t v = 0; v < size; ++v) amplitudes_[base | offsets[v]] = out[v];
  }
  return absl::OkStatus();
}

absl::Status StateVector::ApplyQft(std::span<const QubitLabel> reg) {
  return ApplyDft(reg, /*inverse=*/false);
}

absl::Status StateVector::ApplyInverseQft(std::span<const QubitLabel> reg) {
  return ApplyDft(reg, /*inverse=*/true);
}

absl::StatusOr<std::vector<double>> StateVector::Probabilities(
    std::span<const QubitLabel> labels) const {
  QPIR_ASSIGN_OR_RETURN(std::vector<int> pos, PositionsOf(labels));
  std::vector<double> probs(size_t{1} << pos.size(), 0.0);
  for (uint64_t index = 0; index < dimension(); ++index) {
    probs[ReadValue(index, pos)] += std::norm(amplitudes_[index]);
  }
  return probs;
}

absl::StatusOr<double> StateVector::ProbabilityOf(std::span<const QubitLabel> labels,
                                                  uint64_t value) const {
  QPIR_ASSIGN_OR_RETURN(std::vector<int> pos, PositionsOf(labels));
  double p = 0.0;
  for (uint64_t index = 0; index < dimension(); ++index) {
    if (ReadValue(index, pos) == value) p += std::norm(amplitudes_[index]);
  }
  return p;
}

absl::StatusOr<double> StateVector::Project(std::span<const QubitLabel> labels,
                                            uint64_t value) {
  QPIR_ASSIGN_OR_RETURN(std::vector<int> pos, PositionsOf(labels));
  double p = 0.0;
  for (uint64_t index = 0; index < dimension(); ++index) {
    if (ReadValue(index, pos) == value) {
      p += std::norm(amplitudes_[index]);
    } else {
      amplitudes_[index] = 0.0;
    }
  }
  if (p <= 0.0) return absl::FailedPreconditionError("projection onto a zero-probability outcome");
  const double scale = 1.0 / std::sqrt(p);
  for (auto& a : amplitudes_) a *= scale;
  return p;
}

absl::StatusOr<uint64_t> StateVector::MeasureInPlace(std::span<const QubitLabel> labels,
                                                     Rng& rng) {
  QPIR_ASSIGN_OR_RETURN(std::vector<double> probs, Probabilities(labels));
  const double u = UniformUnit(rng);
  double acc = 0.0;
  uint64_t chosen = probs.size();
  uint64_t last_nonzero = 0;
  for (uint64_t v = 0; v < probs.size(); ++v) {
    if (probs[v] <= 0.0) continue;
    last_nonzero = v;
    acc += probs[v];
    if (u < acc) {
      chosen = v;
      break;
    }
  }
  // Rounding can leave u just above the accumulated total.
  if (chosen == probs.size()) chosen = last_nonzero;
  QPIR_RETURN_IF_ERROR(Project(labels, chosen).status());
  return chosen;
}

absl::StatusOr<uint64_t> StateVector::ExtractDefinite(std::span<const QubitLabel> labels) {
  QPIR_ASSIGN_OR_RETURN(std::vector<int> pos, PositionsOf(labels));
  QPIR_ASSIGN_OR_RETURN(std::vector<double> probs, Probabilities(labels));
  uint64_t value = 0;
  bool found = false;
  for (uint64_t v = 0; v < probs.size(); ++v) {
    if (std::abs(probs[v] - 1.0) <= kTolerance) {
      value = v;
      found = true;
    } else if (probs[v] > kTolerance) {
      return absl::FailedPreconditionError("qubits are not in a definite basis state");
    }
  }
  if (!found) return absl::FailedPreconditionError("qubits are not in a definite basis state");

  std::vector<QubitLabel> kept;
  std::vector<int> kept_pos;
  for (int p = 0; p < num_qubits(); ++p) {
    if (std::find(pos.begin(), pos.end(), p) == pos.end()) {
      kept.push_back(labels_[p]);
      kept_pos.push_back(p);
    }
  }
  std::vector<Complex> amps(size_t{1} << kept.size(), Complex(0.0));
  for (uint64_t index = 0; index < dimension(); ++index) {
    if (ReadValue(index, pos) != value) continue;
    amps[ReadValue(index, kept_pos)] = amplitudes_[index];
  }
  labels_ = std::move(kept);
  amplitudes_ = std::move(amps);
  const double norm = NormSquared();
  if (norm > 0.0) {
    const double scale = 1.0 / std::sqrt(norm);
    for (auto& a : amplitudes_) a *= scale;
  }
  return value;
}

absl::StatusOr<StateVector> StateVector::SplitOff(const QubitLabel& label) {
  QPIR_ASSIGN_OR_RETURN(int pos, PositionOf(label));
  if (num_qubits() == 1) return absl::FailedPreconditionError("nothing to split from");
  const uint64_t mask = BitMask(pos);
  // Write the state as a 2 x R matrix M (qubit value x rest). The qubit is
  // unentangled iff M has rank one.
  std::vector<QubitLabel> rest_labels;
  std::vector<int> rest_pos;
  for (int p = 0; p < num_qubits(); ++p) {
    if (p != pos) {
      rest_labels.push_back(labels_[p]);
      rest_pos.push_back(p);
    }
  }
  const size_t rest_dim = dimension() / 2;
  std::vector<Complex> row0(rest_dim), row1(rest_dim);
  for (uint64_t index = 0; index < dimension(); ++index) {
    const uint64_t r = ReadValue(index, rest_pos);
    ((index & mask) ? row1 : row0)[r] = amplitudes_[index];
  }
  double n0 = 0, n1 = 0;
  Complex cross(0.0);
  for (size_t r = 0; r < rest_dim; ++r) {
    n0 += std::norm(row0[r]);
    n1 += std::norm(row1[r]);
    cross += std::conj(row0[r]) * row1[r];
  }
  // Rank one iff |<row0|row1>|^2 == |row0|^2 |row1|^2.
  if (std::abs(std::norm(cross) - n0 * n1) > kTolerance) {
    return absl::FailedPreconditionError(
        absl::StrCat("qubit ", label.ToString(), " is entangled with the remainder"));
  }
  const std::vector<Complex>& rest = n0 >= n1 ? row0 : row1;
  const double rest_norm = std::sqrt(std::max(n0, n1));
  std::vector<Complex> rest_amps(rest_dim);
  for (size_t r = 0; r < rest_dim; ++r) rest_amps[r] = rest[r] / rest_norm;
  // Qubit amplitudes are the coefficients of the rest state in each row.
  Complex q0(0.0), q1(0.0);
  for (size_t r = 0; r < rest_dim; ++r) {
    q0 += std::conj(rest_amps[r]) * row0[r];
    q1 += std::conj(rest_amps[r]) * row1[r];
  }
  labels_ = std::move(rest_labels);
  amplitudes_ = std::move(rest_amps);
  return StateVector({label}, {q0, q1});
}

absl::Status StateVector::AddRegister(const RegisterSpec& spec, int qubit_cap) {
  QPIR_ASSIGN_OR_RETURN(StateVector extra, Create({spec}, qubit_cap));
  QPIR_ASSIGN_OR_RETURN(*this, Tensor(extra, qubit_cap));
  return absl::OkStatus();
}

absl::StatusOr<Complex> StateVector::InnerProduct(const StateVector& other) const {
  if (labels_ != other.labels_) return absl::InvalidArgumentError("label orders differ");
  Complex acc(0.0);
  for (size_t i = 0; i < dimension(); ++i) acc += std::conj(amplitudes_[i]) * other.amplitudes_[i];
  return acc;
}

Mat2 HadamardMatrix() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s, s, -s};
}
Mat2 PauliXMatrix() { return {0.0, 1.0, 1.0, 0.0}; }
Mat2 PauliZMatrix() { return {1.0, 0.0, 0.0, -1.0}; }
Mat2 PhaseMatrix(double phi) { return {1.0, 0.0, 0.0, std::polar(1.0, phi)}; }
Mat2 RotationYMatrix(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  return {c, -s, s, c};
}

}  // namespace qpir::quantum
