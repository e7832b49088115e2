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

#include "qpir/quantum/joint_state.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "absl/strings/str_cat.h"
#include "qpir/util/status_macros.h"

namespace qpir::quantum {

absl::Status JointState::AddRegister(const RegisterSpec& spec) {
  // Validates the spec against the cap; |0...0> is then stored qubit by qubit.
  QPIR_ASSIGN_OR_RETURN(StateVector whole, StateVector::Create({spec}, qubit_cap_));
  for (const auto& label : whole.labels()) {
    if (Contains(label)) {
      return absl::AlreadyExistsError(absl::StrCat("qubit ", label.ToString(), " already exists"));
    }
  }
  for (const auto& label : whole.labels()) {
    QPIR_RETURN_IF_ERROR(AddFactor(*StateVector::FromAmplitudes({label}, {1.0, 0.0})));
  }
  return absl::OkStatus();
}

absl::Status JointState::AddFactor(StateVector factor) {
  if (num_qubits() + factor.num_qubits() > 64) {
    return absl::ResourceExhaustedError("joint state label budget exhausted");
  }
  for (const auto& label : factor.labels()) {
    if (Contains(label)) {
      return absl::AlreadyExistsError(absl::StrCat("qubit ", label.ToString(), " already exists"));
    }
  }
  order_.insert(order_.end(), factor.labels().begin(), factor.labels().end());
  factors_.push_back(std::move(factor));
  return absl::OkStatus();
}

bool JointState::Contains(const QubitLabel& label) const {
  return std::find(order_.begin(), order_.end(), label) != order_.end();
}

absl::StatusOr<std::vector<QubitLabel>> JointState::Register(std::string_view name) const {
  std::vector<QubitLabel> out;
  for (const auto& label : order_) {
    if (label.reg == name) out.push_back(label);
  }
  if (out.empty()) return absl::NotFoundError(absl::StrCat("unknown register ", std::string(name)));
  std::sort(out.begin(), out.end(),
            [](const QubitLabel& a, const QubitLabel& b) { return a.index < b.index; });
  return out;
}

size_t JointState::MaxFactorDimension() const {
  size_t out = 1;
  for (const auto& f : factors_) out = std::max(out, f.dimension());
  return out;
}

absl::StatusOr<size_t> JointState::FactorOf(const QubitLabel& label) const {
  for (size_t f = 0; f < factors_.size(); ++f) {
    if (factors_[f].Contains(label)) return f;
  }
  return absl::NotFoundError(absl::StrCat("unknown qubit ", label.ToString()));
}

absl::StatusOr<StateVector*> JointState::Merge(std::span<const QubitLabel> labels) {
  if (labels.empty()) return absl::InvalidArgumentError("nothing to merge");
  std::vector<size_t> touched;
  for (const auto& label : labels) {
    QPIR_ASSIGN_OR_RETURN(size_t f, FactorOf(label));
    if (std::find(touched.begin(), touched.end(), f) == touched.end()) touched.push_back(f);
  }
  std::sort(touched.begin(), touched.end());
  if (touched.size() == 1) return &factors_[touched[0]];
  StateVector merged = factors_[touched[0]];
  for (size_t k = 1; k < touched.size(); ++k) {
    QPIR_ASSIGN_OR_RETURN(merged, merged.Tensor(factors_[touched[k]], qubit_cap_));
  }
  for (size_t k = touched.size(); k-- > 1;) {
    factors_.erase(factors_.begin() + static_cast<std::ptrdiff_t>(touched[k]));
  }
  factors_[touched[0]] = std::move(merged);
  return &factors_[touched[0]];
}

absl::Status JointState::Apply(const Gate& gate, std::span<const QubitLabel> targets) {
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(targets));
  return ApplyGate(*factor, gate, targets);
}

absl::Status JointState::ApplySingle(const Mat2& u, const QubitLabel& target) {
  const QubitLabel one[] = {target};
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(one));
  return factor->ApplySingle(u, target);
}

absl::Status JointState::ApplyXorOracle(std::span<const QubitLabel> inputs,
                                        std::span<const QubitLabel> outputs,
                                        const std::function<uint64_t(uint64_t)>& f) {
  std::vector<QubitLabel> all(inputs.begin(), inputs.end());
  all.insert(all.end(), outputs.begin(), outputs.end());
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(all));
  return factor->ApplyXorOracle(inputs, outputs, f);
}

absl::Status JointState::ApplyQft(std::span<const QubitLabel> reg) {
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(reg));
  return factor->ApplyQft(reg);
}

absl::Status JointState::ApplyInverseQft(std::span<const QubitLabel> reg) {
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(reg));
  return factor->ApplyInverseQft(reg);
}

absl::StatusOr<std::vector<double>> JointState::Probabilities(
    std::span<const QubitLabel> labels) const {
  // Labels in different factors are independent: the joint distribution is
  // the product of per-factor marginals.
  std::map<size_t, std::vector<int>> by_factor;  // factor -> positions in `labels`
  for (int k = 0; k < static_cast<int>(labels.size()); ++k) {
    QPIR_ASSIGN_OR_RETURN(size_t f, FactorOf(labels[k]));
    by_factor[f].push_back(k);
  }
  const int width = static_cast<int>(labels.size());
  std::vector<double> out(size_t{1} << width, 1.0);
  for (const auto& [f, slots] : by_factor) {
    std::vector<QubitLabel> sub;
    for (int k : slots) sub.push_back(labels[k]);
    QPIR_ASSIGN_OR_RETURN(std::vector<double> marginal, factors_[f].Probabilities(sub));
    for (uint64_t v = 0; v < out.size(); ++v) {
      uint64_t sv = 0;
      for (int k : slots) sv = (sv << 1) | ((v >> (width - 1 - k)) & 1);
      out[v] *= marginal[sv];
    }
  }
  return out;
}

absl::StatusOr<uint64_t> JointState::Measure(std::span<const QubitLabel> labels, Rng& rng,
                                             double* probability) {
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(labels));
  QPIR_ASSIGN_OR_RETURN(std::vector<double> probs, factor->Probabilities(labels));
  QPIR_ASSIGN_OR_RETURN(uint64_t value, factor->MeasureInPlace(labels, rng));
  if (probability != nullptr) *probability = probs[value];
  QPIR_RETURN_IF_ERROR(factor->ExtractDefinite(labels).status());
  factors_.erase(std::remove_if(factors_.begin(), factors_.end(),
                                [](const StateVector& s) { return s.num_qubits() == 0; }),
                 factors_.end());
  const int width = static_cast<int>(labels.size());
  for (int k = 0; k < width; ++k) {
    const bool bit = (value >> (width - 1 - k)) & 1;
    QPIR_ASSIGN_OR_RETURN(StateVector single,
                          StateVector::FromAmplitudes({labels[k]}, bit ? std::vector<Complex>{0.0, 1.0}
                                                                       : std::vector<Complex>{1.0, 0.0}));
    factors_.push_back(std::move(single));
  }
  return value;
}

absl::StatusOr<BellLabel> JointState::MeasureBell(const QubitLabel& a, const QubitLabel& b,
                                                  Rng& rng) {
  const QubitLabel pair[] = {a, b};
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(pair));
  QPIR_ASSIGN_OR_RETURN(BellLabel label, MeasureBellInPlace(*factor, a, b, rng));
  QPIR_RETURN_IF_ERROR(TrySplit(pair).status());
  return label;
}

absl::StatusOr<int> JointState::MeasureRotated(const QubitLabel& qubit, double theta, Rng& rng) {
  const QubitLabel one[] = {qubit};
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(one));
  QPIR_ASSIGN_OR_RETURN(int bit, MeasureRotatedInPlace(*factor, qubit, theta, rng));
  QPIR_RETURN_IF_ERROR(TrySplit(one).status());
  return bit;
}

absl::StatusOr<double> JointState::RotatedZeroProbability(const QubitLabel& qubit,
                                                          double theta) const {
  QPIR_ASSIGN_OR_RETURN(size_t f, FactorOf(qubit));
  return quantum::RotatedZeroProbability(factors_[f], qubit, theta);
}

absl::StatusOr<bool> JointState::TrySplit(std::span<const QubitLabel> group) {
  QPIR_ASSIGN_OR_RETURN(StateVector * factor, Merge(group));
  if (static_cast<size_t>(factor->num_qubits()) == group.size()) return true;
  std::vector<QubitLabel> rest;
  for (const auto& label : factor->labels()) {
    if (std::find(group.begin(), group.end(), label) == group.end()) rest.push_back(label);
  }
  std::vector<QubitLabel> order(group.begin(), group.end());
  order.insert(order.end(), rest.begin(), rest.end());
  QPIR_ASSIGN_OR_RETURN(StateVector reordered, factor->Reordered(order));
  const size_t dg = size_t{1} << group.size();
  const size_t dr = size_t{1} << rest.size();
  const auto amps = reordered.amplitudes();
  // Rank-one test on the dg x dr coefficient matrix.
  size_t best = 0;
  double best_norm = -1.0;
  for (size_t g = 0; g < dg; ++g) {
    double n = 0.0;
    for (size_t r = 0; r < dr; ++r) n += std::norm(amps[g * dr + r]);
    if (n > best_norm) {
      best_norm = n;
      best = g;
    }
  }
  std::vector<Complex> rest_amps(dr), group_amps(dg, Complex(0.0));
  const double scale = 1.0 / std::sqrt(best_norm);
  for (size_t r = 0; r < dr; ++r) rest_amps[r] = amps[best * dr + r] * scale;
  for (size_t g = 0; g < dg; ++g) {
    for (size_t r = 0; r < dr; ++r) group_amps[g] += std::conj(rest_amps[r]) * amps[g * dr + r];
  }
  double residual = 0.0;
  for (size_t g = 0; g < dg; ++g) {
    for (size_t r = 0; r < dr; ++r) {
      residual += std::norm(amps[g * dr + r] - group_amps[g] * rest_amps[r]);
    }
  }
  if (residual > kTolerance) return false;
  QPIR_ASSIGN_OR_RETURN(StateVector group_state,
                        StateVector::FromAmplitudes(std::vector<QubitLabel>(group.begin(), group.end()),
                                                    std::move(group_amps)));
  QPIR_ASSIGN_OR_RETURN(StateVector rest_state,
                        StateVector::FromAmplitudes(std::move(rest), std::move(rest_amps)));
  *factor = std::move(rest_state);
  factors_.push_back(std::move(group_state));
  return true;
}

absl::StatusOr<DensityMatrix> JointState::ReducedState(std::span<const QubitLabel> keep) const {
  if (keep.empty()) return absl::InvalidArgumentError("partial trace needs a nonempty keep set");
  std::map<size_t, std::vector<QubitLabel>> by_factor;
  for (const auto& label : keep) {
    QPIR_ASSIGN_OR_RETURN(size_t f, FactorOf(label));
    by_factor[f].push_back(label);
  }
  std::optional<DensityMatrix> rho;
  for (const auto& [f, sub] : by_factor) {
    QPIR_ASSIGN_OR_RETURN(DensityMatrix part, PartialTrace(factors_[f], sub));
    rho = rho.has_value() ? rho->Tensor(part) : std::move(part);
  }
  return rho->Reordered(keep);
}

absl::StatusOr<StateVector> JointState::ToStateVector() const {
  if (factors_.empty()) return absl::FailedPreconditionError("empty joint state");
  StateVector out = factors_[0];
  for (size_t f = 1; f < factors_.size(); ++f) {
    QPIR_ASSIGN_OR_RETURN(out, out.Tensor(factors_[f], qubit_cap_));
  }
  return out.Reordered(order_);
}

}  // namespace qpir::quantum
