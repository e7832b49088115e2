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

#include "qpir/tcf/tcf.h"

#include <map>
#include <numeric>
#include <vector>

#include "absl/strings/str_cat.h"
#include "qpir/quantum/gates.h"
#include "qpir/util/status_macros.h"

namespace qpir::tcf {
namespace internal {

struct TcfTables {
  int n = 0;
  uint64_t shift = 0;
  std::vector<uint64_t> forward;  // T
  std::vector<uint64_t> inverse;  // T^{-1}
  std::vector<uint64_t> tags;     // code -> tag
  std::map<uint64_t, uint64_t> code_of_tag;
};

}  // namespace internal

namespace {

absl::Status CheckDomain(int n, int branch, uint64_t x) {
  if (branch != 0 && branch != 1) return absl::InvalidArgumentError("branch must be 0 or 1");
  if (x >= (uint64_t{1} << n)) {
    return absl::OutOfRangeError(absl::StrCat("x = ", x, " outside the ", n, "-bit domain"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<uint64_t> TcfInstance::EvalCode(int branch, uint64_t x) const {
  QPIR_RETURN_IF_ERROR(CheckDomain(domain_bits_, branch, x));
  const uint64_t mask = (uint64_t{1} << domain_bits_) - 1;
  return tables_->forward[(x + static_cast<uint64_t>(branch) * tables_->shift) & mask];
}

absl::StatusOr<ImageHandle> TcfInstance::Eval(int branch, uint64_t x) const {
  QPIR_ASSIGN_OR_RETURN(uint64_t code, EvalCode(branch, x));
  return ImageHandle{tables_->tags[code]};
}

absl::StatusOr<ImageHandle> TcfInstance::HandleForCode(uint64_t code) const {
  if (code >= tables_->tags.size()) return absl::OutOfRangeError("code outside the image set");
  return ImageHandle{tables_->tags[code]};
}

uint64_t Trapdoor::shift() const { return tables_->shift; }

absl::StatusOr<ClawPair> Trapdoor::Invert(const ImageHandle& image) const {
  auto it = tables_->code_of_tag.find(image.tag);
  if (it == tables_->code_of_tag.end()) return absl::NotFoundError("handle is not an image point");
  const uint64_t mask = (uint64_t{1} << tables_->n) - 1;
  const uint64_t x0 = tables_->inverse[it->second];
  return ClawPair{x0, (x0 - tables_->shift) & mask, image};
}

absl::StatusOr<std::pair<TcfInstance, Trapdoor>> GenerateWithShift(int domain_bits,
                                                                   uint64_t shift, Rng& rng) {
  if (domain_bits < 1 || domain_bits > kMaxDomainBits) {
    return absl::InvalidArgumentError(
        absl::StrCat("domain bits must lie in [1, ", kMaxDomainBits, "], got ", domain_bits));
  }
  const uint64_t size = uint64_t{1} << domain_bits;
  if (shift == 0 || shift >= size) return absl::InvalidArgumentError("shift must lie in [1, 2^n)");
  auto tables = std::make_shared<internal::TcfTables>();
  tables->n = domain_bits;
  tables->shift = shift;
  tables->forward.resize(size);
  std::iota(tables->forward.begin(), tables->forward.end(), 0);
  for (uint64_t k = size - 1; k > 0; --k) {
    std::swap(tables->forward[k], tables->forward[UniformBelow(rng, k + 1)]);
  }
  tables->inverse.resize(size);
  for (uint64_t x = 0; x < size; ++x) tables->inverse[tables->forward[x]] = x;
  tables->tags.resize(size);
  for (uint64_t code = 0; code < size; ++code) {
    uint64_t tag;
    do {
      tag = rng();
    } while (tables->code_of_tag.count(tag) != 0);
    tables->tags[code] = tag;
    tables->code_of_tag[tag] = code;
  }
  std::shared_ptr<const internal::TcfTables> shared = std::move(tables);
  return std::make_pair(TcfInstance(domain_bits, shared), Trapdoor(shared));
}

absl::StatusOr<std::pair<TcfInstance, Trapdoor>> Generate(int domain_bits, Rng& rng) {
  if (domain_bits < 1 || domain_bits > kMaxDomainBits) {
    return absl::InvalidArgumentError(
        absl::StrCat("domain bits must lie in [1, ", kMaxDomainBits, "], got ", domain_bits));
  }
  const uint64_t shift = 1 + UniformBelow(rng, (uint64_t{1} << domain_bits) - 1);
  return GenerateWithShift(domain_bits, shift, rng);
}

absl::Status PrepareClawSuperposition(const TcfInstance& instance, quantum::JointState& state,
                                      const ClawRegisters& regs) {
  const int n = instance.domain_bits();
  QPIR_RETURN_IF_ERROR(state.AddRegister({regs.branch, 1}));
  QPIR_RETURN_IF_ERROR(state.AddRegister({regs.x, n}));
  QPIR_RETURN_IF_ERROR(state.AddRegister({regs.y, n}));
  std::vector<quantum::QubitLabel> inputs = {{regs.branch, 0}};
  QPIR_ASSIGN_OR_RETURN(std::vector<quantum::QubitLabel> x, state.Register(regs.x));
  QPIR_ASSIGN_OR_RETURN(std::vector<quantum::QubitLabel> y, state.Register(regs.y));
  inputs.insert(inputs.end(), x.begin(), x.end());
  for (const auto& q : inputs) QPIR_RETURN_IF_ERROR(state.Apply(quantum::HGate{}, {q}));
  return state.ApplyXorOracle(inputs, y, [&](uint64_t bx) {
    const int branch = static_cast<int>(bx >> n);
    const uint64_t value = bx & ((uint64_t{1} << n) - 1);
    return *instance.EvalCode(branch, value);
  });
}

absl::StatusOr<quantum::StateVector> PrepareClawSuperposition(const TcfInstance& instance,
                                                              const ClawRegisters& regs) {
  quantum::JointState state;
  QPIR_RETURN_IF_ERROR(PrepareClawSuperposition(instance, state, regs));
  return state.ToStateVector();
}

}  // namespace qpir::tcf
