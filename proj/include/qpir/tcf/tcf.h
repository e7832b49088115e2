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

#ifndef QPIR_TCF_TCF_H_
#define QPIR_TCF_TCF_H_

#include <cstdint>
#include <memory>
#include <string>
#include <utility>

#include "absl/status/statusor.h"
#include "qpir/quantum/joint_state.h"
#include "qpir/quantum/state_vector.h"
#include "qpir/util/random.h"

namespace qpir::tcf {

inline constexpr int kMaxDomainBits = 12;

// Opaque image point. Only the tag leaves the evaluator.
struct ImageHandle {
  uint64_t tag = 0;
  friend bool operator==(const ImageHandle&, const ImageHandle&) = default;
};

struct ClawPair {
  uint64_t x0 = 0;
  uint64_t x1 = 0;
  ImageHandle image;
};

namespace internal {
struct TcfTables;
}  // namespace internal

class TcfInstance;
class Trapdoor;

// Fixed shift, for tests and replays.
absl::StatusOr<std::pair<TcfInstance, Trapdoor>> GenerateWithShift(int domain_bits,
                                                                   uint64_t shift, Rng& rng);

// Two-to-one pair f_b(x) = T((x + b*s) mod 2^n) with a secret permutation T
// and secret shift s. This object is the evaluation oracle: it exposes no
// access to T or s.
class TcfInstance {
 public:
  int domain_bits() const { return domain_bits_; }

  absl::StatusOr<ImageHandle> Eval(int branch, uint64_t x) const;
  // n-bit register encoding of f_b(x), used by the quantum oracle.
  absl::StatusOr<uint64_t> EvalCode(int branch, uint64_t x) const;
  // Handle of a measured image register value.
  absl::StatusOr<ImageHandle> HandleForCode(uint64_t code) const;

 private:
  friend absl::StatusOr<std::pair<TcfInstance, Trapdoor>> GenerateWithShift(int, uint64_t, Rng&);
  TcfInstance(int n, std::shared_ptr<const internal::TcfTables> tables)
      : domain_bits_(n), tables_(std::move(tables)) {}

  int domain_bits_;
  std::shared_ptr<const internal::TcfTables> tables_;
};

class Trapdoor {
 public:
  uint64_t shift() const;
  // The unique claw of `image`; error if it is not an image point.
  absl::StatusOr<ClawPair> Invert(const ImageHandle& image) const;

 private:
  friend absl::StatusOr<std::pair<TcfInstance, Trapdoor>> GenerateWithShift(int, uint64_t, Rng&);
  explicit Trapdoor(std::shared_ptr<const internal::TcfTables> tables)
      : tables_(std::move(tables)) {}

  std::shared_ptr<const internal::TcfTables> tables_;
};

// n in [1, 12]; s uniform in [1, 2^n).
absl::StatusOr<std::pair<TcfInstance, Trapdoor>> Generate(int domain_bits, Rng& rng);

struct ClawRegisters {
  std::string branch = "b";
  std::string x = "x";
  std::string y = "y";
};

// (1/sqrt(2^{n+1})) sum_{b,x} |b>|x>|f_b(x)> over fresh registers of `state`.
absl::Status PrepareClawSuperposition(const TcfInstance& instance, quantum::JointState& state,
                                      const ClawRegisters& regs = {});
absl::StatusOr<quantum::StateVector> PrepareClawSuperposition(const TcfInstance& instance,
                                                              const ClawRegisters& regs = {});

}  // namespace qpir::tcf

#endif  // QPIR_TCF_TCF_H_
