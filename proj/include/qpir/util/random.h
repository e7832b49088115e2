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

#ifndef QPIR_UTIL_RANDOM_H_
#define QPIR_UTIL_RANDOM_H_

#include <cstdint>
#include <random>

namespace qpir {

// Every random choice in the library is drawn from an injected generator of
// this type. The helpers below avoid the implementation-defined standard
// distributions so that transcripts are identical across standard libraries.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits of one draw.
double UniformUnit(Rng& rng);

// Uniform integer in [0, bound). `bound` must be positive.
uint64_t UniformBelow(Rng& rng, uint64_t bound);

// Uniformly random `bits`-bit value (bits <= 64).
uint64_t UniformBits(Rng& rng, int bits);

bool CoinFlip(Rng& rng);

// Independent stream for trial `stream` of a run seeded with `seed`.
Rng DeriveStream(uint64_t seed, uint64_t stream);

}  // namespace qpir

#endif  // QPIR_UTIL_RANDOM_H_
