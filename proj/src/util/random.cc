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

#include "qpir/util/random.h"

#include <cassert>

namespace qpir {

double UniformUnit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

uint64_t UniformBelow(Rng& rng, uint64_t bound) {
  assert(bound > 0);
  // Rejection sampling on the largest multiple of `bound`.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return draw % bound;
}

uint64_t UniformBits(Rng& rng, int bits) {
  if (bits <= 0) return 0;
  const uint64_t draw = rng();
  return bits >= 64 ? draw : (draw >> (64 - bits));
}

bool CoinFlip(Rng& rng) { return (rng() >> 63) != 0; }

Rng DeriveStream(uint64_t seed, uint64_t stream) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32),
                    static_cast<uint32_t>(stream),
                    static_cast<uint32_t>(stream >> 32)};
  return Rng(seq);
}

}  // namespace qpir
