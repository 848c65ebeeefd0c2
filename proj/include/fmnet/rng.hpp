/*
 * Copyright 2026 The fmnet Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace fmnet {

using Rng = std::mt19937_64;

// Named, independent streams derived from one experiment seed.
enum class Stream : std::uint64_t {
  traffic = 1,
  allocator = 2,
  routing = 3,
  pattern = 4,
  mapping = 5,
};

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return Rng(seq);
}

// Uniform integer in [0, bound).
inline int uniform_below(Rng& rng, int bound) {
  return std::uniform_int_distribution<int>(0, bound - 1)(rng);
}

}  // namespace fmnet
