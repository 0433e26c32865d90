// Copyright 2026 The falsealarm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Seeded helpers whose output is identical across standard libraries.
// std::mt19937_64 is fully specified; the <random> distributions are not.

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace fa {

using Rng = std::mt19937_64;

/// Uniform integer in [0, bound), by rejection sampling.
inline std::uint64_t UniformIndex(Rng& rng, std::uint64_t bound) {
  const std::uint64_t rem = (Rng::max() % bound + 1) % bound;  // 2^64 mod bound
  if (rem == 0) return rng() % bound;
  const std::uint64_t limit = std::uint64_t{0} - rem;
  for (;;) {
    const std::uint64_t x = rng();
    if (x < limit) return x % bound;
  }
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double UniformUnit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

template <typename T>
void Shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(UniformIndex(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace fa
