// Copyright 2026 The qoverlap Authors
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


#pragma once

#include <cstdint>
#include <initializer_list>

namespace qoverlap {

/// splitmix64 finaliser (Steele, Lea, Flood 2014).
constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/**
 * Derive a task seed from a base seed and a path of indices.
 *
 * Each index is folded in as h <- splitmix64(h ^ splitmix64(index)), so the
 * result depends on index order and position. With no indices the base seed is
 * returned unchanged. Only fixed-width integer arithmetic is used, so results
 * agree across platforms and compilers.
 */
constexpr std::uint64_t seed_mix(std::uint64_t base, std::initializer_list<std::uint64_t> indices) noexcept {
  std::uint64_t h = base;
  for (std::uint64_t i : indices) h = splitmix64(h ^ splitmix64(i));
  return h;
}

template <class... Ix>
constexpr std::uint64_t seed_mix(std::uint64_t base, Ix... indices) noexcept {
  return seed_mix(base, {static_cast<std::uint64_t>(indices)...});
}

}  // namespace qoverlap
