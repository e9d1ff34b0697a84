// Copyright 2026 The medext Authors
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

#include "medext/rng.h"

#include <cmath>
#include <limits>
#include <numbers>

namespace medext::rng {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::string_view key,
                          std::uint64_t index) {
  // FNV-1a over the key, then mixed with seed and index.
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : key) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return SplitMix64(SplitMix64(seed ^ h) + SplitMix64(index + 0x632BE59BD9B4E019ULL));
}

Engine make_engine(std::uint64_t seed, std::string_view key,
                   std::uint64_t index) {
  return Engine(derive_seed(seed, key, index));
}

std::size_t uniform_index(Engine& engine, std::size_t n) {
  const std::uint64_t range = n;
  // Rejection on the top partial bucket keeps the draw unbiased.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

double standard_normal(Engine& engine) {
  double u1;
  do {
    u1 = uniform01(engine);
  } while (u1 <= 0.0);
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

}  // namespace medext::rng
