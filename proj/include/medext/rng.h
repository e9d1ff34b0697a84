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

#ifndef MEDEXT_RNG_H_
#define MEDEXT_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace medext::rng {

// std::mt19937_64's output sequence is fixed by the standard; the
// distributions below are implemented here so draws are identical on every
// standard library.
using Engine = std::mt19937_64;

// Stream seed for (seed, key, index). Distinct keys or indices give
// unrelated streams, which is what makes per-record and per-subset draws
// independent of iteration order and thread count.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view key,
                          std::uint64_t index = 0);

Engine make_engine(std::uint64_t seed, std::string_view key,
                   std::uint64_t index = 0);

// Uniform integer in [0, n). n must be positive.
std::size_t uniform_index(Engine& engine, std::size_t n);

// Uniform double in [0, 1) with 53 random bits.
double uniform01(Engine& engine);

// Standard normal variate (Box-Muller, one value per call).
double standard_normal(Engine& engine);

}  // namespace medext::rng

#endif  // MEDEXT_RNG_H_
