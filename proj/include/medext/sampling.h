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

#ifndef MEDEXT_SAMPLING_H_
#define MEDEXT_SAMPLING_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "medext/corpus.h"

namespace medext {

struct SubsetPlan {
  std::size_t k = 6;
  double sample_fraction = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// round-half-up(fraction * n), but never below 1.
std::size_t subset_size(std::size_t n, double sample_fraction);

// Subset `index` of the plan: a with-replacement draw from its own RNG
// stream. Repeated draws of one source tweet get ids suffixed "#bsN".
Dataset bootstrap_subset(const Dataset& dataset, const SubsetPlan& plan,
                         std::size_t index);

// All k subsets, generated in parallel.
std::vector<Dataset> bootstrap_subsets(const Dataset& dataset,
                                       const SubsetPlan& plan);

// Training/validation subsets that share an index. The validation member is
// what an external trainer would use for early stopping.
struct SubsetPair {
  Dataset train;
  Dataset validation;
};

std::vector<SubsetPair> bootstrap_pairs(const Dataset& train,
                                        const Dataset& validation,
                                        const SubsetPlan& plan);

}  // namespace medext

#endif  // MEDEXT_SAMPLING_H_
