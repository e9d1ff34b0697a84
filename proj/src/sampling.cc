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

#include "medext/sampling.h"

#include <string>
#include <unordered_map>
#include <unordered_set>

#include "medext/error.h"
#include "medext/rng.h"

namespace medext {
namespace {

Dataset Draw(const Dataset& dataset, const SubsetPlan& plan, std::size_t index,
             std::string_view stream) {
  if (dataset.tweets.empty()) {
    throw Error("empty dataset", "cannot subsample an empty dataset");
  }
  const std::size_t size = subset_size(dataset.size(), plan.sample_fraction);
  rng::Engine engine = rng::make_engine(plan.seed, stream, index);

  Dataset out;
  out.name = dataset.name + ".subset" + std::to_string(index);
  out.tweets.reserve(size);
  std::unordered_set<std::string> ids;
  std::unordered_map<std::size_t, std::size_t> draws;
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t pick = rng::uniform_index(engine, dataset.size());
    Tweet tweet = dataset.tweets[pick];
    std::size_t& n = draws[pick];
    if (n++ > 0 || ids.count(tweet.id)) {
      const std::string base = tweet.id;
      std::size_t suffix = n - 1;
      do {
        tweet.id = base + "#bs" + std::to_string(suffix++);
      } while (ids.count(tweet.id));
    }
    ids.insert(tweet.id);
    out.tweets.push_back(std::move(tweet));
  }
  return out;
}

}  // namespace

void SubsetPlan::validate() const {
  if (k < 1) throw Error("invalid subset plan", "k must be at least 1");
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw Error("invalid subset plan", "sample_fraction must be in (0,1]");
  }
}

std::size_t subset_size(std::size_t n, double sample_fraction) {
  const std::size_t size = round_half_up(sample_fraction * static_cast<double>(n));
  return size == 0 ? 1 : size;
}

Dataset bootstrap_subset(const Dataset& dataset, const SubsetPlan& plan,
                         std::size_t index) {
  plan.validate();
  return Draw(dataset, plan, index, "bootstrap/train");
}

std::vector<Dataset> bootstrap_subsets(const Dataset& dataset,
                                       const SubsetPlan& plan) {
  plan.validate();
  if (dataset.tweets.empty()) {
    throw Error("empty dataset", "cannot subsample an empty dataset");
  }
  std::vector<Dataset> out(plan.k);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < plan.k; ++i) {
    out[i] = Draw(dataset, plan, i, "bootstrap/train");
  }
  return out;
}

std::vector<SubsetPair> bootstrap_pairs(const Dataset& train,
                                        const Dataset& validation,
                                        const SubsetPlan& plan) {
  plan.validate();
  if (train.tweets.empty() || validation.tweets.empty()) {
    throw Error("empty dataset", "cannot subsample an empty dataset");
  }
  std::vector<SubsetPair> out(plan.k);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < plan.k; ++i) {
    out[i].train = Draw(train, plan, i, "bootstrap/train");
    out[i].validation = Draw(validation, plan, i, "bootstrap/validation");
  }
  return out;
}

}  // namespace medext
