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

#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>
#include <map>
#include <set>

#include "support/expect_error.h"
#include "support/generators.h"

namespace medext {
namespace {

Dataset Numbered(std::size_t n) {
  Dataset d;
  d.name = "src";
  for (std::size_t i = 0; i < n; ++i) {
    d.tweets.push_back(Tweet{"t" + std::to_string(i), "u", "text " + std::to_string(i), {}});
  }
  return d;
}

std::string SourceId(const std::string& id) { return id.substr(0, id.find("#bs")); }

TEST(BootstrapTest, SixFullSizeSubsets) {
  const Dataset d = Numbered(100);
  const auto subsets = bootstrap_subsets(d, SubsetPlan{6, 1.0, 42});
  ASSERT_EQ(subsets.size(), 6u);
  for (const Dataset& s : subsets) {
    EXPECT_EQ(s.size(), 100u);
    validate_dataset(s);
  }
}

TEST(BootstrapTest, ExpectedDistinctOriginals) {
  // E[distinct] = n (1 - (1 - 1/n)^n) for a with-replacement draw of n.
  const double expected = 100.0 * (1.0 - std::pow(0.99, 100.0));
  ASSERT_NEAR(expected, 63.4, 0.05);
  const Dataset d = Numbered(100);
  double total = 0.0;
  const int seeds = 200;
  for (int seed = 0; seed < seeds; ++seed) {
    for (const Dataset& s : bootstrap_subsets(d, SubsetPlan{6, 1.0, static_cast<std::uint64_t>(seed)})) {
      std::set<std::string> distinct;
      for (const Tweet& t : s.tweets) distinct.insert(SourceId(t.id));
      total += static_cast<double>(distinct.size());
    }
  }
  EXPECT_NEAR(total / (6.0 * seeds), expected, 3.0);
}

TEST(BootstrapTest, ElementsComeFromSource) {
  testing::Engine engine(8);
  const Dataset d = testing::RandomDataset(engine, 30, 0.4);
  std::map<std::string, Tweet> by_id;
  for (const Tweet& t : d.tweets) by_id[t.id] = t;
  for (const Dataset& s : bootstrap_subsets(d, SubsetPlan{4, 0.5, 1})) {
    EXPECT_EQ(s.size(), 15u);
    for (Tweet t : s.tweets) {
      ASSERT_TRUE(by_id.count(SourceId(t.id))) << t.id;
      t.id = SourceId(t.id);
      EXPECT_EQ(t, by_id[t.id]);
    }
  }
}

TEST(BootstrapTest, DeterministicPerIndex) {
  const Dataset d = Numbered(50);
  const SubsetPlan plan{3, 1.0, 9};
  const auto all = bootstrap_subsets(d, plan);
  EXPECT_EQ(bootstrap_subset(d, plan, 2), all[2]);
  EXPECT_EQ(bootstrap_subset(d, SubsetPlan{1, 1.0, 9}, 0), bootstrap_subset(d, SubsetPlan{1, 1.0, 9}, 0));
  EXPECT_NE(all[0], all[1]);
  omp_set_num_threads(1);
  const auto serial = bootstrap_subsets(d, plan);
  omp_set_num_threads(4);
  EXPECT_EQ(serial, bootstrap_subsets(d, plan));
}

TEST(BootstrapTest, SmallFractionFloorsAtOne) {
  EXPECT_EQ(subset_size(10, 0.1), 1u);
  EXPECT_EQ(subset_size(10, 0.01), 1u);
  EXPECT_EQ(subset_size(10, 0.25), 3u);  // 2.5 rounds half up
  EXPECT_EQ(bootstrap_subset(Numbered(10), SubsetPlan{1, 0.1, 0}, 0).size(), 1u);
}

TEST(BootstrapTest, PairsUseSeparateStreams) {
  const Dataset train = Numbered(40);
  const auto pairs = bootstrap_pairs(train, Numbered(40), SubsetPlan{2, 1.0, 5});
  ASSERT_EQ(pairs.size(), 2u);
  EXPECT_EQ(pairs[0].train, bootstrap_subset(train, SubsetPlan{2, 1.0, 5}, 0));
  EXPECT_NE(pairs[0].train.tweets, pairs[0].validation.tweets);
}

TEST(BootstrapTest, Errors) {
  EXPECT_CONTRACT(bootstrap_subsets(Dataset{}, SubsetPlan{}), "empty dataset");
  EXPECT_CONTRACT(bootstrap_subsets(Numbered(3), SubsetPlan{0, 1.0, 0}), "invalid subset plan");
  EXPECT_CONTRACT(bootstrap_subsets(Numbered(3), SubsetPlan{1, 1.5, 0}), "invalid subset plan");
}

}  // namespace
}  // namespace medext
