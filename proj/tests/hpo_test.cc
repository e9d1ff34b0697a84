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

#include "medext/hpo.h"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <numbers>
#include <sstream>

#include "medext/ensemble.h"
#include "medext/eval.h"
#include "support/expect_error.h"
#include "support/synthetic_models.h"

namespace medext::hpo {
namespace {

SearchSpace Unit(std::size_t dims) {
  SearchSpace s;
  for (std::size_t d = 0; d < dims; ++d) s.dims.push_back({"x" + std::to_string(d), 0.0, 1.0});
  return s;
}

TEST(GridTest, PointsMatchNestedLoops) {
  SearchSpace space{{{"a", -1.0, 1.0}, {"b", 0.0, 3.0}, {"c", 0.2, 0.4}}};
  const std::vector<std::size_t> res = {3, 4, 2};
  ASSERT_EQ(grid_size(res), 24u);
  std::size_t flat = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      for (std::size_t k = 0; k < 2; ++k, ++flat) {
        const std::vector<double> expected = {-1.0 + i * 2.0 / 2, 0.0 + j * 3.0 / 3,
                                              0.2 + k * 0.2 / 1};
        const auto got = grid_point(space, res, flat);
        for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(got[d], expected[d], 1e-15);
      }
    }
  }
  // The last point hits the upper bounds exactly.
  EXPECT_EQ(grid_point(space, res, 23), (std::vector<double>{1.0, 3.0, 0.4}));
  EXPECT_CONTRACT(grid_size(std::vector<std::size_t>{3, 1}), "invalid grid resolution");
}

TEST(GridTest, ConstantObjectivePicksSmallestPoint) {
  const auto best = grid_search(Unit(2), std::vector<std::size_t>{5, 5},
                                [](std::span<const double>) { return 0.5; });
  EXPECT_EQ(best.params, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(best.index, 0u);
}

TEST(GridTest, AnalyticMaximum) {
  SearchSpace space{{{"t", 0.1, 0.9}}};
  const auto best = grid_search(space, std::vector<std::size_t>{9}, [](std::span<const double> p) {
    return -(p[0] - 0.5) * (p[0] - 0.5);
  });
  EXPECT_NEAR(best.params[0], 0.5, 1e-12);
}

TEST(GridTest, MatchesBruteForceEnumeration) {
  const SearchSpace space = Unit(3);
  const std::vector<std::size_t> res = {4, 5, 3};
  // A bumpy objective with plenty of ties.
  const Objective f = [](std::span<const double> p) {
    return std::round(4.0 * std::sin(7.0 * p[0] + 3.0 * p[1] * p[2])) / 4.0;
  };
  double best = -1e9;
  std::vector<double> argmax;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t k = 0; k < 3; ++k) {
        const std::vector<double> p = {i / 3.0, j / 4.0, k / 2.0};
        const double v = f(p);
        if (v > best) {  // strict: the first (smallest) point wins ties
          best = v;
          argmax = p;
        }
      }
    }
  }
  const auto got = grid_search(space, res, f);
  EXPECT_EQ(got.objective, best);
  for (std::size_t d = 0; d < 3; ++d) EXPECT_NEAR(got.params[d], argmax[d], 1e-15);
}

TEST(GridTest, FailureNamesThePoint) {
  try {
    grid_search(Unit(1), std::vector<std::size_t>{3}, [](std::span<const double> p) -> double {
      if (p[0] == 0.5) throw std::runtime_error("boom");
      return 0.0;
    });
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.contract(), "objective evaluation failed");
    EXPECT_NE(e.detail().find("0.5"), std::string::npos);
    EXPECT_NE(e.detail().find("boom"), std::string::npos);
  }
}

TEST(ParzenTest, Bandwidths) {
  const std::vector<double> obs = {0.1, 0.2, 0.5};
  const auto bw = parzen_bandwidths(0.0, 1.0, obs);
  EXPECT_NEAR(bw[0], 0.25, 1e-12);  // floor 1/4 with three points
  EXPECT_NEAR(bw[1], 0.3, 1e-12);
  EXPECT_NEAR(bw[2], 0.3, 1e-12);
  EXPECT_EQ(parzen_bandwidths(0.0, 2.0, std::vector<double>{0.7}), std::vector<double>{2.0});
  const auto tight = parzen_bandwidths(0.0, 1.0, std::vector<double>{0.5, 0.5001});
  EXPECT_NEAR(tight[0], 1.0 / 3.0, 1e-12);
  std::vector<double> many(300);
  for (std::size_t i = 0; i < many.size(); ++i) many[i] = 0.5 + 1e-6 * i;
  for (double b : parzen_bandwidths(0.0, 1.0, many)) EXPECT_NEAR(b, 0.01, 1e-12);
}

// Closed form of a single truncated Gaussian kernel mixed with the prior.
double KernelPdf(double x, double mu, double sigma, double low, double high, double prior) {
  auto cdf = [](double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); };
  const double mass = cdf((high - mu) / sigma) - cdf((low - mu) / sigma);
  const double gauss = std::exp(-0.5 * std::pow((x - mu) / sigma, 2)) /
                       (sigma * std::sqrt(2 * std::numbers::pi) * mass);
  return (gauss + prior / (high - low)) / (1.0 + prior);
}

TEST(ParzenTest, SingleKernelDensityRatio) {
  const ParzenEstimator l(0.0, 1.0, {0.2}, {0.1}, 0.5);
  const ParzenEstimator g(0.0, 1.0, {0.7}, {0.25}, 0.5);
  const std::vector<std::vector<double>> candidates = {{0.9}, {0.3}, {0.15}};
  std::size_t expected = 0;
  double best = -1.0;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const double x = candidates[c][0];
    EXPECT_NEAR(l.pdf(x), KernelPdf(x, 0.2, 0.1, 0.0, 1.0, 0.5), 1e-12);
    EXPECT_NEAR(g.pdf(x), KernelPdf(x, 0.7, 0.25, 0.0, 1.0, 0.5), 1e-12);
    const double ratio = KernelPdf(x, 0.2, 0.1, 0.0, 1.0, 0.5) / KernelPdf(x, 0.7, 0.25, 0.0, 1.0, 0.5);
    if (ratio > best) {
      best = ratio;
      expected = c;
    }
  }
  const std::vector<ParzenEstimator> good = {l}, bad = {g};
  EXPECT_EQ(select_candidate(good, bad, candidates), expected);
}

TEST(ParzenTest, IntegratesToOneAndSamplesInBounds) {
  const auto est = ParzenEstimator::fit(-2.0, 3.0, {-1.9, 0.0, 0.1, 2.9}, 1.0);
  double integral = 0.0;
  const int steps = 200000;
  for (int i = 0; i < steps; ++i) integral += est.pdf(-2.0 + 5.0 * (i + 0.5) / steps) * 5.0 / steps;
  EXPECT_NEAR(integral, 1.0, 1e-6);
  rng::Engine engine(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = est.sample(engine);
    ASSERT_GE(x, -2.0);
    ASSERT_LE(x, 3.0);
  }
}

TEST(TpeTest, StartupIsUniformInBounds) {
  SearchSpace space{{{"a", -5.0, 5.0}, {"b", 0.0, 0.01}}};
  std::vector<TrialRecord> history;
  for (std::size_t i = 0; i < 19; ++i) {
    const auto s = tpe_suggest(history, space, TpeConfig{}, 3);
    EXPECT_EQ(s.source, TpeSuggestion::Source::kStartup);
    EXPECT_TRUE(space.contains(s.params));
    history.push_back({i, s.params, 0.0});
  }
}

TEST(TpeTest, DegenerateHistoryFallsBack) {
  std::vector<TrialRecord> history;
  for (std::size_t i = 0; i < 25; ++i) history.push_back({i, {i / 25.0}, 0.3});
  const auto s = tpe_suggest(history, Unit(1), TpeConfig{}, 1);
  EXPECT_EQ(s.source, TpeSuggestion::Source::kDegenerateFallback);
}

TEST(TpeTest, ModelSuggestionsStayInBounds) {
  SearchSpace space{{{"a", 0.25, 0.75}, {"b", 10.0, 20.0}}};
  std::vector<TrialRecord> history;
  for (std::size_t i = 0; i < 60; ++i) {
    const auto s = tpe_suggest(history, space, TpeConfig{}, 8);
    ASSERT_TRUE(space.contains(s.params));
    history.push_back({i, s.params, -std::abs(s.params[0] - 0.3) - std::abs(s.params[1] - 11)});
  }
}

TEST(TpeTest, StepObjectivePullsTowardGoodRegion) {
  SearchSpace space{{{"threshold", 0.0, 1.0}}};
  int good = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    rng::Engine engine(seed + 1000);
    std::vector<TrialRecord> history;
    for (std::size_t i = 0; i < 40; ++i) {
      const double t = rng::uniform01(engine);
      history.push_back({i, {t}, t < 0.3 ? 1.0 : 0.0});
    }
    const auto s = tpe_suggest(history, space, TpeConfig{}, seed);
    EXPECT_EQ(s.source, TpeSuggestion::Source::kModel);
    good += s.params[0] < 0.3;
  }
  EXPECT_GE(good, 90);
}

TEST(OptimizeTest, BudgetOne) {
  OptimizeOptions grid;
  grid.method = Method::kGrid;
  grid.budget = 1;
  const auto g = optimize(Unit(2), [](std::span<const double>) { return 0.1; }, grid);
  ASSERT_EQ(g.history.size(), 1u);
  EXPECT_EQ(g.best.params, (std::vector<double>{0.0, 0.0}));
  OptimizeOptions tpe;
  tpe.budget = 1;
  const auto t = optimize(Unit(2), [](std::span<const double>) { return 0.1; }, tpe);
  ASSERT_EQ(t.history.size(), 1u);
  EXPECT_TRUE(Unit(2).contains(t.best.params));
}

TEST(OptimizeTest, DeterministicAndResumable) {
  const Objective f = [](std::span<const double> p) { return -std::pow(p[0] - 0.6, 2) - p[1]; };
  OptimizeOptions options;
  options.budget = 40;
  options.seed = 17;
  const auto full = optimize(Unit(2), f, options);
  EXPECT_EQ(optimize(Unit(2), f, options).history, full.history);

  OptimizeOptions first = options;
  first.budget = 25;
  auto part = optimize(Unit(2), f, first);
  std::stringstream log;
  for (const auto& t : part.history) log << serialize_trial(t);
  OptimizeOptions rest = options;
  rest.budget = 15;
  rest.warm_start = parse_trial_log(log);
  EXPECT_EQ(optimize(Unit(2), f, rest).history, full.history);

  OptimizeOptions grid;
  grid.method = Method::kGrid;
  grid.resolution = {4};
  grid.budget = 16;
  const auto whole = optimize(Unit(2), f, grid);
  grid.budget = 6;
  grid.warm_start.assign(whole.history.begin(), whole.history.begin() + 10);
  EXPECT_EQ(optimize(Unit(2), f, grid).history, whole.history);
}

TEST(TrialLogTest, RoundTripAndSequenceCheck) {
  const TrialRecord t{0, {0.1, 1.0 / 3.0}, -0.25};
  std::stringstream ok(serialize_trial(t) + serialize_trial({1, {0.5, 0.5}, 0.9}));
  const auto parsed = parse_trial_log(ok);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0], t);
  std::stringstream gap(serialize_trial(t) + serialize_trial({5, {0.5, 0.5}, 0.9}));
  EXPECT_CONTRACT(parse_trial_log(gap), "malformed line");
}

TEST(EnsembleObjectiveTest, MatchesEvaluate) {
  const auto corpus = testing::MakeThreeModelCorpus();
  const Objective f = ensemble_objective(corpus.gold, corpus.models);
  for (const std::vector<double>& p : std::vector<std::vector<double>>{
           {1, 1, 1, 0.5}, {0.3, 0.9, 0.0, 0.2}, {0, 0, 1, 0.6}, {1, 0, 0, 0.95}}) {
    const Dataset pred = predict_spans(
        corpus.gold, corpus.models, EnsembleParams{{p[0], p[1], p[2]}, p[3]});
    EXPECT_EQ(f(p), evaluate(corpus.gold, pred).overlapping.f1);
  }
  EXPECT_EQ(f(std::vector<double>{0, 0, 0, 0.5}), 0.0);
}

// Exhaustive check over the 11^4 grid: the best point gives the noise model
// no weight.
TEST(EnsembleObjectiveTest, GridArgmaxIgnoresNoiseModel) {
  const auto corpus = testing::MakeThreeModelCorpus();
  const SearchSpace space = SearchSpace::ensemble(3);
  const std::vector<std::size_t> res(4, 11);
  const auto best = grid_search(space, res, ensemble_objective(corpus.gold, corpus.models));

  double top = -1.0;
  std::vector<double> argmax;
  for (int a = 0; a <= 10; ++a) {
    for (int b = 0; b <= 10; ++b) {
      for (int c = 0; c <= 10; ++c) {
        if (a + b + c == 0) continue;  // scores 0
        for (int t = 0; t <= 10; ++t) {
          const double th = t == 10 ? 0.95 : 0.05 + t * (0.95 - 0.05) / 10;
          const Dataset pred = reference::predict_spans(
              corpus.gold, corpus.models, EnsembleParams{{a / 10.0, b / 10.0, c / 10.0}, th});
          const double f1 = reference::evaluate(corpus.gold, pred).overlapping.f1;
          if (f1 > top) {
            top = f1;
            argmax = {a / 10.0, b / 10.0, c / 10.0, th};
          }
        }
      }
    }
  }
  EXPECT_EQ(best.objective, top);
  for (std::size_t d = 0; d < 4; ++d) EXPECT_NEAR(best.params[d], argmax[d], 1e-12);
  EXPECT_EQ(best.params[2], 0.0);
  EXPECT_EQ(top, 1.0);
}

// Binary votes of equal quality: the optimum is a 2-of-3 rule.
TEST(EnsembleObjectiveTest, RecoversTwoOfThree) {
  const auto corpus = testing::MakeBinaryVoteCorpus();
  OptimizeOptions options;
  options.method = Method::kGrid;
  options.budget = 11 * 11 * 11 * 11;
  const auto result = optimize(SearchSpace::ensemble(3), ensemble_objective(corpus.gold, corpus.models), options);
  ASSERT_EQ(result.best.objective, 1.0);
  const EnsembleParams p{{result.best.params[0], result.best.params[1], result.best.params[2]},
                         result.best.params[3]};
  for (int votes = 0; votes < 8; ++votes) {
    std::vector<CharProbTrack> tracks;
    for (int m = 0; m < 3; ++m) {
      tracks.push_back(CharProbTrack{"v", 1, {}});
      if (votes >> m & 1) tracks.back().runs.push_back({0, 1, 1.0});
    }
    const bool yes = !aggregate(tracks, p).empty();
    EXPECT_EQ(yes, std::popcount(static_cast<unsigned>(votes)) >= 2) << votes;
  }
}

}  // namespace
}  // namespace medext::hpo
