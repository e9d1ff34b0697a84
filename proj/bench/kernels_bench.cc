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

// Parallel kernels against their serial reference implementations. Thread
// count is the benchmark argument for the parallel variants.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <string>
#include <vector>

#include "medext/corpus.h"
#include "medext/ensemble.h"
#include "medext/eval.h"
#include "medext/hpo.h"
#include "medext/lexicon.h"
#include "medext/tagger.h"

namespace {

using namespace medext;

// The bundled corpus repeated under fresh ids.
const Dataset& Corpus() {
  static const Dataset big = [] {
    const Dataset base = read_dataset(std::string(MEDEXT_DATA_DIR) + "/synthetic_tweets.jsonl");
    Dataset out;
    out.name = "bench";
    for (int copy = 0; copy < 50; ++copy) {
      for (Tweet t : base.tweets) {
        t.id += "-" + std::to_string(copy);
        out.tweets.push_back(std::move(t));
      }
    }
    return out;
  }();
  return big;
}

GazetteerConfig Config(int variant) {
  GazetteerConfig c;
  c.lexicon = Lexicon::read_drug_list(std::string(MEDEXT_DATA_DIR) + "/manual_drugs.txt");
  if (variant > 0) c.lexicon.merge(Lexicon::from_dataset(Corpus()));
  c.attach_hashtag = variant == 1;
  c.max_edit_distance = variant == 2 ? 0 : 1;
  return c;
}

const std::vector<TrackSet>& Models() {
  static const std::vector<TrackSet> models = [] {
    std::vector<TrackSet> m;
    for (int v = 0; v < 3; ++v) m.push_back(tag_dataset(Corpus(), Config(v)));
    return m;
  }();
  return models;
}

const EnsembleParams kParams{{1.0, 1.0, 1.0}, 0.5};

void BM_TagDataset(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const GazetteerConfig config = Config(1);
  for (auto _ : state) benchmark::DoNotOptimize(tag_dataset(Corpus(), config));
  state.SetItemsProcessed(state.iterations() * Corpus().size());
}
BENCHMARK(BM_TagDataset)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_TagDatasetReference(benchmark::State& state) {
  const GazetteerConfig config = Config(1);
  for (auto _ : state) benchmark::DoNotOptimize(reference::tag_dataset(Corpus(), config));
  state.SetItemsProcessed(state.iterations() * Corpus().size());
}
BENCHMARK(BM_TagDatasetReference)->Unit(benchmark::kMillisecond);

void BM_PredictSpans(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  Models();  // tag outside the timed loop
  for (auto _ : state) benchmark::DoNotOptimize(predict_spans(Corpus(), Models(), kParams));
  state.SetItemsProcessed(state.iterations() * Corpus().size());
}
BENCHMARK(BM_PredictSpans)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_PredictSpansReference(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::predict_spans(Corpus(), Models(), kParams));
  }
  state.SetItemsProcessed(state.iterations() * Corpus().size());
}
BENCHMARK(BM_PredictSpansReference)->Unit(benchmark::kMillisecond);

void BM_Evaluate(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const Dataset pred = predict_spans(Corpus(), Models(), kParams);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate(Corpus(), pred));
  state.SetItemsProcessed(state.iterations() * Corpus().size());
}
BENCHMARK(BM_Evaluate)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_EvaluateReference(benchmark::State& state) {
  const Dataset pred = predict_spans(Corpus(), Models(), kParams);
  for (auto _ : state) benchmark::DoNotOptimize(reference::evaluate(Corpus(), pred));
  state.SetItemsProcessed(state.iterations() * Corpus().size());
}
BENCHMARK(BM_EvaluateReference)->Unit(benchmark::kMillisecond);

// 5^4 ensemble grid; each point is a full predict + evaluate pass.
void BM_EvaluateGrid(benchmark::State& state) {
  omp_set_num_threads(static_cast<int>(state.range(0)));
  const auto space = hpo::SearchSpace::ensemble(3);
  const auto objective = hpo::ensemble_objective(Corpus(), Models());
  const std::vector<std::size_t> resolution(4, 5);
  const std::size_t n = hpo::grid_size(resolution);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hpo::evaluate_grid(space, resolution, objective, 0, n));
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EvaluateGrid)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
