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

#ifndef MEDEXT_HPO_H_
#define MEDEXT_HPO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "medext/corpus.h"
#include "medext/prediction.h"
#include "medext/rng.h"

namespace medext::hpo {

struct Dimension {
  std::string name;
  double low = 0.0;
  double high = 1.0;
};

struct SearchSpace {
  std::vector<Dimension> dims;

  void validate() const;
  bool contains(std::span<const double> point) const;

  // w_1..w_k on [0,1] followed by the threshold on
  // [threshold_low, threshold_high], a closed interval inside (0,1).
  static SearchSpace ensemble(std::size_t models, double threshold_low = 0.05,
                              double threshold_high = 0.95);
};

struct TrialRecord {
  std::size_t index = 0;
  std::vector<double> params;
  double objective = 0.0;
  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// Maximized. Must be safe to call concurrently (grid search evaluates in
// parallel) and return a finite value.
using Objective = std::function<double(std::span<const double>)>;

// Highest objective; ties go to the lexicographically smallest params.
const TrialRecord& best_trial(std::span<const TrialRecord> history);

// ---- Grid search ---------------------------------------------------------

// Number of points in the grid; every resolution must be >= 2.
std::size_t grid_size(std::span<const std::size_t> resolution);

// Point `flat` of the grid in lexicographic order (first dimension slowest).
// Dimension d takes values low + j (high - low) / (resolution[d] - 1).
std::vector<double> grid_point(const SearchSpace& space,
                               std::span<const std::size_t> resolution,
                               std::size_t flat);

// Evaluates grid points [first, first + count) in parallel; records come
// back in grid order with index = first + offset.
std::vector<TrialRecord> evaluate_grid(const SearchSpace& space,
                                       std::span<const std::size_t> resolution,
                                       const Objective& objective,
                                       std::size_t first, std::size_t count);

// Full Cartesian grid; returns best_trial over all points.
TrialRecord grid_search(const SearchSpace& space,
                        std::span<const std::size_t> resolution,
                        const Objective& objective);

// ---- Tree of Parzen Estimators -------------------------------------------

struct TpeConfig {
  double gamma = 0.25;
  std::size_t n_startup = 20;
  std::size_t n_candidates = 24;
  double prior_weight = 1.0;

  void validate() const;
};

// One-dimensional mixture on [low, high] of Gaussian kernels truncated to
// the interval, each with weight 1, plus a uniform prior with weight
// prior_weight, normalized by the total weight.
class ParzenEstimator {
 public:
  ParzenEstimator(double low, double high, std::vector<double> centers,
                  std::vector<double> bandwidths, double prior_weight);

  // Kernels centred on `observations` with parzen_bandwidths().
  static ParzenEstimator fit(double low, double high,
                             std::vector<double> observations,
                             double prior_weight);

  double pdf(double x) const;
  double log_pdf(double x) const;
  double sample(rng::Engine& engine) const;

  const std::vector<double>& centers() const { return centers_; }
  const std::vector<double>& bandwidths() const { return bandwidths_; }

 private:
  double low_, high_;
  std::vector<double> centers_;
  std::vector<double> bandwidths_;
  std::vector<double> mass_;  // truncation normalizer per kernel
  double prior_weight_;
};

// Per observation (sorted ascending): the larger distance to its sorted
// neighbours (an end point has one neighbour; a lone point gets the full
// range), clipped to [(high - low) / min(100, n + 1), high - low] for n
// observations.
std::vector<double> parzen_bandwidths(double low, double high,
                                      std::span<const double> sorted_observations);

// Index of the candidate maximizing sum_d log l_d(x_d) - log g_d(x_d); the
// first one wins ties.
std::size_t select_candidate(std::span<const ParzenEstimator> good,
                             std::span<const ParzenEstimator> bad,
                             std::span<const std::vector<double>> candidates);

struct TpeSuggestion {
  enum class Source { kStartup, kModel, kDegenerateFallback };
  std::vector<double> params;
  Source source = Source::kStartup;
};

// Next point to evaluate. Uniform while the history is shorter than
// n_startup or all objectives are identical; otherwise the top ceil(gamma n)
// trials (ties by trial index) form the good set and the rest the bad set,
// per-dimension estimators are fitted to each, n_candidates points are drawn
// from the good estimators and the best density ratio wins. The draw stream
// is keyed on (seed, history size).
TpeSuggestion tpe_suggest(std::span<const TrialRecord> history,
                          const SearchSpace& space, const TpeConfig& config,
                          std::uint64_t seed);

// ---- Driver --------------------------------------------------------------

enum class Method { kGrid, kTpe };

Method parse_method(std::string_view name);

struct OptimizeOptions {
  Method method = Method::kTpe;
  std::size_t budget = 100;
  std::uint64_t seed = 0;
  // Grid resolution per dimension; empty means 11 everywhere and a single
  // value is broadcast.
  std::vector<std::size_t> resolution;
  TpeConfig tpe;
  // Trials from an earlier run. Grid search resumes at grid index
  // warm_start.size(); TPE conditions on them.
  std::vector<TrialRecord> warm_start;
  // Called once per new trial, in trial order.
  std::function<void(const TrialRecord&)> on_trial;
};

struct OptimizeResult {
  TrialRecord best;
  std::vector<TrialRecord> history;  // warm start followed by new trials
  std::size_t degenerate_fallbacks = 0;
};

// Runs `budget` new evaluations with the chosen method.
OptimizeResult optimize(const SearchSpace& space, const Objective& objective,
                        const OptimizeOptions& options);

// ---- Ensemble objective --------------------------------------------------

// Overlapping F1 on `gold` of the ensemble of `models` with params
// (w_1..w_k, threshold). All-zero weights score 0. With `postprocess`, spans
// go through hashtag stripping and edge trimming before scoring.
Objective ensemble_objective(const Dataset& gold, std::vector<TrackSet> models,
                             bool postprocess = false);

// ---- Trial log -----------------------------------------------------------

// JSONL, one {"trial": i, "params": [...], "objective": x} per line.
std::string serialize_trial(const TrialRecord& trial);
std::vector<TrialRecord> parse_trial_log(std::istream& input);
std::vector<TrialRecord> read_trial_log(const std::filesystem::path& path);

}  // namespace medext::hpo

#endif  // MEDEXT_HPO_H_
