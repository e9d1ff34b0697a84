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

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "medext/ensemble.h"
#include "medext/error.h"
#include "medext/eval.h"
#include "medext/postprocess.h"

namespace medext::hpo {
namespace {

std::string FormatPoint(std::span<const double> point) {
  std::ostringstream out;
  out.precision(17);
  out << "(";
  for (std::size_t i = 0; i < point.size(); ++i) {
    if (i) out << ", ";
    out << point[i];
  }
  out << ")";
  return out.str();
}

double Evaluate(const Objective& objective, std::span<const double> point) {
  double value;
  try {
    value = objective(point);
  } catch (const std::exception& e) {
    throw Error("objective evaluation failed", "at " + FormatPoint(point) + ": " + e.what());
  }
  if (!std::isfinite(value)) {
    throw Error("objective evaluation failed",
                "non-finite objective at " + FormatPoint(point));
  }
  return value;
}

double NormalCdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double UniformIn(rng::Engine& engine, double low, double high) {
  return low + (high - low) * rng::uniform01(engine);
}

std::vector<double> UniformPoint(const SearchSpace& space, rng::Engine& engine) {
  std::vector<double> point;
  point.reserve(space.dims.size());
  for (const Dimension& d : space.dims) point.push_back(UniformIn(engine, d.low, d.high));
  return point;
}

std::vector<std::size_t> ResolvedResolution(const SearchSpace& space,
                                            const std::vector<std::size_t>& given) {
  if (given.empty()) return std::vector<std::size_t>(space.dims.size(), 11);
  if (given.size() == 1) return std::vector<std::size_t>(space.dims.size(), given[0]);
  if (given.size() != space.dims.size()) {
    throw Error("invalid grid resolution",
                std::to_string(given.size()) + " resolutions for " +
                    std::to_string(space.dims.size()) + " dimensions");
  }
  return given;
}

}  // namespace

void SearchSpace::validate() const {
  if (dims.empty()) throw Error("invalid search space", "no dimensions");
  for (const Dimension& d : dims) {
    if (!std::isfinite(d.low) || !std::isfinite(d.high) || !(d.low < d.high)) {
      throw Error("invalid search space",
                  "dimension '" + d.name + "' needs finite bounds with low < high");
    }
  }
}

bool SearchSpace::contains(std::span<const double> point) const {
  if (point.size() != dims.size()) return false;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (!(point[i] >= dims[i].low && point[i] <= dims[i].high)) return false;
  }
  return true;
}

SearchSpace SearchSpace::ensemble(std::size_t models, double threshold_low,
                                  double threshold_high) {
  if (models == 0) throw Error("invalid search space", "need at least one model");
  if (!(threshold_low > 0.0 && threshold_high < 1.0)) {
    throw Error("invalid search space", "threshold bounds must lie inside (0,1)");
  }
  SearchSpace space;
  for (std::size_t i = 0; i < models; ++i) {
    space.dims.push_back({"w" + std::to_string(i + 1), 0.0, 1.0});
  }
  space.dims.push_back({"threshold", threshold_low, threshold_high});
  space.validate();
  return space;
}

const TrialRecord& best_trial(std::span<const TrialRecord> history) {
  if (history.empty()) throw Error("empty history", "no trials to choose from");
  const TrialRecord* best = &history.front();
  for (const TrialRecord& t : history.subspan(1)) {
    if (t.objective > best->objective ||
        (t.objective == best->objective &&
         std::lexicographical_compare(t.params.begin(), t.params.end(),
                                      best->params.begin(), best->params.end()))) {
      best = &t;
    }
  }
  return *best;
}

std::size_t grid_size(std::span<const std::size_t> resolution) {
  std::size_t total = 1;
  for (std::size_t r : resolution) {
    if (r < 2) throw Error("invalid grid resolution", "resolution must be at least 2");
    total *= r;
  }
  return total;
}

std::vector<double> grid_point(const SearchSpace& space,
                               std::span<const std::size_t> resolution,
                               std::size_t flat) {
  std::vector<double> point(space.dims.size());
  for (std::size_t d = space.dims.size(); d-- > 0;) {
    const std::size_t j = flat % resolution[d];
    flat /= resolution[d];
    const Dimension& dim = space.dims[d];
    point[d] = j + 1 == resolution[d]
                   ? dim.high
                   : dim.low + static_cast<double>(j) * (dim.high - dim.low) /
                                   static_cast<double>(resolution[d] - 1);
  }
  return point;
}

std::vector<TrialRecord> evaluate_grid(const SearchSpace& space,
                                       std::span<const std::size_t> resolution,
                                       const Objective& objective,
                                       std::size_t first, std::size_t count) {
  space.validate();
  if (resolution.size() != space.dims.size()) {
    throw Error("invalid grid resolution", "one resolution per dimension required");
  }
  const std::size_t total = grid_size(resolution);
  if (first + count > total) count = first >= total ? 0 : total - first;
  std::vector<TrialRecord> out(count);
  std::vector<std::exception_ptr> failures(count);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::size_t i = 0; i < count; ++i) {
    try {
      out[i].index = first + i;
      out[i].params = grid_point(space, resolution, first + i);
      out[i].objective = Evaluate(objective, out[i].params);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

TrialRecord grid_search(const SearchSpace& space,
                        std::span<const std::size_t> resolution,
                        const Objective& objective) {
  const auto trials =
      evaluate_grid(space, resolution, objective, 0, grid_size(resolution));
  return best_trial(trials);
}

void TpeConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw Error("invalid tpe config", "gamma must be in (0,1]");
  if (n_candidates < 1) throw Error("invalid tpe config", "n_candidates must be positive");
  if (!(prior_weight > 0.0)) throw Error("invalid tpe config", "prior_weight must be positive");
}

std::vector<double> parzen_bandwidths(double low, double high,
                                      std::span<const double> sorted) {
  const double range = high - low;
  std::vector<double> out(sorted.size(), range);
  if (sorted.size() < 2) return out;
  const double floor = range / std::min(100.0, static_cast<double>(sorted.size()) + 1.0);
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double left = i > 0 ? sorted[i] - sorted[i - 1] : 0.0;
    const double right = i + 1 < sorted.size() ? sorted[i + 1] - sorted[i] : 0.0;
    out[i] = std::clamp(std::max(left, right), floor, range);
  }
  return out;
}

ParzenEstimator::ParzenEstimator(double low, double high, std::vector<double> centers,
                                 std::vector<double> bandwidths, double prior_weight)
    : low_(low),
      high_(high),
      centers_(std::move(centers)),
      bandwidths_(std::move(bandwidths)),
      prior_weight_(prior_weight) {
  if (!(low < high) || centers_.size() != bandwidths_.size() || !(prior_weight >= 0.0) ||
      (centers_.empty() && prior_weight <= 0.0)) {
    throw Error("invalid parzen estimator", "bad bounds, sizes, or weights");
  }
  mass_.reserve(centers_.size());
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    if (!(bandwidths_[i] > 0.0)) {
      throw Error("invalid parzen estimator", "bandwidths must be positive");
    }
    mass_.push_back(NormalCdf((high_ - centers_[i]) / bandwidths_[i]) -
                    NormalCdf((low_ - centers_[i]) / bandwidths_[i]));
  }
}

ParzenEstimator ParzenEstimator::fit(double low, double high,
                                     std::vector<double> observations,
                                     double prior_weight) {
  std::sort(observations.begin(), observations.end());
  auto bandwidths = parzen_bandwidths(low, high, observations);
  return ParzenEstimator(low, high, std::move(observations), std::move(bandwidths),
                         prior_weight);
}

double ParzenEstimator::pdf(double x) const {
  if (x < low_ || x > high_) return 0.0;
  const double total = static_cast<double>(centers_.size()) + prior_weight_;
  double density = prior_weight_ / (high_ - low_);
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double z = (x - centers_[i]) / bandwidths_[i];
    density += std::exp(-0.5 * z * z) /
               (bandwidths_[i] * std::sqrt(2.0 * std::numbers::pi) * mass_[i]);
  }
  return density / total;
}

double ParzenEstimator::log_pdf(double x) const {
  const double p = pdf(x);
  return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity();
}

double ParzenEstimator::sample(rng::Engine& engine) const {
  const double total = static_cast<double>(centers_.size()) + prior_weight_;
  const double u = rng::uniform01(engine) * total;
  const std::size_t component = static_cast<std::size_t>(u);
  if (component >= centers_.size()) return UniformIn(engine, low_, high_);
  const double mu = centers_[component];
  const double sigma = bandwidths_[component];
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double x = mu + sigma * rng::standard_normal(engine);
    if (x >= low_ && x <= high_) return x;
  }
  return std::clamp(mu, low_, high_);
}

std::size_t select_candidate(std::span<const ParzenEstimator> good,
                             std::span<const ParzenEstimator> bad,
                             std::span<const std::vector<double>> candidates) {
  if (candidates.empty()) throw Error("invalid tpe input", "no candidates");
  std::size_t best = 0;
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    double score = 0.0;
    for (std::size_t d = 0; d < good.size(); ++d) {
      score += good[d].log_pdf(candidates[c][d]) - bad[d].log_pdf(candidates[c][d]);
    }
    if (score > best_score) {
      best_score = score;
      best = c;
    }
  }
  return best;
}

TpeSuggestion tpe_suggest(std::span<const TrialRecord> history,
                          const SearchSpace& space, const TpeConfig& config,
                          std::uint64_t seed) {
  space.validate();
  config.validate();
  rng::Engine engine = rng::make_engine(seed, "tpe", history.size());
  if (history.empty() || history.size() < config.n_startup) {
    return {UniformPoint(space, engine), TpeSuggestion::Source::kStartup};
  }
  const bool degenerate = std::all_of(history.begin(), history.end(), [&](const TrialRecord& t) {
    return t.objective == history.front().objective;
  });
  if (degenerate) {
    return {UniformPoint(space, engine), TpeSuggestion::Source::kDegenerateFallback};
  }

  std::vector<std::size_t> order(history.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (history[a].objective != history[b].objective) {
      return history[a].objective > history[b].objective;
    }
    return history[a].index < history[b].index;
  });
  const std::size_t n_good = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(config.gamma * static_cast<double>(history.size()))));

  std::vector<ParzenEstimator> good, bad;
  for (std::size_t d = 0; d < space.dims.size(); ++d) {
    std::vector<double> good_obs, bad_obs;
    for (std::size_t r = 0; r < order.size(); ++r) {
      const TrialRecord& t = history[order[r]];
      if (t.params.size() != space.dims.size()) {
        throw Error("invalid history", "trial " + std::to_string(t.index) +
                                           " has the wrong dimensionality");
      }
      (r < n_good ? good_obs : bad_obs).push_back(t.params[d]);
    }
    const Dimension& dim = space.dims[d];
    good.push_back(ParzenEstimator::fit(dim.low, dim.high, std::move(good_obs),
                                        config.prior_weight));
    bad.push_back(ParzenEstimator::fit(dim.low, dim.high, std::move(bad_obs),
                                       config.prior_weight));
  }

  std::vector<std::vector<double>> candidates(config.n_candidates);
  for (auto& candidate : candidates) {
    candidate.reserve(space.dims.size());
    for (const ParzenEstimator& l : good) candidate.push_back(l.sample(engine));
  }
  const std::size_t pick = select_candidate(good, bad, candidates);
  return {std::move(candidates[pick]), TpeSuggestion::Source::kModel};
}

Method parse_method(std::string_view name) {
  if (name == "grid") return Method::kGrid;
  if (name == "tpe") return Method::kTpe;
  throw Error("unknown method", "'" + std::string(name) + "' (expected grid or tpe)");
}

OptimizeResult optimize(const SearchSpace& space, const Objective& objective,
                        const OptimizeOptions& options) {
  space.validate();
  if (options.budget < 1) throw Error("invalid budget", "budget must be at least 1");
  OptimizeResult result;
  result.history = options.warm_start;
  for (std::size_t i = 0; i < result.history.size(); ++i) {
    if (result.history[i].params.size() != space.dims.size()) {
      throw Error("invalid history", "warm-start trial " + std::to_string(i) +
                                         " has the wrong dimensionality");
    }
  }

  if (options.method == Method::kGrid) {
    const auto resolution = ResolvedResolution(space, options.resolution);
    auto trials = evaluate_grid(space, resolution, objective, result.history.size(),
                                options.budget);
    for (TrialRecord& t : trials) {
      t.index = result.history.size();
      if (options.on_trial) options.on_trial(t);
      result.history.push_back(std::move(t));
    }
  } else {
    options.tpe.validate();
    for (std::size_t i = 0; i < options.budget; ++i) {
      TpeSuggestion s = tpe_suggest(result.history, space, options.tpe, options.seed);
      if (s.source == TpeSuggestion::Source::kDegenerateFallback) {
        ++result.degenerate_fallbacks;
      }
      TrialRecord t{result.history.size(), std::move(s.params), 0.0};
      t.objective = Evaluate(objective, t.params);
      if (options.on_trial) options.on_trial(t);
      result.history.push_back(std::move(t));
    }
  }
  if (result.history.empty()) throw Error("empty history", "grid already exhausted");
  result.best = best_trial(result.history);
  return result;
}

Objective ensemble_objective(const Dataset& gold, std::vector<TrackSet> models,
                             bool postprocess) {
  struct Tweet {
    const medext::Tweet* gold;
    std::vector<const CharProbTrack*> tracks;
  };
  struct State {
    std::vector<TrackSet> models;
    std::vector<Tweet> tweets;
    bool postprocess;
  };
  auto state = std::make_shared<State>();
  state->models = std::move(models);
  state->postprocess = postprocess;
  if (state->models.empty()) throw Error("invalid ensemble", "no models");
  for (const medext::Tweet& t : gold.tweets) {
    Tweet entry{&t, {}};
    for (std::size_t m = 0; m < state->models.size(); ++m) {
      const CharProbTrack* track = state->models[m].find(t.id);
      if (!track) {
        throw Error("id mismatch", "model " + std::to_string(m) +
                                       " has no track for tweet '" + t.id + "'");
      }
      entry.tracks.push_back(track);
    }
    state->tweets.push_back(std::move(entry));
  }
  const std::size_t k = state->models.size();
  return [state, k](std::span<const double> params) -> double {
    if (params.size() != k + 1) {
      throw Error("invalid params", "expected " + std::to_string(k + 1) + " values");
    }
    EnsembleParams p{std::vector<double>(params.begin(), params.begin() + k), params[k]};
    double sum = 0.0;
    for (double w : p.weights) sum += w;
    if (!(sum > 0.0)) return 0.0;
    MatchCounts counts;
    for (const Tweet& t : state->tweets) {
      std::vector<Span> spans = aggregate(t.tracks, p);
      if (state->postprocess && !spans.empty()) {
        spans = trim_edges(t.gold->text, strip_hashtags(t.gold->text, spans));
      }
      counts += count_matches(t.gold->spans, spans);
    }
    return report_from_counts(counts).overlapping.f1;
  };
}

std::string serialize_trial(const TrialRecord& trial) {
  nlohmann::ordered_json j;
  j["trial"] = trial.index;
  j["params"] = trial.params;
  j["objective"] = trial.objective;
  return j.dump() + "\n";
}

std::vector<TrialRecord> parse_trial_log(std::istream& input) {
  std::vector<TrialRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Error("malformed line", e.what(), line_no);
    }
    if (!j.is_object() || !j.contains("trial") || !j["trial"].is_number_unsigned() ||
        !j.contains("params") || !j["params"].is_array() || !j.contains("objective") ||
        !j["objective"].is_number()) {
      throw Error("malformed line",
                  "expected {\"trial\": int, \"params\": [...], \"objective\": number}",
                  line_no);
    }
    TrialRecord t;
    t.index = j["trial"].get<std::size_t>();
    for (const auto& v : j["params"]) {
      if (!v.is_number()) throw Error("malformed line", "params must be numbers", line_no);
      t.params.push_back(v.get<double>());
    }
    t.objective = j["objective"].get<double>();
    if (t.index != out.size()) {
      throw Error("malformed line",
                  "trial index " + std::to_string(t.index) + " out of sequence", line_no);
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<TrialRecord> read_trial_log(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw Error("cannot open file", "", 0, path.string());
  try {
    return parse_trial_log(input);
  } catch (const Error& e) {
    throw e.with_file(path.string());
  }
}

}  // namespace medext::hpo
