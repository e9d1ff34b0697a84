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

#include "medext/ensemble.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "medext/error.h"
#include "medext/unicode.h"

namespace medext {
namespace {

void CheckTracks(std::span<const CharProbTrack* const> tracks,
                 std::size_t weight_count) {
  if (tracks.size() != weight_count) {
    throw Error("track/weight count mismatch",
                std::to_string(tracks.size()) + " tracks for " +
                    std::to_string(weight_count) + " weights");
  }
  for (const CharProbTrack* t : tracks) {
    if (t->length != tracks.front()->length) {
      throw Error("length mismatch",
                  "tracks for '" + tracks.front()->tweet_id + "' disagree on length (" +
                      std::to_string(tracks.front()->length) + " vs " +
                      std::to_string(t->length) + ")");
    }
  }
}

// Weighted sum over run boundaries: every segment between consecutive run
// edges has a constant score.
std::vector<Span> SweepAggregate(std::span<const CharProbTrack* const> tracks,
                                 const std::vector<double>& weights,
                                 double threshold) {
  std::vector<std::size_t> cuts;
  for (const CharProbTrack* t : tracks) {
    for (const ProbRun& r : t->runs) {
      cuts.push_back(r.start);
      cuts.push_back(r.end);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<std::size_t> cursor(tracks.size(), 0);
  std::vector<Span> spans;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const std::size_t lo = cuts[j];
    double score = 0.0;
    for (std::size_t i = 0; i < tracks.size(); ++i) {
      const auto& runs = tracks[i]->runs;
      while (cursor[i] < runs.size() && runs[cursor[i]].end <= lo) ++cursor[i];
      const double p = (cursor[i] < runs.size() && runs[cursor[i]].start <= lo)
                           ? runs[cursor[i]].prob
                           : 0.0;
      score += weights[i] * p;
    }
    if (score < threshold) continue;
    if (!spans.empty() && spans.back().end == lo) {
      spans.back().end = cuts[j + 1];
    } else {
      spans.push_back(Span{lo, cuts[j + 1], std::nullopt});
    }
  }
  return spans;
}

std::vector<const CharProbTrack*> Gather(std::span<const TrackSet> models,
                                         const Tweet& tweet) {
  std::vector<const CharProbTrack*> tracks;
  tracks.reserve(models.size());
  for (std::size_t m = 0; m < models.size(); ++m) {
    const CharProbTrack* t = models[m].find(tweet.id);
    if (!t) {
      throw Error("id mismatch", "model " + std::to_string(m) +
                                     " has no track for tweet '" + tweet.id + "'");
    }
    tracks.push_back(t);
  }
  return tracks;
}

void CheckTextLength(const CharProbTrack& track, const Tweet& tweet) {
  const std::size_t n = unicode::length(tweet.text);
  if (track.length != n) {
    throw Error("length mismatch", "track for '" + tweet.id + "' has length " +
                                       std::to_string(track.length) +
                                       " but the text has " + std::to_string(n));
  }
}

Tweet WithSpans(const Tweet& source, std::vector<Span> spans) {
  Tweet out{source.id, source.user_id, source.text, std::move(spans)};
  attach_surfaces(out);
  return out;
}

}  // namespace

void EnsembleParams::validate() const {
  if (weights.empty()) throw Error("invalid ensemble params", "no weights");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error("invalid ensemble params", "weights must be finite and non-negative");
    }
    sum += w;
  }
  if (!(sum > 0.0)) throw Error("invalid ensemble params", "weights sum to zero");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw Error("invalid ensemble params", "threshold must be in (0,1)");
  }
}

std::vector<double> EnsembleParams::normalized_weights() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  std::vector<double> out(weights);
  for (double& w : out) w /= sum;
  return out;
}

std::vector<Span> aggregate(std::span<const CharProbTrack* const> tracks,
                            const EnsembleParams& params) {
  params.validate();
  CheckTracks(tracks, params.weights.size());
  return SweepAggregate(tracks, params.normalized_weights(), params.threshold);
}

std::vector<Span> aggregate(std::span<const CharProbTrack> tracks,
                            const EnsembleParams& params) {
  std::vector<const CharProbTrack*> pointers;
  for (const CharProbTrack& t : tracks) pointers.push_back(&t);
  return aggregate(std::span<const CharProbTrack* const>(pointers), params);
}

std::vector<Span> threshold_track(const CharProbTrack& track, double threshold) {
  const CharProbTrack* one[] = {&track};
  return aggregate(std::span<const CharProbTrack* const>(one),
                   EnsembleParams{{1.0}, threshold});
}

TrackSet average(std::span<const TrackSet> models) {
  if (models.empty()) throw Error("invalid average", "no prediction sets");
  const TrackSet& first = models.front();
  for (std::size_t m = 1; m < models.size(); ++m) {
    if (models[m].size() != first.size()) {
      throw Error("id mismatch", "prediction set " + std::to_string(m) +
                                     " covers a different number of tweets");
    }
  }
  const double w = 1.0 / static_cast<double>(models.size());
  std::vector<CharProbTrack> out(first.size());
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < first.size(); ++i) {
    try {
      const CharProbTrack& base = first.tracks()[i];
      std::vector<double> sum(base.length, 0.0);
      for (std::size_t m = 0; m < models.size(); ++m) {
        const CharProbTrack* t = models[m].find(base.tweet_id);
        if (!t) {
          throw Error("id mismatch", "prediction set " + std::to_string(m) +
                                         " has no track for '" + base.tweet_id + "'");
        }
        if (t->length != base.length) {
          throw Error("length mismatch",
                      "tracks for '" + base.tweet_id + "' disagree on length");
        }
        const std::vector<double> dense = t->dense();
        for (std::size_t c = 0; c < sum.size(); ++c) sum[c] += w * dense[c];
      }
      out[i] = CharProbTrack::from_dense(base.tweet_id, sum);
    } catch (...) {
#pragma omp critical(medext_average_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return TrackSet(std::move(out));
}

Dataset predict_spans(const Dataset& texts, std::span<const TrackSet> models,
                      const EnsembleParams& params) {
  params.validate();
  const std::vector<double> weights = params.normalized_weights();
  Dataset out{texts.name + ".ensemble", std::vector<Tweet>(texts.size())};
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < texts.size(); ++i) {
    try {
      const Tweet& tweet = texts.tweets[i];
      const auto tracks = Gather(models, tweet);
      CheckTracks(tracks, weights.size());
      CheckTextLength(*tracks.front(), tweet);
      out.tweets[i] = WithSpans(tweet, SweepAggregate(tracks, weights, params.threshold));
    } catch (...) {
#pragma omp critical(medext_predict_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

namespace reference {

std::vector<Span> aggregate(std::span<const CharProbTrack* const> tracks,
                            const EnsembleParams& params) {
  params.validate();
  CheckTracks(tracks, params.weights.size());
  const std::vector<double> weights = params.normalized_weights();
  const std::size_t n = tracks.empty() ? 0 : tracks.front()->length;
  std::vector<std::vector<double>> dense;
  for (const CharProbTrack* t : tracks) dense.push_back(t->dense());
  std::vector<Span> spans;
  for (std::size_t c = 0; c < n; ++c) {
    double score = 0.0;
    for (std::size_t i = 0; i < tracks.size(); ++i) score += weights[i] * dense[i][c];
    if (score < params.threshold) continue;
    if (!spans.empty() && spans.back().end == c) {
      ++spans.back().end;
    } else {
      spans.push_back(Span{c, c + 1, std::nullopt});
    }
  }
  return spans;
}

Dataset predict_spans(const Dataset& texts, std::span<const TrackSet> models,
                      const EnsembleParams& params) {
  Dataset out{texts.name + ".ensemble", {}};
  for (const Tweet& tweet : texts.tweets) {
    const auto tracks = Gather(models, tweet);
    if (!tracks.empty()) CheckTextLength(*tracks.front(), tweet);
    out.tweets.push_back(WithSpans(tweet, reference::aggregate(tracks, params)));
  }
  return out;
}

}  // namespace reference
}  // namespace medext
