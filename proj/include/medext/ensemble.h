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

#ifndef MEDEXT_ENSEMBLE_H_
#define MEDEXT_ENSEMBLE_H_

#include <span>
#include <vector>

#include "medext/corpus.h"
#include "medext/prediction.h"

namespace medext {

struct EnsembleParams {
  std::vector<double> weights;  // one per model, non-negative, positive sum
  double threshold = 0.5;       // in (0,1)

  void validate() const;
  // weights / sum(weights).
  std::vector<double> normalized_weights() const;
};

// Character-level weighted vote for one tweet: score(c) = sum_i w_i p_i(c)
// with normalized weights, accumulated in model order. Returns the maximal
// runs where score(c) >= threshold, without surfaces.
std::vector<Span> aggregate(std::span<const CharProbTrack* const> tracks,
                            const EnsembleParams& params);
std::vector<Span> aggregate(std::span<const CharProbTrack> tracks,
                            const EnsembleParams& params);

// Thresholds one model's track.
std::vector<Span> threshold_track(const CharProbTrack& track, double threshold);

// Per-character arithmetic mean of k models, computed as sum_i (1/k) p_i so
// that thresholding the mean reproduces aggregate() with equal weights bit
// for bit. Parallel over tweets.
TrackSet average(std::span<const TrackSet> models);

// Ensemble spans for every tweet of `texts` (which supplies ids, text, and
// output order). Surfaces are attached. Parallel over tweets.
Dataset predict_spans(const Dataset& texts, std::span<const TrackSet> models,
                      const EnsembleParams& params);

namespace reference {
// Dense per-character scan of aggregate().
std::vector<Span> aggregate(std::span<const CharProbTrack* const> tracks,
                            const EnsembleParams& params);
// Serial predict_spans built on the dense scan.
Dataset predict_spans(const Dataset& texts, std::span<const TrackSet> models,
                      const EnsembleParams& params);
}  // namespace reference

}  // namespace medext

#endif  // MEDEXT_ENSEMBLE_H_
