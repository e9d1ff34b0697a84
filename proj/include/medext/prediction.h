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

#ifndef MEDEXT_PREDICTION_H_
#define MEDEXT_PREDICTION_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace medext {

struct ProbRun {
  std::size_t start = 0;
  std::size_t end = 0;
  double prob = 0.0;
  friend bool operator==(const ProbRun&, const ProbRun&) = default;
};

// Run-length encoded per-character probability of "inside a drug mention"
// for one tweet from one model. Characters outside every run have
// probability 0; zero-probability runs are never stored.
struct CharProbTrack {
  std::string tweet_id;
  std::size_t length = 0;
  std::vector<ProbRun> runs;

  // Sorted, disjoint, non-empty, in bounds, prob in (0,1]. Throws.
  void validate() const;
  std::vector<double> dense() const;
  // Merges equal neighbours and drops zeros.
  static CharProbTrack from_dense(std::string tweet_id, std::span<const double> probs);
  friend bool operator==(const CharProbTrack&, const CharProbTrack&) = default;
};

// One model's tracks for a dataset, in dataset order.
class TrackSet {
 public:
  TrackSet() = default;
  explicit TrackSet(std::vector<CharProbTrack> tracks);

  const std::vector<CharProbTrack>& tracks() const { return tracks_; }
  std::size_t size() const { return tracks_.size(); }
  const CharProbTrack* find(std::string_view tweet_id) const;
  // Appends; throws on a duplicate tweet id.
  void add(CharProbTrack track);

  friend bool operator==(const TrackSet& a, const TrackSet& b) {
    return a.tracks_ == b.tracks_;
  }

 private:
  std::vector<CharProbTrack> tracks_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Prediction file: one JSON object per line,
// {"tweet_id": ..., "length": n, "runs": [[start, end, prob], ...]}.
TrackSet parse_predictions(std::istream& input);
std::string serialize_predictions(const TrackSet& tracks);
TrackSet read_predictions(const std::filesystem::path& path);
void write_predictions(const std::filesystem::path& path, const TrackSet& tracks);

}  // namespace medext

#endif  // MEDEXT_PREDICTION_H_
