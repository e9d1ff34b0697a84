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

#ifndef MEDEXT_TAGGER_H_
#define MEDEXT_TAGGER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "medext/corpus.h"
#include "medext/lexicon.h"
#include "medext/prediction.h"

namespace medext {

struct GazetteerConfig {
  Lexicon lexicon;
  double exact_prob = 0.9;
  double fuzzy_prob = 0.6;
  int max_edit_distance = 1;  // 0 disables fuzzy matching
  std::size_t min_fuzzy_length = 5;
  // Extend a match over a '#' directly in front of it, the way subword
  // tokenizers glue a hashtag symbol to the following word.
  bool attach_hashtag = false;

  void validate() const;
};

// Dictionary tagger over Unicode scalar values. A window [s, e) is a
// candidate when both ends sit on word boundaries (an alphanumeric /
// non-alphanumeric transition, or the text edge). Windows equal to an entry
// ignoring case get exact_prob; windows that start and end on alphanumerics
// and are one edit away from an entry of at least min_fuzzy_length scalars
// get fuzzy_prob. Overlaps keep the larger probability.
class GazetteerTagger {
 public:
  explicit GazetteerTagger(GazetteerConfig config);

  CharProbTrack tag(const Tweet& tweet) const;
  const GazetteerConfig& config() const { return config_; }

 private:
  GazetteerConfig config_;
  std::vector<std::u32string> patterns_;  // folded, deduplicated
  std::unordered_map<char32_t, std::vector<std::size_t>> by_first_;
  std::vector<std::size_t> fuzzy_;
};

// True when a and b are within Levenshtein distance 1.
bool within_one_edit(std::u32string_view a, std::u32string_view b);

CharProbTrack tag(const Tweet& tweet, const GazetteerConfig& config);

// One track per tweet, in dataset order. Parallel over tweets.
TrackSet tag_dataset(const Dataset& dataset, const GazetteerConfig& config);

namespace reference {
// Serial tag_dataset.
TrackSet tag_dataset(const Dataset& dataset, const GazetteerConfig& config);
}  // namespace reference

}  // namespace medext

#endif  // MEDEXT_TAGGER_H_
