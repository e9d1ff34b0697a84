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

#ifndef MEDEXT_AUGMENT_H_
#define MEDEXT_AUGMENT_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "medext/corpus.h"
#include "medext/lexicon.h"

namespace medext {

struct AugmentConfig {
  double target_positive_ratio = 0.5;
  std::size_t concat_pairs = 0;
  std::size_t replacement_per_positive = 1;
  std::string separator = " ";
  std::uint64_t seed = 0;
  // Shell command line; see paraphrase().
  std::optional<std::string> paraphrase_command;

  void validate() const;
};

// Counts and non-fatal notices collected while augmenting.
struct AugmentReport {
  std::size_t concatenated = 0;
  std::size_t paraphrased = 0;
  std::size_t paraphrase_dropped = 0;
  std::size_t replaced = 0;
  std::size_t upsampled = 0;
  std::vector<std::string> warnings;
};

// Minimal number of positive duplicates that brings the positive ratio of a
// dataset with `positives` and `negatives` tweets to at least `target`.
std::size_t upsample_count(std::size_t positives, std::size_t negatives,
                           double target);

// Appends positives drawn with replacement (ids suffixed "#dupN") until the
// positive ratio reaches `target`. A target at or below the current ratio
// returns the dataset unchanged and records a warning.
Dataset upsample(const Dataset& dataset, double target, std::uint64_t seed,
                 std::vector<std::string>* warnings = nullptr);

// `n` tweets, each the concatenation of an ordered pair of distinct positive
// tweets joined by `separator`; the second tweet's spans are shifted by the
// scalar length of the first text plus the separator.
std::vector<Tweet> concat_pairs(const Dataset& dataset, std::size_t n,
                                std::string_view separator, std::uint64_t seed);

// Replaces every span's surface with a lexicon entry different from the
// original, shifting later spans by the cumulative length change. The draw
// stream is keyed on (seed, tweet id). Spans with no distinct candidate are
// left alone.
Tweet replace_drug_names(const Tweet& tweet, const Lexicon& lexicon,
                         std::uint64_t seed);

// `per_positive` replacement variants of every positive tweet, ids suffixed
// "#repK". Parallel over tweets; output order follows the dataset.
std::vector<Tweet> replace_drug_names(const Dataset& dataset,
                                      const Lexicon& lexicon,
                                      std::size_t per_positive,
                                      std::uint64_t seed);

// Re-anchors the spans of `original` onto `paraphrase`: each surface, in
// order, is found by leftmost case-sensitive search starting at the end of
// the previously relocated span. Returns nullopt when a surface is missing.
std::optional<Tweet> relocate_spans(const Tweet& original,
                                    std::string_view paraphrase,
                                    std::string new_id);

struct ParaphraseResult {
  std::vector<Tweet> tweets;
  std::size_t dropped = 0;
};

// Runs `command` through /bin/sh with the positive tweets as JSONL
// {"id","text"} on stdin and reads JSONL {"id","paraphrases":[...]} from
// stdout. Paraphrase k of tweet t becomes tweet "t#para<k>" when every
// original surface survives verbatim; otherwise it is dropped and counted.
// Throws on launch failure, nonzero exit, or malformed output.
ParaphraseResult paraphrase(const Dataset& dataset, const std::string& command);

// PL1: upsampling only.
Dataset augment_pl1(const Dataset& dataset, const AugmentConfig& config,
                    AugmentReport* report = nullptr);

// PL2: concatenation, paraphrasing (when a command is configured), drug-name
// replacement, then upsampling of the combined set.
Dataset augment_pl2(const Dataset& dataset, const Lexicon& lexicon,
                    const AugmentConfig& config, AugmentReport* report = nullptr);

}  // namespace medext

#endif  // MEDEXT_AUGMENT_H_
