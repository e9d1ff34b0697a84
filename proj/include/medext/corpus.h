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

#ifndef MEDEXT_CORPUS_H_
#define MEDEXT_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace medext {

// Half-open interval [start, end) of Unicode scalar values. `surface`, when
// present, is the tweet text sliced at the interval.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;
  std::optional<std::string> surface;

  std::size_t length() const { return end - start; }
  bool overlaps(const Span& other) const {
    return start < other.end && other.start < end;
  }
  bool same_extent(const Span& other) const {
    return start == other.start && end == other.end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

// A tweet and its annotated spans. The spans are gold annotations in a
// corpus, or model predictions when the dataset holds a prediction set.
struct Tweet {
  std::string id;
  std::string user_id;
  std::string text;  // UTF-8
  std::vector<Span> spans;

  bool positive() const { return !spans.empty(); }
  friend bool operator==(const Tweet&, const Tweet&) = default;
};

struct Dataset {
  std::string name;
  std::vector<Tweet> tweets;

  std::size_t size() const { return tweets.size(); }
  std::size_t positive_count() const;
  std::size_t span_count() const;
  friend bool operator==(const Dataset&, const Dataset&) = default;
};

enum class Format { kJsonl, kTsv };

// "jsonl" or "tsv"; throws on anything else.
Format parse_format(std::string_view name);
std::string_view format_name(Format format);
// .tsv selects TSV, everything else JSONL.
Format format_for_path(const std::filesystem::path& path);

// Span invariants against the owning tweet: non-empty, in bounds, surface
// equal to the slice, sorted and pairwise disjoint. Throws medext::Error.
void validate_tweet(const Tweet& tweet);
// validate_tweet on every tweet plus id uniqueness.
void validate_dataset(const Dataset& dataset);

// Sorts spans by start and fills in missing surfaces from the text.
void attach_surfaces(Tweet& tweet);

Dataset parse_dataset(std::istream& input, Format format,
                      std::string name = {});
Dataset parse_dataset(std::string_view bytes, Format format,
                      std::string name = {});
// Byte-deterministic. TSV escapes backslash, tab, CR and LF in text and
// surface fields as \\, \t, \r and \n.
std::string serialize_dataset(const Dataset& dataset, Format format);

// File helpers; errors carry the file path.
Dataset read_dataset(const std::filesystem::path& path, Format format);
Dataset read_dataset(const std::filesystem::path& path);
void write_dataset(const std::filesystem::path& path, const Dataset& dataset,
                   Format format);

// Splits positives and negatives separately. The first part receives
// round-half-up(ratio * stratum size) tweets of each stratum; the rest go to
// the second part. Both parts keep the source order.
std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset,
                                             double ratio, std::uint64_t seed);

// Half-up rounding of a non-negative value.
std::size_t round_half_up(double value);

}  // namespace medext

#endif  // MEDEXT_CORPUS_H_
