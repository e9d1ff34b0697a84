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

#ifndef MEDEXT_EVAL_H_
#define MEDEXT_EVAL_H_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "medext/corpus.h"
#include "medext/lexicon.h"

namespace medext {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MatchCounts {
  std::size_t tp_strict = 0;
  std::size_t tp_overlap = 0;
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;

  MatchCounts& operator+=(const MatchCounts& other);
  friend bool operator==(const MatchCounts&, const MatchCounts&) = default;
};

struct MetricsReport {
  Prf strict;
  Prf overlapping;
  MatchCounts counts;
};

// Micro-averaged scores. Both sides empty gives 1/1/1; exactly one side
// empty gives 0/0/0; F1 is 0 when P + R is 0.
Prf prf(std::size_t tp, std::size_t n_pred, std::size_t n_gold);
MetricsReport report_from_counts(const MatchCounts& counts);

// One-to-one matching, scanning predictions by ascending start and pairing
// each with the first unmatched gold span (ascending start) that has the
// same extent (strict) or shares at least one character (overlap).
// Returns (gold index, pred index) pairs. Both inputs must be sorted.
std::vector<std::pair<std::size_t, std::size_t>> strict_matching(
    std::span<const Span> gold, std::span<const Span> pred);
std::vector<std::pair<std::size_t, std::size_t>> overlap_matching(
    std::span<const Span> gold, std::span<const Span> pred);

MatchCounts count_matches(std::span<const Span> gold, std::span<const Span> pred);

// Scores `pred` against `gold`. Gold tweets missing from `pred` count as
// empty predictions; a prediction for an id absent from `gold` is an error.
// Parallel over tweets with an integer reduction.
MetricsReport evaluate(const Dataset& gold, const Dataset& pred);

namespace reference {
MetricsReport evaluate(const Dataset& gold, const Dataset& pred);
}  // namespace reference

// Mechanical error categories. Errors are spans left unmatched by the
// overlap matching; `boundary` counts overlap matches that are not strict.
struct ErrorTally {
  std::size_t false_positive = 0;
  std::size_t fn_not_seen = 0;   // surface seen fewer than 2 times in training
  std::size_t fn_complex = 0;    // >= 3 alphanumeric words, or a hashtag
  std::size_t fn_other = 0;
  std::size_t boundary = 0;

  std::size_t false_negative() const { return fn_not_seen + fn_complex + fn_other; }
  friend bool operator==(const ErrorTally&, const ErrorTally&) = default;
};

enum class MissCategory { kComplexPhrase, kNotSeen, kOther };

// Category of a missed gold span. A complex phrase wins over "not seen".
MissCategory categorize_miss(std::string_view text, const Span& gold,
                             const Lexicon& training);

ErrorTally categorize_errors(const Dataset& gold, const Dataset& pred,
                             const Lexicon& training);

// Human table with one row per named report, columns laid out as
// Overlapping (F1, Precision, Recall) then Strict (F1, Precision, Recall).
std::string format_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows);

// Machine report: six metrics, raw counts, and the error tally if given.
std::string report_json(const MetricsReport& report,
                        const ErrorTally* errors = nullptr);

}  // namespace medext

#endif  // MEDEXT_EVAL_H_
