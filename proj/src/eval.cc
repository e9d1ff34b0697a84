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

#include "medext/eval.h"

#include <cstdio>
#include <exception>
#include <unordered_map>

#include "json.hpp"
#include "medext/error.h"
#include "medext/unicode.h"

namespace medext {
namespace {

template <typename Pairs>
std::vector<std::pair<std::size_t, std::size_t>> GreedyMatch(
    std::span<const Span> gold, std::span<const Span> pred, Pairs pairs) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::vector<bool> used(gold.size(), false);
  for (std::size_t p = 0; p < pred.size(); ++p) {
    for (std::size_t g = 0; g < gold.size(); ++g) {
      if (!used[g] && pairs(gold[g], pred[p])) {
        used[g] = true;
        out.emplace_back(g, p);
        break;
      }
    }
  }
  return out;
}

std::unordered_map<std::string_view, std::size_t> IndexById(const Dataset& d) {
  std::unordered_map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < d.size(); ++i) index.emplace(d.tweets[i].id, i);
  return index;
}

// Per-gold-tweet prediction lists; throws for ids absent from gold and for
// predicted spans beyond the gold text.
std::vector<const Tweet*> AlignPredictions(const Dataset& gold, const Dataset& pred) {
  const auto index = IndexById(gold);
  std::vector<const Tweet*> aligned(gold.size(), nullptr);
  for (const Tweet& p : pred.tweets) {
    auto it = index.find(p.id);
    if (it == index.end()) {
      throw Error("unknown tweet id", "prediction for '" + p.id +
                                          "' has no tweet in the gold corpus");
    }
    const Tweet& g = gold.tweets[it->second];
    const std::size_t n = unicode::length(g.text);
    for (const Span& s : p.spans) {
      if (s.end > n) {
        throw Error("span out of bounds",
                    "prediction for '" + p.id + "' ends at " + std::to_string(s.end) +
                        " beyond text length " + std::to_string(n));
      }
    }
    aligned[it->second] = &p;
  }
  return aligned;
}

std::span<const Span> SpansOf(const Tweet* t) {
  return t ? std::span<const Span>(t->spans) : std::span<const Span>();
}

std::size_t AlnumWords(std::u32string_view s) {
  std::size_t words = 0;
  bool in_word = false;
  for (char32_t c : s) {
    const bool a = unicode::is_alnum(c);
    if (a && !in_word) ++words;
    in_word = a;
  }
  return words;
}

nlohmann::ordered_json PrfJson(const Prf& p) {
  nlohmann::ordered_json j;
  j["precision"] = p.precision;
  j["recall"] = p.recall;
  j["f1"] = p.f1;
  return j;
}

}  // namespace

MatchCounts& MatchCounts::operator+=(const MatchCounts& other) {
  tp_strict += other.tp_strict;
  tp_overlap += other.tp_overlap;
  n_pred += other.n_pred;
  n_gold += other.n_gold;
  return *this;
}

Prf prf(std::size_t tp, std::size_t n_pred, std::size_t n_gold) {
  if (n_pred == 0 && n_gold == 0) return {1.0, 1.0, 1.0};
  if (n_pred == 0 || n_gold == 0) return {0.0, 0.0, 0.0};
  Prf out;
  out.precision = static_cast<double>(tp) / static_cast<double>(n_pred);
  out.recall = static_cast<double>(tp) / static_cast<double>(n_gold);
  const double sum = out.precision + out.recall;
  out.f1 = sum > 0.0 ? 2.0 * out.precision * out.recall / sum : 0.0;
  return out;
}

MetricsReport report_from_counts(const MatchCounts& counts) {
  return MetricsReport{prf(counts.tp_strict, counts.n_pred, counts.n_gold),
                       prf(counts.tp_overlap, counts.n_pred, counts.n_gold),
                       counts};
}

std::vector<std::pair<std::size_t, std::size_t>> strict_matching(
    std::span<const Span> gold, std::span<const Span> pred) {
  return GreedyMatch(gold, pred,
                     [](const Span& g, const Span& p) { return g.same_extent(p); });
}

std::vector<std::pair<std::size_t, std::size_t>> overlap_matching(
    std::span<const Span> gold, std::span<const Span> pred) {
  return GreedyMatch(gold, pred,
                     [](const Span& g, const Span& p) { return g.overlaps(p); });
}

MatchCounts count_matches(std::span<const Span> gold, std::span<const Span> pred) {
  return MatchCounts{strict_matching(gold, pred).size(),
                     overlap_matching(gold, pred).size(), pred.size(), gold.size()};
}

MetricsReport evaluate(const Dataset& gold, const Dataset& pred) {
  const auto aligned = AlignPredictions(gold, pred);
  std::size_t tp_strict = 0, tp_overlap = 0, n_pred = 0, n_gold = 0;
#pragma omp parallel for schedule(dynamic, 64) \
    reduction(+ : tp_strict, tp_overlap, n_pred, n_gold)
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const MatchCounts c = count_matches(gold.tweets[i].spans, SpansOf(aligned[i]));
    tp_strict += c.tp_strict;
    tp_overlap += c.tp_overlap;
    n_pred += c.n_pred;
    n_gold += c.n_gold;
  }
  return report_from_counts(MatchCounts{tp_strict, tp_overlap, n_pred, n_gold});
}

namespace reference {

MetricsReport evaluate(const Dataset& gold, const Dataset& pred) {
  const auto aligned = AlignPredictions(gold, pred);
  MatchCounts total;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    total += count_matches(gold.tweets[i].spans, SpansOf(aligned[i]));
  }
  return report_from_counts(total);
}

}  // namespace reference

MissCategory categorize_miss(std::string_view text, const Span& gold,
                             const Lexicon& training) {
  const std::u32string decoded = unicode::decode(text);
  const std::u32string_view surface =
      std::u32string_view(decoded).substr(gold.start, gold.length());
  const bool hashtag = surface.find(U'#') != std::u32string_view::npos ||
                       (gold.start > 0 && decoded[gold.start - 1] == U'#');
  if (hashtag || AlnumWords(surface) >= 3) return MissCategory::kComplexPhrase;
  if (training.occurrences(unicode::encode(surface)) < 2) return MissCategory::kNotSeen;
  return MissCategory::kOther;
}

ErrorTally categorize_errors(const Dataset& gold, const Dataset& pred,
                             const Lexicon& training) {
  const auto aligned = AlignPredictions(gold, pred);
  ErrorTally tally;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const Tweet& g = gold.tweets[i];
    const auto predicted = SpansOf(aligned[i]);
    const auto pairs = overlap_matching(g.spans, predicted);
    std::vector<bool> gold_hit(g.spans.size(), false);
    for (const auto& [gi, pi] : pairs) {
      gold_hit[gi] = true;
      if (!g.spans[gi].same_extent(predicted[pi])) ++tally.boundary;
    }
    tally.false_positive += predicted.size() - pairs.size();
    for (std::size_t gi = 0; gi < g.spans.size(); ++gi) {
      if (gold_hit[gi]) continue;
      switch (categorize_miss(g.text, g.spans[gi], training)) {
        case MissCategory::kComplexPhrase: ++tally.fn_complex; break;
        case MissCategory::kNotSeen: ++tally.fn_not_seen; break;
        case MissCategory::kOther: ++tally.fn_other; break;
      }
    }
  }
  return tally;
}

std::string format_table(
    const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::size_t width = 5;
  for (const auto& [name, r] : rows) width = std::max(width, name.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s  %-26s  %-26s\n", static_cast<int>(width),
                "Model", "Overlapping", "Strict");
  out += buf;
  std::snprintf(buf, sizeof buf, "%-*s  %-8s %-9s %-7s  %-8s %-9s %-7s\n",
                static_cast<int>(width), "", "F1", "Precision", "Recall", "F1",
                "Precision", "Recall");
  out += buf;
  for (const auto& [name, r] : rows) {
    std::snprintf(buf, sizeof buf,
                  "%-*s  %-8.3f %-9.3f %-7.3f  %-8.3f %-9.3f %-7.3f\n",
                  static_cast<int>(width), name.c_str(), r.overlapping.f1,
                  r.overlapping.precision, r.overlapping.recall, r.strict.f1,
                  r.strict.precision, r.strict.recall);
    out += buf;
  }
  return out;
}

std::string report_json(const MetricsReport& report, const ErrorTally* errors) {
  nlohmann::ordered_json j;
  j["overlapping"] = PrfJson(report.overlapping);
  j["strict"] = PrfJson(report.strict);
  j["counts"] = {{"tp_strict", report.counts.tp_strict},
                 {"tp_overlap", report.counts.tp_overlap},
                 {"n_pred", report.counts.n_pred},
                 {"n_gold", report.counts.n_gold}};
  if (errors) {
    nlohmann::ordered_json e;
    e["false_positive"] = errors->false_positive;
    e["fn_not_seen"] = errors->fn_not_seen;
    e["fn_complex_phrase"] = errors->fn_complex;
    e["fn_other"] = errors->fn_other;
    e["boundary"] = errors->boundary;
    j["errors"] = std::move(e);
  }
  return j.dump(2) + "\n";
}

}  // namespace medext
