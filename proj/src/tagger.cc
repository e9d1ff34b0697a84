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

#include "medext/tagger.h"

#include <algorithm>
#include <set>

#include "medext/error.h"
#include "medext/unicode.h"

namespace medext {

void GazetteerConfig::validate() const {
  if (!(0.0 <= fuzzy_prob && fuzzy_prob <= exact_prob && exact_prob <= 1.0)) {
    throw Error("invalid gazetteer config",
                "need 0 <= fuzzy_prob <= exact_prob <= 1");
  }
  if (max_edit_distance != 0 && max_edit_distance != 1) {
    throw Error("invalid gazetteer config", "max_edit_distance must be 0 or 1");
  }
}

GazetteerTagger::GazetteerTagger(GazetteerConfig config)
    : config_(std::move(config)) {
  config_.validate();
  std::set<std::u32string> unique;
  for (const auto& [name, entry] : config_.lexicon.entries()) {
    unique.insert(unicode::fold_case(unicode::decode(name)));
  }
  patterns_.assign(unique.begin(), unique.end());
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    by_first_[patterns_[i].front()].push_back(i);
    if (config_.max_edit_distance >= 1 &&
        patterns_[i].size() >= config_.min_fuzzy_length) {
      fuzzy_.push_back(i);
    }
  }
}

CharProbTrack GazetteerTagger::tag(const Tweet& tweet) const {
  const std::u32string text = unicode::decode(tweet.text);
  const std::u32string folded = unicode::fold_case(text);
  const std::size_t n = text.size();
  std::vector<char> alnum(n);
  for (std::size_t i = 0; i < n; ++i) alnum[i] = unicode::is_alnum(text[i]);
  auto boundary = [&](std::size_t p) {
    return p == 0 || p == n || alnum[p - 1] != alnum[p];
  };

  std::vector<double> probs(n, 0.0);
  auto mark = [&](std::size_t s, std::size_t e, double p) {
    if (config_.attach_hashtag && s > 0 && text[s - 1] == U'#') --s;
    for (std::size_t c = s; c < e; ++c) probs[c] = std::max(probs[c], p);
  };

  const std::u32string_view view(folded);
  for (std::size_t s = 0; s < n; ++s) {
    if (!boundary(s)) continue;
    if (auto it = by_first_.find(folded[s]); it != by_first_.end()) {
      for (std::size_t idx : it->second) {
        const std::u32string& pattern = patterns_[idx];
        const std::size_t e = s + pattern.size();
        if (e <= n && boundary(e) && view.substr(s, pattern.size()) == pattern) {
          mark(s, e, config_.exact_prob);
        }
      }
    }
    if (!alnum[s] || config_.fuzzy_prob <= 0.0) continue;
    for (std::size_t idx : fuzzy_) {
      const std::size_t len = patterns_[idx].size();
      for (std::size_t e = s + len - 1; e <= s + len + 1 && e <= n; ++e) {
        if (!boundary(e) || !alnum[e - 1]) continue;
        if (within_one_edit(view.substr(s, e - s), patterns_[idx])) {
          mark(s, e, config_.fuzzy_prob);
        }
      }
    }
  }
  return CharProbTrack::from_dense(tweet.id, probs);
}

bool within_one_edit(std::u32string_view a, std::u32string_view b) {
  if (a.size() > b.size()) std::swap(a, b);
  if (b.size() - a.size() > 1) return false;
  std::size_t i = 0;
  while (i < a.size() && a[i] == b[i]) ++i;
  if (i == a.size()) return true;
  if (a.size() == b.size()) return a.substr(i + 1) == b.substr(i + 1);
  return a.substr(i) == b.substr(i + 1);
}

CharProbTrack tag(const Tweet& tweet, const GazetteerConfig& config) {
  return GazetteerTagger(config).tag(tweet);
}

TrackSet tag_dataset(const Dataset& dataset, const GazetteerConfig& config) {
  const GazetteerTagger tagger(config);
  std::vector<CharProbTrack> tracks(dataset.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    tracks[i] = tagger.tag(dataset.tweets[i]);
  }
  return TrackSet(std::move(tracks));
}

namespace reference {

TrackSet tag_dataset(const Dataset& dataset, const GazetteerConfig& config) {
  const GazetteerTagger tagger(config);
  TrackSet out;
  for (const Tweet& tweet : dataset.tweets) out.add(tagger.tag(tweet));
  return out;
}

}  // namespace reference
}  // namespace medext
