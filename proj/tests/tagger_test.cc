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

#include <gtest/gtest.h>
#include <omp.h>

#include <algorithm>

#include "medext/unicode.h"
#include "support/expect_error.h"
#include "support/generators.h"
#include "support/oracles.h"

namespace medext {
namespace {

using testing::Between;
using testing::Chance;

GazetteerConfig Config(std::initializer_list<const char*> names) {
  GazetteerConfig cfg;
  for (const char* n : names) cfg.lexicon.add(n, LexiconSource::kManual);
  return cfg;
}

CharProbTrack Tag(const std::string& text, const GazetteerConfig& cfg) {
  return tag(Tweet{"t", "u", text, {}}, cfg);
}

TEST(TaggerTest, ExactMatchIgnoresCase) {
  const auto track = Tag("took TYLENOL now", Config({"tylenol"}));
  EXPECT_EQ(track.length, 16u);
  EXPECT_EQ(track.runs, (std::vector<ProbRun>{{5, 12, 0.9}}));
}

TEST(TaggerTest, RespectsWordBoundaries) {
  EXPECT_TRUE(Tag("tylenolpm", Config({"tylenol"})).runs.empty());
  EXPECT_TRUE(Tag("xtums", Config({"tums"})).runs.empty());
  // Punctuation and emoji are boundaries.
  EXPECT_EQ(Tag("(tums)😩", Config({"tums"})).runs, (std::vector<ProbRun>{{1, 5, 0.9}}));
  EXPECT_EQ(Tag("Follistim: day 3", Config({"Follistim"})).runs,
            (std::vector<ProbRun>{{0, 9, 0.9}}));
}

TEST(TaggerTest, MultiWordEntries) {
  EXPECT_EQ(Tag("forgot my birth control again", Config({"birth control"})).runs,
            (std::vector<ProbRun>{{10, 23, 0.9}}));
}

TEST(TaggerTest, FuzzyMatchWithinOneEdit) {
  // "asprin" drops one letter of "aspirin".
  EXPECT_EQ(Tag("two asprin and a nap", Config({"aspirin"})).runs,
            (std::vector<ProbRun>{{4, 10, 0.6}}));
  // Short entries never match fuzzily.
  EXPECT_TRUE(Tag("tams", Config({"tums"})).runs.empty());
  GazetteerConfig exact_only = Config({"aspirin"});
  exact_only.max_edit_distance = 0;
  EXPECT_TRUE(Tag("two asprin", exact_only).runs.empty());
}

TEST(TaggerTest, OverlapsKeepMaximum) {
  const auto track = Tag("zofran pump", Config({"zofran", "zofran pump", "zofrann"}));
  // Exact "zofran pump" covers everything at 0.9.
  EXPECT_EQ(track.runs, (std::vector<ProbRun>{{0, 11, 0.9}}));
}

TEST(TaggerTest, AttachHashtag) {
  GazetteerConfig cfg = Config({"tylenol"});
  cfg.attach_hashtag = true;
  EXPECT_EQ(Tag("need #tylenol", cfg).runs, (std::vector<ProbRun>{{5, 13, 0.9}}));
}

TEST(TaggerTest, InvalidConfig) {
  GazetteerConfig cfg = Config({"x"});
  cfg.max_edit_distance = 2;
  EXPECT_CONTRACT(GazetteerTagger{cfg}, "invalid gazetteer config");
  cfg.max_edit_distance = 1;
  cfg.exact_prob = 1.5;
  EXPECT_CONTRACT(GazetteerTagger{cfg}, "invalid gazetteer config");
}

TEST(WithinOneEditTest, AgreesWithLevenshtein) {
  testing::Engine engine(12);
  for (int c = 0; c < 5000; ++c) {
    const std::u32string a = testing::RandomText(engine, 0, 6);
    std::u32string b = a;
    // Mostly near neighbours so both outcomes are common.
    const std::size_t edits = Between(engine, 0, 2);
    for (std::size_t e = 0; e < edits; ++e) {
      const std::size_t op = Between(engine, 0, 2);
      const std::size_t at = Between(engine, 0, b.size());
      if (op == 0) b.insert(b.begin() + at, U'x');
      if (op == 1 && at < b.size()) b.erase(b.begin() + at);
      if (op == 2 && at < b.size()) b[at] = U'q';
    }
    ASSERT_EQ(within_one_edit(a, b), testing::Levenshtein(a, b) <= 1)
        << unicode::encode(a) << " / " << unicode::encode(b);
  }
}

// Independent scan: every window between word boundaries, compared
// against every entry with a full edit-distance table.
std::vector<double> OracleTag(const std::u32string& text, const GazetteerConfig& cfg) {
  const std::size_t n = text.size();
  const std::u32string folded = unicode::fold_case(text);
  auto alnum = [&](std::size_t i) { return unicode::is_alnum(text[i]); };
  auto boundary = [&](std::size_t p) { return p == 0 || p == n || alnum(p - 1) != alnum(p); };
  std::vector<std::u32string> entries;
  std::size_t longest = 0;
  for (const auto& name : cfg.lexicon.names()) {
    entries.push_back(unicode::fold_case(unicode::decode(name)));
    longest = std::max(longest, entries.back().size());
  }
  std::vector<double> probs(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t e = s + 1; e <= std::min(n, s + longest + 1); ++e) {
      if (!boundary(s) || !boundary(e)) continue;
      const std::u32string window = folded.substr(s, e - s);
      double p = 0.0;
      for (const auto& entry : entries) {
        if (window == entry) {
          p = std::max(p, cfg.exact_prob);
        } else if (cfg.max_edit_distance == 1 && alnum(s) && alnum(e - 1) &&
                   entry.size() >= cfg.min_fuzzy_length &&
                   testing::Levenshtein(window, entry) <= 1) {
          p = std::max(p, cfg.fuzzy_prob);
        }
      }
      if (p == 0.0) continue;
      const std::size_t from = cfg.attach_hashtag && s > 0 && text[s - 1] == U'#' ? s - 1 : s;
      for (std::size_t c = from; c < e; ++c) probs[c] = std::max(probs[c], p);
    }
  }
  return probs;
}

std::u32string Perturb(testing::Engine& engine, std::u32string word) {
  if (word.empty() || !Chance(engine, 0.4)) return word;
  const std::size_t at = Between(engine, 0, word.size() - 1);
  switch (Between(engine, 0, 3)) {
    case 0: word.erase(word.begin() + at); break;
    case 1: word.insert(word.begin() + at, U'e'); break;
    case 2: word[at] = U'o'; break;
    default: word[at] = unicode::fold_case(word[at]) == word[at] ? U'Q' : word[at]; break;
  }
  return word;
}

TEST(TaggerTest, MatchesWindowScanOracle) {
  testing::Engine engine(13);
  const std::vector<std::u32string> seps = {U" ", U"  ", U", ", U"#", U" #", U"😩", U"-", U":"};
  for (int c = 0; c < 300; ++c) {
    GazetteerConfig cfg;
    cfg.lexicon = testing::RandomLexicon(engine, Between(engine, 1, 8));
    cfg.attach_hashtag = Chance(engine, 0.5);
    cfg.max_edit_distance = Chance(engine, 0.8) ? 1 : 0;
    const auto names = cfg.lexicon.names();
    std::u32string text;
    const std::size_t parts = Between(engine, 0, 6);
    for (std::size_t i = 0; i < parts; ++i) {
      if (i > 0 || Chance(engine, 0.3)) text += seps[Between(engine, 0, seps.size() - 1)];
      if (Chance(engine, 0.6)) {
        text += Perturb(engine, unicode::decode(names[Between(engine, 0, names.size() - 1)]));
      } else {
        text += testing::RandomText(engine, 1, 8);
      }
    }
    const std::string utf8 = unicode::encode(text);
    const CharProbTrack got = tag(Tweet{"x", "u", utf8, {}}, cfg);
    got.validate();
    ASSERT_EQ(got.dense(), OracleTag(text, cfg)) << "case " << c << ": " << utf8;
  }
}

TEST(TagDatasetTest, ParallelMatchesSerial) {
  const Dataset d = read_dataset(std::string(MEDEXT_DATA_DIR) + "/synthetic_tweets.jsonl");
  GazetteerConfig cfg;
  cfg.lexicon = Lexicon::from_dataset(d);
  cfg.attach_hashtag = true;
  omp_set_num_threads(4);
  const TrackSet parallel = tag_dataset(d, cfg);
  EXPECT_EQ(parallel, reference::tag_dataset(d, cfg));
  ASSERT_EQ(parallel.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_EQ(parallel.tracks()[i].tweet_id, d.tweets[i].id);
    EXPECT_EQ(parallel.tracks()[i].length, unicode::length(d.tweets[i].text));
  }
}

TEST(TagDatasetTest, ThreeTweets) {
  Dataset d;
  d.tweets = {Tweet{"a", "u", "zofran", {}}, Tweet{"b", "u", "", {}}, Tweet{"c", "u", "meh", {}}};
  const TrackSet set = tag_dataset(d, Config({"zofran"}));
  ASSERT_EQ(set.size(), 3u);
  EXPECT_NE(set.find("a"), nullptr);
  EXPECT_EQ(set.find("b")->length, 0u);
  EXPECT_TRUE(set.find("c")->runs.empty());
}

}  // namespace
}  // namespace medext
