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

#include "medext/lexicon.h"

#include <algorithm>
#include <fstream>

#include "medext/error.h"
#include "medext/unicode.h"

namespace medext {
namespace {

std::string Trim(const std::string& s) {
  const std::u32string text = unicode::decode(s);
  std::size_t b = 0, e = text.size();
  while (b < e && unicode::is_space(text[b])) ++b;
  while (e > b && unicode::is_space(text[e - 1])) --e;
  return unicode::encode(std::u32string_view(text).substr(b, e - b));
}

}  // namespace

Lexicon Lexicon::from_dataset(const Dataset& dataset) {
  Lexicon lexicon;
  for (const Tweet& tweet : dataset.tweets) {
    if (tweet.spans.empty()) continue;
    const std::u32string text = unicode::decode(tweet.text);
    for (const Span& span : tweet.spans) {
      lexicon.add(unicode::encode(std::u32string_view(text).substr(
                      span.start, span.length())),
                  LexiconSource::kCorpus);
    }
  }
  return lexicon;
}

Lexicon Lexicon::parse_drug_list(std::istream& input) {
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!unicode::is_valid_utf8(line)) {
      throw Error("invalid utf-8", "drug list line is not valid UTF-8", line_no);
    }
    const std::string name = Trim(line);
    if (name.empty() || name.front() == '#') continue;
    lexicon.add(name, LexiconSource::kManual);
  }
  return lexicon;
}

Lexicon Lexicon::read_drug_list(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw Error("cannot open file", "", 0, path.string());
  try {
    return parse_drug_list(input);
  } catch (const Error& e) {
    throw e.with_file(path.string());
  }
}

void Lexicon::add(const std::string& name, LexiconSource source) {
  const std::u32string decoded = unicode::decode(name);
  if (std::all_of(decoded.begin(), decoded.end(), unicode::is_space)) {
    throw Error("invalid lexicon entry", "entry is empty or whitespace-only");
  }
  Entry& entry = entries_[name];
  const std::u32string folded = unicode::fold_case(decoded);
  if (source == LexiconSource::kCorpus) {
    entry.from_corpus = true;
    ++entry.corpus_count;
    ++folded_counts_[folded];
  } else if (!entry.from_manual) {
    entry.from_manual = true;
    folded_counts_[folded] += 1;
  }
}

void Lexicon::merge(const Lexicon& other) {
  for (const auto& [name, entry] : other.entries_) {
    for (std::size_t i = 0; i < entry.corpus_count; ++i) {
      add(name, LexiconSource::kCorpus);
    }
    if (entry.from_manual) add(name, LexiconSource::kManual);
  }
}

std::vector<std::string> Lexicon::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, entry] : entries_) out.push_back(name);
  return out;
}

std::size_t Lexicon::occurrences(std::string_view name) const {
  auto it = folded_counts_.find(unicode::fold_case(unicode::decode(name)));
  return it == folded_counts_.end() ? 0 : it->second;
}

}  // namespace medext
