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

#ifndef MEDEXT_LEXICON_H_
#define MEDEXT_LEXICON_H_

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "medext/corpus.h"

namespace medext {

enum class LexiconSource { kCorpus, kManual };

// Drug-name list. Entries keep their original casing; occurrence lookups are
// case-insensitive.
class Lexicon {
 public:
  struct Entry {
    bool from_corpus = false;
    bool from_manual = false;
    std::size_t corpus_count = 0;  // gold occurrences seen in corpora
  };

  Lexicon() = default;

  // Gold surfaces of every span in `dataset`, tagged as corpus entries.
  static Lexicon from_dataset(const Dataset& dataset);
  // One name per line; blank lines and '#'-prefixed lines are skipped.
  static Lexicon parse_drug_list(std::istream& input);
  static Lexicon read_drug_list(const std::filesystem::path& path);

  // Throws if `name` is empty or whitespace-only.
  void add(const std::string& name, LexiconSource source);
  void merge(const Lexicon& other);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  bool contains(const std::string& name) const { return entries_.count(name) > 0; }
  const std::map<std::string, Entry>& entries() const { return entries_; }
  // Entry names in sorted order.
  std::vector<std::string> names() const;

  // Corpus occurrences of `name` ignoring case, plus one when a manual
  // entry matches.
  std::size_t occurrences(std::string_view name) const;

 private:
  std::map<std::string, Entry> entries_;
  std::map<std::u32string, std::size_t> folded_counts_;
};

}  // namespace medext

#endif  // MEDEXT_LEXICON_H_
