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

#include "medext/augment.h"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "medext/error.h"
#include "medext/rng.h"
#include "medext/unicode.h"

namespace medext {
namespace {

using json = nlohmann::json;

std::vector<const Tweet*> Positives(const Dataset& dataset) {
  std::vector<const Tweet*> out;
  for (const Tweet& t : dataset.tweets) {
    if (t.positive()) out.push_back(&t);
  }
  return out;
}

double Ratio(std::size_t positives, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(positives) / static_cast<double>(total);
}

// Removes its directory on scope exit.
class TempDir {
 public:
  TempDir() {
    static std::atomic<unsigned> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("medext-paraphrase-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ignored;
    std::filesystem::remove_all(path_, ignored);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out.push_back(c);
    }
  }
  return out + "'";
}

}  // namespace

void AugmentConfig::validate() const {
  if (!(target_positive_ratio > 0.0 && target_positive_ratio < 1.0)) {
    throw Error("invalid augment config", "target_positive_ratio must be in (0,1)");
  }
  if (paraphrase_command && paraphrase_command->empty()) {
    throw Error("invalid augment config", "paraphrase_command is empty");
  }
}

std::size_t upsample_count(std::size_t positives, std::size_t negatives,
                           double target) {
  const double p = static_cast<double>(positives);
  const double n = static_cast<double>(negatives);
  auto reaches = [&](double m) { return p + m >= target * (p + m + n); };
  double m = std::max(0.0, std::ceil((target * (p + n) - p) / (1.0 - target)));
  while (!reaches(m)) m += 1.0;
  while (m > 0.0 && reaches(m - 1.0)) m -= 1.0;
  return static_cast<std::size_t>(m);
}

Dataset upsample(const Dataset& dataset, double target, std::uint64_t seed,
                 std::vector<std::string>* warnings) {
  if (!(target > 0.0 && target < 1.0)) {
    throw Error("invalid upsample target", "target ratio must be in (0,1)");
  }
  const auto positives = Positives(dataset);
  if (positives.empty()) {
    throw Error("no positive tweets", "cannot upsample dataset '" + dataset.name + "'");
  }
  const double current = Ratio(positives.size(), dataset.size());
  if (target <= current) {
    if (warnings) {
      warnings->push_back("upsample target " + std::to_string(target) +
                          " is not above the current positive ratio " +
                          std::to_string(current) + "; dataset unchanged");
    }
    return dataset;
  }
  const std::size_t copies =
      upsample_count(positives.size(), dataset.size() - positives.size(), target);

  Dataset out = dataset;
  std::unordered_set<std::string> ids;
  for (const Tweet& t : dataset.tweets) ids.insert(t.id);
  std::unordered_map<std::string, std::size_t> next_suffix;
  rng::Engine engine = rng::make_engine(seed, "upsample");
  for (std::size_t i = 0; i < copies; ++i) {
    const Tweet& source = *positives[rng::uniform_index(engine, positives.size())];
    Tweet copy = source;
    std::size_t& n = next_suffix[source.id];
    do {
      copy.id = source.id + "#dup" + std::to_string(++n);
    } while (!ids.insert(copy.id).second);
    out.tweets.push_back(std::move(copy));
  }
  return out;
}

std::vector<Tweet> concat_pairs(const Dataset& dataset, std::size_t n,
                                std::string_view separator, std::uint64_t seed) {
  if (n == 0) return {};
  const auto positives = Positives(dataset);
  if (positives.size() < 2) {
    throw Error("too few positive tweets",
                "concatenation needs at least 2 positive tweets, found " +
                    std::to_string(positives.size()));
  }
  const std::size_t sep_length = unicode::length(separator);
  std::vector<Tweet> out(n);
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) {
    rng::Engine engine = rng::make_engine(seed, "concat", i);
    const std::size_t a = rng::uniform_index(engine, positives.size());
    std::size_t b = rng::uniform_index(engine, positives.size() - 1);
    if (b >= a) ++b;
    const Tweet& first = *positives[a];
    const Tweet& second = *positives[b];
    const std::size_t shift = unicode::length(first.text) + sep_length;
    Tweet& t = out[i];
    t.id = first.id + "+" + second.id + "#cat" + std::to_string(i + 1);
    t.user_id = first.user_id;
    t.text = first.text;
    t.text += separator;
    t.text += second.text;
    t.spans = first.spans;
    for (Span span : second.spans) {
      span.start += shift;
      span.end += shift;
      t.spans.push_back(std::move(span));
    }
  }
  return out;
}

Tweet replace_drug_names(const Tweet& tweet, const Lexicon& lexicon,
                         std::uint64_t seed) {
  if (lexicon.empty()) {
    throw Error("empty lexicon", "drug-name replacement needs lexicon entries");
  }
  if (tweet.spans.empty()) {
    throw Error("no gold spans", "tweet '" + tweet.id + "' has nothing to replace");
  }
  const std::vector<std::string> names = lexicon.names();
  rng::Engine engine = rng::make_engine(seed, "replace/" + tweet.id);

  const std::u32string text = unicode::decode(tweet.text);
  std::u32string rebuilt;
  Tweet out;
  out.id = tweet.id;
  out.user_id = tweet.user_id;
  std::size_t cursor = 0;
  for (const Span& span : tweet.spans) {
    rebuilt.append(text, cursor, span.start - cursor);
    const std::u32string original = text.substr(span.start, span.length());
    const std::string original_utf8 = unicode::encode(original);
    std::vector<const std::string*> candidates;
    for (const std::string& name : names) {
      if (name != original_utf8) candidates.push_back(&name);
    }
    std::u32string replacement = original;
    if (!candidates.empty()) {
      replacement = unicode::decode(
          *candidates[rng::uniform_index(engine, candidates.size())]);
    }
    Span moved;
    moved.start = rebuilt.size();
    rebuilt += replacement;
    moved.end = rebuilt.size();
    if (span.surface) moved.surface = unicode::encode(replacement);
    out.spans.push_back(std::move(moved));
    cursor = span.end;
  }
  rebuilt.append(text, cursor, std::u32string::npos);
  out.text = unicode::encode(rebuilt);
  return out;
}

std::vector<Tweet> replace_drug_names(const Dataset& dataset,
                                      const Lexicon& lexicon,
                                      std::size_t per_positive,
                                      std::uint64_t seed) {
  if (per_positive == 0) return {};
  if (lexicon.empty()) {
    throw Error("empty lexicon", "drug-name replacement needs lexicon entries");
  }
  const auto positives = Positives(dataset);
  std::vector<Tweet> out(positives.size() * per_positive);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < out.size(); ++i) {
    Tweet source = *positives[i / per_positive];
    source.id += "#rep" + std::to_string(i % per_positive + 1);
    out[i] = replace_drug_names(source, lexicon, seed);
  }
  return out;
}

std::optional<Tweet> relocate_spans(const Tweet& original,
                                    std::string_view paraphrase,
                                    std::string new_id) {
  const std::u32string source = unicode::decode(original.text);
  const std::u32string target = unicode::decode(paraphrase);
  Tweet out;
  out.id = std::move(new_id);
  out.user_id = original.user_id;
  out.text = std::string(paraphrase);
  std::size_t cursor = 0;
  for (const Span& span : original.spans) {
    const std::u32string_view surface =
        std::u32string_view(source).substr(span.start, span.length());
    const std::size_t at = target.find(surface, cursor);
    if (at == std::u32string::npos) return std::nullopt;
    Span moved{at, at + surface.size(), span.surface};
    cursor = moved.end;
    out.spans.push_back(std::move(moved));
  }
  return out;
}

ParaphraseResult paraphrase(const Dataset& dataset, const std::string& command) {
  if (command.empty()) {
    throw Error("paraphrase command failed", "no command configured");
  }
  const auto positives = Positives(dataset);
  ParaphraseResult result;
  if (positives.empty()) return result;

  TempDir dir;
  const auto in_path = dir.path() / "input.jsonl";
  const auto out_path = dir.path() / "output.jsonl";
  {
    std::ofstream in(in_path, std::ios::binary);
    for (const Tweet* t : positives) {
      in << json{{"id", t->id}, {"text", t->text}}.dump() << '\n';
    }
  }
  const std::string shell = "(" + command + ") < " + ShellQuote(in_path.string()) +
                            " > " + ShellQuote(out_path.string());
  const int status = std::system(shell.c_str());
  if (status == -1 || !WIFEXITED(status)) {
    throw Error("paraphrase command failed", "could not run '" + command + "'");
  }
  if (WEXITSTATUS(status) != 0) {
    throw Error("paraphrase command failed",
                "'" + command + "' exited with status " +
                    std::to_string(WEXITSTATUS(status)));
  }

  std::map<std::string, std::vector<std::string>> returned;
  std::unordered_map<std::string, const Tweet*> by_id;
  for (const Tweet* t : positives) by_id.emplace(t->id, t);
  std::ifstream out(out_path, std::ios::binary);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(out, line)) {
    ++line_no;
    if (line.empty()) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error("malformed paraphrase output", e.what(), line_no);
    }
    if (!record.is_object() || !record.contains("id") || !record["id"].is_string() ||
        !record.contains("paraphrases") || !record["paraphrases"].is_array()) {
      throw Error("malformed paraphrase output",
                  "expected {\"id\": string, \"paraphrases\": [string]}", line_no);
    }
    const std::string id = record["id"].get<std::string>();
    if (!by_id.count(id)) {
      throw Error("malformed paraphrase output", "unknown tweet id '" + id + "'",
                  line_no);
    }
    auto& texts = returned[id];
    for (const json& p : record["paraphrases"]) {
      if (!p.is_string()) {
        throw Error("malformed paraphrase output", "paraphrase is not a string",
                    line_no);
      }
      texts.push_back(p.get<std::string>());
    }
  }

  for (const Tweet* t : positives) {
    auto it = returned.find(t->id);
    if (it == returned.end()) continue;
    for (std::size_t k = 0; k < it->second.size(); ++k) {
      auto moved = relocate_spans(*t, it->second[k],
                                  t->id + "#para" + std::to_string(k + 1));
      if (moved) {
        result.tweets.push_back(std::move(*moved));
      } else {
        ++result.dropped;
      }
    }
  }
  return result;
}

Dataset augment_pl1(const Dataset& dataset, const AugmentConfig& config,
                    AugmentReport* report) {
  config.validate();
  std::vector<std::string> warnings;
  Dataset out = upsample(dataset, config.target_positive_ratio, config.seed, &warnings);
  out.name = dataset.name + ".pl1";
  if (report) {
    report->upsampled = out.size() - dataset.size();
    report->warnings.insert(report->warnings.end(), warnings.begin(), warnings.end());
  }
  return out;
}

Dataset augment_pl2(const Dataset& dataset, const Lexicon& lexicon,
                    const AugmentConfig& config, AugmentReport* report) {
  config.validate();
  AugmentReport local;
  Dataset combined = dataset;

  auto concatenated = concat_pairs(dataset, config.concat_pairs, config.separator,
                                   config.seed);
  local.concatenated = concatenated.size();
  for (Tweet& t : concatenated) combined.tweets.push_back(std::move(t));

  if (config.paraphrase_command) {
    ParaphraseResult para = paraphrase(dataset, *config.paraphrase_command);
    local.paraphrased = para.tweets.size();
    local.paraphrase_dropped = para.dropped;
    if (para.dropped > 0) {
      local.warnings.push_back(std::to_string(para.dropped) +
                               " paraphrases dropped: a drug surface was not "
                               "preserved verbatim");
    }
    for (Tweet& t : para.tweets) combined.tweets.push_back(std::move(t));
  }

  auto replaced = replace_drug_names(dataset, lexicon, config.replacement_per_positive,
                                     config.seed);
  local.replaced = replaced.size();
  for (Tweet& t : replaced) combined.tweets.push_back(std::move(t));

  const std::size_t before = combined.size();
  Dataset out = upsample(combined, config.target_positive_ratio, config.seed,
                         &local.warnings);
  local.upsampled = out.size() - before;
  out.name = dataset.name + ".pl2";
  validate_dataset(out);
  if (report) *report = std::move(local);
  return out;
}

}  // namespace medext
