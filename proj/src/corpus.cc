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

#include "medext/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "medext/error.h"
#include "medext/rng.h"
#include "medext/unicode.h"

namespace medext {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::string_view kTsvHeader =
    "tweet_id\tuser_id\ttext\tspan_start\tspan_end\tdrug";

std::string EscapeTsv(std::string_view field) {
  std::string out;
  out.reserve(field.size());
  for (char c : field) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string UnescapeTsv(std::string_view field, std::size_t line) {
  std::string out;
  out.reserve(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    if (field[i] != '\\') {
      out.push_back(field[i]);
      continue;
    }
    if (i + 1 == field.size()) {
      throw Error("malformed line", "dangling escape", line);
    }
    switch (field[++i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default:
        throw Error("malformed line",
                    std::string("unknown escape \\") + field[i], line);
    }
  }
  return out;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t tab = line.find('\t', begin);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(begin));
      return fields;
    }
    fields.push_back(line.substr(begin, tab - begin));
    begin = tab + 1;
  }
}

std::size_t ParseOffset(std::string_view field, std::size_t line) {
  if (field.empty() || field.size() > 18 ||
      !std::all_of(field.begin(), field.end(),
                   [](char c) { return c >= '0' && c <= '9'; })) {
    throw Error("malformed line",
                "span offset '" + std::string(field) + "' is not a non-negative integer",
                line);
  }
  return static_cast<std::size_t>(std::stoull(std::string(field)));
}

// Sorts spans and checks the tweet, attributing failures to `line`.
void FinishTweet(Tweet& tweet, std::size_t line) {
  std::stable_sort(tweet.spans.begin(), tweet.spans.end(),
                   [](const Span& a, const Span& b) {
                     return a.start < b.start ||
                            (a.start == b.start && a.end < b.end);
                   });
  try {
    validate_tweet(tweet);
  } catch (const Error& e) {
    throw Error(e.contract(), e.detail(), line);
  }
}

void CheckUtf8(std::string_view line, std::size_t line_no) {
  if (!unicode::is_valid_utf8(line)) {
    throw Error("invalid utf-8", "line is not valid UTF-8", line_no);
  }
}

const json& RequireKey(const json& object, const char* key, std::size_t line) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw Error("malformed line", std::string("missing key '") + key + "'", line);
  }
  return *it;
}

std::string RequireString(const json& value, const char* key, std::size_t line) {
  if (!value.is_string()) {
    throw Error("malformed line", std::string("'") + key + "' must be a string",
                line);
  }
  return value.get<std::string>();
}

std::size_t RequireOffset(const json& value, const char* key, std::size_t line) {
  if (!value.is_number_unsigned()) {
    throw Error("malformed line",
                std::string("'") + key + "' must be a non-negative integer", line);
  }
  return value.get<std::size_t>();
}

Dataset ParseJsonl(std::istream& input, std::string name) {
  Dataset dataset{std::move(name), {}};
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    CheckUtf8(line, line_no);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error("malformed line", e.what(), line_no);
    }
    if (!record.is_object()) {
      throw Error("malformed line", "record is not a JSON object", line_no);
    }
    Tweet tweet;
    tweet.id = RequireString(RequireKey(record, "id", line_no), "id", line_no);
    if (auto it = record.find("user_id"); it != record.end()) {
      tweet.user_id = RequireString(*it, "user_id", line_no);
    }
    tweet.text =
        RequireString(RequireKey(record, "text", line_no), "text", line_no);
    if (auto it = record.find("spans"); it != record.end()) {
      if (!it->is_array()) {
        throw Error("malformed line", "'spans' must be an array", line_no);
      }
      for (const json& s : *it) {
        if (!s.is_object()) {
          throw Error("malformed line", "span is not an object", line_no);
        }
        Span span;
        span.start = RequireOffset(RequireKey(s, "start", line_no), "start", line_no);
        span.end = RequireOffset(RequireKey(s, "end", line_no), "end", line_no);
        if (auto sf = s.find("surface"); sf != s.end() && !sf->is_null()) {
          span.surface = RequireString(*sf, "surface", line_no);
        }
        tweet.spans.push_back(std::move(span));
      }
    }
    FinishTweet(tweet, line_no);
    if (!seen.insert(tweet.id).second) {
      throw Error("duplicate tweet id", "'" + tweet.id + "'", line_no);
    }
    dataset.tweets.push_back(std::move(tweet));
  }
  return dataset;
}

Dataset ParseTsv(std::istream& input, std::string name) {
  Dataset dataset{std::move(name), {}};
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool open_negative = false;  // current tweet came from an empty-span row
  std::size_t open_line = 0;

  auto close = [&]() {
    if (dataset.tweets.empty()) return;
    FinishTweet(dataset.tweets.back(), open_line);
  };

  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!have_header) {
      if (line != kTsvHeader) {
        throw Error("malformed line", "expected TSV header '" +
                                          EscapeTsv(kTsvHeader) + "'",
                    line_no);
      }
      have_header = true;
      continue;
    }
    if (line.empty()) continue;
    CheckUtf8(line, line_no);
    const auto fields = SplitTabs(line);
    if (fields.size() != 6) {
      throw Error("malformed line",
                  "expected 6 tab-separated columns, found " +
                      std::to_string(fields.size()),
                  line_no);
    }
    std::string id = UnescapeTsv(fields[0], line_no);
    std::string user = UnescapeTsv(fields[1], line_no);
    std::string text = UnescapeTsv(fields[2], line_no);
    const bool negative =
        fields[3].empty() && fields[4].empty() && fields[5].empty();
    if (!negative && (fields[3].empty() || fields[4].empty())) {
      throw Error("malformed line", "span row needs span_start and span_end",
                  line_no);
    }

    const bool continues = !dataset.tweets.empty() &&
                           dataset.tweets.back().id == id;
    if (continues) {
      Tweet& tweet = dataset.tweets.back();
      if (tweet.user_id != user || tweet.text != text) {
        throw Error("malformed line",
                    "rows of tweet '" + id + "' disagree on user_id or text",
                    line_no);
      }
      if (negative || open_negative) {
        throw Error("malformed line",
                    "tweet '" + id + "' mixes an empty-span row with span rows",
                    line_no);
      }
    } else {
      close();
      if (!seen.insert(id).second) {
        throw Error("duplicate tweet id", "'" + id + "'", line_no);
      }
      dataset.tweets.push_back(Tweet{std::move(id), std::move(user),
                                     std::move(text), {}});
      open_negative = negative;
      open_line = line_no;
    }
    if (!negative) {
      Span span;
      span.start = ParseOffset(fields[3], line_no);
      span.end = ParseOffset(fields[4], line_no);
      if (!fields[5].empty()) span.surface = UnescapeTsv(fields[5], line_no);
      dataset.tweets.back().spans.push_back(std::move(span));
    }
  }
  if (!have_header) {
    throw Error("malformed line", "missing TSV header", 1);
  }
  close();
  return dataset;
}

}  // namespace

std::size_t Dataset::positive_count() const {
  return static_cast<std::size_t>(std::count_if(
      tweets.begin(), tweets.end(), [](const Tweet& t) { return t.positive(); }));
}

std::size_t Dataset::span_count() const {
  std::size_t n = 0;
  for (const Tweet& t : tweets) n += t.spans.size();
  return n;
}

Format parse_format(std::string_view name) {
  if (name == "jsonl") return Format::kJsonl;
  if (name == "tsv") return Format::kTsv;
  throw Error("unknown format", "'" + std::string(name) + "' (expected jsonl or tsv)");
}

std::string_view format_name(Format format) {
  return format == Format::kTsv ? "tsv" : "jsonl";
}

Format format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".tsv" ? Format::kTsv : Format::kJsonl;
}

void validate_tweet(const Tweet& tweet) {
  const std::u32string text = unicode::decode(tweet.text);
  const std::size_t n = text.size();
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < tweet.spans.size(); ++i) {
    const Span& span = tweet.spans[i];
    const std::string where = "tweet '" + tweet.id + "' span [" +
                              std::to_string(span.start) + "," +
                              std::to_string(span.end) + ")";
    if (span.start >= span.end) {
      throw Error("empty span", where);
    }
    if (span.end > n) {
      throw Error("span out of bounds",
                  where + " exceeds text length " + std::to_string(n));
    }
    if (i > 0 && span.start < previous_end) {
      throw Error("overlapping spans",
                  where + " overlaps or precedes the previous span");
    }
    if (span.surface) {
      const std::string slice =
          unicode::encode(std::u32string_view(text).substr(span.start, span.length()));
      if (slice != *span.surface) {
        throw Error("surface mismatch", where + " has surface '" +
                                            *span.surface + "' but text '" +
                                            slice + "'");
      }
    }
    previous_end = span.end;
  }
}

void validate_dataset(const Dataset& dataset) {
  std::unordered_set<std::string_view> seen;
  for (const Tweet& tweet : dataset.tweets) {
    validate_tweet(tweet);
    if (!seen.insert(tweet.id).second) {
      throw Error("duplicate tweet id", "'" + tweet.id + "'");
    }
  }
}

void attach_surfaces(Tweet& tweet) {
  std::sort(tweet.spans.begin(), tweet.spans.end(),
            [](const Span& a, const Span& b) { return a.start < b.start; });
  const std::u32string text = unicode::decode(tweet.text);
  for (Span& span : tweet.spans) {
    if (span.end <= text.size() && span.start < span.end) {
      span.surface = unicode::encode(
          std::u32string_view(text).substr(span.start, span.length()));
    }
  }
}

Dataset parse_dataset(std::istream& input, Format format, std::string name) {
  return format == Format::kTsv ? ParseTsv(input, std::move(name))
                                : ParseJsonl(input, std::move(name));
}

Dataset parse_dataset(std::string_view bytes, Format format, std::string name) {
  std::istringstream input{std::string(bytes)};
  return parse_dataset(input, format, std::move(name));
}

std::string serialize_dataset(const Dataset& dataset, Format format) {
  std::string out;
  if (format == Format::kTsv) {
    out += kTsvHeader;
    out += '\n';
    for (const Tweet& t : dataset.tweets) {
      const std::string prefix = EscapeTsv(t.id) + '\t' + EscapeTsv(t.user_id) +
                                 '\t' + EscapeTsv(t.text) + '\t';
      if (t.spans.empty()) {
        out += prefix + "\t\t\n";
        continue;
      }
      for (const Span& s : t.spans) {
        out += prefix + std::to_string(s.start) + '\t' + std::to_string(s.end) +
               '\t' + (s.surface ? EscapeTsv(*s.surface) : std::string()) + '\n';
      }
    }
    return out;
  }
  for (const Tweet& t : dataset.tweets) {
    ordered_json record;
    record["id"] = t.id;
    record["user_id"] = t.user_id;
    record["text"] = t.text;
    record["spans"] = ordered_json::array();
    for (const Span& s : t.spans) {
      ordered_json span;
      span["start"] = s.start;
      span["end"] = s.end;
      if (s.surface) span["surface"] = *s.surface;
      record["spans"].push_back(std::move(span));
    }
    out += record.dump();
    out += '\n';
  }
  return out;
}

Dataset read_dataset(const std::filesystem::path& path, Format format) {
  std::ifstream input(path, std::ios::binary);
  if (!input) {
    throw Error("cannot open file", "", 0, path.string());
  }
  try {
    return parse_dataset(input, format, path.stem().string());
  } catch (const Error& e) {
    throw e.with_file(path.string());
  }
}

Dataset read_dataset(const std::filesystem::path& path) {
  return read_dataset(path, format_for_path(path));
}

void write_dataset(const std::filesystem::path& path, const Dataset& dataset,
                   Format format) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream output(path, std::ios::binary | std::ios::trunc);
  if (!output) throw Error("cannot write file", "", 0, path.string());
  output << serialize_dataset(dataset, format);
}

std::size_t round_half_up(double value) {
  // The epsilon absorbs representation error in products such as 0.7 * 5.
  return static_cast<std::size_t>(std::floor(value + 0.5 + 1e-9));
}

std::pair<Dataset, Dataset> stratified_split(const Dataset& dataset,
                                             double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error("invalid split ratio",
                "ratio " + std::to_string(ratio) + " is outside (0,1)");
  }
  if (dataset.tweets.empty()) {
    throw Error("empty dataset", "cannot split an empty dataset");
  }
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < dataset.tweets.size(); ++i) {
    (dataset.tweets[i].positive() ? positives : negatives).push_back(i);
  }
  std::vector<bool> first(dataset.tweets.size(), false);
  auto pick = [&](std::vector<std::size_t>& stratum, std::string_view key) {
    rng::Engine engine = rng::make_engine(seed, key);
    for (std::size_t i = stratum.size(); i > 1; --i) {
      std::swap(stratum[i - 1], stratum[rng::uniform_index(engine, i)]);
    }
    const std::size_t take =
        std::min(stratum.size(), round_half_up(ratio * static_cast<double>(stratum.size())));
    for (std::size_t i = 0; i < take; ++i) first[stratum[i]] = true;
  };
  pick(positives, "split/positive");
  pick(negatives, "split/negative");

  std::pair<Dataset, Dataset> parts;
  parts.first.name = dataset.name + ".part1";
  parts.second.name = dataset.name + ".part2";
  for (std::size_t i = 0; i < dataset.tweets.size(); ++i) {
    (first[i] ? parts.first : parts.second).tweets.push_back(dataset.tweets[i]);
  }
  return parts;
}

}  // namespace medext
