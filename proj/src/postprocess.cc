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

#include "medext/postprocess.h"

#include <algorithm>

#include "medext/unicode.h"

namespace medext {
namespace {

Span Rebuild(const std::u32string& text, const Span& original, std::size_t start,
             std::size_t end) {
  Span out{start, end, std::nullopt};
  if (original.surface) {
    out.surface = unicode::encode(std::u32string_view(text).substr(start, end - start));
  }
  return out;
}

}  // namespace

TrimCharset TrimCharset::non_alphanumeric() { return {Kind::kNonAlnum, {}}; }

TrimCharset TrimCharset::punctuation() {
  return {Kind::kExplicit, U"!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~"};
}

TrimCharset TrimCharset::of(std::u32string chars) {
  return {Kind::kExplicit, std::move(chars)};
}

bool TrimCharset::contains(char32_t c) const {
  if (kind_ == Kind::kNonAlnum) return !unicode::is_alnum(c);
  return chars_.find(c) != std::u32string::npos;
}

std::vector<Span> strip_hashtags(std::string_view text, std::span<const Span> spans) {
  const std::u32string decoded = unicode::decode(text);
  std::vector<Span> out;
  for (const Span& span : spans) {
    std::size_t start = span.start;
    while (start < span.end && decoded[start] == U'#') ++start;
    if (start < span.end) out.push_back(Rebuild(decoded, span, start, span.end));
  }
  return out;
}

std::vector<Span> trim_edges(std::string_view text, std::span<const Span> spans,
                             const TrimCharset& charset) {
  const std::u32string decoded = unicode::decode(text);
  std::vector<Span> out;
  for (const Span& span : spans) {
    std::size_t start = span.start;
    std::size_t end = span.end;
    while (start < end && charset.contains(decoded[start])) ++start;
    while (end > start && charset.contains(decoded[end - 1])) --end;
    if (start < end) out.push_back(Rebuild(decoded, span, start, end));
  }
  return out;
}

Dataset postprocess(const Dataset& predictions) {
  Dataset out{predictions.name + ".post", predictions.tweets};
#pragma omp parallel for schedule(dynamic, 64)
  for (std::size_t i = 0; i < out.tweets.size(); ++i) {
    Tweet& t = out.tweets[i];
    t.spans = trim_edges(t.text, strip_hashtags(t.text, t.spans));
  }
  return out;
}

}  // namespace medext
