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

#ifndef MEDEXT_POSTPROCESS_H_
#define MEDEXT_POSTPROCESS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medext/corpus.h"

namespace medext {

// Set of scalars that trim_edges may remove from span edges.
class TrimCharset {
 public:
  // Every non-alphanumeric scalar (the default).
  static TrimCharset non_alphanumeric();
  // ASCII punctuation only.
  static TrimCharset punctuation();
  // Exactly the given scalars.
  static TrimCharset of(std::u32string chars);

  bool contains(char32_t c) const;

 private:
  enum class Kind { kNonAlnum, kExplicit };
  TrimCharset(Kind kind, std::u32string chars)
      : kind_(kind), chars_(std::move(chars)) {}

  Kind kind_;
  std::u32string chars_;
};

// Drops leading '#' scalars from every span; spans left empty are removed.
std::vector<Span> strip_hashtags(std::string_view text, std::span<const Span> spans);

// Drops leading and trailing scalars in `charset`; interior scalars are
// kept and spans left empty are removed.
std::vector<Span> trim_edges(std::string_view text, std::span<const Span> spans,
                             const TrimCharset& charset = TrimCharset::non_alphanumeric());

// strip_hashtags followed by trim_edges with the default charset, applied to
// every tweet. Surfaces are refreshed.
Dataset postprocess(const Dataset& predictions);

}  // namespace medext

#endif  // MEDEXT_POSTPROCESS_H_
