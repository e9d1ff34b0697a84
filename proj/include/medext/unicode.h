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

#ifndef MEDEXT_UNICODE_H_
#define MEDEXT_UNICODE_H_

#include <cstddef>
#include <string>
#include <string_view>

// All character offsets in medext count Unicode scalar values. These helpers
// convert between UTF-8 storage and scalar-value indexing.
namespace medext::unicode {

bool is_valid_utf8(std::string_view bytes);

// Throws medext::Error("invalid utf-8") on malformed input.
std::u32string decode(std::string_view utf8);
std::string encode(std::u32string_view text);

// Number of scalar values in a valid UTF-8 string.
std::size_t length(std::string_view utf8);

// Scalar-value slice [start, end) of a valid UTF-8 string. Clamped to length.
std::string slice(std::string_view utf8, std::size_t start, std::size_t end);

// Letters and digits. ASCII plus the Latin-1, Latin Extended, Greek,
// Cyrillic, Hebrew, Arabic, and CJK letter blocks; everything else (emoji,
// punctuation, symbols, whitespace) is non-alphanumeric. Locale-independent.
bool is_alnum(char32_t c);

// Simple one-to-one lowercase mapping for ASCII, Latin-1, Latin Extended-A,
// Greek, and Cyrillic. Other scalars map to themselves.
char32_t fold_case(char32_t c);
std::u32string fold_case(std::u32string_view text);

bool is_space(char32_t c);

}  // namespace medext::unicode

#endif  // MEDEXT_UNICODE_H_
