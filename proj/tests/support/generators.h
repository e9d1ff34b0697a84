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

// Hand-rolled random generators for property tests. Every generator draws
// from the caller's engine, so a case is reproducible from its seed alone.

#ifndef MEDEXT_TESTS_SUPPORT_GENERATORS_H_
#define MEDEXT_TESTS_SUPPORT_GENERATORS_H_

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "medext/corpus.h"
#include "medext/lexicon.h"
#include "medext/prediction.h"

namespace medext::testing {

using Engine = std::mt19937_64;

// Inclusive range.
std::size_t Between(Engine& engine, std::size_t lo, std::size_t hi);
bool Chance(Engine& engine, double p);

// Text over an alphabet mixing ASCII words, accented and Cyrillic letters,
// emoji, hashtags, punctuation, and the characters TSV has to escape.
std::u32string RandomText(Engine& engine, std::size_t min_len, std::size_t max_len);

// Sorted, disjoint, non-empty spans inside [0, length).
std::vector<Span> RandomSpans(Engine& engine, std::size_t length, std::size_t max_spans);

// A valid tweet; positive with probability `positive_rate`. Surfaces are
// attached.
Tweet RandomTweet(Engine& engine, const std::string& id, double positive_rate);

// `n` valid tweets with ids "g0".."g<n-1>".
Dataset RandomDataset(Engine& engine, std::size_t n, double positive_rate);

// Drug-like names; some share a case-folded form, some contain spaces or
// non-ASCII letters.
Lexicon RandomLexicon(Engine& engine, std::size_t n);

// A valid run-length track with probabilities on a 1/8 grid.
CharProbTrack RandomTrack(Engine& engine, const std::string& id, std::size_t length);

}  // namespace medext::testing

#endif  // MEDEXT_TESTS_SUPPORT_GENERATORS_H_
