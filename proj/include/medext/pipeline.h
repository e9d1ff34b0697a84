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

#ifndef MEDEXT_PIPELINE_H_
#define MEDEXT_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "medext/augment.h"
#include "medext/corpus.h"
#include "medext/eval.h"

namespace medext {

enum class PipelineMode { kPl1, kPl2 };

PipelineMode parse_mode(std::string_view name);

// Declarative description of one end-to-end run. Relative paths in a config
// file are resolved against the file's directory.
struct PipelineConfig {
  PipelineMode mode = PipelineMode::kPl2;
  std::uint64_t seed = 13;
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> drug_list;
  std::filesystem::path out_dir = "out";
  Format format = Format::kJsonl;  // dataset artifacts

  double split_ratio = 0.7;

  double target_positive_ratio = 0.3;
  std::size_t concat_pairs = 20;
  std::size_t replacement_per_positive = 1;
  std::string separator = " ";
  std::optional<std::string> paraphrase_command;

  std::size_t subsets = 6;
  double sample_fraction = 1.0;

  double exact_prob = 0.9;
  double fuzzy_prob = 0.6;
  int max_edit_distance = 1;
  bool attach_hashtag = true;
  bool tagger_uses_drug_list = false;

  double threshold = 0.5;
  bool post = true;
};

// `key = value` lines; '#' starts a comment line; values may be wrapped in
// double quotes to keep surrounding whitespace. Unknown keys are errors.
PipelineConfig parse_pipeline_config(std::istream& input,
                                     const std::filesystem::path& base_dir = {});
PipelineConfig read_pipeline_config(const std::filesystem::path& path);

struct PipelineSummary {
  std::vector<std::filesystem::path> artifacts;  // in write order
  MetricsReport raw;    // ensemble spans before post-processing
  MetricsReport post;   // after post-processing
  ErrorTally errors;    // for the variant selected by `post`
  AugmentReport augment;
};

// split -> augment -> (PL2: bootstrap subsets) -> tag -> ensemble ->
// post-process -> evaluate, writing every intermediate artifact under
// out_dir. Byte-identical output for a fixed config.
PipelineSummary run_pipeline(const PipelineConfig& config);

}  // namespace medext

#endif  // MEDEXT_PIPELINE_H_
