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

#include "medext/pipeline.h"

#include <fstream>
#include <functional>
#include <map>

#include "medext/ensemble.h"
#include "medext/error.h"
#include "medext/lexicon.h"
#include "medext/postprocess.h"
#include "medext/prediction.h"
#include "medext/sampling.h"
#include "medext/tagger.h"

namespace medext {
namespace {

std::string Trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool ParseBool(const std::string& v) {
  if (v == "on" || v == "true" || v == "1" || v == "yes") return true;
  if (v == "off" || v == "false" || v == "0" || v == "no") return false;
  throw Error("invalid config value", "'" + v + "' is not a boolean (on/off)");
}

double ParseDouble(const std::string& v) {
  std::size_t used = 0;
  double out;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) {
    throw Error("invalid config value", "'" + v + "' is not a number");
  }
  return out;
}

std::uint64_t ParseUnsigned(const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw Error("invalid config value", "'" + v + "' is not a non-negative integer");
  }
  return std::stoull(v);
}

void Record(PipelineSummary& summary, const std::filesystem::path& p) {
  summary.artifacts.push_back(p);
}

std::string Extension(Format f) { return f == Format::kTsv ? ".tsv" : ".jsonl"; }

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file", "", 0, path.string());
  out << text;
}

}  // namespace

PipelineMode parse_mode(std::string_view name) {
  if (name == "pl1") return PipelineMode::kPl1;
  if (name == "pl2") return PipelineMode::kPl2;
  throw Error("unknown mode", "'" + std::string(name) + "' (expected pl1 or pl2)");
}

PipelineConfig parse_pipeline_config(std::istream& input,
                                     const std::filesystem::path& base_dir) {
  PipelineConfig c;
  auto path = [&](const std::string& v) {
    std::filesystem::path p(v);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  const std::map<std::string, std::function<void(const std::string&)>> setters = {
      {"mode", [&](const std::string& v) { c.mode = parse_mode(v); }},
      {"seed", [&](const std::string& v) { c.seed = ParseUnsigned(v); }},
      {"corpus", [&](const std::string& v) { c.corpus = path(v); }},
      {"drug_list", [&](const std::string& v) { c.drug_list = path(v); }},
      {"out_dir", [&](const std::string& v) { c.out_dir = path(v); }},
      {"format", [&](const std::string& v) { c.format = parse_format(v); }},
      {"split_ratio", [&](const std::string& v) { c.split_ratio = ParseDouble(v); }},
      {"target_positive_ratio",
       [&](const std::string& v) { c.target_positive_ratio = ParseDouble(v); }},
      {"concat_pairs", [&](const std::string& v) { c.concat_pairs = ParseUnsigned(v); }},
      {"replacement_per_positive",
       [&](const std::string& v) { c.replacement_per_positive = ParseUnsigned(v); }},
      {"separator", [&](const std::string& v) { c.separator = v; }},
      {"paraphrase_command",
       [&](const std::string& v) {
         if (v.empty()) {
           c.paraphrase_command.reset();
         } else {
           c.paraphrase_command = v;
         }
       }},
      {"subsets", [&](const std::string& v) { c.subsets = ParseUnsigned(v); }},
      {"sample_fraction", [&](const std::string& v) { c.sample_fraction = ParseDouble(v); }},
      {"exact_prob", [&](const std::string& v) { c.exact_prob = ParseDouble(v); }},
      {"fuzzy_prob", [&](const std::string& v) { c.fuzzy_prob = ParseDouble(v); }},
      {"max_edit_distance",
       [&](const std::string& v) { c.max_edit_distance = static_cast<int>(ParseUnsigned(v)); }},
      {"attach_hashtag", [&](const std::string& v) { c.attach_hashtag = ParseBool(v); }},
      {"tagger_uses_drug_list",
       [&](const std::string& v) { c.tagger_uses_drug_list = ParseBool(v); }},
      {"threshold", [&](const std::string& v) { c.threshold = ParseDouble(v); }},
      {"post", [&](const std::string& v) { c.post = ParseBool(v); }},
  };

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw Error("malformed line", "expected 'key = value'", line_no);
    }
    const std::string key = Trim(trimmed.substr(0, eq));
    std::string value = Trim(trimmed.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    auto it = setters.find(key);
    if (it == setters.end()) {
      throw Error("unknown config key", "'" + key + "'", line_no);
    }
    try {
      it->second(value);
    } catch (const Error& e) {
      throw Error(e.contract(), e.detail(), line_no);
    }
  }
  return c;
}

PipelineConfig read_pipeline_config(const std::filesystem::path& path) {
  std::ifstream input(path);
  if (!input) throw Error("cannot open file", "", 0, path.string());
  try {
    return parse_pipeline_config(input, path.parent_path());
  } catch (const Error& e) {
    throw e.with_file(path.string());
  }
}

PipelineSummary run_pipeline(const PipelineConfig& config) {
  PipelineSummary summary;
  const auto& out = config.out_dir;
  const std::string ext = Extension(config.format);
  auto write = [&](const std::string& name, const Dataset& d) {
    const auto p = out / (name + ext);
    write_dataset(p, d, config.format);
    Record(summary, p);
  };
  auto write_tracks = [&](const std::string& name, const TrackSet& t) {
    const auto p = out / name;
    write_predictions(p, t);
    Record(summary, p);
  };

  const Dataset corpus = read_dataset(config.corpus);
  auto [train, valid] = stratified_split(corpus, config.split_ratio, config.seed);
  train.name = "train";
  valid.name = "valid";
  write("train", train);
  write("valid", valid);

  Lexicon manual;
  if (config.drug_list) manual = Lexicon::read_drug_list(*config.drug_list);

  AugmentConfig augment;
  augment.target_positive_ratio = config.target_positive_ratio;
  augment.concat_pairs = config.concat_pairs;
  augment.replacement_per_positive = config.replacement_per_positive;
  augment.separator = config.separator;
  augment.seed = config.seed;
  augment.paraphrase_command = config.paraphrase_command;

  auto model_lexicon = [&](const Dataset& d) {
    Lexicon lex = Lexicon::from_dataset(d);
    if (config.tagger_uses_drug_list) lex.merge(manual);
    return lex;
  };
  auto gazetteer = [&](Lexicon lex) {
    GazetteerConfig g;
    g.lexicon = std::move(lex);
    g.exact_prob = config.exact_prob;
    g.fuzzy_prob = config.fuzzy_prob;
    g.max_edit_distance = config.max_edit_distance;
    g.attach_hashtag = config.attach_hashtag;
    return g;
  };

  TrackSet combined;
  if (config.mode == PipelineMode::kPl1) {
    Dataset augmented = augment_pl1(train, augment, &summary.augment);
    augmented.name = "augmented";
    write("augmented", augmented);
    combined = tag_dataset(valid, gazetteer(model_lexicon(augmented)));
    write_tracks("predictions/model_0.jsonl", combined);
  } else {
    Lexicon replacement = Lexicon::from_dataset(train);
    replacement.merge(manual);
    if (replacement.empty()) {
      throw Error("empty lexicon", "no gold surfaces or drug list entries for replacement");
    }
    Dataset augmented = augment_pl2(train, replacement, augment, &summary.augment);
    augmented.name = "augmented";
    write("augmented", augmented);

    SubsetPlan plan{config.subsets, config.sample_fraction, config.seed};
    const auto pairs = bootstrap_pairs(augmented, valid, plan);
    std::vector<TrackSet> models;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      write("subsets/train_" + std::to_string(i), pairs[i].train);
      write("subsets/valid_" + std::to_string(i), pairs[i].validation);
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      models.push_back(tag_dataset(valid, gazetteer(model_lexicon(pairs[i].train))));
      write_tracks("predictions/model_" + std::to_string(i) + ".jsonl", models.back());
    }
    combined = average(models);
    write_tracks("predictions/average.jsonl", combined);
  }

  const TrackSet single[] = {combined};
  Dataset spans = predict_spans(valid, single, EnsembleParams{{1.0}, config.threshold});
  spans.name = "spans";
  Dataset post = postprocess(spans);
  post.name = "spans_post";
  write("spans", spans);
  write("spans_post", post);

  summary.raw = evaluate(valid, spans);
  summary.post = evaluate(valid, post);
  const MetricsReport& selected = config.post ? summary.post : summary.raw;
  summary.errors = categorize_errors(valid, config.post ? post : spans,
                                     Lexicon::from_dataset(train));

  const std::string label = config.mode == PipelineMode::kPl1 ? "pl1" : "pl2";
  const auto report_path = out / "report.json";
  WriteText(report_path, report_json(selected, &summary.errors));
  Record(summary, report_path);
  const auto table_path = out / "report.txt";
  WriteText(table_path, format_table({{label, summary.raw}, {label + "-post", summary.post}}));
  Record(summary, table_path);
  return summary;
}

}  // namespace medext
