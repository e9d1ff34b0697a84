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

// Command-line front end. Every stage of the PL1/PL2 pipelines is a
// subcommand; `pipeline` runs them end to end from a config file.
//
//   medext split    --input corpus.jsonl --ratio 0.7 --train-out train.jsonl --valid-out valid.jsonl
//   medext augment  --input train.jsonl --mode pl2 --drug-list drugs.txt --output aug.jsonl
//   medext subsets  --input aug.jsonl --k 6 --out-dir subsets/
//   medext tag      --input valid.jsonl --lexicon-from aug.jsonl --output model.jsonl
//   medext ensemble --dataset valid.jsonl --predictions a.jsonl b.jsonl c.jsonl --output spans.jsonl
//   medext post     --input spans.jsonl --output spans_post.jsonl
//   medext eval     --gold valid.jsonl --pred spans_post.jsonl
//   medext optimize --gold valid.jsonl --predictions a.jsonl b.jsonl c.jsonl --method tpe
//   medext pipeline --config data/pipeline_pl2.conf

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "medext/augment.h"
#include "medext/corpus.h"
#include "medext/ensemble.h"
#include "medext/error.h"
#include "medext/eval.h"
#include "medext/hpo.h"
#include "medext/lexicon.h"
#include "medext/pipeline.h"
#include "medext/postprocess.h"
#include "medext/prediction.h"
#include "medext/sampling.h"
#include "medext/tagger.h"
#include "medext/unicode.h"

namespace fs = std::filesystem;

namespace {

using namespace medext;

Format OutputFormat(const std::string& flag, const fs::path& like) {
  return flag.empty() ? format_for_path(like) : parse_format(flag);
}

bool OnOff(const std::string& v) { return v == "on"; }

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write file", "", 0, path.string());
  out << text;
}

// Every prediction file must cover exactly the dataset's tweets with
// matching lengths.
void CheckCoverage(const TrackSet& tracks, const Dataset& dataset, const fs::path& file) {
  for (const Tweet& t : dataset.tweets) {
    const CharProbTrack* track = tracks.find(t.id);
    if (!track) {
      throw Error("id mismatch", "no track for tweet '" + t.id + "'", 0, file.string());
    }
    const std::size_t n = unicode::length(t.text);
    if (track->length != n) {
      throw Error("length mismatch",
                  "track for '" + t.id + "' has length " + std::to_string(track->length) +
                      ", text has " + std::to_string(n),
                  0, file.string());
    }
  }
  if (tracks.size() != dataset.size()) {
    throw Error("id mismatch", "file has tracks for tweets outside the dataset", 0,
                file.string());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medext: medication-mention extraction toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string format;
  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed");
    cmd->add_option("--format", format, "Output dataset format")
        ->check(CLI::IsMember({"jsonl", "tsv"}));
  };

  // split
  std::string input, output, train_out, valid_out;
  double ratio = 0.7;
  auto* split = app.add_subcommand("split", "Stratified train/validation split");
  split->add_option("--input", input, "Annotated corpus")->required();
  split->add_option("--ratio", ratio, "Fraction for the first part");
  split->add_option("--train-out", train_out)->required();
  split->add_option("--valid-out", valid_out)->required();
  add_common(split);

  // augment
  std::string mode = "pl2", drug_list, paraphrase_command, separator = " ";
  double target_ratio = 0.3;
  std::size_t concat_pairs = 20, replacements = 1;
  auto* augment = app.add_subcommand("augment", "PL1 upsampling or PL2 augmentation");
  augment->add_option("--input", input)->required();
  augment->add_option("--output", output)->required();
  augment->add_option("--mode", mode)->check(CLI::IsMember({"pl1", "pl2"}));
  augment->add_option("--target-ratio", target_ratio, "Target positive ratio");
  augment->add_option("--concat-pairs", concat_pairs);
  augment->add_option("--replacements", replacements, "Replacement variants per positive");
  augment->add_option("--separator", separator);
  augment->add_option("--drug-list", drug_list, "Manual drug list");
  augment->add_option("--paraphrase-command", paraphrase_command);
  add_common(augment);

  // subsets
  std::string out_dir, validation;
  std::size_t k = 6;
  double fraction = 1.0;
  auto* subsets = app.add_subcommand("subsets", "Bootstrap subsets (with replacement)");
  subsets->add_option("--input", input)->required();
  subsets->add_option("--validation", validation, "Validation set subsampled alongside");
  subsets->add_option("--out-dir", out_dir)->required();
  subsets->add_option("--k", k);
  subsets->add_option("--fraction", fraction);
  add_common(subsets);

  // tag
  std::vector<std::string> lexicon_from, ingest;
  double exact_prob = 0.9, fuzzy_prob = 0.6;
  int max_edit = 1;
  std::string attach_hashtag = "off";
  auto* tag = app.add_subcommand("tag", "Gazetteer tagging or external prediction ingest");
  tag->add_option("--input", input, "Dataset to tag")->required();
  tag->add_option("--output", output, "Prediction file")->required();
  tag->add_option("--lexicon-from", lexicon_from, "Datasets whose gold surfaces form the lexicon");
  tag->add_option("--drug-list", drug_list);
  tag->add_option("--exact-prob", exact_prob);
  tag->add_option("--fuzzy-prob", fuzzy_prob);
  tag->add_option("--max-edit-distance", max_edit)->check(CLI::Range(0, 1));
  tag->add_option("--attach-hashtag", attach_hashtag)->check(CLI::IsMember({"on", "off"}));
  tag->add_option("--ingest", ingest, "External prediction files to validate and merge");

  // ensemble
  std::vector<std::string> predictions;
  std::vector<double> weights;
  double threshold = 0.5;
  std::string average_out, post_flag = "off", dataset;
  auto* ensemble = app.add_subcommand("ensemble", "Character-level weighted vote");
  ensemble->add_option("--dataset", dataset, "Tweets the predictions refer to")->required();
  ensemble->add_option("--predictions", predictions)->required();
  ensemble->add_option("--weights", weights, "One weight per model (default equal)");
  ensemble->add_option("--threshold", threshold);
  ensemble->add_option("--output", output, "Predicted span dataset")->required();
  ensemble->add_option("--average-out", average_out, "Also write the mean tracks");
  ensemble->add_option("--post", post_flag)->check(CLI::IsMember({"on", "off"}));
  add_common(ensemble);

  // post
  auto* post = app.add_subcommand("post", "Hashtag stripping and edge trimming");
  post->add_option("--input", input)->required();
  post->add_option("--output", output)->required();
  post->add_option("--post", post_flag = "on")->check(CLI::IsMember({"on", "off"}));
  add_common(post);

  // eval
  std::string gold, pred, json_out, train_lexicon, name = "model";
  auto* eval = app.add_subcommand("eval", "Strict and overlapping P/R/F1");
  eval->add_option("--gold", gold)->required();
  eval->add_option("--pred", pred)->required();
  eval->add_option("--train-lexicon", train_lexicon, "Training set for error categories");
  eval->add_option("--json", json_out, "Write the machine report here");
  eval->add_option("--name", name, "Row label in the table");

  // optimize
  std::string method = "tpe", log_path;
  std::size_t budget = 200;
  std::vector<std::size_t> resolution;
  bool resume = false;
  double threshold_low = 0.05, threshold_high = 0.95;
  auto* optimize = app.add_subcommand("optimize", "Grid/TPE search over ensemble weights and threshold");
  optimize->add_option("--gold", gold)->required();
  optimize->add_option("--predictions", predictions)->required();
  optimize->add_option("--method", method)->check(CLI::IsMember({"grid", "tpe"}));
  optimize->add_option("--budget", budget);
  optimize->add_option("--resolution", resolution, "Grid points per dimension");
  optimize->add_option("--log", log_path, "Trial log (JSONL)");
  optimize->add_flag("--resume", resume, "Warm-start from an existing trial log");
  optimize->add_option("--threshold-low", threshold_low);
  optimize->add_option("--threshold-high", threshold_high);
  optimize->add_option("--post", post_flag)->check(CLI::IsMember({"on", "off"}));
  optimize->add_option("--seed", seed);

  // pipeline
  std::string config_path, mode_override, post_override;
  std::optional<std::uint64_t> seed_override;
  auto* pipeline = app.add_subcommand("pipeline", "End-to-end PL1/PL2 run from a config file");
  pipeline->add_option("--config", config_path)->required();
  pipeline->add_option("--mode", mode_override)->check(CLI::IsMember({"pl1", "pl2"}));
  pipeline->add_option("--seed", seed_override);
  pipeline->add_option("--post", post_override)->check(CLI::IsMember({"on", "off"}));
  pipeline->add_option("--format", format)->check(CLI::IsMember({"jsonl", "tsv"}));
  pipeline->add_option("--out-dir", out_dir);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*split) {
      const Dataset corpus = read_dataset(input);
      auto [first, second] = stratified_split(corpus, ratio, seed);
      write_dataset(train_out, first, OutputFormat(format, train_out));
      write_dataset(valid_out, second, OutputFormat(format, valid_out));
      std::cout << "first part: " << first.size() << " tweets (" << first.positive_count()
                << " positive); second part: " << second.size() << " tweets ("
                << second.positive_count() << " positive)\n";
    } else if (*augment) {
      const Dataset source = read_dataset(input);
      AugmentConfig cfg;
      cfg.target_positive_ratio = target_ratio;
      cfg.concat_pairs = concat_pairs;
      cfg.replacement_per_positive = replacements;
      cfg.separator = separator;
      cfg.seed = seed;
      if (!paraphrase_command.empty()) cfg.paraphrase_command = paraphrase_command;
      AugmentReport report;
      Dataset out;
      if (mode == "pl1") {
        out = augment_pl1(source, cfg, &report);
      } else {
        Lexicon lexicon = Lexicon::from_dataset(source);
        if (!drug_list.empty()) lexicon.merge(Lexicon::read_drug_list(drug_list));
        out = augment_pl2(source, lexicon, cfg, &report);
      }
      write_dataset(output, out, OutputFormat(format, output));
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << "augmented: " << source.size() << " -> " << out.size() << " tweets ("
                << out.positive_count() << " positive); concatenated " << report.concatenated
                << ", paraphrased " << report.paraphrased << " (dropped "
                << report.paraphrase_dropped << "), replaced " << report.replaced
                << ", upsampled " << report.upsampled << "\n";
    } else if (*subsets) {
      const Dataset source = read_dataset(input);
      const Format f = OutputFormat(format, input);
      const std::string ext = f == Format::kTsv ? ".tsv" : ".jsonl";
      SubsetPlan plan{k, fraction, seed};
      if (validation.empty()) {
        const auto parts = bootstrap_subsets(source, plan);
        for (std::size_t i = 0; i < parts.size(); ++i) {
          write_dataset(fs::path(out_dir) / ("train_" + std::to_string(i) + ext), parts[i], f);
        }
      } else {
        const auto pairs = bootstrap_pairs(source, read_dataset(validation), plan);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
          write_dataset(fs::path(out_dir) / ("train_" + std::to_string(i) + ext), pairs[i].train, f);
          write_dataset(fs::path(out_dir) / ("valid_" + std::to_string(i) + ext),
                        pairs[i].validation, f);
        }
      }
      std::cout << "wrote " << plan.k << " subsets of " << subset_size(source.size(), fraction)
                << " tweets to " << out_dir << "\n";
    } else if (*tag) {
      const Dataset source = read_dataset(input);
      TrackSet tracks;
      if (!ingest.empty()) {
        if (ingest.size() != 1) {
          std::vector<TrackSet> sets;
          for (const auto& f : ingest) {
            sets.push_back(read_predictions(f));
            CheckCoverage(sets.back(), source, f);
          }
          tracks = average(sets);
        } else {
          tracks = read_predictions(ingest.front());
          CheckCoverage(tracks, source, ingest.front());
        }
      } else {
        GazetteerConfig cfg;
        for (const auto& f : lexicon_from) cfg.lexicon.merge(Lexicon::from_dataset(read_dataset(f)));
        if (!drug_list.empty()) cfg.lexicon.merge(Lexicon::read_drug_list(drug_list));
        cfg.exact_prob = exact_prob;
        cfg.fuzzy_prob = fuzzy_prob;
        cfg.max_edit_distance = max_edit;
        cfg.attach_hashtag = OnOff(attach_hashtag);
        tracks = tag_dataset(source, cfg);
      }
      write_predictions(output, tracks);
      std::cout << "wrote " << tracks.size() << " tracks to " << output << "\n";
    } else if (*ensemble) {
      const Dataset texts = read_dataset(dataset);
      std::vector<TrackSet> models;
      for (const auto& f : predictions) {
        models.push_back(read_predictions(f));
        CheckCoverage(models.back(), texts, f);
      }
      if (weights.empty()) weights.assign(models.size(), 1.0);
      Dataset spans = predict_spans(texts, models, EnsembleParams{weights, threshold});
      if (OnOff(post_flag)) spans = postprocess(spans);
      write_dataset(output, spans, OutputFormat(format, output));
      if (!average_out.empty()) write_predictions(average_out, average(models));
      std::cout << "predicted " << spans.span_count() << " spans over " << spans.size()
                << " tweets\n";
    } else if (*post) {
      Dataset spans = read_dataset(input);
      if (OnOff(post_flag)) spans = postprocess(spans);
      write_dataset(output, spans, OutputFormat(format, output));
    } else if (*eval) {
      const Dataset g = read_dataset(gold);
      const Dataset p = read_dataset(pred);
      const MetricsReport report = evaluate(g, p);
      std::optional<ErrorTally> errors;
      if (!train_lexicon.empty()) {
        errors = categorize_errors(g, p, Lexicon::from_dataset(read_dataset(train_lexicon)));
      }
      std::cout << format_table({{name, report}});
      if (errors) {
        std::cout << "errors: false_positive " << errors->false_positive << ", fn_not_seen "
                  << errors->fn_not_seen << ", fn_complex_phrase " << errors->fn_complex
                  << ", fn_other " << errors->fn_other << ", boundary " << errors->boundary
                  << "\n";
      }
      if (!json_out.empty()) WriteFile(json_out, report_json(report, errors ? &*errors : nullptr));
    } else if (*optimize) {
      const Dataset g = read_dataset(gold);
      std::vector<TrackSet> models;
      for (const auto& f : predictions) {
        models.push_back(read_predictions(f));
        CheckCoverage(models.back(), g, f);
      }
      const auto space = hpo::SearchSpace::ensemble(models.size(), threshold_low, threshold_high);
      hpo::OptimizeOptions options;
      options.method = hpo::parse_method(method);
      options.budget = budget;
      options.seed = seed;
      options.resolution = resolution;
      if (resume && !log_path.empty() && fs::exists(log_path)) {
        options.warm_start = hpo::read_trial_log(log_path);
      }
      std::ofstream log;
      if (!log_path.empty()) {
        if (fs::path(log_path).has_parent_path()) {
          fs::create_directories(fs::path(log_path).parent_path());
        }
        log.open(log_path, std::ios::binary | (resume ? std::ios::app : std::ios::trunc));
        if (!log) throw Error("cannot write file", "", 0, log_path);
        options.on_trial = [&](const hpo::TrialRecord& t) { log << hpo::serialize_trial(t); };
      }
      const auto result = hpo::optimize(
          space, hpo::ensemble_objective(g, std::move(models), OnOff(post_flag)), options);
      nlohmann::ordered_json best;
      best["trial"] = result.best.index;
      best["objective"] = result.best.objective;
      best["weights"] = std::vector<double>(result.best.params.begin(), result.best.params.end() - 1);
      best["threshold"] = result.best.params.back();
      best["trials"] = result.history.size();
      std::cout << best.dump(2) << "\n";
    } else if (*pipeline) {
      PipelineConfig cfg = read_pipeline_config(config_path);
      if (!mode_override.empty()) cfg.mode = parse_mode(mode_override);
      if (seed_override) cfg.seed = *seed_override;
      if (!post_override.empty()) cfg.post = OnOff(post_override);
      if (!format.empty()) cfg.format = parse_format(format);
      if (!out_dir.empty()) cfg.out_dir = out_dir;
      const PipelineSummary summary = run_pipeline(cfg);
      const std::string label = cfg.mode == PipelineMode::kPl1 ? "pl1" : "pl2";
      std::cout << format_table({{label, summary.raw}, {label + "-post", summary.post}});
      std::cout << "artifacts written to " << cfg.out_dir.string() << " ("
                << summary.artifacts.size() << " files)\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
