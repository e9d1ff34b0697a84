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

#include "medext/prediction.h"

#include <fstream>

#include "json.hpp"
#include "medext/error.h"

namespace medext {
namespace {

using json = nlohmann::json;

}  // namespace

void CharProbTrack::validate() const {
  std::size_t previous_end = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const ProbRun& r = runs[i];
    const std::string where = "track '" + tweet_id + "' run [" +
                              std::to_string(r.start) + "," +
                              std::to_string(r.end) + ")";
    if (r.start >= r.end) throw Error("empty run", where);
    if (r.end > length) {
      throw Error("run out of bounds",
                  where + " exceeds length " + std::to_string(length));
    }
    if (i > 0 && r.start < previous_end) {
      throw Error("overlapping runs", where + " overlaps the previous run");
    }
    if (!(r.prob > 0.0 && r.prob <= 1.0)) {
      throw Error("invalid probability",
                  where + " has probability " + std::to_string(r.prob) +
                      " (must be in (0,1]; zero runs are elided)");
    }
    previous_end = r.end;
  }
}

std::vector<double> CharProbTrack::dense() const {
  std::vector<double> probs(length, 0.0);
  for (const ProbRun& r : runs) {
    for (std::size_t c = r.start; c < r.end && c < length; ++c) probs[c] = r.prob;
  }
  return probs;
}

CharProbTrack CharProbTrack::from_dense(std::string tweet_id,
                                        std::span<const double> probs) {
  CharProbTrack track{std::move(tweet_id), probs.size(), {}};
  for (std::size_t c = 0; c < probs.size(); ++c) {
    if (probs[c] <= 0.0) continue;
    if (!track.runs.empty() && track.runs.back().end == c &&
        track.runs.back().prob == probs[c]) {
      track.runs.back().end = c + 1;
    } else {
      track.runs.push_back(ProbRun{c, c + 1, probs[c]});
    }
  }
  return track;
}

TrackSet::TrackSet(std::vector<CharProbTrack> tracks) {
  for (CharProbTrack& t : tracks) add(std::move(t));
}

const CharProbTrack* TrackSet::find(std::string_view tweet_id) const {
  auto it = index_.find(std::string(tweet_id));
  return it == index_.end() ? nullptr : &tracks_[it->second];
}

void TrackSet::add(CharProbTrack track) {
  if (!index_.emplace(track.tweet_id, tracks_.size()).second) {
    throw Error("duplicate tweet id", "track for '" + track.tweet_id + "' repeated");
  }
  tracks_.push_back(std::move(track));
}

TrackSet parse_predictions(std::istream& input) {
  TrackSet set;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(input, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    try {
      json record;
      try {
        record = json::parse(line);
      } catch (const json::parse_error& e) {
        throw Error("malformed line", e.what());
      }
      if (!record.is_object() || !record.contains("tweet_id") ||
          !record["tweet_id"].is_string() || !record.contains("length") ||
          !record["length"].is_number_unsigned() || !record.contains("runs") ||
          !record["runs"].is_array()) {
        throw Error("malformed line",
                    "expected {\"tweet_id\": string, \"length\": int, \"runs\": [...]}");
      }
      CharProbTrack track;
      track.tweet_id = record["tweet_id"].get<std::string>();
      track.length = record["length"].get<std::size_t>();
      for (const json& run : record["runs"]) {
        if (!run.is_array() || run.size() != 3 || !run[0].is_number_unsigned() ||
            !run[1].is_number_unsigned() || !run[2].is_number()) {
          throw Error("malformed line", "run must be [start, end, prob]");
        }
        track.runs.push_back(ProbRun{run[0].get<std::size_t>(),
                                     run[1].get<std::size_t>(),
                                     run[2].get<double>()});
      }
      track.validate();
      set.add(std::move(track));
    } catch (const Error& e) {
      throw Error(e.contract(), e.detail(), line_no);
    }
  }
  return set;
}

std::string serialize_predictions(const TrackSet& tracks) {
  std::string out;
  for (const CharProbTrack& t : tracks.tracks()) {
    nlohmann::ordered_json record;
    record["tweet_id"] = t.tweet_id;
    record["length"] = t.length;
    record["runs"] = nlohmann::ordered_json::array();
    for (const ProbRun& r : t.runs) {
      record["runs"].push_back(nlohmann::ordered_json::array({r.start, r.end, r.prob}));
    }
    out += record.dump();
    out += '\n';
  }
  return out;
}

TrackSet read_predictions(const std::filesystem::path& path) {
  std::ifstream input(path, std::ios::binary);
  if (!input) throw Error("cannot open file", "", 0, path.string());
  try {
    return parse_predictions(input);
  } catch (const Error& e) {
    throw e.with_file(path.string());
  }
}

void write_predictions(const std::filesystem::path& path, const TrackSet& tracks) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream output(path, std::ios::binary | std::ios::trunc);
  if (!output) throw Error("cannot write file", "", 0, path.string());
  output << serialize_predictions(tracks);
}

}  // namespace medext
