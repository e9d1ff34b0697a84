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

#include "medext/error.h"

#include <utility>

namespace medext {
namespace {

std::string Render(const std::string& contract, const std::string& detail,
                   std::size_t line, const std::string& file) {
  std::string out;
  if (!file.empty()) out += file + ":";
  if (line > 0) out += std::to_string(line) + ":";
  if (!out.empty()) out += " ";
  out += contract;
  if (!detail.empty()) out += ": " + detail;
  return out;
}

}  // namespace

Error::Error(std::string contract, std::string detail, std::size_t line,
             std::string file)
    : std::runtime_error(Render(contract, detail, line, file)),
      contract_(std::move(contract)),
      detail_(std::move(detail)),
      line_(line),
      file_(std::move(file)) {}

Error Error::with_file(const std::string& file) const {
  if (!file_.empty()) return *this;
  return Error(contract_, detail_, line_, file);
}

}  // namespace medext
