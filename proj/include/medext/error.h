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

#ifndef MEDEXT_ERROR_H_
#define MEDEXT_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace medext {

// Contract violation raised anywhere in the toolkit. Carries the violated
// contract name, a detail message, and optionally the input file and the
// 1-based line where the violation was found.
class Error : public std::runtime_error {
 public:
  Error(std::string contract, std::string detail, std::size_t line = 0,
        std::string file = {});

  const std::string& contract() const { return contract_; }
  const std::string& detail() const { return detail_; }
  std::size_t line() const { return line_; }
  const std::string& file() const { return file_; }

  // Same error attributed to `file`; keeps an already-set file name.
  Error with_file(const std::string& file) const;

 private:
  std::string contract_;
  std::string detail_;
  std::size_t line_;
  std::string file_;
};

}  // namespace medext

#endif  // MEDEXT_ERROR_H_
