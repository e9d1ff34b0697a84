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

#ifndef MEDEXT_TESTS_SUPPORT_EXPECT_ERROR_H_
#define MEDEXT_TESTS_SUPPORT_EXPECT_ERROR_H_

#include <gtest/gtest.h>

#include "medext/error.h"

// Asserts that `stmt` throws medext::Error naming `contract_name`.
#define EXPECT_CONTRACT(stmt, contract_name)                              \
  do {                                                                    \
    try {                                                                 \
      stmt;                                                               \
      ADD_FAILURE() << "expected medext::Error(" << (contract_name) << ")"; \
    } catch (const ::medext::Error& e) {                                  \
      EXPECT_EQ(e.contract(), (contract_name)) << e.what();               \
    }                                                                     \
  } while (0)

#endif  // MEDEXT_TESTS_SUPPORT_EXPECT_ERROR_H_
