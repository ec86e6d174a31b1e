/*
 * Copyright 2026 The lrhte Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LRHTE_TESTS_TEST_UTIL_H_
#define LRHTE_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "lrhte/error.h"
#include "lrhte/numerics/matrix.h"
#include "lrhte/numerics/random.h"

namespace lrhte::testing {

inline numerics::Matrix RandomMatrix(std::size_t rows, std::size_t cols,
                                     std::uint64_t seed, double sd = 1.0) {
  numerics::RngStream s(seed);
  return numerics::NormalMatrix(s, rows, cols, sd);
}

inline Eigen::MatrixXd ToEigen(const numerics::Matrix& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) e(r, c) = m(r, c);
  }
  return e;
}

// Fresh, empty scratch directory under the system temp dir.
inline std::filesystem::path ScratchDir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("lrhte_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace lrhte::testing

#define EXPECT_LRHTE_ERROR(statement, expected_code)                     \
  do {                                                                   \
    try {                                                                \
      statement;                                                         \
      ADD_FAILURE() << "expected " << ::lrhte::ErrorCodeName(expected_code); \
    } catch (const ::lrhte::Error& e) {                                  \
      EXPECT_EQ(e.code(), expected_code) << e.what();                    \
    }                                                                    \
  } while (0)

#endif  // LRHTE_TESTS_TEST_UTIL_H_
