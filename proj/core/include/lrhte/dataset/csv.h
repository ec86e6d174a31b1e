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

#ifndef LRHTE_DATASET_CSV_H_
#define LRHTE_DATASET_CSV_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "lrhte/numerics/matrix.h"

namespace lrhte::dataset {

// 17 significant digits: enough for a lossless double round trip.
std::string FormatReal(double v);

// Minimal reader for the comma-separated numeric files used throughout:
// no quoting, no embedded commas. Errors name the file and line number.
class CsvReader {
 public:
  explicit CsvReader(const std::filesystem::path& path);

  const std::vector<std::string>& header() const { return header_; }
  // Throws kSchema unless the header matches `expected` exactly.
  void ExpectHeader(const std::vector<std::string>& expected) const;

  // Reads the next data row into fields; false at end of file.
  bool Next();
  const std::vector<std::string_view>& fields() const { return fields_; }
  // 1-based line number of the current row in the file (header is line 1).
  std::size_t line() const { return line_; }

  double Real(std::size_t i) const;
  std::int64_t Integer(std::size_t i) const;

  // "path line N", for error messages.
  std::string Where() const;

 private:
  void Split();

  std::filesystem::path path_;
  std::ifstream in_;
  std::string buffer_;
  std::vector<std::string> header_;
  std::vector<std::string_view> fields_;
  std::size_t line_ = 1;
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path,
            const std::vector<std::string>& header);
  ~CsvWriter();

  CsvWriter& Int(std::int64_t v);
  CsvWriter& Real(double v);
  CsvWriter& Text(std::string_view v);
  void EndRow();
  void Close();

 private:
  void Sep();

  std::filesystem::path path_;
  std::ofstream out_;
  std::string row_;
  bool first_ = true;
};

// Headered all-numeric CSV into a matrix (one row per data line).
numerics::Matrix ReadNumericCsv(const std::filesystem::path& path,
                                std::vector<std::string>* header = nullptr);
void WriteNumericCsv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const numerics::Matrix& m);

}  // namespace lrhte::dataset

#endif  // LRHTE_DATASET_CSV_H_
