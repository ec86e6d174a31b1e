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

#include "lrhte/dataset/csv.h"

#include <charconv>
#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "lrhte/error.h"

namespace lrhte::dataset {

std::string FormatReal(double v) { return fmt::format("{:.17g}", v); }

CsvReader::CsvReader(const std::filesystem::path& path)
    : path_(path), in_(path) {
  if (!in_) {
    throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  }
  if (!std::getline(in_, buffer_)) {
    throw Error(ErrorCode::kSchema, path.string() + " is empty (no header)");
  }
  if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
  Split();
  for (auto f : fields_) header_.emplace_back(f);
}

void CsvReader::ExpectHeader(const std::vector<std::string>& expected) const {
  if (header_ != expected) {
    std::string want;
    for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
    throw Error(ErrorCode::kSchema,
                path_.string() + " line 1: header must be '" + want + "'");
  }
}

bool CsvReader::Next() {
  while (std::getline(in_, buffer_)) {
    ++line_;
    if (!buffer_.empty() && buffer_.back() == '\r') buffer_.pop_back();
    if (buffer_.empty()) continue;
    Split();
    if (fields_.size() != header_.size()) {
      throw Error(ErrorCode::kSchema,
                  Where() + ": expected " + std::to_string(header_.size()) +
                      " fields, found " + std::to_string(fields_.size()));
    }
    return true;
  }
  return false;
}

std::string CsvReader::Where() const {
  return path_.filename().string() + " line " + std::to_string(line_);
}

void CsvReader::Split() {
  fields_.clear();
  std::string_view rest(buffer_);
  while (true) {
    const auto comma = rest.find(',');
    fields_.push_back(rest.substr(0, comma));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
}

double CsvReader::Real(std::size_t i) const {
  const auto f = fields_.at(i);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v)) {
    throw Error(ErrorCode::kSchema, Where() + ": column '" + header_.at(i) +
                                        "' is not a finite real: '" +
                                        std::string(f) + "'");
  }
  return v;
}

std::int64_t CsvReader::Integer(std::size_t i) const {
  const auto f = fields_.at(i);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
  if (ec != std::errc() || ptr != f.data() + f.size()) {
    throw Error(ErrorCode::kSchema, Where() + ": column '" + header_.at(i) +
                                        "' is not an integer: '" +
                                        std::string(f) + "'");
  }
  return v;
}

CsvWriter::CsvWriter(const std::filesystem::path& path,
                     const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  for (const auto& h : header) Text(h);
  EndRow();
}

CsvWriter::~CsvWriter() {
  if (out_.is_open()) out_.close();
}

void CsvWriter::Sep() {
  if (!first_) row_.push_back(',');
  first_ = false;
}

CsvWriter& CsvWriter::Int(std::int64_t v) {
  Sep();
  row_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::Real(double v) {
  Sep();
  row_ += FormatReal(v);
  return *this;
}

CsvWriter& CsvWriter::Text(std::string_view v) {
  Sep();
  row_ += v;
  return *this;
}

void CsvWriter::EndRow() {
  row_.push_back('\n');
  out_.write(row_.data(), static_cast<std::streamsize>(row_.size()));
  row_.clear();
  first_ = true;
}

void CsvWriter::Close() {
  out_.close();
  if (!out_) throw Error(ErrorCode::kIo, "failed writing " + path_.string());
}

numerics::Matrix ReadNumericCsv(const std::filesystem::path& path,
                                std::vector<std::string>* header) {
  CsvReader reader(path);
  const std::size_t cols = reader.header().size();
  std::vector<double> values;
  std::size_t rows = 0;
  while (reader.Next()) {
    for (std::size_t c = 0; c < cols; ++c) values.push_back(reader.Real(c));
    ++rows;
  }
  if (header != nullptr) *header = reader.header();
  return numerics::Matrix(rows, cols, std::move(values));
}

void WriteNumericCsv(const std::filesystem::path& path,
                     const std::vector<std::string>& header,
                     const numerics::Matrix& m) {
  if (header.size() != m.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "header has " + std::to_string(header.size()) +
                    " names for " + std::to_string(m.cols()) + " columns");
  }
  CsvWriter w(path, header);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (double v : m.row(r)) w.Real(v);
    w.EndRow();
  }
  w.Close();
}

}  // namespace lrhte::dataset
