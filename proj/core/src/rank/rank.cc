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

#include "lrhte/rank/rank.h"

#include <algorithm>
#include <numeric>
#include <string>

#include "lrhte/dataset/csv.h"
#include "lrhte/error.h"
#include "lrhte/numerics/svd.h"

namespace lrhte::rank {
namespace {

using numerics::Mask;
using numerics::Matrix;

constexpr std::uint64_t kAlsTag = 0x414c53ULL;

std::size_t ResolveMaxRank(const Matrix& m, const BcvOptions& options) {
  if (m.rows() < 2 || m.cols() < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "bi-cross-validation needs at least a 2 x 2 matrix");
  }
  if (options.folds < 2) {
    throw Error(ErrorCode::kInvalidArgument, "BCV needs at least 2 folds");
  }
  const std::size_t limit = std::min(m.rows(), m.cols()) - 1;
  const std::size_t max_rank =
      options.max_rank == 0 ? DefaultMaxRank(m) : options.max_rank;
  if (max_rank > limit) {
    throw Error(ErrorCode::kOutOfRange,
                "max_rank " + std::to_string(max_rank) + " exceeds " +
                    std::to_string(limit));
  }
  return max_rank;
}

// True when every row and column keeps a retained entry under every fold.
bool FoldsValid(const Matrix& m, std::span<const std::size_t> fold_of_entry,
                std::size_t folds) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> row_held(rows * folds, 0);
  std::vector<std::size_t> col_held(cols * folds, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t f = fold_of_entry[r * cols + c];
      ++row_held[r * folds + f];
      ++col_held[c * folds + f];
    }
  }
  for (std::size_t i = 0; i < rows * folds; ++i) {
    if (row_held[i] == cols) return false;
  }
  for (std::size_t i = 0; i < cols * folds; ++i) {
    if (col_held[i] == rows) return false;
  }
  return true;
}

}  // namespace

std::vector<double> SpectrumReport(const Matrix& m, std::size_t k) {
  return numerics::SingularValues(m, k == 0 ? std::min(m.rows(), m.cols()) : k);
}

std::size_t DefaultMaxRank(const Matrix& m) {
  const std::size_t min_dim = std::min(m.rows(), m.cols());
  return std::min<std::size_t>(20, min_dim == 0 ? 0 : min_dim - 1);
}

RankReport BcvEffectiveRank(const Matrix& m, const BcvOptions& options,
                            numerics::RngStream& stream) {
  ResolveMaxRank(m, options);
  std::vector<std::size_t> order(m.size());
  std::vector<std::size_t> fold_of_entry(m.size());
  for (std::size_t attempt = 0; attempt <= options.max_retries; ++attempt) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    stream.Shuffle(std::span<std::size_t>(order));
    for (std::size_t i = 0; i < order.size(); ++i) {
      fold_of_entry[order[i]] = i % options.folds;
    }
    if (FoldsValid(m, fold_of_entry, options.folds)) {
      return BcvEffectiveRankWithFolds(m, fold_of_entry, options,
                                       stream.Derive(kAlsTag));
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "could not draw BCV folds that keep an entry in every row and "
              "column after " +
                  std::to_string(options.max_retries + 1) + " attempts");
}

RankReport BcvEffectiveRankWithFolds(const Matrix& m,
                                     std::span<const std::size_t> fold_of_entry,
                                     const BcvOptions& options,
                                     const numerics::RngStream& als_stream) {
  const std::size_t max_rank = ResolveMaxRank(m, options);
  if (fold_of_entry.size() != m.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "one fold index is needed per matrix entry");
  }
  for (std::size_t f : fold_of_entry) {
    if (f >= options.folds) {
      throw Error(ErrorCode::kOutOfRange, "fold index out of range");
    }
  }
  if (!FoldsValid(m, fold_of_entry, options.folds)) {
    throw Error(ErrorCode::kInvalidArgument,
                "a fold holds out an entire row or column");
  }

  RankReport report;
  report.singular_values = SpectrumReport(m);
  report.fold_error = Matrix(options.folds, max_rank);
  report.mean_error.assign(max_rank, 0.0);
  const std::size_t cols = m.cols();
  for (std::size_t f = 0; f < options.folds; ++f) {
    Mask mask(m.rows(), cols);
    std::size_t held = 0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (fold_of_entry[i] == f) {
        mask.Set(i / cols, i % cols, false);
        ++held;
      }
    }
    if (held == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "fold " + std::to_string(f) + " holds out no entries");
    }
    for (std::size_t r = 1; r <= max_rank; ++r) {
      numerics::AlsOptions als = options.als;
      als.rank = r;
      numerics::RngStream s = als_stream.Derive(f * 4096 + r);
      const auto fit = numerics::AlsComplete(m, mask, als, s);
      double sse = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (fold_of_entry[i] != f) continue;
        const double d = fit.completed.values()[i] - m.values()[i];
        sse += d * d;
      }
      report.fold_error(f, r - 1) = sse / static_cast<double>(held);
    }
  }
  for (std::size_t r = 0; r < max_rank; ++r) {
    double sum = 0.0;
    for (std::size_t f = 0; f < options.folds; ++f) sum += report.fold_error(f, r);
    report.mean_error[r] = sum / static_cast<double>(options.folds);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < max_rank; ++r) {
    if (report.mean_error[r] < report.mean_error[best]) best = r;
  }
  report.selected_rank = best + 1;
  return report;
}

void WriteRankCsv(const std::filesystem::path& path,
                  std::span<const RankReport> reports) {
  std::vector<std::string> header{"metric_id", "rank", "mean_error"};
  const std::size_t folds =
      reports.empty() ? 0 : reports.front().fold_error.rows();
  for (std::size_t f = 0; f < folds; ++f) {
    header.push_back("fold_" + std::to_string(f));
  }
  header.push_back("selected");
  dataset::CsvWriter out(path, header);
  for (const auto& rep : reports) {
    for (std::size_t r = 0; r < rep.mean_error.size(); ++r) {
      out.Int(rep.metric).Int(static_cast<std::int64_t>(r + 1));
      out.Real(rep.mean_error[r]);
      for (std::size_t f = 0; f < rep.fold_error.rows(); ++f) {
        out.Real(rep.fold_error(f, r));
      }
      out.Int(rep.selected_rank == r + 1 ? 1 : 0);
      out.EndRow();
    }
  }
  out.Close();
}

void WriteSpectrumCsv(const std::filesystem::path& path,
                      std::span<const RankReport> reports) {
  dataset::CsvWriter out(path, {"metric_id", "index", "singular_value"});
  for (const auto& rep : reports) {
    for (std::size_t i = 0; i < rep.singular_values.size(); ++i) {
      out.Int(rep.metric)
          .Int(static_cast<std::int64_t>(i))
          .Real(rep.singular_values[i]);
      out.EndRow();
    }
  }
  out.Close();
}

}  // namespace lrhte::rank
