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

#ifndef LRHTE_RANK_RANK_H_
#define LRHTE_RANK_RANK_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "lrhte/numerics/completion.h"
#include "lrhte/numerics/matrix.h"
#include "lrhte/numerics/random.h"

namespace lrhte::rank {

// Top-k singular values of m (all of them when k is 0), descending.
std::vector<double> SpectrumReport(const numerics::Matrix& m,
                                   std::size_t k = 0);

struct BcvOptions {
  std::size_t folds = 5;
  // Largest candidate rank; 0 means min(20, min(rows, cols) - 1).
  std::size_t max_rank = 0;
  // Re-partitions allowed when a fold would leave a row or column with no
  // retained entry.
  std::size_t max_retries = 50;
  // Inner completion settings; `rank` is overwritten per candidate.
  numerics::AlsOptions als{1, 1e-6, 200, 1e-10};
};

struct RankReport {
  int metric = 0;
  std::vector<double> singular_values;
  numerics::Matrix fold_error;  // folds x max_rank, held-out MSE
  std::vector<double> mean_error;  // per candidate rank 1..max_rank
  std::size_t selected_rank = 0;   // argmin of mean_error, ties to smallest
};

std::size_t DefaultMaxRank(const numerics::Matrix& m);

// Wold-style bi-cross-validation: entries are dealt into `folds` scattered
// holdout sets by a random permutation; for every fold and candidate rank the
// retained entries are completed by ALS and scored on the held-out ones.
RankReport BcvEffectiveRank(const numerics::Matrix& m,
                            const BcvOptions& options,
                            numerics::RngStream& stream);

// Same procedure with a caller-supplied fold per entry (row-major) and a
// stream used only for the ALS initializations.
RankReport BcvEffectiveRankWithFolds(const numerics::Matrix& m,
                                     std::span<const std::size_t> fold_of_entry,
                                     const BcvOptions& options,
                                     const numerics::RngStream& als_stream);

// metric_id,rank,mean_error,fold_0..fold_{F-1},selected
void WriteRankCsv(const std::filesystem::path& path,
                  std::span<const RankReport> reports);
// metric_id,index,singular_value
void WriteSpectrumCsv(const std::filesystem::path& path,
                      std::span<const RankReport> reports);

}  // namespace lrhte::rank

#endif  // LRHTE_RANK_RANK_H_
