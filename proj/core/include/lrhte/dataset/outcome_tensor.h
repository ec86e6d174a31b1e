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

#ifndef LRHTE_DATASET_OUTCOME_TENSOR_H_
#define LRHTE_DATASET_OUTCOME_TENSOR_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace lrhte::dataset {

// Potential outcomes keyed by (unit, experiment, metric). Each cell stores one
// outcome per arm, arm 0 being control, and the per-arm effect
// ite[t] = outcome[t] - outcome[0] (so ite[0] == 0). The same container holds
// ground truth and model predictions.
class PotentialOutcomeTensor {
 public:
  struct Cell {
    std::int64_t unit_id;
    int experiment;
    int metric;
    std::span<const double> outcome;
    std::span<const double> ite;
  };

  // Appends a cell; ite is derived from the outcomes. Duplicate keys are
  // rejected with kInconsistent.
  void Add(std::int64_t unit_id, int experiment, int metric,
           std::span<const double> arm_outcomes);
  // Appends a cell with an explicit ite column, which must equal the outcome
  // differences exactly (kInconsistent otherwise). Used by the loader.
  void AddChecked(std::int64_t unit_id, int experiment, int metric,
                  std::span<const double> arm_outcomes,
                  std::span<const double> ite);

  std::size_t num_cells() const { return unit_.size(); }
  Cell cell(std::size_t i) const;
  std::optional<std::size_t> Find(std::int64_t unit_id, int experiment,
                                  int metric) const;

  bool operator==(const PotentialOutcomeTensor& other) const;

 private:
  static std::uint64_t Key(std::int64_t unit_id, int experiment, int metric);

  std::vector<std::int64_t> unit_;
  std::vector<int> experiment_;
  std::vector<int> metric_;
  std::vector<std::size_t> offset_;  // num_cells + 1 entries once non-empty
  std::vector<double> outcome_;
  std::vector<double> ite_;
  std::unordered_map<std::uint64_t, std::size_t> index_;
};

}  // namespace lrhte::dataset

#endif  // LRHTE_DATASET_OUTCOME_TENSOR_H_
