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

#ifndef LRHTE_DATASET_DATASET_H_
#define LRHTE_DATASET_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrhte/dataset/outcome_tensor.h"
#include "lrhte/numerics/matrix.h"
#include "lrhte/numerics/random.h"

namespace lrhte::dataset {

inline constexpr const char* kFormatVersion = "hte-v1";

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kUnitsFile = "units.csv";
inline constexpr const char* kObservationsFile = "observations.csv";
inline constexpr const char* kSplitsFile = "splits.csv";
inline constexpr const char* kTrueOutcomesFile = "true_outcomes.csv";

// Unit features, one row per unit in `ids` order.
struct UnitTable {
  std::vector<std::int64_t> ids;
  numerics::Matrix features;

  std::size_t num_units() const { return ids.size(); }
  std::size_t num_features() const { return features.cols(); }

  // Rebuilds the id -> row map; throws kInconsistent on duplicate ids.
  void BuildIndex();
  std::optional<std::size_t> RowOf(std::int64_t id) const;

  bool operator==(const UnitTable& other) const {
    return ids == other.ids && features == other.features;
  }

 private:
  std::unordered_map<std::int64_t, std::size_t> row_of_;
};

struct Observation {
  std::int64_t unit_id = 0;
  int experiment = 0;
  int arm = 0;  // 0 is control
  int metric = 0;
  double value = 0.0;

  bool operator==(const Observation&) const = default;
};

enum class Split { kTrain, kValidation, kTest };

std::string SplitName(Split split);
Split ParseSplit(const std::string& name);

struct Splits {
  std::vector<std::int64_t> train;
  std::vector<std::int64_t> validation;
  std::vector<std::int64_t> test;

  const std::vector<std::int64_t>& Get(Split split) const;
  bool operator==(const Splits&) const = default;
};

struct SplitFractions {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

struct Manifest {
  std::string format_version = kFormatVersion;
  std::size_t num_units = 0;
  std::size_t num_features = 0;
  std::size_t num_experiments = 0;
  std::size_t num_metrics = 0;
  std::vector<int> arms_per_experiment;  // includes control
  bool has_true_outcomes = false;
  nlohmann::json generator = nlohmann::json::object();

  bool operator==(const Manifest&) const = default;
};

struct Dataset {
  Manifest manifest;
  UnitTable units;
  std::vector<Observation> observations;
  Splits splits;
  std::optional<PotentialOutcomeTensor> truth;

  // Checks every cross-file invariant; throws the first violation found.
  void Validate() const;
  // Unit-table rows of the units in `split`, in split order.
  std::vector<std::size_t> RowsIn(Split split) const;
  // Indices into `observations` whose unit belongs to `split`.
  std::vector<std::size_t> ObservationsIn(Split split) const;
};

// A (unit, experiment) pair to predict all metrics and arms for.
struct PredictionTarget {
  std::size_t unit_row = 0;
  std::int64_t unit_id = 0;
  int experiment = 0;
};

// Units of `split` (every unit when absent) paired with either every
// experiment or only the experiments each unit appears in through its
// observations or true outcomes.
std::vector<PredictionTarget> PredictionTargets(const Dataset& data,
                                                std::optional<Split> split,
                                                bool all_experiments);

Dataset LoadDataset(const std::filesystem::path& directory);
void SaveDataset(const Dataset& data, const std::filesystem::path& directory);

// Predicted or true outcome tensors in the true_outcomes.csv layout:
// unit_id,experiment_id,metric_id,arm,outcome,ite
void WriteOutcomeTensorCsv(const std::filesystem::path& path,
                           const PotentialOutcomeTensor& tensor);
PotentialOutcomeTensor ReadOutcomeTensorCsv(const std::filesystem::path& path);

// Shuffles `unit_ids` with `stream` and cuts it into train / validation /
// test blocks of round(fraction * n) units (trimmed so they fit). Each block
// is returned sorted.
Splits SplitUnits(std::span<const std::int64_t> unit_ids,
                  const SplitFractions& fractions, numerics::RngStream& stream);

// units x experiments matrix of ite[arm] for `metric`, rows in `unit_ids`
// order. Missing cells throw kMissingEntry naming the count and first gap.
numerics::Matrix IteSlice(const PotentialOutcomeTensor& tensor, int metric,
                          int arm, std::span<const std::int64_t> unit_ids,
                          std::size_t num_experiments);

}  // namespace lrhte::dataset

#endif  // LRHTE_DATASET_DATASET_H_
