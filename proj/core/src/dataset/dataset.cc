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

#include "lrhte/dataset/dataset.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <tuple>
#include <unordered_set>
#include <utility>

#include "lrhte/dataset/csv.h"
#include "lrhte/error.h"

namespace lrhte::dataset {
namespace fs = std::filesystem;
namespace {

const std::vector<std::string> kObservationHeader = {
    "unit_id", "experiment_id", "arm", "metric_id", "value"};
const std::vector<std::string> kSplitHeader = {"unit_id", "split"};
const std::vector<std::string> kTensorHeader = {
    "unit_id", "experiment_id", "metric_id", "arm", "outcome", "ite"};

std::vector<std::string> FeatureHeader(std::size_t m) {
  std::vector<std::string> h = {"unit_id"};
  for (std::size_t j = 0; j < m; ++j) h.push_back("f" + std::to_string(j));
  return h;
}

// Range and reference checks shared by the loader and Validate().
void CheckObservation(const Manifest& manifest, const UnitTable& units,
                      const Observation& o, const std::string& where) {
  if (!units.RowOf(o.unit_id)) {
    throw Error(ErrorCode::kDanglingReference,
                where + ": unknown unit_id " + std::to_string(o.unit_id));
  }
  if (o.experiment < 0 ||
      static_cast<std::size_t>(o.experiment) >= manifest.num_experiments) {
    throw Error(ErrorCode::kSchema, where + ": experiment_id " +
                                        std::to_string(o.experiment) +
                                        " out of range");
  }
  if (o.metric < 0 ||
      static_cast<std::size_t>(o.metric) >= manifest.num_metrics) {
    throw Error(ErrorCode::kSchema,
                where + ": metric_id " + std::to_string(o.metric) +
                    " out of range");
  }
  if (o.arm < 0 || o.arm >= manifest.arms_per_experiment[o.experiment]) {
    throw Error(ErrorCode::kSchema, where + ": arm " + std::to_string(o.arm) +
                                        " out of range for experiment " +
                                        std::to_string(o.experiment));
  }
  if (!std::isfinite(o.value)) {
    throw Error(ErrorCode::kSchema, where + ": non-finite value");
  }
}

void CheckManifestShape(const Manifest& m) {
  if (m.format_version != kFormatVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "dataset format '" + m.format_version + "', expected '" +
                    kFormatVersion + "'");
  }
  if (m.arms_per_experiment.size() != m.num_experiments) {
    throw Error(ErrorCode::kInconsistent,
                "manifest lists arms for " +
                    std::to_string(m.arms_per_experiment.size()) +
                    " experiments but num_experiments = " +
                    std::to_string(m.num_experiments));
  }
  for (std::size_t k = 0; k < m.arms_per_experiment.size(); ++k) {
    if (m.arms_per_experiment[k] < 2) {
      throw Error(ErrorCode::kInconsistent,
                  "experiment " + std::to_string(k) +
                      " needs a control and at least one treated arm");
    }
  }
}

void CheckControlsPresent(const Manifest& manifest,
                          const std::vector<Observation>& observations) {
  std::vector<char> present(manifest.num_experiments, 0);
  std::vector<char> control(manifest.num_experiments, 0);
  for (const auto& o : observations) {
    present[o.experiment] = 1;
    if (o.arm == 0) control[o.experiment] = 1;
  }
  for (std::size_t k = 0; k < present.size(); ++k) {
    if (present[k] && !control[k]) {
      throw Error(ErrorCode::kInconsistent,
                  "experiment " + std::to_string(k) +
                      " has observations but no control (arm 0) rows");
    }
  }
}

void CheckSplits(const UnitTable& units, const Splits& splits) {
  std::unordered_set<std::int64_t> seen;
  for (Split s : {Split::kTrain, Split::kValidation, Split::kTest}) {
    for (auto id : splits.Get(s)) {
      if (!units.RowOf(id)) {
        throw Error(ErrorCode::kDanglingReference,
                    "split '" + SplitName(s) + "' references unknown unit " +
                        std::to_string(id));
      }
      if (!seen.insert(id).second) {
        throw Error(ErrorCode::kInconsistent,
                    "unit " + std::to_string(id) +
                        " appears in more than one split entry");
      }
    }
  }
}

void CheckTruth(const Manifest& manifest, const UnitTable& units,
                const PotentialOutcomeTensor& truth) {
  for (std::size_t i = 0; i < truth.num_cells(); ++i) {
    const auto c = truth.cell(i);
    if (!units.RowOf(c.unit_id)) {
      throw Error(ErrorCode::kDanglingReference,
                  "true outcomes reference unknown unit " +
                      std::to_string(c.unit_id));
    }
    if (static_cast<std::size_t>(c.experiment) >= manifest.num_experiments ||
        static_cast<std::size_t>(c.metric) >= manifest.num_metrics) {
      throw Error(ErrorCode::kSchema,
                  "true outcome cell outside manifest experiment/metric range");
    }
    if (static_cast<int>(c.outcome.size()) !=
        manifest.arms_per_experiment[c.experiment]) {
      throw Error(ErrorCode::kInconsistent,
                  "true outcome cell for unit " + std::to_string(c.unit_id) +
                      " has " + std::to_string(c.outcome.size()) +
                      " arms, manifest says " +
                      std::to_string(
                          manifest.arms_per_experiment[c.experiment]));
    }
  }
}

nlohmann::json ManifestToJson(const Manifest& m) {
  nlohmann::json j;
  j["format_version"] = m.format_version;
  j["num_units"] = m.num_units;
  j["num_features"] = m.num_features;
  j["num_experiments"] = m.num_experiments;
  j["num_metrics"] = m.num_metrics;
  j["arms_per_experiment"] = m.arms_per_experiment;
  j["files"] = {{"units", kUnitsFile},
                {"observations", kObservationsFile},
                {"splits", kSplitsFile}};
  if (m.has_true_outcomes) j["files"]["true_outcomes"] = kTrueOutcomesFile;
  j["generator"] = m.generator;
  return j;
}

Manifest ManifestFromJson(const nlohmann::json& j) {
  Manifest m;
  try {
    m.format_version = j.at("format_version").get<std::string>();
    if (m.format_version != kFormatVersion) {
      throw Error(ErrorCode::kVersionMismatch,
                  "dataset format '" + m.format_version + "', expected '" +
                      kFormatVersion + "'");
    }
    m.num_units = j.at("num_units").get<std::size_t>();
    m.num_features = j.at("num_features").get<std::size_t>();
    m.num_experiments = j.at("num_experiments").get<std::size_t>();
    m.num_metrics = j.at("num_metrics").get<std::size_t>();
    m.arms_per_experiment = j.at("arms_per_experiment").get<std::vector<int>>();
    m.has_true_outcomes = j.at("files").contains("true_outcomes");
    if (j.contains("generator")) m.generator = j.at("generator");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("manifest.json: ") + e.what());
  }
  return m;
}

}  // namespace

void UnitTable::BuildIndex() {
  row_of_.clear();
  row_of_.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!row_of_.emplace(ids[i], i).second) {
      throw Error(ErrorCode::kInconsistent,
                  "duplicate unit_id " + std::to_string(ids[i]));
    }
  }
}

std::optional<std::size_t> UnitTable::RowOf(std::int64_t id) const {
  const auto it = row_of_.find(id);
  if (it == row_of_.end()) return std::nullopt;
  return it->second;
}

std::string SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kValidation:
      return "validation";
    case Split::kTest:
      return "test";
  }
  return "?";
}

Split ParseSplit(const std::string& name) {
  if (name == "train") return Split::kTrain;
  if (name == "validation" || name == "val") return Split::kValidation;
  if (name == "test") return Split::kTest;
  throw Error(ErrorCode::kInvalidArgument, "unknown split '" + name + "'");
}

const std::vector<std::int64_t>& Splits::Get(Split split) const {
  switch (split) {
    case Split::kTrain:
      return train;
    case Split::kValidation:
      return validation;
    case Split::kTest:
      return test;
  }
  return train;
}

void Dataset::Validate() const {
  CheckManifestShape(manifest);
  if (units.features.rows() != units.ids.size()) {
    throw Error(ErrorCode::kInconsistent,
                "feature matrix rows differ from unit count");
  }
  if (units.num_units() != manifest.num_units) {
    throw Error(ErrorCode::kInconsistent,
                "manifest num_units = " + std::to_string(manifest.num_units) +
                    " but " + std::to_string(units.num_units()) +
                    " units present");
  }
  if (units.num_features() != manifest.num_features) {
    throw Error(ErrorCode::kInconsistent,
                "manifest num_features = " +
                    std::to_string(manifest.num_features) + " but units have " +
                    std::to_string(units.num_features()));
  }
  if (!units.features.AllFinite()) {
    throw Error(ErrorCode::kSchema, "non-finite unit feature");
  }
  for (std::size_t i = 0; i < observations.size(); ++i) {
    CheckObservation(manifest, units, observations[i],
                     "observation row " + std::to_string(i));
  }
  CheckControlsPresent(manifest, observations);
  CheckSplits(units, splits);
  if (manifest.has_true_outcomes != truth.has_value()) {
    throw Error(ErrorCode::kInconsistent,
                "manifest true-outcomes flag disagrees with the data");
  }
  if (truth) CheckTruth(manifest, units, *truth);
}

std::vector<std::size_t> Dataset::RowsIn(Split split) const {
  std::vector<std::size_t> rows;
  for (auto id : splits.Get(split)) rows.push_back(*units.RowOf(id));
  return rows;
}

std::vector<std::size_t> Dataset::ObservationsIn(Split split) const {
  std::unordered_set<std::int64_t> members(splits.Get(split).begin(),
                                           splits.Get(split).end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < observations.size(); ++i) {
    if (members.count(observations[i].unit_id)) out.push_back(i);
  }
  return out;
}

std::vector<PredictionTarget> PredictionTargets(const Dataset& data,
                                                std::optional<Split> split,
                                                bool all_experiments) {
  std::vector<std::size_t> rows;
  if (split) {
    rows = data.RowsIn(*split);
  } else {
    rows.resize(data.units.num_units());
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  }
  const std::size_t num_k = data.manifest.num_experiments;
  std::vector<PredictionTarget> targets;
  if (all_experiments) {
    targets.reserve(rows.size() * num_k);
    for (auto r : rows) {
      for (std::size_t k = 0; k < num_k; ++k) {
        targets.push_back({r, data.units.ids[r], static_cast<int>(k)});
      }
    }
    return targets;
  }
  std::set<std::pair<std::size_t, int>> member;
  for (const auto& o : data.observations) {
    member.emplace(*data.units.RowOf(o.unit_id), o.experiment);
  }
  if (data.truth) {
    for (std::size_t i = 0; i < data.truth->num_cells(); ++i) {
      const auto c = data.truth->cell(i);
      member.emplace(*data.units.RowOf(c.unit_id), c.experiment);
    }
  }
  for (auto r : rows) {
    for (auto it = member.lower_bound({r, 0});
         it != member.end() && it->first == r; ++it) {
      targets.push_back({r, data.units.ids[r], it->second});
    }
  }
  return targets;
}

void WriteOutcomeTensorCsv(const fs::path& path,
                           const PotentialOutcomeTensor& tensor) {
  CsvWriter w(path, kTensorHeader);
  for (std::size_t i = 0; i < tensor.num_cells(); ++i) {
    const auto c = tensor.cell(i);
    for (std::size_t t = 0; t < c.outcome.size(); ++t) {
      w.Int(c.unit_id).Int(c.experiment).Int(c.metric);
      w.Int(static_cast<std::int64_t>(t)).Real(c.outcome[t]).Real(c.ite[t]);
      w.EndRow();
    }
  }
  w.Close();
}

PotentialOutcomeTensor ReadOutcomeTensorCsv(const fs::path& path) {
  CsvReader r(path);
  r.ExpectHeader(kTensorHeader);
  using Key = std::tuple<std::int64_t, int, int>;
  std::map<Key, std::size_t> slot;
  std::vector<Key> order;
  std::vector<std::vector<std::pair<double, double>>> arms;
  std::vector<std::vector<char>> filled;
  while (r.Next()) {
    const Key key{r.Integer(0), static_cast<int>(r.Integer(1)),
                  static_cast<int>(r.Integer(2))};
    const auto arm = r.Integer(3);
    if (arm < 0 || arm > 1 << 12) {
      throw Error(ErrorCode::kSchema, r.Where() + ": arm out of range");
    }
    auto [it, inserted] = slot.emplace(key, order.size());
    if (inserted) {
      order.push_back(key);
      arms.emplace_back();
      filled.emplace_back();
    }
    auto& cell = arms[it->second];
    auto& have = filled[it->second];
    const auto a = static_cast<std::size_t>(arm);
    if (cell.size() <= a) {
      cell.resize(a + 1);
      have.resize(a + 1, 0);
    }
    if (have[a]) {
      throw Error(ErrorCode::kInconsistent, r.Where() + ": duplicate arm row");
    }
    have[a] = 1;
    cell[a] = {r.Real(4), r.Real(5)};
  }
  PotentialOutcomeTensor tensor;
  std::vector<double> outcome;
  std::vector<double> ite;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (std::find(filled[i].begin(), filled[i].end(), 0) != filled[i].end()) {
      throw Error(ErrorCode::kInconsistent,
                  path.filename().string() + ": unit " +
                      std::to_string(std::get<0>(order[i])) +
                      " is missing an arm row");
    }
    outcome.clear();
    ite.clear();
    for (const auto& [y, e] : arms[i]) {
      outcome.push_back(y);
      ite.push_back(e);
    }
    tensor.AddChecked(std::get<0>(order[i]), std::get<1>(order[i]),
                      std::get<2>(order[i]), outcome, ite);
  }
  return tensor;
}

Dataset LoadDataset(const fs::path& directory) {
  Dataset data;
  const fs::path manifest_path = directory / kManifestFile;
  std::ifstream in(manifest_path);
  if (!in) {
    throw Error(ErrorCode::kNotFound,
                "missing manifest " + manifest_path.string());
  }
  nlohmann::json mj;
  try {
    in >> mj;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchema, std::string("manifest.json: ") + e.what());
  }
  data.manifest = ManifestFromJson(mj);
  CheckManifestShape(data.manifest);
  const Manifest& m = data.manifest;

  {
    CsvReader r(directory / kUnitsFile);
    r.ExpectHeader(FeatureHeader(m.num_features));
    std::vector<double> values;
    while (r.Next()) {
      data.units.ids.push_back(r.Integer(0));
      for (std::size_t j = 0; j < m.num_features; ++j) {
        values.push_back(r.Real(j + 1));
      }
    }
    data.units.features = numerics::Matrix(data.units.ids.size(),
                                           m.num_features, std::move(values));
    data.units.BuildIndex();
    if (data.units.num_units() != m.num_units) {
      throw Error(ErrorCode::kInconsistent,
                  "manifest num_units = " + std::to_string(m.num_units) +
                      " but units.csv has " +
                      std::to_string(data.units.num_units()) + " rows");
    }
  }
  {
    CsvReader r(directory / kObservationsFile);
    r.ExpectHeader(kObservationHeader);
    while (r.Next()) {
      Observation o;
      o.unit_id = r.Integer(0);
      o.experiment = static_cast<int>(r.Integer(1));
      o.arm = static_cast<int>(r.Integer(2));
      o.metric = static_cast<int>(r.Integer(3));
      o.value = r.Real(4);
      CheckObservation(m, data.units, o, r.Where());
      data.observations.push_back(o);
    }
  }
  {
    CsvReader r(directory / kSplitsFile);
    r.ExpectHeader(kSplitHeader);
    while (r.Next()) {
      const auto id = r.Integer(0);
      Split s;
      try {
        s = ParseSplit(std::string(r.fields()[1]));
      } catch (const Error&) {
        throw Error(ErrorCode::kSchema, r.Where() + ": unknown split name");
      }
      if (!data.units.RowOf(id)) {
        throw Error(ErrorCode::kDanglingReference,
                    r.Where() + ": unknown unit_id " + std::to_string(id));
      }
      switch (s) {
        case Split::kTrain:
          data.splits.train.push_back(id);
          break;
        case Split::kValidation:
          data.splits.validation.push_back(id);
          break;
        case Split::kTest:
          data.splits.test.push_back(id);
          break;
      }
    }
  }
  if (m.has_true_outcomes) {
    data.truth = ReadOutcomeTensorCsv(directory / kTrueOutcomesFile);
  }
  data.Validate();
  return data;
}

void SaveDataset(const Dataset& data, const fs::path& directory) {
  data.Validate();
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create " + directory.string() + ": " + ec.message());
  }
  {
    CsvWriter w(directory / kUnitsFile, FeatureHeader(data.units.num_features()));
    for (std::size_t i = 0; i < data.units.num_units(); ++i) {
      w.Int(data.units.ids[i]);
      for (double v : data.units.features.row(i)) w.Real(v);
      w.EndRow();
    }
    w.Close();
  }
  {
    CsvWriter w(directory / kObservationsFile, kObservationHeader);
    for (const auto& o : data.observations) {
      w.Int(o.unit_id).Int(o.experiment).Int(o.arm).Int(o.metric).Real(o.value);
      w.EndRow();
    }
    w.Close();
  }
  {
    CsvWriter w(directory / kSplitsFile, kSplitHeader);
    for (Split s : {Split::kTrain, Split::kValidation, Split::kTest}) {
      for (auto id : data.splits.Get(s)) {
        w.Int(id).Text(SplitName(s));
        w.EndRow();
      }
    }
    w.Close();
  }
  if (data.truth) {
    WriteOutcomeTensorCsv(directory / kTrueOutcomesFile, *data.truth);
  }
  std::ofstream out(directory / kManifestFile, std::ios::binary);
  out << ManifestToJson(data.manifest).dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "cannot write manifest.json");
}

Splits SplitUnits(std::span<const std::int64_t> unit_ids,
                  const SplitFractions& fractions,
                  numerics::RngStream& stream) {
  const double f[3] = {fractions.train, fractions.validation, fractions.test};
  for (double v : f) {
    if (!(v >= 0.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "split fractions must be non-negative");
    }
  }
  if (f[0] + f[1] + f[2] > 1.0 + 1e-12) {
    throw Error(ErrorCode::kInvalidArgument,
                "split fractions must sum to at most 1");
  }
  const std::size_t n = unit_ids.size();
  std::size_t size[3];
  for (int i = 0; i < 3; ++i) {
    size[i] = static_cast<std::size_t>(std::llround(f[i] * static_cast<double>(n)));
  }
  for (int i = 2; i >= 0 && size[0] + size[1] + size[2] > n; --i) {
    const std::size_t excess = size[0] + size[1] + size[2] - n;
    size[i] -= std::min(size[i], excess);
  }
  std::vector<std::int64_t> ids(unit_ids.begin(), unit_ids.end());
  stream.Shuffle(std::span<std::int64_t>(ids));
  Splits s;
  auto take = [&](std::size_t begin, std::size_t count) {
    std::vector<std::int64_t> part(ids.begin() + begin,
                                   ids.begin() + begin + count);
    std::sort(part.begin(), part.end());
    return part;
  };
  s.train = take(0, size[0]);
  s.validation = take(size[0], size[1]);
  s.test = take(size[0] + size[1], size[2]);
  return s;
}

numerics::Matrix IteSlice(const PotentialOutcomeTensor& tensor, int metric,
                          int arm, std::span<const std::int64_t> unit_ids,
                          std::size_t num_experiments) {
  numerics::Matrix m(unit_ids.size(), num_experiments);
  std::size_t missing = 0;
  std::string first;
  for (std::size_t i = 0; i < unit_ids.size(); ++i) {
    for (std::size_t k = 0; k < num_experiments; ++k) {
      const auto idx = tensor.Find(unit_ids[i], static_cast<int>(k), metric);
      const bool ok = idx && static_cast<std::size_t>(arm) <
                                 tensor.cell(*idx).ite.size();
      if (!ok) {
        if (missing++ == 0) {
          first = "unit " + std::to_string(unit_ids[i]) + ", experiment " +
                  std::to_string(k);
        }
        continue;
      }
      m(i, k) = tensor.cell(*idx).ite[arm];
    }
  }
  if (missing > 0) {
    throw Error(ErrorCode::kMissingEntry,
                std::to_string(missing) + " ITE entries missing for metric " +
                    std::to_string(metric) + " arm " + std::to_string(arm) +
                    " (first: " + first + ")");
  }
  return m;
}

}  // namespace lrhte::dataset
