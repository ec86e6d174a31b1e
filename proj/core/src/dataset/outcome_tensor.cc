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

#include "lrhte/dataset/outcome_tensor.h"

#include <string>

#include "lrhte/error.h"

namespace lrhte::dataset {
namespace {

constexpr std::int64_t kMaxUnitId = std::int64_t{1} << 40;
constexpr int kMaxIndex = 1 << 12;

std::string Describe(std::int64_t unit_id, int experiment, int metric) {
  return "(unit " + std::to_string(unit_id) + ", experiment " +
         std::to_string(experiment) + ", metric " + std::to_string(metric) +
         ")";
}

}  // namespace

std::uint64_t PotentialOutcomeTensor::Key(std::int64_t unit_id, int experiment,
                                          int metric) {
  if (unit_id < 0 || unit_id >= kMaxUnitId || experiment < 0 ||
      experiment >= kMaxIndex || metric < 0 || metric >= kMaxIndex) {
    throw Error(ErrorCode::kOutOfRange,
                "outcome key out of range " +
                    Describe(unit_id, experiment, metric));
  }
  return (static_cast<std::uint64_t>(unit_id) << 24) |
         (static_cast<std::uint64_t>(experiment) << 12) |
         static_cast<std::uint64_t>(metric);
}

void PotentialOutcomeTensor::Add(std::int64_t unit_id, int experiment,
                                 int metric,
                                 std::span<const double> arm_outcomes) {
  std::vector<double> ite(arm_outcomes.size());
  for (std::size_t t = 0; t < ite.size(); ++t) {
    ite[t] = arm_outcomes[t] - arm_outcomes[0];
  }
  AddChecked(unit_id, experiment, metric, arm_outcomes, ite);
}

void PotentialOutcomeTensor::AddChecked(std::int64_t unit_id, int experiment,
                                        int metric,
                                        std::span<const double> arm_outcomes,
                                        std::span<const double> ite) {
  if (arm_outcomes.size() < 2 || ite.size() != arm_outcomes.size()) {
    throw Error(ErrorCode::kInconsistent,
                "cell " + Describe(unit_id, experiment, metric) +
                    " needs a control and at least one treated arm");
  }
  for (std::size_t t = 0; t < ite.size(); ++t) {
    if (ite[t] != arm_outcomes[t] - arm_outcomes[0]) {
      throw Error(ErrorCode::kInconsistent,
                  "cell " + Describe(unit_id, experiment, metric) + " arm " +
                      std::to_string(t) +
                      ": stored ITE differs from treated minus control");
    }
  }
  const auto key = Key(unit_id, experiment, metric);
  if (!index_.emplace(key, unit_.size()).second) {
    throw Error(ErrorCode::kInconsistent,
                "duplicate cell " + Describe(unit_id, experiment, metric));
  }
  if (offset_.empty()) offset_.push_back(0);
  unit_.push_back(unit_id);
  experiment_.push_back(experiment);
  metric_.push_back(metric);
  outcome_.insert(outcome_.end(), arm_outcomes.begin(), arm_outcomes.end());
  ite_.insert(ite_.end(), ite.begin(), ite.end());
  offset_.push_back(outcome_.size());
}

PotentialOutcomeTensor::Cell PotentialOutcomeTensor::cell(std::size_t i) const {
  const std::size_t begin = offset_[i];
  const std::size_t len = offset_[i + 1] - begin;
  return Cell{unit_[i], experiment_[i], metric_[i],
              std::span<const double>(outcome_).subspan(begin, len),
              std::span<const double>(ite_).subspan(begin, len)};
}

std::optional<std::size_t> PotentialOutcomeTensor::Find(std::int64_t unit_id,
                                                        int experiment,
                                                        int metric) const {
  const auto it = index_.find(Key(unit_id, experiment, metric));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool PotentialOutcomeTensor::operator==(
    const PotentialOutcomeTensor& other) const {
  return unit_ == other.unit_ && experiment_ == other.experiment_ &&
         metric_ == other.metric_ && offset_ == other.offset_ &&
         outcome_ == other.outcome_ && ite_ == other.ite_;
}

}  // namespace lrhte::dataset
