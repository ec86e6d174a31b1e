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

#ifndef LRHTE_EVAL_REPORT_H_
#define LRHTE_EVAL_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <vector>

#include "lrhte/dataset/dataset.h"
#include "lrhte/eval/metrics.h"

namespace lrhte::eval {

struct RiskRow {
  int metric = 0;
  int experiment = 0;
  std::optional<double> pehe;
  double mu_risk = 0.0;
  std::optional<double> tau_risk;
  std::size_t num_observations = 0;
};

// Per-metric averages with equal weight per experiment.
struct MetricSummary {
  int metric = 0;
  std::optional<double> pehe;
  double mu_risk = 0.0;
  std::optional<double> tau_risk;
};

struct RiskReport {
  std::vector<RiskRow> rows;  // by metric, then experiment
  std::vector<MetricSummary> summary;
  bool has_pehe = false;
  bool has_tau_risk = false;

  // Mean of the per-metric summaries.
  double MeanMuRisk() const;
  std::optional<double> MeanPehe() const;
  std::optional<double> MeanTauRisk() const;
};

struct EvalOptions {
  dataset::Split split = dataset::Split::kTest;
  bool tau_risk = false;
  double nuisance_reg = kNuisanceReg;
};

// Scores `predicted` against the observations of options.split (mu-risk and,
// on request, tau-risk) and against the true outcomes of the split's units
// when the dataset has them (PEHE). Cells without observations in the split
// are skipped. Multi-arm experiments average tau-risk over treated arms, each
// scored on that arm's units plus the control units.
RiskReport Evaluate(const dataset::Dataset& data,
                    const dataset::PotentialOutcomeTensor& predicted,
                    const EvalOptions& options);

// metric_id,experiment_id[,pehe],mu_risk[,tau_risk]
void WriteRiskCsv(const std::filesystem::path& path, const RiskReport& report);
// metric_id[,pehe],mu_risk[,tau_risk], one row per metric, then "mean".
void WriteSummaryCsv(const std::filesystem::path& path,
                     const RiskReport& report);

}  // namespace lrhte::eval

#endif  // LRHTE_EVAL_REPORT_H_
