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

#include "lrhte/eval/report.h"

#include <map>
#include <string>
#include <unordered_set>
#include <utility>

#include "lrhte/dataset/csv.h"
#include "lrhte/error.h"

namespace lrhte::eval {
namespace {

struct Accumulator {
  double sq_error = 0.0;
  std::size_t count = 0;
};

std::optional<double> MeanOf(const std::vector<MetricSummary>& s,
                             std::optional<double> MetricSummary::*field) {
  if (s.empty() || !(s.front().*field)) return std::nullopt;
  double sum = 0.0;
  for (const auto& m : s) sum += *(m.*field);
  return sum / static_cast<double>(s.size());
}

std::vector<std::string> Header(const RiskReport& report, bool per_cell) {
  std::vector<std::string> h{"metric_id"};
  if (per_cell) h.push_back("experiment_id");
  if (report.has_pehe) h.push_back("pehe");
  h.push_back("mu_risk");
  if (report.has_tau_risk) h.push_back("tau_risk");
  return h;
}

}  // namespace

double RiskReport::MeanMuRisk() const {
  double sum = 0.0;
  for (const auto& m : summary) sum += m.mu_risk;
  return summary.empty() ? 0.0 : sum / static_cast<double>(summary.size());
}

std::optional<double> RiskReport::MeanPehe() const {
  return MeanOf(summary, &MetricSummary::pehe);
}

std::optional<double> RiskReport::MeanTauRisk() const {
  return MeanOf(summary, &MetricSummary::tau_risk);
}

RiskReport Evaluate(const dataset::Dataset& data,
                    const dataset::PotentialOutcomeTensor& predicted,
                    const EvalOptions& options) {
  using Key = std::pair<int, int>;  // (metric, experiment)
  std::map<Key, std::vector<std::size_t>> cells;
  for (std::size_t idx : data.ObservationsIn(options.split)) {
    const auto& o = data.observations[idx];
    cells[{o.metric, o.experiment}].push_back(idx);
  }
  if (cells.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no observations in the " + dataset::SplitName(options.split) +
                    " split");
  }

  auto lookup = [&](std::int64_t unit, int experiment, int metric) {
    const auto found = predicted.Find(unit, experiment, metric);
    if (!found) {
      throw Error(ErrorCode::kMissingEntry,
                  "no prediction for unit " + std::to_string(unit) +
                      " experiment " + std::to_string(experiment) +
                      " metric " + std::to_string(metric));
    }
    return predicted.cell(*found);
  };

  std::map<Key, Accumulator> pehe;
  const bool has_truth = data.truth.has_value();
  if (has_truth) {
    const auto& ids = data.splits.Get(options.split);
    const std::unordered_set<std::int64_t> member(ids.begin(), ids.end());
    for (std::size_t i = 0; i < data.truth->num_cells(); ++i) {
      const auto t = data.truth->cell(i);
      if (!member.count(t.unit_id)) continue;
      const auto p = lookup(t.unit_id, t.experiment, t.metric);
      if (p.ite.size() != t.ite.size()) {
        throw Error(ErrorCode::kDimensionMismatch,
                    "arm count differs for unit " + std::to_string(t.unit_id));
      }
      auto& acc = pehe[{t.metric, t.experiment}];
      for (std::size_t a = 1; a < t.ite.size(); ++a) {
        const double d = p.ite[a] - t.ite[a];
        acc.sq_error += d * d;
        ++acc.count;
      }
    }
  }

  RiskReport report;
  report.has_pehe = has_truth;
  report.has_tau_risk = options.tau_risk;
  for (const auto& [key, obs] : cells) {
    const auto [metric, experiment] = key;
    RiskRow row;
    row.metric = metric;
    row.experiment = experiment;
    row.num_observations = obs.size();
    double sse = 0.0;
    for (std::size_t idx : obs) {
      const auto& o = data.observations[idx];
      const double r =
          lookup(o.unit_id, experiment, metric).outcome[o.arm] - o.value;
      sse += r * r;
    }
    row.mu_risk = sse / static_cast<double>(obs.size());
    if (has_truth) {
      const auto it = pehe.find(key);
      if (it == pehe.end() || it->second.count == 0) {
        throw Error(ErrorCode::kMissingEntry,
                    "no true outcomes for metric " + std::to_string(metric) +
                        " experiment " + std::to_string(experiment));
      }
      row.pehe = it->second.sq_error / static_cast<double>(it->second.count);
    }
    if (options.tau_risk) {
      const int arms = data.manifest.arms_per_experiment[experiment];
      double tau_sum = 0.0;
      for (int arm = 1; arm < arms; ++arm) {
        std::vector<std::size_t> used;
        for (std::size_t idx : obs) {
          const int a = data.observations[idx].arm;
          if (a == 0 || a == arm) used.push_back(idx);
        }
        numerics::Matrix x(used.size(), data.units.num_features());
        std::vector<double> y(used.size());
        std::vector<int> t(used.size());
        std::vector<double> tau(used.size());
        for (std::size_t i = 0; i < used.size(); ++i) {
          const auto& o = data.observations[used[i]];
          const auto src = data.units.features.row(*data.units.RowOf(o.unit_id));
          std::copy(src.begin(), src.end(), x.row(i).begin());
          y[i] = o.value;
          t[i] = o.arm == 0 ? 0 : 1;
          tau[i] = lookup(o.unit_id, experiment, metric).ite[arm];
        }
        tau_sum += TauRisk(x, y, t, tau, options.nuisance_reg);
      }
      row.tau_risk = tau_sum / static_cast<double>(arms - 1);
    }
    report.rows.push_back(row);
  }

  for (std::size_t begin = 0; begin < report.rows.size();) {
    std::size_t end = begin;
    MetricSummary s;
    s.metric = report.rows[begin].metric;
    double pehe_sum = 0.0;
    double tau_sum = 0.0;
    while (end < report.rows.size() && report.rows[end].metric == s.metric) {
      s.mu_risk += report.rows[end].mu_risk;
      if (report.rows[end].pehe) pehe_sum += *report.rows[end].pehe;
      if (report.rows[end].tau_risk) tau_sum += *report.rows[end].tau_risk;
      ++end;
    }
    const double count = static_cast<double>(end - begin);
    s.mu_risk /= count;
    if (has_truth) s.pehe = pehe_sum / count;
    if (options.tau_risk) s.tau_risk = tau_sum / count;
    report.summary.push_back(s);
    begin = end;
  }
  return report;
}

void WriteRiskCsv(const std::filesystem::path& path, const RiskReport& report) {
  dataset::CsvWriter out(path, Header(report, true));
  for (const auto& r : report.rows) {
    out.Int(r.metric).Int(r.experiment);
    if (report.has_pehe) out.Real(*r.pehe);
    out.Real(r.mu_risk);
    if (report.has_tau_risk) out.Real(*r.tau_risk);
    out.EndRow();
  }
  out.Close();
}

void WriteSummaryCsv(const std::filesystem::path& path,
                     const RiskReport& report) {
  dataset::CsvWriter out(path, Header(report, false));
  for (const auto& s : report.summary) {
    out.Int(s.metric);
    if (report.has_pehe) out.Real(*s.pehe);
    out.Real(s.mu_risk);
    if (report.has_tau_risk) out.Real(*s.tau_risk);
    out.EndRow();
  }
  out.Text("mean");
  if (report.has_pehe) out.Real(*report.MeanPehe());
  out.Real(report.MeanMuRisk());
  if (report.has_tau_risk) out.Real(*report.MeanTauRisk());
  out.EndRow();
  out.Close();
}

}  // namespace lrhte::eval
