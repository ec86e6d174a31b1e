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

#include "commands.h"

#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "lrhte/dataset/csv.h"
#include "lrhte/error.h"
#include "lrhte/eval/metrics.h"
#include "lrhte/eval/report.h"
#include "lrhte/lr/finetune.h"
#include "lrhte/lr/model.h"
#include "lrhte/lr/serialize.h"
#include "lrhte/lr/trainer.h"
#include "lrhte/numerics/random.h"
#include "lrhte/rank/rank.h"
#include "lrhte/tlearner/tlearner.h"

namespace lrhte::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kToyTag = 0x746f79ULL;

void Require(const std::string& value, const char* flag) {
  if (value.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("missing required --") + flag);
  }
}

fs::path PrepareOutput(const std::string& out) {
  Require(out, "out");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create output directory " + out + ": " + ec.message());
  }
  return fs::path(out);
}

void WriteJson(const fs::path& path, const nlohmann::json& j) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void EchoConfig(const fs::path& dir, const char* command,
                const nlohmann::json& options) {
  WriteJson(dir / kConfigEcho, {{"command", command}, {"options", options}});
}

dataset::Dataset Load(const std::string& dir) {
  Require(dir, "data");
  return dataset::LoadDataset(dir);
}

std::vector<dataset::PredictionTarget> Targets(const dataset::Dataset& data,
                                               const std::string& split,
                                               bool all_experiments) {
  return dataset::PredictionTargets(data, ParseSplitOrAll(split),
                                    all_experiments);
}

nlohmann::json OptionalJson(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json ReportJson(const eval::RiskReport& report) {
  nlohmann::json metrics = nlohmann::json::array();
  for (const auto& s : report.summary) {
    metrics.push_back({{"metric_id", s.metric},
                       {"pehe", OptionalJson(s.pehe)},
                       {"mu_risk", s.mu_risk},
                       {"tau_risk", OptionalJson(s.tau_risk)}});
  }
  return {{"metrics", metrics},
          {"mean_pehe", OptionalJson(report.MeanPehe())},
          {"mean_mu_risk", report.MeanMuRisk()},
          {"mean_tau_risk", OptionalJson(report.MeanTauRisk())}};
}

std::vector<std::string> NumberedHeader(std::vector<std::string> head,
                                        const std::string& prefix,
                                        std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    head.push_back(prefix + std::to_string(i));
  }
  return head;
}

}  // namespace

std::optional<dataset::Split> ParseSplitOrAll(const std::string& name) {
  if (name == "all") return std::nullopt;
  return dataset::ParseSplit(name);
}

nlohmann::json GenerateOptions::ToJson() const {
  nlohmann::json j = synth.ToJson();
  j.erase("kind");
  j["out"] = out;
  return j;
}

nlohmann::json SemisynthOptions::ToJson() const {
  return {{"out", out},
          {"features", features},
          {"logits", logits},
          {"control_class", control_class},
          {"assign_prob", assign_prob},
          {"train_fraction", train_fraction},
          {"val_fraction", val_fraction},
          {"test_fraction", test_fraction},
          {"seed", seed},
          {"toy_units", toy_units},
          {"toy_features", toy_features},
          {"toy_classes", toy_classes},
          {"toy_hidden", toy_hidden}};
}

nlohmann::json TrainOptions::ToJson() const {
  nlohmann::json j = hyper.ToJson();
  j["data"] = data;
  j["out"] = out;
  return j;
}

nlohmann::json BaselineOptions::ToJson() const {
  return {{"data", data}, {"out", out}, {"lambda", lambda}, {"split", split}};
}

nlohmann::json EvalOptions::ToJson() const {
  return {{"data", data},
          {"out", out},
          {"model", model},
          {"predictions", predictions},
          {"split", split},
          {"tau_risk", tau_risk},
          {"nuisance_reg", nuisance_reg}};
}

nlohmann::json RankOptions::ToJson() const {
  return {{"data", data},         {"out", out},
          {"model", model},       {"split", split},
          {"arm", arm},           {"metrics", metrics},
          {"folds", folds},       {"max_rank", max_rank},
          {"als_iters", als_iters}, {"als_reg", als_reg},
          {"seed", seed}};
}

nlohmann::json FinetuneOptions::ToJson() const {
  return {{"model", model},           {"data", data},
          {"out", out},               {"experiment", experiment},
          {"metric", metric},         {"split", split},
          {"reg", reg}};
}

nlohmann::json TuneOptions::ToJson() const {
  nlohmann::json j = base.ToJson();
  j["data"] = data;
  j["out"] = out;
  j["learning_rates"] = learning_rates;
  j["weight_decays"] = weight_decays;
  j["latent_dims"] = latent_dims;
  j["risk"] = risk;
  return j;
}

void RunGenerate(const GenerateOptions& options) {
  const fs::path out = PrepareOutput(options.out);
  const auto generated = synth::GenerateSynthetic(options.synth);
  dataset::SaveDataset(generated.data, out);
  EchoConfig(out, "generate", options.ToJson());
  spdlog::info("wrote {} units, {} observations to {}",
               generated.data.units.num_units(),
               generated.data.observations.size(), out.string());
}

void RunSemisynth(const SemisynthOptions& options) {
  const fs::path out = PrepareOutput(options.out);
  if (options.control_class < 0) {
    throw Error(ErrorCode::kOutOfRange, "control_class must be >= 0");
  }
  synth::SemiSynthConfig config;
  config.control_class = static_cast<std::size_t>(options.control_class);
  config.assign_prob = options.assign_prob;
  config.fractions = {options.train_fraction, options.val_fraction,
                      options.test_fraction};
  config.seed = options.seed;
  dataset::Dataset data;
  if (options.features.empty() != options.logits.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "--features and --logits must be given together");
  }
  if (!options.features.empty()) {
    data = synth::SemiSyntheticFromFiles(options.features, options.logits,
                                         config);
  } else {
    numerics::RngStream stream =
        numerics::RngStream(options.seed).Derive(kToyTag);
    const auto toy = synth::MakeToyClassifierOutputs(
        options.toy_units, options.toy_features, options.toy_classes,
        options.toy_hidden, stream);
    dataset::WriteNumericCsv(out / "features.csv",
                             NumberedHeader({}, "f", toy.features.cols()),
                             toy.features);
    dataset::WriteNumericCsv(out / "logits.csv",
                             NumberedHeader({}, "class", toy.logits.cols()),
                             toy.logits);
    data = synth::SemiSyntheticFromLogits(toy.features, toy.logits, config);
  }
  dataset::SaveDataset(data, out);
  EchoConfig(out, "semisynth", options.ToJson());
  spdlog::info("wrote {} experiments over {} units to {}",
               data.manifest.num_experiments, data.units.num_units(),
               out.string());
}

void RunTrain(const TrainOptions& options) {
  const auto data = Load(options.data);
  const fs::path out = PrepareOutput(options.out);
  const auto result = lr::Train(data, options.hyper);
  lr::SaveModel(out / "model.json", result.params, options.hyper);

  dataset::CsvWriter loss(out / "train_loss.csv", {"epoch", "loss"});
  for (std::size_t e = 0; e < result.report.epoch_loss.size(); ++e) {
    loss.Int(static_cast<std::int64_t>(e)).Real(result.report.epoch_loss[e]);
    loss.EndRow();
  }
  loss.Close();

  nlohmann::json mu = nlohmann::json::array();
  for (double v : result.report.validation_mu_risk) mu.push_back(v);
  WriteJson(out / "train_report.json",
            {{"steps", result.report.steps},
             {"epochs", result.report.epoch_loss.size()},
             {"final_loss", result.report.epoch_loss.empty()
                                ? nlohmann::json(nullptr)
                                : nlohmann::json(result.report.epoch_loss.back())},
             {"validation_mu_risk", mu}});

  const auto targets = Targets(data, "test", false);
  if (!targets.empty()) {
    dataset::WriteOutcomeTensorCsv(
        out / "predictions.csv",
        lr::PredictTensor(result.params, data, targets));
  }
  EchoConfig(out, "train", options.ToJson());
  spdlog::info("trained for {} steps; model in {}", result.report.steps,
               (out / "model.json").string());
}

void RunBaseline(const BaselineOptions& options) {
  const auto data = Load(options.data);
  const fs::path out = PrepareOutput(options.out);
  const auto pairs = tlearner::FitAll(data, options.lambda);

  const std::size_t m = data.units.num_features();
  dataset::CsvWriter models(
      out / "tlearner_models.csv",
      NumberedHeader({"metric_id", "experiment_id", "arm", "model",
                      "intercept"},
                     "c", m));
  for (const auto& p : pairs) {
    for (const auto* which : {"control", "treated"}) {
      const auto& fit = std::string(which) == "control" ? p.control : p.treated;
      models.Int(p.metric).Int(p.experiment).Int(p.arm).Text(which);
      models.Real(fit.intercept);
      for (double c : fit.coef) models.Real(c);
      models.EndRow();
    }
  }
  models.Close();

  const auto targets = Targets(data, options.split, false);
  dataset::WriteOutcomeTensorCsv(out / "predictions.csv",
                                 tlearner::PredictTensor(pairs, data, targets));
  WriteJson(out / "summary.json",
            {{"pairs", pairs.size()}, {"predicted_targets", targets.size()}});
  EchoConfig(out, "baseline", options.ToJson());
  spdlog::info("fitted {} T-learner pairs", pairs.size());
}

void RunEval(const EvalOptions& options) {
  const auto data = Load(options.data);
  if (options.model.empty() == options.predictions.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "give exactly one of --model and --predictions");
  }
  const fs::path out = PrepareOutput(options.out);
  eval::EvalOptions eval_options;
  eval_options.split = dataset::ParseSplit(options.split);
  eval_options.tau_risk = options.tau_risk;
  eval_options.nuisance_reg = options.nuisance_reg;
  dataset::PotentialOutcomeTensor predicted;
  if (!options.model.empty()) {
    const auto model = lr::LoadModel(options.model);
    const auto targets = Targets(data, options.split, false);
    predicted = lr::PredictTensor(model.params, data, targets);
  } else {
    predicted = dataset::ReadOutcomeTensorCsv(options.predictions);
  }
  const auto report = eval::Evaluate(data, predicted, eval_options);
  eval::WriteRiskCsv(out / "risk.csv", report);
  eval::WriteSummaryCsv(out / "summary.csv", report);
  WriteJson(out / "summary.json", ReportJson(report));
  EchoConfig(out, "eval", options.ToJson());
  spdlog::info("mean mu-risk {:.6g}", report.MeanMuRisk());
}

void RunRank(const RankOptions& options) {
  const auto data = Load(options.data);
  const fs::path out = PrepareOutput(options.out);
  const auto split = ParseSplitOrAll(options.split);
  std::vector<std::int64_t> unit_ids =
      split ? data.splits.Get(*split) : data.units.ids;

  dataset::PotentialOutcomeTensor predicted;
  const dataset::PotentialOutcomeTensor* source = nullptr;
  if (!options.model.empty()) {
    const auto model = lr::LoadModel(options.model);
    const auto targets = Targets(data, options.split, true);
    predicted = lr::PredictTensor(model.params, data, targets);
    source = &predicted;
  } else if (data.truth) {
    source = &*data.truth;
  } else {
    throw Error(ErrorCode::kNotFound,
                "dataset has no true outcomes; pass --model to analyse "
                "predicted effects");
  }

  std::vector<int> metrics = options.metrics;
  if (metrics.empty()) {
    for (std::size_t j = 0; j < data.manifest.num_metrics; ++j) {
      metrics.push_back(static_cast<int>(j));
    }
  }
  rank::BcvOptions bcv;
  bcv.folds = options.folds;
  bcv.max_rank = options.max_rank;
  bcv.als.iters = options.als_iters;
  bcv.als.reg = options.als_reg;
  const numerics::RngStream root(options.seed);

  std::vector<rank::RankReport> reports;
  nlohmann::json summary = nlohmann::json::array();
  for (int j : metrics) {
    const auto slice = dataset::IteSlice(*source, j, options.arm, unit_ids,
                                         data.manifest.num_experiments);
    const auto corr = eval::IteCorrelation(slice);
    dataset::WriteNumericCsv(
        out / ("correlation_metric" + std::to_string(j) + ".csv"),
        NumberedHeader({}, "experiment", slice.cols()), corr.matrix);
    numerics::RngStream stream = root.Derive(static_cast<std::uint64_t>(j));
    auto report = rank::BcvEffectiveRank(slice, bcv, stream);
    report.metric = j;
    summary.push_back({{"metric_id", j},
                       {"selected_rank", report.selected_rank},
                       {"zero_variance_experiments", corr.zero_variance}});
    reports.push_back(std::move(report));
  }
  rank::WriteRankCsv(out / "rank.csv", reports);
  rank::WriteSpectrumCsv(out / "spectrum.csv", reports);
  WriteJson(out / "summary.json", {{"metrics", summary}});
  EchoConfig(out, "rank", options.ToJson());
}

void RunFinetune(const FinetuneOptions& options) {
  Require(options.model, "model");
  const auto model = lr::LoadModel(options.model);
  const auto data = Load(options.data);
  const fs::path out = PrepareOutput(options.out);
  if (data.units.num_features() != model.params.dims.num_features) {
    throw Error(ErrorCode::kDimensionMismatch,
                "dataset has " + std::to_string(data.units.num_features()) +
                    " features, the model expects " +
                    std::to_string(model.params.dims.num_features));
  }
  if (options.experiment < 0 ||
      static_cast<std::size_t>(options.experiment) >=
          data.manifest.num_experiments) {
    throw Error(ErrorCode::kOutOfRange,
                "experiment " + std::to_string(options.experiment) +
                    " is not in the dataset");
  }
  const auto split = ParseSplitOrAll(options.split);
  std::vector<std::size_t> obs;
  if (split) {
    obs = data.ObservationsIn(*split);
  } else {
    obs.resize(data.observations.size());
    for (std::size_t i = 0; i < obs.size(); ++i) obs[i] = i;
  }
  std::vector<std::size_t> rows;
  std::vector<int> arms;
  std::vector<double> y;
  for (std::size_t idx : obs) {
    const auto& o = data.observations[idx];
    if (o.experiment != options.experiment || o.metric != options.metric) {
      continue;
    }
    rows.push_back(*data.units.RowOf(o.unit_id));
    arms.push_back(o.arm);
    y.push_back(o.value);
  }
  if (rows.empty()) {
    throw Error(ErrorCode::kEmptyCell,
                "no observations for experiment " +
                    std::to_string(options.experiment) + " metric " +
                    std::to_string(options.metric));
  }
  numerics::Matrix x(rows.size(), data.units.num_features());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = data.units.features.row(rows[i]);
    std::copy(src.begin(), src.end(), x.row(i).begin());
  }
  const int num_arms = data.manifest.arms_per_experiment[options.experiment];
  const auto result = lr::FinetuneNewExperiment(model.params, x, arms, y,
                                                num_arms, options.reg);

  const std::size_t d = model.params.dims.latent_dim;
  dataset::CsvWriter emb(out / "embeddings.csv",
                         NumberedHeader({"arm"}, "e", d));
  for (std::size_t t = 0; t < result.embeddings.rows(); ++t) {
    emb.Int(static_cast<std::int64_t>(t));
    for (double v : result.embeddings.row(t)) emb.Real(v);
    emb.EndRow();
  }
  emb.Close();

  std::vector<std::string> cate_header{"unit_id"};
  for (int t = 1; t < num_arms; ++t) {
    cate_header.push_back("cate_arm" + std::to_string(t));
  }
  dataset::CsvWriter cate(out / "cate.csv", cate_header);
  std::unordered_set<std::size_t> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!seen.insert(rows[i]).second) continue;
    cate.Int(data.units.ids[rows[i]]);
    for (int t = 1; t < num_arms; ++t) {
      cate.Real(lr::FinetunedCate(model.params, result.embeddings, x.row(i), t));
    }
    cate.EndRow();
  }
  cate.Close();

  WriteJson(out / "summary.json", {{"residual", result.residual},
                                   {"observations_per_arm", result.counts},
                                   {"reg", options.reg}});
  EchoConfig(out, "finetune", options.ToJson());
  spdlog::info("fine-tune residual {:.6g}", result.residual);
}

void RunTune(const TuneOptions& options) {
  if (options.learning_rates.empty() || options.weight_decays.empty() ||
      options.latent_dims.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "tune needs at least one learning rate, weight decay and "
                "latent dimension");
  }
  if (options.risk != "mu" && options.risk != "tau") {
    throw Error(ErrorCode::kInvalidArgument,
                "--risk must be mu or tau, got " + options.risk);
  }
  const auto data = Load(options.data);
  const fs::path out = PrepareOutput(options.out);
  const auto targets = Targets(data, "validation", false);
  eval::EvalOptions eval_options;
  eval_options.split = dataset::Split::kValidation;
  eval_options.tau_risk = options.risk == "tau";

  const std::size_t num_metrics = data.manifest.num_metrics;
  dataset::CsvWriter board(
      out / "leaderboard.csv",
      NumberedHeader({"index", "learning_rate", "weight_decay", "latent_dim",
                      "risk"},
                     "risk_metric", num_metrics));
  double best_risk = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> best_index;
  std::optional<lr::TrainResult> best;
  lr::HyperConfig best_hyper;
  std::size_t index = 0;
  for (double lr_value : options.learning_rates) {
    for (double wd : options.weight_decays) {
      for (std::size_t d : options.latent_dims) {
        lr::HyperConfig hyper = options.base;
        hyper.learning_rate = lr_value;
        hyper.weight_decay = wd;
        hyper.latent_dim = d;
        double risk = std::numeric_limits<double>::infinity();
        std::vector<double> per_metric(
            num_metrics, std::numeric_limits<double>::infinity());
        std::optional<lr::TrainResult> result;
        try {
          result = lr::Train(data, hyper);
          const auto predicted =
              lr::PredictTensor(result->params, data, targets);
          const auto report = eval::Evaluate(data, predicted, eval_options);
          for (const auto& s : report.summary) {
            per_metric[s.metric] =
                eval_options.tau_risk ? *s.tau_risk : s.mu_risk;
          }
          risk = eval_options.tau_risk ? *report.MeanTauRisk()
                                       : report.MeanMuRisk();
        } catch (const Error& e) {
          if (!e.IsNumerical()) throw;
          spdlog::warn("grid point {} failed: {}", index, e.what());
        }
        board.Int(static_cast<std::int64_t>(index))
            .Real(lr_value)
            .Real(wd)
            .Int(static_cast<std::int64_t>(d))
            .Real(risk);
        for (double v : per_metric) board.Real(v);
        board.EndRow();
        if (risk < best_risk) {
          best_risk = risk;
          best_index = index;
          best = std::move(result);
          best_hyper = hyper;
        }
        ++index;
      }
    }
  }
  board.Close();
  if (!best_index) {
    throw Error(ErrorCode::kDiverged, "every grid point failed to train");
  }
  lr::SaveModel(out / "best_model.json", best->params, best_hyper);
  WriteJson(out / "best.json", {{"index", *best_index},
                                {"risk", best_risk},
                                {"risk_kind", options.risk},
                                {"hyper", best_hyper.ToJson()}});
  EchoConfig(out, "tune", options.ToJson());
  spdlog::info("best grid point {} with {}-risk {:.6g}", *best_index,
               options.risk, best_risk);
}

}  // namespace lrhte::cli
