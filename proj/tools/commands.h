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

#ifndef LRHTE_TOOLS_COMMANDS_H_
#define LRHTE_TOOLS_COMMANDS_H_

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lrhte/dataset/dataset.h"
#include "lrhte/lr/params.h"
#include "lrhte/synth/semisynthetic.h"
#include "lrhte/synth/synthetic.h"

namespace lrhte::cli {

// Every command writes config.json (this echo plus the command name) into its
// output directory, so a run can be repeated from its own outputs.
inline constexpr const char* kConfigEcho = "config.json";

struct GenerateOptions {
  std::string out;
  synth::SynthConfig synth;
  nlohmann::json ToJson() const;
};

struct SemisynthOptions {
  std::string out;
  std::string features;  // CSV, one row per unit
  std::string logits;    // CSV, one column per class
  int control_class = 0;
  double assign_prob = 0.1;
  double train_fraction = 0.8;
  double val_fraction = 0.1;
  double test_fraction = 0.1;
  std::uint64_t seed = 0;
  // When features/logits are empty, a toy classifier supplies them.
  std::size_t toy_units = 5000;
  std::size_t toy_features = 32;
  std::size_t toy_classes = 20;
  std::size_t toy_hidden = 16;
  nlohmann::json ToJson() const;
};

struct TrainOptions {
  std::string data;
  std::string out;
  lr::HyperConfig hyper;
  nlohmann::json ToJson() const;
};

struct BaselineOptions {
  std::string data;
  std::string out;
  double lambda = 1e-6;
  std::string split = "test";  // units to predict; "all" for every unit
  nlohmann::json ToJson() const;
};

struct EvalOptions {
  std::string data;
  std::string out;
  std::string model;        // LR model file, or
  std::string predictions;  // a predicted-outcome CSV
  std::string split = "test";
  bool tau_risk = false;
  double nuisance_reg = 1e-6;
  nlohmann::json ToJson() const;
};

struct RankOptions {
  std::string data;
  std::string out;
  std::string model;  // slice LR predictions instead of the true outcomes
  std::string split = "test";
  int arm = 1;
  std::vector<int> metrics;  // empty: every metric
  std::size_t folds = 5;
  std::size_t max_rank = 0;
  std::size_t als_iters = 200;
  double als_reg = 1e-6;
  std::uint64_t seed = 0;
  nlohmann::json ToJson() const;
};

struct FinetuneOptions {
  std::string model;
  std::string data;  // dataset holding the new experiment
  std::string out;
  int experiment = 0;
  int metric = 0;
  std::string split = "train";
  double reg = 1e-8;
  nlohmann::json ToJson() const;
};

struct TuneOptions {
  std::string data;
  std::string out;
  lr::HyperConfig base;
  std::vector<double> learning_rates;
  std::vector<double> weight_decays;
  std::vector<std::size_t> latent_dims;
  std::string risk = "mu";  // or "tau"
  nlohmann::json ToJson() const;
};

void RunGenerate(const GenerateOptions& options);
void RunSemisynth(const SemisynthOptions& options);
void RunTrain(const TrainOptions& options);
void RunBaseline(const BaselineOptions& options);
void RunEval(const EvalOptions& options);
void RunRank(const RankOptions& options);
void RunFinetune(const FinetuneOptions& options);
void RunTune(const TuneOptions& options);

// "train" / "validation" (or "val") / "test"; "all" maps to no split.
std::optional<dataset::Split> ParseSplitOrAll(const std::string& name);

}  // namespace lrhte::cli

#endif  // LRHTE_TOOLS_COMMANDS_H_
