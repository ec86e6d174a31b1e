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

// lrhte: command-line driver for data generation, training, baselines,
// evaluation, rank diagnostics, fine-tuning and hyperparameter search.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "commands.h"
#include "lrhte/error.h"

namespace {

using lrhte::Error;
using lrhte::ErrorCode;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string FlagFor(const std::string& key) {
  std::string flag = "--" + key;
  std::replace(flag.begin(), flag.end(), '_', '-');
  return flag;
}

bool HasFlag(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Expands `--config FILE` into ordinary flags placed right after the
// subcommand. A key whose flag is also given explicitly is dropped, so
// command-line flags always win. Accepts either a flat object of option keys
// or a config.json echo written by a previous run.
std::vector<std::string> ExpandConfig(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + i, args.begin() + i + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + i);
      break;
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kNotFound, "cannot open config " + path);
  nlohmann::json config;
  try {
    config = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kSchema, "config " + path + ": " + e.what());
  }
  if (config.contains("options") && config.contains("command")) {
    config = config.at("options");
  }
  if (!config.is_object()) {
    throw Error(ErrorCode::kSchema, "config " + path + " must be an object");
  }
  std::vector<std::string> expanded;
  for (const auto& [key, value] : config.items()) {
    const std::string flag = FlagFor(key);
    if (HasFlag(args, flag)) continue;
    if (value.is_array()) {
      if (value.empty()) continue;
      expanded.push_back(flag);
      for (const auto& v : value) {
        expanded.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      }
    } else if (value.is_boolean()) {
      expanded.push_back(flag + "=" + (value.get<bool>() ? "true" : "false"));
    } else if (value.is_string()) {
      if (value.get<std::string>().empty()) continue;
      expanded.push_back(flag);
      expanded.push_back(value.get<std::string>());
    } else if (value.is_number()) {
      expanded.push_back(flag);
      expanded.push_back(value.dump());
    } else {
      throw Error(ErrorCode::kSchema, "config key " + key +
                                          " must be a number, string, "
                                          "boolean or list");
    }
  }
  // args[0] is the program, args[1] the subcommand.
  const std::size_t at = std::min<std::size_t>(2, args.size());
  args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), expanded.begin(),
              expanded.end());
  return args;
}

void AddHyperOptions(CLI::App* cmd, lrhte::lr::HyperConfig& h) {
  cmd->add_option("--learning-rate", h.learning_rate, "Adam step size")
      ->capture_default_str();
  cmd->add_option("--weight-decay", h.weight_decay,
                  "L2 penalty (coefficient / 2) on non-bias parameters")
      ->capture_default_str();
  cmd->add_option("--latent-dim", h.latent_dim, "embedding dimension d")
      ->capture_default_str();
  cmd->add_option("--hidden-dim", h.hidden_dim, "feature-network hidden width")
      ->capture_default_str();
  cmd->add_option("--epochs", h.epochs)->capture_default_str();
  cmd->add_option("--batch-size", h.batch_size,
                  "minimum observations per minibatch")
      ->capture_default_str();
  cmd->add_option("--seed", h.seed)->capture_default_str();
  cmd->add_flag("--relu,!--linear", h.relu,
                "ReLU between the two layers (--linear drops it)")
      ->capture_default_str();
  cmd->add_option("--final-lr-fraction", h.final_lr_fraction,
                  "learning rate at the end of training, as a fraction")
      ->capture_default_str();
}

int Run(int argc, char** argv) {
  CLI::App app{"Low-rank multi-experiment treatment-effect learner"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "debug logging");

  lrhte::cli::GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "synthetic low-rank data");
  generate->add_option("--out", gen.out, "dataset directory")->required();
  auto& s = gen.synth;
  generate->add_option("--n-per-arm", s.n_per_arm)->capture_default_str();
  generate->add_option("--val-per-arm", s.val_per_arm)->capture_default_str();
  generate->add_option("--test-per-arm", s.test_per_arm)->capture_default_str();
  generate->add_option("--latent-dim", s.latent_dim)->capture_default_str();
  generate->add_option("--num-features", s.num_features)->capture_default_str();
  generate->add_option("--num-experiments", s.num_experiments)
      ->capture_default_str();
  generate->add_option("--num-metrics", s.num_metrics)->capture_default_str();
  generate->add_option("--noise-sd", s.noise_sd)->capture_default_str();
  generate->add_option("--seed", s.seed)->capture_default_str();
  generate->add_flag("--truth-for-train", s.truth_for_train,
                     "store true outcomes for training units too")
      ->capture_default_str();

  lrhte::cli::SemisynthOptions semi;
  auto* semisynth =
      app.add_subcommand("semisynth", "dataset from classifier logits");
  semisynth->add_option("--out", semi.out)->required();
  semisynth->add_option("--features", semi.features, "features CSV");
  semisynth->add_option("--logits", semi.logits, "logits CSV");
  semisynth->add_option("--control-class", semi.control_class)
      ->capture_default_str();
  semisynth->add_option("--assign-prob", semi.assign_prob)
      ->capture_default_str();
  semisynth->add_option("--train-fraction", semi.train_fraction)
      ->capture_default_str();
  semisynth->add_option("--val-fraction", semi.val_fraction)
      ->capture_default_str();
  semisynth->add_option("--test-fraction", semi.test_fraction)
      ->capture_default_str();
  semisynth->add_option("--seed", semi.seed)->capture_default_str();
  semisynth->add_option("--toy-units", semi.toy_units,
                        "toy classifier size when no files are given")
      ->capture_default_str();
  semisynth->add_option("--toy-features", semi.toy_features)
      ->capture_default_str();
  semisynth->add_option("--toy-classes", semi.toy_classes)
      ->capture_default_str();
  semisynth->add_option("--toy-hidden", semi.toy_hidden)
      ->capture_default_str();

  lrhte::cli::TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "fit the LR-learner");
  train_cmd->add_option("--data", train.data)->required();
  train_cmd->add_option("--out", train.out)->required();
  AddHyperOptions(train_cmd, train.hyper);

  lrhte::cli::BaselineOptions base;
  auto* baseline = app.add_subcommand("baseline", "independent T-learners");
  baseline->add_option("--data", base.data)->required();
  baseline->add_option("--out", base.out)->required();
  baseline->add_option("--lambda", base.lambda, "ridge penalty")
      ->capture_default_str();
  baseline->add_option("--split", base.split, "units to predict")
      ->capture_default_str();

  lrhte::cli::EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "PEHE, mu-risk and tau-risk");
  eval->add_option("--data", ev.data)->required();
  eval->add_option("--out", ev.out)->required();
  eval->add_option("--model", ev.model, "LR model file");
  eval->add_option("--predictions", ev.predictions, "predicted outcome CSV");
  eval->add_option("--split", ev.split)->capture_default_str();
  eval->add_flag("--tau-risk", ev.tau_risk)->capture_default_str();
  eval->add_option("--nuisance-reg", ev.nuisance_reg)->capture_default_str();

  lrhte::cli::RankOptions rk;
  auto* rank = app.add_subcommand("rank", "ITE spectra and BCV rank");
  rank->add_option("--data", rk.data)->required();
  rank->add_option("--out", rk.out)->required();
  rank->add_option("--model", rk.model, "analyse predicted effects");
  rank->add_option("--split", rk.split)->capture_default_str();
  rank->add_option("--arm", rk.arm)->capture_default_str();
  rank->add_option("--metrics", rk.metrics, "metric ids (default all)");
  rank->add_option("--folds", rk.folds)->capture_default_str();
  rank->add_option("--max-rank", rk.max_rank, "0 picks min(20, min dim - 1)")
      ->capture_default_str();
  rank->add_option("--als-iters", rk.als_iters)->capture_default_str();
  rank->add_option("--als-reg", rk.als_reg)->capture_default_str();
  rank->add_option("--seed", rk.seed)->capture_default_str();

  lrhte::cli::FinetuneOptions ft;
  auto* finetune =
      app.add_subcommand("finetune", "embed a new experiment, network frozen");
  finetune->add_option("--model", ft.model)->required();
  finetune->add_option("--data", ft.data)->required();
  finetune->add_option("--out", ft.out)->required();
  finetune->add_option("--experiment", ft.experiment)->capture_default_str();
  finetune->add_option("--metric", ft.metric)->capture_default_str();
  finetune->add_option("--split", ft.split)->capture_default_str();
  finetune->add_option("--reg", ft.reg)->capture_default_str();

  lrhte::cli::TuneOptions tn;
  auto* tune = app.add_subcommand("tune", "grid search on validation risk");
  tune->add_option("--data", tn.data)->required();
  tune->add_option("--out", tn.out)->required();
  AddHyperOptions(tune, tn.base);
  tune->add_option("--learning-rates", tn.learning_rates)->required();
  tune->add_option("--weight-decays", tn.weight_decays)->required();
  tune->add_option("--latent-dims", tn.latent_dims)->required();
  tune->add_option("--risk", tn.risk, "mu or tau")->capture_default_str();

  std::vector<std::string> args(argv, argv + argc);
  args = ExpandConfig(std::move(args));
  std::vector<const char*> cargs;
  for (const auto& a : args) cargs.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  spdlog::set_default_logger(spdlog::default_logger());
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);

  if (generate->parsed()) lrhte::cli::RunGenerate(gen);
  if (semisynth->parsed()) lrhte::cli::RunSemisynth(semi);
  if (train_cmd->parsed()) lrhte::cli::RunTrain(train);
  if (baseline->parsed()) lrhte::cli::RunBaseline(base);
  if (eval->parsed()) lrhte::cli::RunEval(ev);
  if (rank->parsed()) lrhte::cli::RunRank(rk);
  if (finetune->parsed()) lrhte::cli::RunFinetune(ft);
  if (tune->parsed()) lrhte::cli::RunTune(tn);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.IsNumerical() ? kExitNumerical : kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
}
