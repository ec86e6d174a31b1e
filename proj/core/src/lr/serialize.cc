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

#include "lrhte/lr/serialize.h"

#include <fstream>
#include <sstream>
#include <string>

#include "lrhte/error.h"

namespace lrhte::lr {
namespace {

nlohmann::json DimsToJson(const ModelDims& d) {
  return {{"num_features", d.num_features},
          {"hidden_dim", d.hidden_dim},
          {"latent_dim", d.latent_dim},
          {"num_metrics", d.num_metrics},
          {"arms_per_experiment", d.arms_per_experiment},
          {"relu", d.relu}};
}

ModelDims DimsFromJson(const nlohmann::json& j) {
  ModelDims d;
  d.num_features = j.at("num_features").get<std::size_t>();
  d.hidden_dim = j.at("hidden_dim").get<std::size_t>();
  d.latent_dim = j.at("latent_dim").get<std::size_t>();
  d.num_metrics = j.at("num_metrics").get<std::size_t>();
  d.arms_per_experiment = j.at("arms_per_experiment").get<std::vector<int>>();
  d.relu = j.at("relu").get<bool>();
  return d;
}

}  // namespace

nlohmann::json ModelToJson(const LRParams& params, const HyperConfig& hyper) {
  nlohmann::json blocks = nlohmann::json::object();
  // Blocks() hands out mutable spans; nothing is written through them here.
  for (const auto& b : Blocks(const_cast<LRParams&>(params))) {
    blocks[b.name] = std::vector<double>(b.values.begin(), b.values.end());
  }
  return {{"format", kModelFormat},
          {"version", kModelVersion},
          {"dims", DimsToJson(params.dims)},
          {"hyper", hyper.ToJson()},
          {"blocks", std::move(blocks)}};
}

SavedModel ModelFromJson(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", std::string()) != kModelFormat) {
    throw Error(ErrorCode::kVersionMismatch, "not an lrhte model file");
  }
  const int version = j.value("version", -1);
  if (version != kModelVersion) {
    throw Error(ErrorCode::kVersionMismatch,
                "model version " + std::to_string(version) +
                    " is not supported (expected " +
                    std::to_string(kModelVersion) + ")");
  }
  SavedModel out;
  try {
    out.hyper = HyperConfig::FromJson(j.at("hyper"));
    out.params = LRParams::Zeros(DimsFromJson(j.at("dims")));
    const auto& blocks = j.at("blocks");
    for (auto& b : Blocks(out.params)) {
      const auto values = blocks.at(b.name).get<std::vector<double>>();
      if (values.size() != b.values.size()) {
        throw Error(ErrorCode::kCorruptFile,
                    "block " + b.name + " has " +
                        std::to_string(values.size()) + " values, expected " +
                        std::to_string(b.values.size()));
      }
      std::copy(values.begin(), values.end(), b.values.begin());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kCorruptFile,
                std::string("malformed model file: ") + e.what());
  }
  out.params.Validate();
  if (!out.params.AllFinite()) {
    throw Error(ErrorCode::kCorruptFile, "model file holds non-finite values");
  }
  return out;
}

void SaveModel(const std::filesystem::path& path, const LRParams& params,
               const HyperConfig& hyper) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot write " + path.string());
  }
  out << ModelToJson(params, hyper).dump() << '\n';
  if (!out) {
    throw Error(ErrorCode::kIo, "write failed for " + path.string());
  }
}

SavedModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kNotFound, "cannot open " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(buffer.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kCorruptFile,
                path.string() + " is not a complete model file: " + e.what());
  }
  return ModelFromJson(j);
}

}  // namespace lrhte::lr
