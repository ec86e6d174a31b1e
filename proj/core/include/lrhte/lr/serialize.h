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

#ifndef LRHTE_LR_SERIALIZE_H_
#define LRHTE_LR_SERIALIZE_H_

#include <filesystem>

#include <nlohmann/json.hpp>

#include "lrhte/lr/params.h"

namespace lrhte::lr {

inline constexpr const char* kModelFormat = "lrhte-model";
inline constexpr int kModelVersion = 1;

struct SavedModel {
  LRParams params;
  HyperConfig hyper;
};

// JSON container: format tag, version, dimensions, hyperparameter echo and
// every parameter block by name. Doubles are written in shortest round-trip
// form, so a save/load cycle is bit-exact.
nlohmann::json ModelToJson(const LRParams& params, const HyperConfig& hyper);
// Throws kVersionMismatch for a foreign format or version and kCorruptFile
// for anything structurally wrong.
SavedModel ModelFromJson(const nlohmann::json& j);

void SaveModel(const std::filesystem::path& path, const LRParams& params,
               const HyperConfig& hyper);
SavedModel LoadModel(const std::filesystem::path& path);

}  // namespace lrhte::lr

#endif  // LRHTE_LR_SERIALIZE_H_
