/*
 * Copyright 2026 The flowshap Authors.
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

#pragma once

#include <memory>

#include "flowshap/gbt.hpp"
#include "flowshap/mlp.hpp"
#include "flowshap/shapley.hpp"

namespace flowshap {

// Batched prediction closures that own a copy of the model.
inline shap::PredictFn as_predictor(const mlp::MlpModel& model) {
  auto owned = std::make_shared<const mlp::MlpModel>(model);
  return [owned](const Matrix& rows) { return mlp::predict(*owned, rows); };
}

inline shap::PredictFn as_predictor(const gbt::GbtModel& model) {
  auto owned = std::make_shared<const gbt::GbtModel>(model);
  return [owned](const Matrix& rows) { return gbt::predict(*owned, rows); };
}

}  // namespace flowshap
