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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowshap/dataio.hpp"
#include "json.hpp"

namespace flowshap::mlp {

enum class Activation { kRelu, kLogistic };
enum class Optimizer { kSgd, kAdam };

std::string_view to_string(Activation a);
std::string_view to_string(Optimizer o);
Activation parse_activation(std::string_view name);
Optimizer parse_optimizer(std::string_view name);

// Feed-forward binary classifier: hidden layers with `hidden_activation`,
// a single logistic output unit giving P(label == 1).
struct MlpModel {
  std::vector<std::size_t> layer_sizes;  // input, hidden..., 1
  std::vector<Matrix> weights;           // layer l: layer_sizes[l+1] x layer_sizes[l]
  std::vector<Vector> biases;            // layer l: layer_sizes[l+1]
  Activation hidden_activation = Activation::kRelu;
  std::vector<std::string> feature_names;  // optional; empty when unknown

  std::size_t input_dim() const { return layer_sizes.empty() ? 0 : layer_sizes.front(); }
  std::size_t num_parameters() const;
  // Shape chain, unit output layer, finite parameters.
  void validate() const;
};

struct TrainConfig {
  std::size_t epochs = 100;
  std::size_t batch_size = 32;
  double learning_rate = 0.01;
  std::uint64_t seed = 0;
  Optimizer optimizer = Optimizer::kSgd;

  void validate() const;
};

struct TrainResult {
  MlpModel model;
  std::vector<double> loss_history;  // full-data loss after each epoch
};

// Gradients of the mean loss, laid out like the model parameters.
struct Gradients {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;
};

// Probabilities are clamped to [kProbFloor, 1 - kProbFloor] inside the loss.
inline constexpr double kProbFloor = 1e-7;

// Glorot-uniform weights (bound sqrt(6 / (fan_in + fan_out))), zero biases.
MlpModel init(std::size_t input_dim, std::span<const std::size_t> hidden_sizes, std::uint64_t seed,
              Activation hidden_activation = Activation::kRelu);

double forward(const MlpModel& model, std::span<const double> x);
// Row-wise forward; each row goes through the same code path as forward().
std::vector<double> predict(const MlpModel& model, const Matrix& rows);
std::vector<double> predict_batch(const MlpModel& model, const FlowTable& table);

// Mean binary cross-entropy over the rows.
double loss(const MlpModel& model, const Matrix& rows, std::span<const int> labels);
Gradients loss_gradient(const MlpModel& model, const Matrix& rows, std::span<const int> labels);

TrainResult train(MlpModel model, const FlowTable& data, const TrainConfig& config);

// Largest |g_a - g_n| / max(|g_a| + |g_n|, 1e-8) over all parameters, where
// g_n is the central difference with step `epsilon` in [1e-7, 1e-3].
double gradient_check(const MlpModel& model, std::span<const double> x, int y, double epsilon);

nlohmann::json to_json(const MlpModel& model);
MlpModel model_from_json(const nlohmann::json& doc);
void save_model(const MlpModel& model, const std::filesystem::path& path);
MlpModel load_model(const std::filesystem::path& path);

}  // namespace flowshap::mlp
