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
#include <vector>

#include "flowshap/dataio.hpp"
#include "json.hpp"

namespace flowshap::gbt {

struct Node {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;  // x[feature] < threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output (margin units, before shrinkage)
  double gain = 0.0;   // split gain for internal nodes

  bool is_leaf() const { return feature < 0; }
};

// Nodes in creation order; nodes[0] is the root.
struct Tree {
  std::vector<Node> nodes;

  double predict(std::span<const double> x) const;
  std::size_t depth() const;
};

struct GbtConfig {
  std::size_t n_trees = 50;
  std::size_t max_depth = 4;
  double learning_rate = 0.3;
  double lambda = 1.0;     // L2 penalty on leaf values
  double gamma = 0.0;      // minimum gain to split
  double subsample = 1.0;  // row fraction per tree, drawn with `seed`
  std::uint64_t seed = 0;

  void validate() const;
};

struct GbtModel {
  std::vector<Tree> trees;
  double learning_rate = 0.3;
  double base_score = 0.0;  // log-odds prior of label 1
  std::size_t num_features = 0;
  std::size_t max_depth = 0;
  std::vector<std::string> feature_names;

  double margin(std::span<const double> x) const;
  void validate() const;
};

// Second-order boosting on the logistic loss with exact greedy splits over
// midpoints of sorted distinct values.
//   gain = 1/2 [G_L^2/(H_L+lambda) + G_R^2/(H_R+lambda) - G^2/(H+lambda)]
//   leaf = -G / (H + lambda)
GbtModel train_gbt(const FlowTable& data, const GbtConfig& config);
GbtModel train_gbt(const FlowTable& data, std::size_t n_trees, std::size_t max_depth, double learning_rate,
                   std::uint64_t seed);

// sigmoid(base_score + learning_rate * sum of tree outputs)
double gbt_predict(const GbtModel& model, std::span<const double> x);
std::vector<double> predict(const GbtModel& model, const Matrix& rows);

// Total split gain per feature, summed over every node of every tree.
std::vector<double> gain_importance(const GbtModel& model);

double log_loss(const GbtModel& model, const FlowTable& data);

nlohmann::json to_json(const GbtModel& model);
GbtModel model_from_json(const nlohmann::json& doc);
void save_model(const GbtModel& model, const std::filesystem::path& path);
GbtModel load_model(const std::filesystem::path& path);

}  // namespace flowshap::gbt
