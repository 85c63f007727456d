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
#include <string>
#include <string_view>
#include <vector>

#include "flowshap/explain_viz.hpp"
#include "flowshap/mlp.hpp"
#include "flowshap/shapley.hpp"
#include "json.hpp"

namespace flowshap::pipeline {

enum class Scenario { kOneToOne, kOneToAll };

std::string_view to_string(Scenario s);
Scenario parse_scenario(std::string_view name);

// Settings for every command. JSON and command-line names are the
// kebab-case forms of the field names (attack_fraction -> attack-fraction).
struct RunConfig {
  Scenario scenario = Scenario::kOneToAll;
  std::string input;
  std::string output_dir = "flowshap-out";
  std::uint64_t seed = 42;
  double attack_fraction = 1.0;
  double test_fraction = 0.2;
  std::size_t top_k = 20;
  std::string label_column = "Label";
  std::string benign_label = "BENIGN";
  std::string attack_label;  // one-to-one target; may be omitted when unique
  std::vector<std::string> drop_columns;  // defaults to default_drop_columns()

  std::vector<std::size_t> mlp_hidden{23, 15, 10};
  std::string mlp_activation = "relu";
  std::string mlp_optimizer = "adam";
  std::size_t mlp_epochs = 40;
  std::size_t mlp_batch_size = 32;
  double mlp_learning_rate = 0.005;

  std::size_t gbt_trees = 50;
  std::size_t gbt_max_depth = 4;
  double gbt_learning_rate = 0.3;
  double gbt_lambda = 1.0;
  double gbt_subsample = 1.0;

  std::string permutation_metric = "accuracy";
  std::size_t permutation_repeats = 5;
  std::size_t selection_rows = 50;        // rows explained for the SHAP ranking
  std::size_t selection_background = 25;  // background rows for the SHAP ranking

  std::size_t shap_background = 100;
  std::size_t shap_samples = 2048;  // 0 enumerates all coalitions when p <= 15
  std::size_t explain_rows = 20;

  // synth
  std::string preset = "ddos-like";
  std::string spec;
  std::size_t n_benign = 1000;
  std::size_t n_attack = 1000;
  std::string out;

  // explain-local
  std::string model;
  std::string scaler;
  std::string csv;
  std::size_t row = 0;
  std::string background;

  void validate() const;
  const std::vector<std::string>& effective_drop_columns() const;
};

// Unknown keys and ill-typed values are input errors.
RunConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& config);

struct CommandResult {
  std::vector<std::string> artifacts;  // paths, in write order
  nlohmann::json summary = nlohmann::json::object();
};

CommandResult cmd_synth(const RunConfig& config);
CommandResult cmd_preprocess(const RunConfig& config);
CommandResult cmd_select_features(const RunConfig& config);
CommandResult cmd_train(const RunConfig& config);
CommandResult cmd_evaluate(const RunConfig& config);
CommandResult cmd_explain_global(const RunConfig& config);
CommandResult cmd_explain_local(const RunConfig& config);
CommandResult cmd_pipeline(const RunConfig& config);

// Dispatch by subcommand name.
CommandResult run_command(std::string_view name, const RunConfig& config);
const std::vector<std::string>& command_names();

// One of malicious_predicted_malicious, benign_predicted_malicious,
// benign_predicted_benign, malicious_predicted_benign. `score` is P(benign).
std::string outcome_label(int label, double score);

}  // namespace flowshap::pipeline
