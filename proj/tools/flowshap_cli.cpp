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

// Command-line front end. Every subcommand accepts the same kebab-case
// settings as the JSON config; flags override values from --config.

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "flowshap/flowshap.h"
#include "json.hpp"

namespace {

enum class Kind { kString, kCount, kNumber, kStrings, kCounts };

struct Flag {
  const char* key;
  Kind kind;
  const char* help;
};

const Flag kFlags[] = {
    {"scenario", Kind::kString, "one-to-one or one-to-all"},
    {"input", Kind::kString, "input CSV"},
    {"output-dir", Kind::kString, "directory for artifacts"},
    {"seed", Kind::kCount, "root random seed"},
    {"attack-fraction", Kind::kNumber, "fraction of malicious rows kept, in (0, 1]"},
    {"test-fraction", Kind::kNumber, "fraction of rows held out, in (0, 1)"},
    {"top-k", Kind::kCount, "number of selected features"},
    {"label-column", Kind::kString, "name of the label column"},
    {"benign-label", Kind::kString, "label value of benign rows"},
    {"attack-label", Kind::kString, "attack label for the one-to-one scenario"},
    {"drop-columns", Kind::kStrings, "columns removed before modelling"},
    {"mlp-hidden", Kind::kCounts, "hidden layer sizes"},
    {"mlp-activation", Kind::kString, "relu or logistic"},
    {"mlp-optimizer", Kind::kString, "sgd or adam"},
    {"mlp-epochs", Kind::kCount, "training epochs"},
    {"mlp-batch-size", Kind::kCount, "minibatch size"},
    {"mlp-learning-rate", Kind::kNumber, "step size"},
    {"gbt-trees", Kind::kCount, "boosting rounds"},
    {"gbt-max-depth", Kind::kCount, "tree depth"},
    {"gbt-learning-rate", Kind::kNumber, "shrinkage"},
    {"gbt-lambda", Kind::kNumber, "L2 penalty on leaves"},
    {"gbt-subsample", Kind::kNumber, "row fraction per tree"},
    {"permutation-metric", Kind::kString, "accuracy or auc"},
    {"permutation-repeats", Kind::kCount, "shuffles per feature"},
    {"selection-rows", Kind::kCount, "rows explained for the SHAP ranking"},
    {"selection-background", Kind::kCount, "background rows for the SHAP ranking"},
    {"shap-background", Kind::kCount, "background rows for explanations"},
    {"shap-samples", Kind::kCount, "coalition budget (0 = enumerate)"},
    {"explain-rows", Kind::kCount, "test rows explained globally"},
    {"preset", Kind::kString, "synthetic preset (ddos-like)"},
    {"spec", Kind::kString, "synthetic spec JSON"},
    {"n-benign", Kind::kCount, "synthetic benign rows"},
    {"n-attack", Kind::kCount, "synthetic attack rows"},
    {"out", Kind::kString, "synthetic CSV output path"},
    {"model", Kind::kString, "model JSON"},
    {"scaler", Kind::kString, "scaler JSON"},
    {"csv", Kind::kString, "CSV holding the explained row"},
    {"row", Kind::kCount, "data row index in --csv"},
    {"background", Kind::kString, "background CSV (scaled)"},
};

struct Values {
  std::string config;
  bool json_output = false;
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::string>> lists;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::uint64_t to_count(const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("--" + key + " expects a non-negative integer, got '" + text + "'");
  }
  return v;
}

double to_number(const std::string& key, const std::string& text) {
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw UsageError("--" + key + " expects a number, got '" + text + "'");
  }
  return v;
}

nlohmann::json build_config(const Values& values, CLI::App* sub) {
  nlohmann::json doc = nlohmann::json::object();
  if (!values.config.empty()) {
    std::ifstream in(values.config);
    if (!in) throw UsageError("cannot open config file: " + values.config);
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config file " + values.config + ": " + e.what());
    }
    if (!doc.is_object()) throw UsageError("config file must hold a JSON object");
  }
  for (const Flag& flag : kFlags) {
    if (sub->count("--" + std::string(flag.key)) == 0) continue;
    switch (flag.kind) {
      case Kind::kString:
        doc[flag.key] = values.scalars.at(flag.key);
        break;
      case Kind::kCount:
        doc[flag.key] = to_count(flag.key, values.scalars.at(flag.key));
        break;
      case Kind::kNumber:
        doc[flag.key] = to_number(flag.key, values.scalars.at(flag.key));
        break;
      case Kind::kStrings:
        doc[flag.key] = values.lists.at(flag.key);
        break;
      case Kind::kCounts: {
        nlohmann::json list = nlohmann::json::array();
        for (const auto& item : values.lists.at(flag.key)) list.push_back(to_count(flag.key, item));
        doc[flag.key] = std::move(list);
        break;
      }
    }
  }
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flow classification with Shapley explanations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(flowshap_version()));

  const std::map<std::string, std::string> descriptions = {
      {"synth", "generate a labelled synthetic flow CSV"},
      {"preprocess", "clean, encode, subsample, split and scale the input"},
      {"select-features", "rank features three ways and keep the most frequent top-k"},
      {"train", "train the classifier on the selected features"},
      {"evaluate", "score the held-out split"},
      {"explain-global", "explain test rows; summary, bar and dependence plots"},
      {"explain-local", "force plot for one row of a CSV"},
      {"pipeline", "run every stage in order"},
  };
  std::map<std::string, Values> values;
  for (const auto& [name, description] : descriptions) {
    Values& v = values[name];
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", v.config, "JSON file of settings");
    sub->add_flag("--json", v.json_output, "print the result as JSON");
    for (const Flag& flag : kFlags) {
      const std::string opt = "--" + std::string(flag.key);
      if (flag.kind == Kind::kStrings || flag.kind == Kind::kCounts) {
        sub->add_option(opt, v.lists[flag.key], flag.help)->delimiter(',');
      } else {
        sub->add_option(opt, v.scalars[flag.key], flag.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (CLI::App* sub : app.get_subcommands()) {
    const std::string name = sub->get_name();
    const Values& v = values.at(name);
    std::string config;
    try {
      config = build_config(v, sub).dump();
    } catch (const UsageError& e) {
      std::cerr << "flowshap: error [config]: " << e.what() << '\n';
      return 2;
    }

    char* result = nullptr;
    const flowshap_status status = flowshap_run(name.c_str(), config.c_str(), &result);
    if (status != FLOWSHAP_OK) {
      const std::string stage = flowshap_last_error_stage();
      std::cerr << "flowshap: error [" << (stage.empty() ? name : stage) << "]: " << flowshap_last_error() << '\n';
      return flowshap_exit_code(status);
    }
    const nlohmann::json doc = nlohmann::json::parse(result);
    flowshap_string_free(result);
    if (v.json_output) {
      std::cout << doc.dump(2) << '\n';
    } else {
      for (const auto& path : doc.at("artifacts")) std::cout << path.get<std::string>() << '\n';
    }
  }
  return 0;
}
