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

#include "flowshap/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "flowshap/dataio.hpp"
#include "flowshap/error.hpp"
#include "flowshap/featsel.hpp"
#include "flowshap/gbt.hpp"
#include "flowshap/io.hpp"
#include "flowshap/metrics.hpp"
#include "flowshap/predictor.hpp"
#include "flowshap/rng.hpp"
#include "flowshap/synthgen.hpp"

namespace flowshap::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kTrainCsv = "train.csv";
constexpr const char* kTestCsv = "test.csv";
constexpr const char* kBackgroundCsv = "background.csv";
constexpr const char* kScaler = "scaler.json";
constexpr const char* kSelection = "selection.json";
constexpr const char* kModel = "model_mlp.json";

// ---------------------------------------------------------------------------
// Config parsing

[[noreturn]] void bad_value(std::string_view key, std::string_view expected) {
  fail(ErrorCode::kInvalidArgument, "config key '" + std::string(key) + "' must be " + std::string(expected));
}

std::string as_string(const json& v, std::string_view key) {
  if (!v.is_string()) bad_value(key, "a string");
  return v.get<std::string>();
}

std::size_t as_count(const json& v, std::string_view key) {
  if (!v.is_number_unsigned()) bad_value(key, "a non-negative integer");
  return v.get<std::size_t>();
}

double as_number(const json& v, std::string_view key) {
  if (!v.is_number()) bad_value(key, "a number");
  return v.get<double>();
}

std::vector<std::string> as_strings(const json& v, std::string_view key) {
  if (!v.is_array()) bad_value(key, "an array of strings");
  std::vector<std::string> out;
  for (const auto& item : v) out.push_back(as_string(item, key));
  return out;
}

std::vector<std::size_t> as_counts(const json& v, std::string_view key) {
  if (!v.is_array()) bad_value(key, "an array of integers");
  std::vector<std::size_t> out;
  for (const auto& item : v) out.push_back(as_count(item, key));
  return out;
}

using Setter = std::function<void(RunConfig&, const json&, std::string_view)>;

template <typename T>
Setter set_field(T RunConfig::*field) {
  return [field](RunConfig& c, const json& v, std::string_view key) {
    if constexpr (std::is_same_v<T, std::string>) {
      c.*field = as_string(v, key);
    } else if constexpr (std::is_same_v<T, std::size_t>) {
      c.*field = as_count(v, key);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      c.*field = as_count(v, key);
    } else if constexpr (std::is_same_v<T, double>) {
      c.*field = as_number(v, key);
    } else if constexpr (std::is_same_v<T, std::vector<std::string>>) {
      c.*field = as_strings(v, key);
    } else {
      c.*field = as_counts(v, key);
    }
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"scenario", [](RunConfig& c, const json& v, std::string_view k) { c.scenario = parse_scenario(as_string(v, k)); }},
      {"input", set_field(&RunConfig::input)},
      {"output-dir", set_field(&RunConfig::output_dir)},
      {"seed", set_field(&RunConfig::seed)},
      {"attack-fraction", set_field(&RunConfig::attack_fraction)},
      {"test-fraction", set_field(&RunConfig::test_fraction)},
      {"top-k", set_field(&RunConfig::top_k)},
      {"label-column", set_field(&RunConfig::label_column)},
      {"benign-label", set_field(&RunConfig::benign_label)},
      {"attack-label", set_field(&RunConfig::attack_label)},
      {"drop-columns", set_field(&RunConfig::drop_columns)},
      {"mlp-hidden", set_field(&RunConfig::mlp_hidden)},
      {"mlp-activation", set_field(&RunConfig::mlp_activation)},
      {"mlp-optimizer", set_field(&RunConfig::mlp_optimizer)},
      {"mlp-epochs", set_field(&RunConfig::mlp_epochs)},
      {"mlp-batch-size", set_field(&RunConfig::mlp_batch_size)},
      {"mlp-learning-rate", set_field(&RunConfig::mlp_learning_rate)},
      {"gbt-trees", set_field(&RunConfig::gbt_trees)},
      {"gbt-max-depth", set_field(&RunConfig::gbt_max_depth)},
      {"gbt-learning-rate", set_field(&RunConfig::gbt_learning_rate)},
      {"gbt-lambda", set_field(&RunConfig::gbt_lambda)},
      {"gbt-subsample", set_field(&RunConfig::gbt_subsample)},
      {"permutation-metric", set_field(&RunConfig::permutation_metric)},
      {"permutation-repeats", set_field(&RunConfig::permutation_repeats)},
      {"selection-rows", set_field(&RunConfig::selection_rows)},
      {"selection-background", set_field(&RunConfig::selection_background)},
      {"shap-background", set_field(&RunConfig::shap_background)},
      {"shap-samples", set_field(&RunConfig::shap_samples)},
      {"explain-rows", set_field(&RunConfig::explain_rows)},
      {"preset", set_field(&RunConfig::preset)},
      {"spec", set_field(&RunConfig::spec)},
      {"n-benign", set_field(&RunConfig::n_benign)},
      {"n-attack", set_field(&RunConfig::n_attack)},
      {"out", set_field(&RunConfig::out)},
      {"model", set_field(&RunConfig::model)},
      {"scaler", set_field(&RunConfig::scaler)},
      {"csv", set_field(&RunConfig::csv)},
      {"row", set_field(&RunConfig::row)},
      {"background", set_field(&RunConfig::background)},
  };
  return table;
}

// ---------------------------------------------------------------------------
// Artifact bookkeeping

// Writes files under the output directory and keeps manifest.json in sync.
class Artifacts {
 public:
  explicit Artifacts(const std::string& dir) : dir_(dir) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    require(!ec && fs::is_directory(dir_), ErrorCode::kInvalidArgument,
            "output directory is not writable: " + dir_.string());
  }

  fs::path path(std::string_view name) const { return dir_ / fs::path(std::string(name)); }

  void json_file(const std::string& name, const json& doc) {
    write_json(path(name), doc);
    added(name);
  }
  void text_file(const std::string& name, std::string_view content) {
    write_file(path(name), content);
    added(name);
  }
  void added(const std::string& name) {
    if (std::find(names_.begin(), names_.end(), name) == names_.end()) names_.push_back(name);
  }

  CommandResult finish(json summary) {
    std::map<std::string, json> entries;
    const fs::path manifest = path(kManifest);
    if (fs::exists(manifest)) {
      const json old = read_json(manifest);
      if (old.contains("artifacts")) {
        for (const auto& e : old.at("artifacts")) entries[e.at("path").get<std::string>()] = e;
      }
    }
    for (const auto& name : names_) entries[name] = json::object();
    json list = json::array();
    for (auto& [name, entry] : entries) {
      if (!fs::exists(path(name))) continue;
      const std::string content = read_file(path(name));
      list.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
    }
    write_json(manifest, {{"artifacts", std::move(list)}});

    CommandResult result;
    for (const auto& name : names_) result.artifacts.push_back(path(name).string());
    result.artifacts.push_back(manifest.string());
    result.summary = std::move(summary);
    return result;
  }

 private:
  fs::path dir_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Prepared tables: scaled features plus the original class label per row.

struct Prepared {
  FlowTable table;
  std::vector<std::string> classes;
};

Prepared subset(const Prepared& d, std::span<const std::size_t> rows) {
  Prepared out;
  out.table = select_rows(d.table, rows);
  for (std::size_t r : rows) out.classes.push_back(d.classes[r]);
  return out;
}

void write_prepared(const Prepared& d, const std::string& label_column, Artifacts& out, const std::string& name) {
  std::vector<RawColumn> columns;
  for (std::size_t j = 0; j < d.table.num_features(); ++j) {
    RawColumn col;
    col.name = d.table.feature_names[j];
    const auto values = d.table.features.col(static_cast<Eigen::Index>(j));
    col.numbers.assign(values.begin(), values.end());
    columns.push_back(std::move(col));
  }
  RawColumn labels;
  labels.name = label_column;
  labels.is_text = true;
  labels.text = d.classes;
  columns.push_back(std::move(labels));
  write_csv(RawTable(std::move(columns), label_column), out.path(name));
  out.added(name);
}

Prepared load_prepared(const fs::path& path, const RunConfig& c) {
  const RawTable raw = load_csv(path, c.label_column);
  return {encode_labels(raw, c.benign_label), raw.labels().text};
}

// Numeric columns `names` of every row of `raw`; all cells must be finite.
Matrix numeric_columns(const RawTable& raw, std::span<const std::string> names, std::span<const std::size_t> rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(names.size()));
  for (std::size_t j = 0; j < names.size(); ++j) {
    const std::size_t col = raw.find_column(names[j]);
    require(col != RawTable::npos, ErrorCode::kInvalidArgument, "CSV lacks model feature: " + names[j]);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require(raw.kind(rows[i], col) == CellKind::kNumber, ErrorCode::kInvalidArgument,
              "row " + std::to_string(rows[i]) + " has no finite value for " + names[j]);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = raw.columns()[col].numbers[rows[i]];
    }
  }
  return out;
}

// Up to `size` row indices of `n`, uniformly without replacement, ascending.
std::vector<std::size_t> sample_indices(std::size_t n, std::size_t size, std::uint64_t seed) {
  std::vector<std::size_t> rows(n);
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (size < n) {
    Rng rng(seed);
    rng.shuffle(std::span(rows));
    rows.resize(size);
    std::sort(rows.begin(), rows.end());
  }
  return rows;
}

std::string file_tag(std::string_view text) {
  std::string out;
  for (char ch : text) out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-') ? ch : '_';
  return out;
}

// Coalition budget for `p` features: 0 (enumeration) is kept when allowed,
// a sampled budget is raised to the p + 2 minimum.
shap::KernelShapOptions shap_options(const RunConfig& c, std::size_t p, std::uint64_t seed) {
  shap::KernelShapOptions options;
  options.seed = seed;
  if (c.shap_samples == 0) {
    require(p <= shap::kMaxEnumeratedPlayers, ErrorCode::kInvalidArgument,
            "shap-samples 0 needs at most " + std::to_string(shap::kMaxEnumeratedPlayers) + " features, have " +
                std::to_string(p));
    options.n_samples = 0;
  } else {
    options.n_samples = std::max(c.shap_samples, p + 2);
  }
  return options;
}

std::vector<std::string> read_selection(const fs::path& path) {
  const json doc = read_json(path);
  try {
    return doc.at("selected_features").get<std::vector<std::string>>();
  } catch (const json::exception& ex) {
    fail(ErrorCode::kParse, "selection: " + std::string(ex.what()));
  }
}

// ---------------------------------------------------------------------------
// Stages

struct Split {
  Prepared train;
  Prepared test;
};

RawTable select_scenario(const RawTable& raw, const RunConfig& c) {
  std::vector<std::string> attacks;
  for (const auto& label : distinct_labels(raw)) {
    if (label != c.benign_label) attacks.push_back(label);
  }
  if (c.scenario == Scenario::kOneToAll) return raw;
  std::string target = c.attack_label;
  if (target.empty()) {
    if (attacks.size() != 1) {
      std::string listed;
      for (const auto& a : attacks) listed += (listed.empty() ? "" : ", ") + a;
      fail(ErrorCode::kInvalidArgument, "one-to-one scenario needs attack-label; attack labels present: " + listed);
    }
    target = attacks.front();
  }
  require(std::find(attacks.begin(), attacks.end(), target) != attacks.end(), ErrorCode::kInvalidArgument,
          "attack label not present in the data: " + target);
  const std::vector<std::string> keep{target};
  return filter_labels(raw, c.benign_label, keep);
}

Split preprocess(const RunConfig& c, Artifacts& out, json& summary) {
  RawTable raw = in_stage("load", [&] {
    require(!c.input.empty(), ErrorCode::kInvalidArgument, "no input CSV given");
    return load_csv(c.input, c.label_column);
  });
  summary["rows_loaded"] = raw.num_rows();
  raw = in_stage("clean", [&] { return clean(select_scenario(raw, c), c.effective_drop_columns()); });
  summary["rows_clean"] = raw.num_rows();

  Prepared all = in_stage("encode", [&] { return Prepared{encode_labels(raw, c.benign_label), raw.labels().text}; });
  all = in_stage("subsample", [&] {
    const auto rows = balance_subsample_rows(all.table, c.attack_fraction, derive_seed(c.seed, "subsample"));
    return subset(all, rows);
  });
  summary["rows_subsampled"] = all.table.num_rows();

  Split parts = in_stage("split", [&] {
    const SplitResult s = split(all.table, c.test_fraction, derive_seed(c.seed, "split"));
    return Split{subset(all, s.train_rows), subset(all, s.test_rows)};
  });
  in_stage("scale", [&] {
    const ScalerParams scaler = fit_scaler(parts.train.table);
    parts.train.table = apply_scaler(parts.train.table, scaler);
    parts.test.table = apply_scaler(parts.test.table, scaler);
    out.json_file(kScaler, to_json(scaler));
    write_prepared(parts.train, c.label_column, out, kTrainCsv);
    write_prepared(parts.test, c.label_column, out, kTestCsv);
  });
  summary["train_rows"] = parts.train.table.num_rows();
  summary["test_rows"] = parts.test.table.num_rows();
  summary["feature_count"] = parts.train.table.num_features();
  return parts;
}

std::vector<std::string> select_features(const RunConfig& c, const Prepared& train, Artifacts& out, json& summary) {
  return in_stage("select", [&] {
    // One group per attack type (one-to-all), each against all benign rows.
    std::set<std::string> attacks;
    for (const auto& cls : train.classes) {
      if (cls != c.benign_label) attacks.insert(cls);
    }
    std::vector<std::pair<std::string, std::vector<std::size_t>>> groups;
    if (c.scenario == Scenario::kOneToOne || attacks.size() <= 1) {
      std::vector<std::size_t> rows(train.table.num_rows());
      std::iota(rows.begin(), rows.end(), std::size_t{0});
      groups.emplace_back(attacks.size() == 1 ? *attacks.begin() : std::string("all"), std::move(rows));
    } else {
      for (const auto& attack : attacks) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < train.classes.size(); ++i) {
          if (train.classes[i] == c.benign_label || train.classes[i] == attack) rows.push_back(i);
        }
        groups.emplace_back(attack, std::move(rows));
      }
    }

    const featsel::Metric metric = featsel::parse_metric(c.permutation_metric);
    std::vector<featsel::FeatureRanking> lists;
    json per_group = json::array();
    for (const auto& [attack, rows] : groups) {
      const FlowTable sub = select_rows(train.table, rows);
      gbt::GbtConfig gc;
      gc.n_trees = c.gbt_trees;
      gc.max_depth = c.gbt_max_depth;
      gc.learning_rate = c.gbt_learning_rate;
      gc.lambda = c.gbt_lambda;
      gc.subsample = c.gbt_subsample;
      gc.seed = derive_seed(c.seed, "gbt:" + attack);
      const gbt::GbtModel booster = gbt::train_gbt(sub, gc);
      out.json_file("model_gbt_" + file_tag(attack) + ".json", gbt::to_json(booster));
      const shap::PredictFn predict = as_predictor(booster);

      featsel::FeatureRanking gain = featsel::top_k(featsel::gain_ranking(booster), c.top_k);
      featsel::FeatureRanking perm = featsel::top_k(
          featsel::permutation_importance(predict, sub, metric, c.permutation_repeats,
                                          derive_seed(c.seed, "permutation:" + attack)),
          c.top_k);

      const auto bg_rows = sample_indices(sub.num_rows(), c.selection_background,
                                          derive_seed(c.seed, "selection-background:" + attack));
      const auto ex_rows =
          sample_indices(sub.num_rows(), c.selection_rows, derive_seed(c.seed, "selection-rows:" + attack));
      const FlowTable explained = select_rows(sub, ex_rows);
      const auto explanations =
          shap::batch_explain(predict, explained, select_rows(sub, bg_rows).features,
                              shap_options(c, sub.num_features(), derive_seed(c.seed, "selection-shap:" + attack)));
      featsel::FeatureRanking by_shap = featsel::top_k(featsel::mean_abs_shap_importance(explanations), c.top_k);

      per_group.push_back({{"attack", attack},
                           {"gain", featsel::to_json(gain)},
                           {"permutation", featsel::to_json(perm)},
                           {"shap", featsel::to_json(by_shap)}});
      lists.push_back(std::move(gain));
      lists.push_back(std::move(perm));
      lists.push_back(std::move(by_shap));
    }

    const featsel::FeatureRanking combined = featsel::combine_by_frequency(lists, c.top_k);
    out.json_file("rankings.json", {{"groups", std::move(per_group)}});
    std::vector<std::string> selected = combined.names();
    out.json_file(kSelection, {{"selected_features", selected}, {"ranking", featsel::to_json(combined)}});
    summary["selected_features"] = selected;
    return selected;
  });
}

mlp::MlpModel train_model(const RunConfig& c, const Prepared& train, const std::vector<std::string>& selected,
                          Artifacts& out) {
  return in_stage("train", [&] {
    const FlowTable data = project_columns(train.table, selected);
    const mlp::Activation activation = mlp::parse_activation(c.mlp_activation);
    mlp::MlpModel model = mlp::init(data.num_features(), c.mlp_hidden, derive_seed(c.seed, "mlp-init"), activation);
    mlp::TrainConfig tc;
    tc.epochs = c.mlp_epochs;
    tc.batch_size = c.mlp_batch_size;
    tc.learning_rate = c.mlp_learning_rate;
    tc.seed = derive_seed(c.seed, "mlp-train");
    tc.optimizer = mlp::parse_optimizer(c.mlp_optimizer);
    mlp::TrainResult result = mlp::train(std::move(model), data, tc);
    result.model.feature_names = selected;
    out.json_file(kModel, mlp::to_json(result.model));
    out.json_file("training.json", {{"loss_history", result.loss_history}});
    return result.model;
  });
}

json evaluate_model(const RunConfig& c, const Prepared& test, const mlp::MlpModel& model, Artifacts& out) {
  return in_stage("evaluate", [&] {
    const FlowTable data = project_columns(test.table, model.feature_names);
    const std::vector<double> scores = mlp::predict(model, data.features);
    const metrics::EvaluationReport report = metrics::evaluate(data.labels, scores);
    json doc = {{"scenario", std::string(to_string(c.scenario))},
                {"feature_count_before", test.table.num_features()},
                {"feature_count_after", model.feature_names.size()},
                {"selected_features", model.feature_names},
                {"metrics", metrics::metrics_json(report)},
                {"per_class", metrics::per_class_json(report)},
                {"confusion", metrics::to_json(report.confusion)}};
    out.json_file("report.json", doc);
    return doc;
  });
}

json local_explanation(const RunConfig& c, const shap::PredictFn& predict, const mlp::MlpModel& model,
                       std::span<const double> x, int label, const Matrix& background, std::uint64_t seed,
                       const std::string& tag, Artifacts& out) {
  const shap::ShapExplanation e =
      shap::kernel_shap(predict, x, background, shap_options(c, x.size(), seed), model.feature_names);
  const viz::ForceData force = viz::force_data(e);
  json doc = {{"label", label == kBenign ? "benign" : "malicious"},
              {"score", e.prediction},
              {"outcome", outcome_label(label, e.prediction)},
              {"force", viz::to_json(force)},
              {"explanation", shap::to_json(e)}};
  out.text_file("force_" + tag + ".svg", viz::force_svg(force));
  return doc;
}

struct GlobalResult {
  Matrix background;
};

GlobalResult explain_global(const RunConfig& c, const Prepared& train, const Prepared& test,
                            const mlp::MlpModel& model, Artifacts& out, json& summary) {
  return in_stage("explain", [&] {
    const std::string scenario(to_string(c.scenario));
    const Prepared bg = subset(train, sample_indices(train.table.num_rows(), c.shap_background,
                                                     derive_seed(c.seed, "background")));
    const FlowTable bg_table = project_columns(bg.table, model.feature_names);
    write_prepared(Prepared{bg_table, bg.classes}, c.label_column, out, kBackgroundCsv);

    const FlowTable rows = project_columns(
        select_rows(test.table,
                    sample_indices(test.table.num_rows(), c.explain_rows, derive_seed(c.seed, "explain-rows"))),
        model.feature_names);
    const auto explanations =
        shap::batch_explain(as_predictor(model), rows, bg_table.features,
                            shap_options(c, model.feature_names.size(), derive_seed(c.seed, "explain")));
    json list = json::array();
    double worst = 0.0;
    for (const auto& e : explanations) {
      list.push_back(shap::to_json(e));
      worst = std::max(worst, std::abs(e.efficiency_residual()));
    }
    out.json_file("explanations.json", {{"explanations", std::move(list)}});

    const viz::SummaryData sdata = viz::global_summary(explanations, c.top_k);
    out.json_file("summary.json", viz::to_json(sdata));
    out.text_file(viz::svg_file_name(viz::PlotKind::kBar, scenario), viz::bar_svg(sdata.ranking));
    out.text_file(viz::svg_file_name(viz::PlotKind::kSummary, scenario), viz::summary_svg(sdata));
    if (model.feature_names.size() >= 2) {
      const viz::DependenceData ddata = viz::dependence_data(explanations, sdata.ranking.entries.front().name);
      out.json_file("dependence.json", viz::to_json(ddata));
      out.text_file(viz::svg_file_name(viz::PlotKind::kDependence, scenario), viz::dependence_svg(ddata));
    }
    summary["explained_rows"] = explanations.size();
    summary["max_efficiency_residual"] = worst;
    return GlobalResult{bg_table.features};
  });
}

// One force plot for the first test row of each outcome that occurs.
void explain_outcomes(const RunConfig& c, const Prepared& test, const mlp::MlpModel& model, const Matrix& background,
                      Artifacts& out, json& summary) {
  in_stage("explain", [&] {
    const std::string scenario(to_string(c.scenario));
    const FlowTable data = project_columns(test.table, model.feature_names);
    const shap::PredictFn predict = as_predictor(model);
    const std::vector<double> scores = predict(data.features);
    json local = json::object();
    for (const std::string outcome : {"malicious_predicted_malicious", "benign_predicted_malicious",
                                      "benign_predicted_benign", "malicious_predicted_benign"}) {
      for (std::size_t i = 0; i < scores.size(); ++i) {
        if (outcome_label(data.labels[i], scores[i]) != outcome) continue;
        const auto row = data.features.row(static_cast<Eigen::Index>(i));
        json doc = local_explanation(c, predict, model, std::span<const double>(row.data(), row.size()),
                                     data.labels[i], background, derive_seed(derive_seed(c.seed, "explain-local"), i),
                                     scenario + "_" + outcome, out);
        doc["test_row"] = i;
        out.json_file("force_" + scenario + "_" + outcome + ".json", doc);
        local[outcome] = i;
        break;
      }
    }
    summary["local_explanations"] = std::move(local);
  });
}

Artifacts open_run(const RunConfig& c) {
  return in_stage("config", [&] {
    c.validate();
    return Artifacts(c.output_dir);
  });
}

fs::path or_default(const std::string& given, const RunConfig& c, const char* name) {
  return given.empty() ? fs::path(c.output_dir) / name : fs::path(given);
}

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(Scenario s) { return s == Scenario::kOneToOne ? "one-to-one" : "one-to-all"; }

Scenario parse_scenario(std::string_view name) {
  if (name == "one-to-one") return Scenario::kOneToOne;
  if (name == "one-to-all") return Scenario::kOneToAll;
  fail(ErrorCode::kInvalidArgument, "scenario must be one-to-one or one-to-all, got " + std::string(name));
}

void RunConfig::validate() const {
  require(top_k >= 1, ErrorCode::kInvalidArgument, "top-k must be >= 1");
  require(attack_fraction > 0.0 && attack_fraction <= 1.0, ErrorCode::kInvalidArgument,
          "attack-fraction must lie in (0, 1]");
  require(test_fraction > 0.0 && test_fraction < 1.0, ErrorCode::kInvalidArgument, "test-fraction must lie in (0, 1)");
  require(!output_dir.empty(), ErrorCode::kInvalidArgument, "output-dir must not be empty");
  require(!mlp_hidden.empty(), ErrorCode::kInvalidArgument, "mlp-hidden must list at least one layer");
  for (std::size_t h : mlp_hidden) require(h >= 1, ErrorCode::kInvalidArgument, "mlp-hidden sizes must be >= 1");
  mlp::parse_activation(mlp_activation);
  mlp::parse_optimizer(mlp_optimizer);
  mlp::TrainConfig tc;
  tc.epochs = mlp_epochs;
  tc.batch_size = mlp_batch_size;
  tc.learning_rate = mlp_learning_rate;
  tc.validate();
  gbt::GbtConfig gc;
  gc.n_trees = gbt_trees;
  gc.max_depth = gbt_max_depth;
  gc.learning_rate = gbt_learning_rate;
  gc.lambda = gbt_lambda;
  gc.subsample = gbt_subsample;
  gc.validate();
  featsel::parse_metric(permutation_metric);
  require(permutation_repeats >= 1, ErrorCode::kInvalidArgument, "permutation-repeats must be >= 1");
  require(selection_rows >= 1 && selection_background >= 1, ErrorCode::kInvalidArgument,
          "selection-rows and selection-background must be >= 1");
  require(shap_background >= 1, ErrorCode::kInvalidArgument, "shap-background must be >= 1");
  require(explain_rows >= 1, ErrorCode::kInvalidArgument, "explain-rows must be >= 1");
}

const std::vector<std::string>& RunConfig::effective_drop_columns() const {
  static const std::vector<std::string> defaults = default_drop_columns();
  return drop_columns.empty() ? defaults : drop_columns;
}

RunConfig config_from_json(const json& doc) {
  require(doc.is_object(), ErrorCode::kInvalidArgument, "config must be a JSON object");
  RunConfig config;
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters().find(key);
    require(it != setters().end(), ErrorCode::kInvalidArgument, "unknown config key: " + key);
    it->second(config, value, key);
  }
  return config;
}

json to_json(const RunConfig& c) {
  return {{"scenario", std::string(to_string(c.scenario))},
          {"input", c.input},
          {"output-dir", c.output_dir},
          {"seed", c.seed},
          {"attack-fraction", c.attack_fraction},
          {"test-fraction", c.test_fraction},
          {"top-k", c.top_k},
          {"label-column", c.label_column},
          {"benign-label", c.benign_label},
          {"attack-label", c.attack_label},
          {"drop-columns", c.effective_drop_columns()},
          {"mlp-hidden", c.mlp_hidden},
          {"mlp-activation", c.mlp_activation},
          {"mlp-optimizer", c.mlp_optimizer},
          {"mlp-epochs", c.mlp_epochs},
          {"mlp-batch-size", c.mlp_batch_size},
          {"mlp-learning-rate", c.mlp_learning_rate},
          {"gbt-trees", c.gbt_trees},
          {"gbt-max-depth", c.gbt_max_depth},
          {"gbt-learning-rate", c.gbt_learning_rate},
          {"gbt-lambda", c.gbt_lambda},
          {"gbt-subsample", c.gbt_subsample},
          {"permutation-metric", c.permutation_metric},
          {"permutation-repeats", c.permutation_repeats},
          {"selection-rows", c.selection_rows},
          {"selection-background", c.selection_background},
          {"shap-background", c.shap_background},
          {"shap-samples", c.shap_samples},
          {"explain-rows", c.explain_rows},
          {"preset", c.preset},
          {"spec", c.spec},
          {"n-benign", c.n_benign},
          {"n-attack", c.n_attack},
          {"out", c.out},
          {"model", c.model},
          {"scaler", c.scaler},
          {"csv", c.csv},
          {"row", c.row},
          {"background", c.background}};
}

std::string outcome_label(int label, double score) {
  const bool predicted_benign = score >= 0.5;
  if (label == kBenign) return predicted_benign ? "benign_predicted_benign" : "benign_predicted_malicious";
  return predicted_benign ? "malicious_predicted_benign" : "malicious_predicted_malicious";
}

CommandResult cmd_synth(const RunConfig& c) {
  return in_stage("synth", [&] {
    synth::SynthSpec spec;
    if (!c.spec.empty()) {
      spec = synth::load_spec(c.spec);
    } else {
      require(c.preset == "ddos-like", ErrorCode::kInvalidArgument, "unknown preset: " + c.preset);
      spec = synth::ddos_like_preset();
    }
    const RawTable table = synth::generate(spec, c.n_benign, c.n_attack, c.seed);
    const fs::path out = c.out.empty() ? fs::path(c.output_dir) / "synth.csv" : fs::path(c.out);
    if (out.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(out.parent_path(), ec);
    }
    write_csv(table, out);
    CommandResult result;
    result.artifacts.push_back(out.string());
    result.summary = {{"rows", table.num_rows()}, {"features", table.num_columns() - 1}};
    return result;
  });
}

CommandResult cmd_preprocess(const RunConfig& c) {
  Artifacts out = open_run(c);
  json summary;
  preprocess(c, out, summary);
  return out.finish(std::move(summary));
}

CommandResult cmd_select_features(const RunConfig& c) {
  Artifacts out = open_run(c);
  const Prepared train = in_stage("load", [&] { return load_prepared(out.path(kTrainCsv), c); });
  json summary;
  select_features(c, train, out, summary);
  return out.finish(std::move(summary));
}

CommandResult cmd_train(const RunConfig& c) {
  Artifacts out = open_run(c);
  const Prepared train = in_stage("load", [&] { return load_prepared(out.path(kTrainCsv), c); });
  const auto selected = in_stage("load", [&] { return read_selection(out.path(kSelection)); });
  const mlp::MlpModel model = train_model(c, train, selected, out);
  return out.finish({{"parameters", model.num_parameters()}});
}

CommandResult cmd_evaluate(const RunConfig& c) {
  Artifacts out = open_run(c);
  const Prepared test = in_stage("load", [&] { return load_prepared(out.path(kTestCsv), c); });
  const mlp::MlpModel model = in_stage("load", [&] { return mlp::load_model(or_default(c.model, c, kModel)); });
  require(!model.feature_names.empty(), ErrorCode::kInvalidArgument, "model has no feature names");
  json report = evaluate_model(c, test, model, out);
  return out.finish(std::move(report));
}

CommandResult cmd_explain_global(const RunConfig& c) {
  Artifacts out = open_run(c);
  const Prepared train = in_stage("load", [&] { return load_prepared(out.path(kTrainCsv), c); });
  const Prepared test = in_stage("load", [&] { return load_prepared(out.path(kTestCsv), c); });
  const mlp::MlpModel model = in_stage("load", [&] { return mlp::load_model(or_default(c.model, c, kModel)); });
  require(!model.feature_names.empty(), ErrorCode::kInvalidArgument, "model has no feature names");
  json summary;
  explain_global(c, train, test, model, out, summary);
  return out.finish(std::move(summary));
}

CommandResult cmd_explain_local(const RunConfig& c) {
  Artifacts out = open_run(c);
  struct Inputs {
    mlp::MlpModel model;
    ScalerParams scaler;
    RawTable raw;
    RawTable background;
  };
  const Inputs in = in_stage("load", [&] {
    Inputs i;
    i.model = mlp::load_model(or_default(c.model, c, kModel));
    require(!i.model.feature_names.empty(), ErrorCode::kInvalidArgument, "model has no feature names");
    i.scaler = scaler_from_json(read_json(or_default(c.scaler, c, kScaler)));
    const std::string csv = c.csv.empty() ? c.input : c.csv;
    require(!csv.empty(), ErrorCode::kInvalidArgument, "no CSV given for the explained row");
    i.raw = load_csv(csv, c.label_column);
    i.background = load_csv(or_default(c.background, c, kBackgroundCsv), c.label_column);
    return i;
  });

  json doc = in_stage("explain", [&] {
    require(c.row < in.raw.num_rows(), ErrorCode::kInvalidArgument,
            "row index " + std::to_string(c.row) + " out of range (" + std::to_string(in.raw.num_rows()) + " rows)");
    const auto& names = in.model.feature_names;
    const std::vector<std::size_t> one{c.row};
    FlowTable row;
    row.feature_names = names;
    row.features = numeric_columns(in.raw, names, one);
    row.labels = {in.raw.labels().text[c.row] == c.benign_label ? kBenign : kMalicious};

    ScalerParams scaler;
    for (const auto& name : names) {
      const auto it = std::find(in.scaler.feature_names.begin(), in.scaler.feature_names.end(), name);
      require(it != in.scaler.feature_names.end(), ErrorCode::kInvalidArgument, "scaler lacks feature: " + name);
      const auto j = static_cast<std::size_t>(it - in.scaler.feature_names.begin());
      scaler.feature_names.push_back(name);
      scaler.mins.push_back(in.scaler.mins[j]);
      scaler.maxes.push_back(in.scaler.maxes[j]);
    }
    row = apply_scaler(row, scaler);

    std::vector<std::size_t> bg_rows(in.background.num_rows());
    std::iota(bg_rows.begin(), bg_rows.end(), std::size_t{0});
    const Matrix background = numeric_columns(in.background, names, bg_rows);

    const auto x = row.features.row(0);
    json local = local_explanation(c, as_predictor(in.model), in.model, std::span<const double>(x.data(), x.size()),
                                   row.labels[0], background, derive_seed(derive_seed(c.seed, "explain-local"), c.row),
                                   std::string(to_string(c.scenario)), out);
    local["row"] = c.row;
    out.json_file("force_" + std::string(to_string(c.scenario)) + ".json", local);
    return local;
  });
  return out.finish({{"row", c.row}, {"outcome", doc.at("outcome")}, {"score", doc.at("score")}});
}

CommandResult cmd_pipeline(const RunConfig& c) {
  Artifacts out = open_run(c);
  json summary;
  const Split parts = preprocess(c, out, summary);
  const auto selected = select_features(c, parts.train, out, summary);
  const mlp::MlpModel model = train_model(c, parts.train, selected, out);
  summary["report"] = evaluate_model(c, parts.test, model, out);
  const GlobalResult global = explain_global(c, parts.train, parts.test, model, out, summary);
  explain_outcomes(c, parts.test, model, global.background, out, summary);
  return out.finish(std::move(summary));
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"synth",          "preprocess",    "select-features", "train",
                                                 "evaluate",       "explain-global", "explain-local",   "pipeline"};
  return names;
}

CommandResult run_command(std::string_view name, const RunConfig& config) {
  if (name == "synth") return cmd_synth(config);
  if (name == "preprocess") return cmd_preprocess(config);
  if (name == "select-features") return cmd_select_features(config);
  if (name == "train") return cmd_train(config);
  if (name == "evaluate") return cmd_evaluate(config);
  if (name == "explain-global") return cmd_explain_global(config);
  if (name == "explain-local") return cmd_explain_local(config);
  if (name == "pipeline") return cmd_pipeline(config);
  fail(ErrorCode::kInvalidArgument, "unknown command: " + std::string(name));
}

}  // namespace flowshap::pipeline
