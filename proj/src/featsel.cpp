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

#include "flowshap/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "flowshap/error.hpp"
#include "flowshap/metrics.hpp"
#include "flowshap/rng.hpp"

namespace flowshap::featsel {

namespace {

void sort_entries(std::vector<RankingEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RankingEntry& a, const RankingEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.tie_key != b.tie_key) return a.tie_key < b.tie_key;
    return a.name < b.name;
  });
}

double score_predictions(Metric metric, std::span<const int> labels, std::span<const double> scores) {
  switch (metric) {
    case Metric::kAccuracy:
      return metrics::accuracy(metrics::confusion(labels, scores, 0.5));
    case Metric::kAuc:
      return metrics::roc_auc(labels, scores);
  }
  fail(ErrorCode::kInternal, "unhandled metric");
}

}  // namespace

std::string_view to_string(Method m) {
  switch (m) {
    case Method::kGain: return "gain";
    case Method::kPermutation: return "permutation";
    case Method::kShap: return "shap";
    case Method::kCombined: return "combined";
  }
  return "unknown";
}

std::string_view to_string(Metric m) { return m == Metric::kAccuracy ? "accuracy" : "auc"; }

Method parse_method(std::string_view name) {
  for (Method m : {Method::kGain, Method::kPermutation, Method::kShap, Method::kCombined}) {
    if (name == to_string(m)) return m;
  }
  fail(ErrorCode::kInvalidArgument, "unknown ranking method: " + std::string(name));
}

Metric parse_metric(std::string_view name) {
  if (name == "accuracy") return Metric::kAccuracy;
  if (name == "auc") return Metric::kAuc;
  fail(ErrorCode::kInvalidArgument, "unknown metric: " + std::string(name));
}

std::vector<std::string> FeatureRanking::names() const {
  std::vector<std::string> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.name);
  return out;
}

void FeatureRanking::validate() const {
  std::set<std::string_view> seen;
  for (const auto& e : entries) {
    require(seen.insert(e.name).second, ErrorCode::kInvalidArgument, "duplicate feature in ranking: " + e.name);
    require(std::isfinite(e.score), ErrorCode::kNumeric, "non-finite ranking score for " + e.name);
  }
}

FeatureRanking ranking_from_scores(Method method, std::span<const std::string> names,
                                   std::span<const double> scores) {
  require(names.size() == scores.size(), ErrorCode::kDimensionMismatch, "names and scores differ in length");
  FeatureRanking ranking;
  ranking.method = method;
  for (std::size_t j = 0; j < names.size(); ++j) ranking.entries.push_back({names[j], scores[j], 0.0});
  ranking.validate();
  sort_entries(ranking.entries);
  return ranking;
}

FeatureRanking gain_ranking(const gbt::GbtModel& model) {
  const std::vector<double> gain = gbt::gain_importance(model);
  require(model.feature_names.size() == gain.size(), ErrorCode::kInvalidArgument,
          "gain ranking needs a model with feature names");
  return ranking_from_scores(Method::kGain, model.feature_names, gain);
}

FeatureRanking permutation_importance(const shap::PredictFn& model, const FlowTable& table, Metric metric,
                                      std::size_t repeats, std::uint64_t seed) {
  require(repeats >= 1, ErrorCode::kInvalidArgument, "repeats must be >= 1");
  table.validate();
  const std::size_t n = table.num_rows();
  const std::size_t p = table.num_features();

  const std::vector<double> base_scores = model(table.features);
  require(base_scores.size() == n, ErrorCode::kDimensionMismatch, "model returned the wrong number of outputs");
  const double baseline = score_predictions(metric, table.labels, base_scores);

  std::vector<double> importance(p, 0.0);
  Matrix shuffled = table.features;
  std::vector<std::size_t> order(n);
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    double drop = 0.0;
    for (std::size_t r = 0; r < repeats; ++r) {
      Rng rng(derive_seed(derive_seed(seed, j), r));
      std::iota(order.begin(), order.end(), std::size_t{0});
      rng.shuffle(std::span(order));
      for (std::size_t i = 0; i < n; ++i) {
        shuffled(static_cast<Eigen::Index>(i), col) = table.features(static_cast<Eigen::Index>(order[i]), col);
      }
      const std::vector<double> scores = model(shuffled);
      require(scores.size() == n, ErrorCode::kDimensionMismatch, "model returned the wrong number of outputs");
      // Differences first, so an unread column scores exactly zero.
      drop += baseline - score_predictions(metric, table.labels, scores);
    }
    shuffled.col(col) = table.features.col(col);
    importance[j] = drop / static_cast<double>(repeats);
  }
  return ranking_from_scores(Method::kPermutation, table.feature_names, importance);
}

FeatureRanking permutation_importance(const shap::PredictFn& model, const FlowTable& table,
                                      std::string_view metric, std::size_t repeats, std::uint64_t seed) {
  return permutation_importance(model, table, parse_metric(metric), repeats, seed);
}

FeatureRanking mean_abs_shap_importance(std::span<const shap::ShapExplanation> explanations) {
  require(!explanations.empty(), ErrorCode::kInvalidArgument, "no explanations to aggregate");
  const std::vector<std::string>& names = explanations.front().feature_names;
  const std::size_t p = names.size();
  for (const auto& e : explanations) {
    require(e.feature_names == names && e.phi.size() == p, ErrorCode::kInvalidArgument,
            "explanations have inconsistent feature names");
  }
  std::vector<double> scores(p);
  std::vector<double> column(explanations.size());
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < explanations.size(); ++i) column[i] = std::abs(explanations[i].phi[j]);
    // Summing in sorted order makes the result independent of list order.
    std::sort(column.begin(), column.end());
    scores[j] = std::accumulate(column.begin(), column.end(), 0.0) / static_cast<double>(column.size());
  }
  return ranking_from_scores(Method::kShap, names, scores);
}

FeatureRanking top_k(const FeatureRanking& ranking, std::size_t k) {
  require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");
  FeatureRanking out = ranking;
  sort_entries(out.entries);
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

FeatureRanking combine_by_frequency(std::span<const FeatureRanking> rankings, std::size_t k) {
  require(!rankings.empty(), ErrorCode::kInvalidArgument, "no rankings to combine");
  require(rankings.size() >= 2, ErrorCode::kInvalidArgument, "combining needs at least two rankings");
  require(k >= 1, ErrorCode::kInvalidArgument, "k must be >= 1");

  struct Tally {
    std::size_t frequency = 0;
    std::size_t rank_sum = 0;
  };
  std::map<std::string, Tally> tally;
  for (const auto& ranking : rankings) {
    ranking.validate();
    for (std::size_t pos = 0; pos < ranking.entries.size(); ++pos) {
      Tally& t = tally[ranking.entries[pos].name];
      ++t.frequency;
      t.rank_sum += pos + 1;
    }
  }

  FeatureRanking out;
  out.method = Method::kCombined;
  for (const auto& [name, t] : tally) {
    out.entries.push_back({name, static_cast<double>(t.frequency),
                           static_cast<double>(t.rank_sum) / static_cast<double>(t.frequency)});
  }
  sort_entries(out.entries);
  if (out.entries.size() > k) out.entries.resize(k);
  return out;
}

nlohmann::json to_json(const FeatureRanking& ranking) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : ranking.entries) {
    nlohmann::json entry = {{"name", e.name}, {"score", e.score}};
    if (ranking.method == Method::kCombined) entry["mean_rank"] = e.tie_key;
    entries.push_back(std::move(entry));
  }
  return {{"method", std::string(to_string(ranking.method))}, {"entries", std::move(entries)}};
}

FeatureRanking ranking_from_json(const nlohmann::json& doc) {
  FeatureRanking ranking;
  try {
    ranking.method = parse_method(doc.at("method").get<std::string>());
    for (const auto& entry : doc.at("entries")) {
      RankingEntry e;
      e.name = entry.at("name").get<std::string>();
      e.score = entry.at("score").get<double>();
      e.tie_key = entry.value("mean_rank", 0.0);
      ranking.entries.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("ranking: ") + ex.what());
  }
  ranking.validate();
  return ranking;
}

}  // namespace flowshap::featsel
