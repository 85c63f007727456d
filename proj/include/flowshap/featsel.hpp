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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowshap/dataio.hpp"
#include "flowshap/gbt.hpp"
#include "flowshap/shapley.hpp"
#include "json.hpp"

namespace flowshap::featsel {

enum class Method { kGain, kPermutation, kShap, kCombined };
enum class Metric { kAccuracy, kAuc };

std::string_view to_string(Method m);
std::string_view to_string(Metric m);
Method parse_method(std::string_view name);
Metric parse_metric(std::string_view name);

struct RankingEntry {
  std::string name;
  double score = 0.0;
  // Secondary key, ascending. Mean rank position for combined rankings,
  // 0 otherwise.
  double tie_key = 0.0;
};

// Entries ordered by score descending, then tie_key ascending, then name.
struct FeatureRanking {
  Method method = Method::kGain;
  std::vector<RankingEntry> entries;

  std::vector<std::string> names() const;
  void validate() const;
};

// Sorts and wraps a name/score list.
FeatureRanking ranking_from_scores(Method method, std::span<const std::string> names,
                                   std::span<const double> scores);

// Total split gain per feature of a boosted ensemble.
FeatureRanking gain_ranking(const gbt::GbtModel& model);

// Baseline metric minus the metric after shuffling one column, averaged over
// `repeats` seeded permutations.
FeatureRanking permutation_importance(const shap::PredictFn& model, const FlowTable& table, Metric metric,
                                      std::size_t repeats, std::uint64_t seed);
FeatureRanking permutation_importance(const shap::PredictFn& model, const FlowTable& table,
                                      std::string_view metric, std::size_t repeats, std::uint64_t seed);

// score_j = mean over explanations of |phi_j|.
FeatureRanking mean_abs_shap_importance(std::span<const shap::ShapExplanation> explanations);

FeatureRanking top_k(const FeatureRanking& ranking, std::size_t k);

// Frequency of each feature across the lists, ties by mean 1-based rank
// position among the lists containing it, then by name. Truncated to k.
FeatureRanking combine_by_frequency(std::span<const FeatureRanking> rankings, std::size_t k);

nlohmann::json to_json(const FeatureRanking& ranking);
FeatureRanking ranking_from_json(const nlohmann::json& doc);

}  // namespace flowshap::featsel
