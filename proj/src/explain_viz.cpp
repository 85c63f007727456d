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

#include "flowshap/explain_viz.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flowshap/error.hpp"

namespace flowshap::viz {

namespace {

std::size_t feature_index(const shap::ShapExplanation& e, std::string_view name) {
  const auto it = std::find(e.feature_names.begin(), e.feature_names.end(), name);
  require(it != e.feature_names.end(), ErrorCode::kInvalidArgument, "unknown feature: " + std::string(name));
  return static_cast<std::size_t>(it - e.feature_names.begin());
}

void check_consistent(std::span<const shap::ShapExplanation> explanations) {
  require(!explanations.empty(), ErrorCode::kInvalidArgument, "no explanations");
  const auto& names = explanations.front().feature_names;
  for (const auto& e : explanations) {
    require(e.feature_names == names && e.phi.size() == names.size() && e.feature_values.size() == names.size(),
            ErrorCode::kInvalidArgument, "explanations have inconsistent feature names");
  }
}

// Constant or near-constant inputs give 0.
double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double ForceData::efficiency_residual() const {
  double sum = base_value;
  for (const auto& c : contributions) sum += c.phi;
  return sum - prediction;
}

std::string_view to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::kBar: return "bar";
    case PlotKind::kSummary: return "summary";
    case PlotKind::kDependence: return "dependence";
    case PlotKind::kForce: return "force";
  }
  return "unknown";
}

SummaryData global_summary(std::span<const shap::ShapExplanation> explanations, std::size_t top_n) {
  check_consistent(explanations);
  SummaryData data;
  data.ranking = featsel::top_k(featsel::mean_abs_shap_importance(explanations), top_n);

  for (const auto& entry : data.ranking.entries) {
    const std::size_t j = feature_index(explanations.front(), entry.name);
    double lo = explanations.front().feature_values[j];
    double hi = lo;
    for (const auto& e : explanations) {
      lo = std::min(lo, e.feature_values[j]);
      hi = std::max(hi, e.feature_values[j]);
    }
    for (std::size_t i = 0; i < explanations.size(); ++i) {
      const double v = explanations[i].feature_values[j];
      const double norm = hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.0;
      data.points.push_back({i, entry.name, explanations[i].phi[j], norm});
    }
  }
  return data;
}

DependenceData dependence_data(std::span<const shap::ShapExplanation> explanations, std::string_view main_feature) {
  check_consistent(explanations);
  const auto& names = explanations.front().feature_names;
  const std::size_t main = feature_index(explanations.front(), main_feature);
  require(names.size() >= 2, ErrorCode::kInvalidArgument, "dependence data needs at least two features");

  const std::size_t n = explanations.size();
  std::vector<double> main_phi(n);
  for (std::size_t i = 0; i < n; ++i) main_phi[i] = explanations[i].phi[main];

  std::size_t best = names.size();
  double best_corr = -1.0;
  std::vector<double> values(n);
  for (std::size_t c = 0; c < names.size(); ++c) {
    if (c == main) continue;
    for (std::size_t i = 0; i < n; ++i) values[i] = explanations[i].feature_values[c];
    const double corr = std::abs(pearson(values, main_phi));
    if (corr > best_corr || (corr == best_corr && names[c] < names[best])) {
      best = c;
      best_corr = corr;
    }
  }

  DependenceData data;
  data.main_feature = names[main];
  data.interaction_feature = names[best];
  for (std::size_t i = 0; i < n; ++i) {
    data.points.push_back(
        {explanations[i].feature_values[main], main_phi[i], explanations[i].feature_values[best]});
  }
  return data;
}

ForceData force_data(const shap::ShapExplanation& explanation) {
  const std::size_t p = explanation.phi.size();
  require(explanation.feature_values.size() == p && explanation.feature_names.size() == p,
          ErrorCode::kInvalidArgument, "explanation arrays differ in length");
  ForceData data;
  data.base_value = explanation.base_value;
  data.prediction = explanation.prediction;
  for (std::size_t j = 0; j < p; ++j) {
    data.contributions.push_back({explanation.feature_names[j], explanation.feature_values[j], explanation.phi[j]});
  }
  std::stable_sort(data.contributions.begin(), data.contributions.end(),
                   [](const Contribution& a, const Contribution& b) { return std::abs(a.phi) > std::abs(b.phi); });
  return data;
}

std::string svg_file_name(PlotKind kind, std::string_view scenario) {
  return std::string(to_string(kind)) + "_" + std::string(scenario) + ".svg";
}

nlohmann::json to_json(const SummaryData& data) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : data.points) {
    points.push_back({{"sample", p.sample},
                      {"feature", p.feature},
                      {"shap_value", p.shap_value},
                      {"normalized_value", p.normalized_value}});
  }
  return {{"ranking", featsel::to_json(data.ranking)}, {"points", std::move(points)}};
}

nlohmann::json to_json(const DependenceData& data) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : data.points) {
    points.push_back({{"feature_value", p.feature_value},
                      {"shap_value", p.shap_value},
                      {"interaction_value", p.interaction_value}});
  }
  return {{"main_feature", data.main_feature},
          {"interaction_feature", data.interaction_feature},
          {"points", std::move(points)}};
}

nlohmann::json to_json(const ForceData& data) {
  nlohmann::json contributions = nlohmann::json::array();
  for (const auto& c : data.contributions) {
    contributions.push_back({{"feature", c.feature}, {"value", c.value}, {"phi", c.phi}});
  }
  return {{"base_value", data.base_value},
          {"prediction", data.prediction},
          {"contributions", std::move(contributions)}};
}

}  // namespace flowshap::viz
