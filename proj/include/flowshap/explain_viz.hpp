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
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowshap/featsel.hpp"
#include "flowshap/shapley.hpp"
#include "json.hpp"

namespace flowshap::viz {

struct SummaryPoint {
  std::size_t sample = 0;
  std::string feature;
  double shap_value = 0.0;
  double normalized_value = 0.0;  // feature value min-max scaled over the batch
};

struct SummaryData {
  featsel::FeatureRanking ranking;  // mean |phi|, descending
  std::vector<SummaryPoint> points;  // grouped by ranked feature, then sample
};

struct DependencePoint {
  double feature_value = 0.0;
  double shap_value = 0.0;
  double interaction_value = 0.0;
};

struct DependenceData {
  std::string main_feature;
  std::string interaction_feature;
  std::vector<DependencePoint> points;
};

struct Contribution {
  std::string feature;
  double value = 0.0;
  double phi = 0.0;
};

struct ForceData {
  double base_value = 0.0;
  double prediction = 0.0;
  std::vector<Contribution> contributions;  // |phi| descending

  double efficiency_residual() const;
};

enum class PlotKind { kBar, kSummary, kDependence, kForce };
std::string_view to_string(PlotKind kind);

SummaryData global_summary(std::span<const shap::ShapExplanation> explanations, std::size_t top_n);

// The interaction feature is the other feature whose values correlate most
// (absolute Pearson) with the main feature's SHAP values; ties go to the
// lexicographically smaller name.
DependenceData dependence_data(std::span<const shap::ShapExplanation> explanations, std::string_view main_feature);

ForceData force_data(const shap::ShapExplanation& explanation);

// Deterministic, self-contained SVG documents.
std::string bar_svg(const featsel::FeatureRanking& ranking);
std::string summary_svg(const SummaryData& data);
std::string dependence_svg(const DependenceData& data);
std::string force_svg(const ForceData& data);

void render_svg(const featsel::FeatureRanking& ranking, const std::filesystem::path& path);
void render_svg(const SummaryData& data, const std::filesystem::path& path);
void render_svg(const DependenceData& data, const std::filesystem::path& path);
void render_svg(const ForceData& data, const std::filesystem::path& path);

// "<kind>_<scenario>.svg"
std::string svg_file_name(PlotKind kind, std::string_view scenario);

nlohmann::json to_json(const SummaryData& data);
nlohmann::json to_json(const DependenceData& data);
nlohmann::json to_json(const ForceData& data);

}  // namespace flowshap::viz
