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

#include <cstdint>
#include <span>

#include "json.hpp"

namespace flowshap::metrics {

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + tn + fp + fn; }
  bool operator==(const ConfusionMatrix&) const = default;
};

// `scores` are model probabilities of label 1 (benign). A sample is predicted
// positive iff the score of `positive_label` (score for 1, 1 - score for 0)
// is >= threshold. The default positive class is malicious (label 0).
ConfusionMatrix confusion(std::span<const int> labels, std::span<const double> scores, double threshold,
                          int positive_label = 0);

// Zero denominators yield 0.
double precision(const ConfusionMatrix& cm);
double recall(const ConfusionMatrix& cm);  // true positive rate
double fpr(const ConfusionMatrix& cm);
double f1(const ConfusionMatrix& cm);
double accuracy(const ConfusionMatrix& cm);

// Area under the ROC curve with label 1 as the positive class and `scores`
// as its score. The value is the same for the opposite convention (label 0
// positive, score 1 - s). Computed by trapezoidal integration and
// cross-checked against the tie-corrected rank statistic.
double roc_auc(std::span<const int> labels, std::span<const double> scores);
double roc_auc_trapezoid(std::span<const int> labels, std::span<const double> scores);
double roc_auc_rank(std::span<const int> labels, std::span<const double> scores);

struct ClassReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
};

struct EvaluationReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double auc = 0.0;
  ClassReport benign;
  ClassReport attack;
  ConfusionMatrix confusion;  // malicious as positive
};

EvaluationReport evaluate(std::span<const int> labels, std::span<const double> scores, double threshold = 0.5);

nlohmann::json to_json(const ConfusionMatrix& cm);
// {accuracy, precision, recall, f1, auc}
nlohmann::json metrics_json(const EvaluationReport& report);
// {benign: {...}, attack: {...}}
nlohmann::json per_class_json(const EvaluationReport& report);

}  // namespace flowshap::metrics
