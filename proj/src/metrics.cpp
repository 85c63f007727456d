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

#include "flowshap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "flowshap/error.hpp"

namespace flowshap::metrics {

namespace {

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void check_inputs(std::span<const int> labels, std::span<const double> scores) {
  require(labels.size() == scores.size(), ErrorCode::kDimensionMismatch,
          "labels and scores differ in length (" + std::to_string(labels.size()) + " vs " +
              std::to_string(scores.size()) + ")");
  for (int y : labels) require(y == 0 || y == 1, ErrorCode::kInvalidArgument, "labels must be 0 or 1");
  for (double s : scores) require(!std::isnan(s), ErrorCode::kInvalidArgument, "score is NaN");
}

// Indices sorted by descending score.
std::vector<std::size_t> order_by_score(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

struct ClassCounts {
  std::uint64_t pos = 0;
  std::uint64_t neg = 0;
};

ClassCounts count_classes(std::span<const int> labels) {
  ClassCounts c;
  for (int y : labels) (y == 1 ? c.pos : c.neg)++;
  require(c.pos > 0 && c.neg > 0, ErrorCode::kSingleClass, "roc_auc needs both classes");
  return c;
}

ConfusionMatrix tally(std::span<const int> labels, std::span<const int> predicted, int positive_label) {
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool actual = labels[i] == positive_label;
    const bool flagged = predicted[i] == positive_label;
    if (actual && flagged) ++cm.tp;
    else if (actual) ++cm.fn;
    else if (flagged) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

ClassReport class_report(const ConfusionMatrix& cm) {
  return {precision(cm), recall(cm), f1(cm), cm.tp + cm.fn};
}

}  // namespace

ConfusionMatrix confusion(std::span<const int> labels, std::span<const double> scores, double threshold,
                          int positive_label) {
  check_inputs(labels, scores);
  require(threshold >= 0.0 && threshold <= 1.0, ErrorCode::kInvalidArgument, "threshold must lie in [0, 1]");
  require(positive_label == 0 || positive_label == 1, ErrorCode::kInvalidArgument, "positive label must be 0 or 1");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const double positive_score = positive_label == 1 ? scores[i] : 1.0 - scores[i];
    const bool flagged = positive_score >= threshold;
    const bool actual = labels[i] == positive_label;
    if (actual && flagged) ++cm.tp;
    else if (actual) ++cm.fn;
    else if (flagged) ++cm.fp;
    else ++cm.tn;
  }
  return cm;
}

double precision(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fp); }
double recall(const ConfusionMatrix& cm) { return ratio(cm.tp, cm.tp + cm.fn); }
double fpr(const ConfusionMatrix& cm) { return ratio(cm.fp, cm.fp + cm.tn); }
double accuracy(const ConfusionMatrix& cm) { return ratio(cm.tp + cm.tn, cm.total()); }

double f1(const ConfusionMatrix& cm) {
  // 2PR/(P+R) == 2TP/(2TP+FP+FN); the count form avoids rounding.
  return ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn);
}

double roc_auc_trapezoid(std::span<const int> labels, std::span<const double> scores) {
  check_inputs(labels, scores);
  const ClassCounts counts = count_classes(labels);
  const std::vector<std::size_t> order = order_by_score(scores);
  // Twice the area in units of (1/neg) x (1/pos); stays integral.
  std::uint64_t twice_area = 0;
  std::uint64_t tp = 0, fp = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double s = scores[order[i]];
    std::uint64_t dtp = 0, dfp = 0;
    for (; i < order.size() && scores[order[i]] == s; ++i) (labels[order[i]] == 1 ? dtp : dfp)++;
    twice_area += dfp * (2 * tp + dtp);
    tp += dtp;
    fp += dfp;
  }
  return static_cast<double>(twice_area) / (2.0 * static_cast<double>(counts.pos) * static_cast<double>(counts.neg));
}

double roc_auc_rank(std::span<const int> labels, std::span<const double> scores) {
  check_inputs(labels, scores);
  const ClassCounts counts = count_classes(labels);
  std::vector<std::size_t> order = order_by_score(scores);
  std::reverse(order.begin(), order.end());
  // Sum of doubled (tie-averaged) ascending ranks of the positives.
  std::uint64_t twice_rank_sum = 0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const std::uint64_t twice_avg_rank = (i + 1) + j;  // ranks i+1 .. j
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) twice_rank_sum += twice_avg_rank;
    }
    i = j;
  }
  const std::uint64_t twice_u = twice_rank_sum - counts.pos * (counts.pos + 1);
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(counts.pos) * static_cast<double>(counts.neg));
}

double roc_auc(std::span<const int> labels, std::span<const double> scores) {
  const double trapezoid = roc_auc_trapezoid(labels, scores);
  const double rank = roc_auc_rank(labels, scores);
  if (std::abs(trapezoid - rank) > 1e-12) {
    fail(ErrorCode::kInternal, "AUC cross-check failed: trapezoid " + std::to_string(trapezoid) + " vs rank " +
                                   std::to_string(rank));
  }
  return trapezoid;
}

EvaluationReport evaluate(std::span<const int> labels, std::span<const double> scores, double threshold) {
  check_inputs(labels, scores);
  require(threshold >= 0.0 && threshold <= 1.0, ErrorCode::kInvalidArgument, "threshold must lie in [0, 1]");
  std::vector<int> predicted(scores.size());
  std::transform(scores.begin(), scores.end(), predicted.begin(), [&](double s) { return s >= threshold ? 1 : 0; });

  EvaluationReport report;
  report.confusion = tally(labels, predicted, 0);
  report.accuracy = accuracy(report.confusion);
  report.precision = precision(report.confusion);
  report.recall = recall(report.confusion);
  report.f1 = f1(report.confusion);
  report.auc = roc_auc(labels, scores);
  report.attack = class_report(report.confusion);
  report.benign = class_report(tally(labels, predicted, 1));
  return report;
}

nlohmann::json to_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"tn", cm.tn}, {"fp", cm.fp}, {"fn", cm.fn}};
}

nlohmann::json metrics_json(const EvaluationReport& r) {
  return {{"accuracy", r.accuracy}, {"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1}, {"auc", r.auc}};
}

nlohmann::json per_class_json(const EvaluationReport& r) {
  auto one = [](const ClassReport& c) {
    return nlohmann::json{{"precision", c.precision}, {"recall", c.recall}, {"f1", c.f1}, {"support", c.support}};
  };
  return {{"benign", one(r.benign)}, {"attack", one(r.attack)}};
}

}  // namespace flowshap::metrics
