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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "flowshap/error.hpp"
#include "flowshap/gbt.hpp"
#include "support.hpp"

namespace flowshap::gbt {
namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

FlowTable one_feature_separable() {
  Matrix x(8, 1);
  x << 0.1, 0.2, 0.3, 0.4, 0.6, 0.7, 0.8, 0.9;
  return testing::make_table(x, {0, 0, 0, 0, 1, 1, 1, 1});
}

Node leaf(double value) {
  Node n;
  n.value = value;
  return n;
}

Node split(int feature, double threshold, int left, int right, double gain) {
  Node n;
  n.feature = feature;
  n.threshold = threshold;
  n.left = left;
  n.right = right;
  n.gain = gain;
  return n;
}

GbtModel handmade(std::vector<Tree> trees, std::size_t features) {
  GbtModel m;
  m.trees = std::move(trees);
  m.learning_rate = 1.0;
  m.base_score = 0.0;
  m.num_features = features;
  return m;
}

TEST(Train, SeparatesOneFeature) {
  const FlowTable data = one_feature_separable();
  const GbtModel m = train_gbt(data, 10, 1, 0.3, 0);
  const std::vector<double> p = predict(m, data.features);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(p[i] >= 0.5 ? 1 : 0, data.labels[i]);
  ASSERT_FALSE(m.trees.front().nodes.front().is_leaf());
  EXPECT_GT(m.trees.front().nodes.front().threshold, 0.4);
  EXPECT_LT(m.trees.front().nodes.front().threshold, 0.6);
}

TEST(Train, ConfigErrors) {
  GbtConfig cfg;
  cfg.n_trees = 0;
  EXPECT_THROW(train_gbt(one_feature_separable(), cfg), Error);
  cfg = GbtConfig{};
  cfg.max_depth = 0;
  EXPECT_THROW(train_gbt(one_feature_separable(), cfg), Error);
  FlowTable single = one_feature_separable();
  std::fill(single.labels.begin(), single.labels.end(), 0);
  try {
    train_gbt(single, GbtConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSingleClass);
  }
}

TEST(Train, ConstantFeatureNeverSplits) {
  Matrix x(6, 2);
  x << 0.0, 5.0, 0.0, 5.0, 0.0, 5.0, 1.0, 5.0, 1.0, 5.0, 1.0, 5.0;
  const GbtModel m = train_gbt(testing::make_table(x, {0, 0, 0, 1, 1, 1}), 5, 3, 0.3, 0);
  const std::vector<double> gains = gain_importance(m);
  EXPECT_GT(gains[0], 0.0);
  EXPECT_EQ(gains[1], 0.0);
  // Both children are pure after the first split, so each tree has depth one.
  for (const Tree& t : m.trees) EXPECT_EQ(t.depth(), 1u);
}

TEST(Predict, ZeroTreesIsBaseScore) {
  GbtModel m = handmade({}, 2);
  m.base_score = 0.7;
  EXPECT_DOUBLE_EQ(gbt_predict(m, std::vector<double>{3.0, -1.0}), sigmoid(0.7));
}

TEST(Predict, HandTracedStump) {
  Tree t;
  t.nodes = {split(0, 0.5, 1, 2, 1.0), leaf(-2.0), leaf(3.0)};
  GbtModel m = handmade({t}, 1);
  m.learning_rate = 0.5;
  m.base_score = 0.25;
  EXPECT_DOUBLE_EQ(gbt_predict(m, std::vector<double>{0.2}), sigmoid(0.25 - 1.0));
  EXPECT_DOUBLE_EQ(gbt_predict(m, std::vector<double>{0.5}), sigmoid(0.25 + 1.5));
  EXPECT_THROW(gbt_predict(m, std::vector<double>{0.2, 0.1}), Error);
}

TEST(Predict, MonotoneInIncreasingLeaves) {
  Tree t;
  t.nodes = {split(0, 0.5, 1, 2, 1.0), split(0, 0.25, 3, 4, 1.0), split(0, 0.75, 5, 6, 1.0),
             leaf(-3.0), leaf(-1.0), leaf(1.0), leaf(3.0)};
  const GbtModel m = handmade({t}, 1);
  double last = 0.0;
  for (double v = 0.0; v <= 1.0; v += 0.05) {
    const double p = gbt_predict(m, std::vector<double>{v});
    EXPECT_GE(p, last);
    last = p;
  }
}

TEST(GainImportance, Examples) {
  Tree single;
  single.nodes = {split(0, 0.5, 1, 2, 1.5), leaf(1.0), leaf(-1.0)};
  EXPECT_EQ(gain_importance(handmade({single}, 2)), (std::vector<double>{1.5, 0.0}));

  Tree a, b;
  a.nodes = {split(1, 0.5, 1, 2, 3.0), leaf(1.0), leaf(-1.0)};
  b.nodes = {split(1, 0.2, 1, 2, 1.0), split(0, 0.4, 3, 4, 2.0), leaf(0.0), leaf(1.0), leaf(-1.0)};
  EXPECT_EQ(gain_importance(handmade({a, b}, 3)), (std::vector<double>{2.0, 4.0, 0.0}));
}

TEST(GainImportance, NonNegativeOnRandomData) {
  std::mt19937_64 gen(4);
  const Matrix x = testing::random_matrix(200, 6, gen);
  std::vector<int> labels(200);
  for (std::size_t i = 0; i < 200; ++i) labels[i] = x(static_cast<Eigen::Index>(i), 2) + 0.3 * x(static_cast<Eigen::Index>(i), 4) > 0.6;
  const GbtModel m = train_gbt(testing::make_table(x, labels), 20, 3, 0.3, 1);
  for (double g : gain_importance(m)) EXPECT_GE(g, 0.0);
  const std::vector<double> g = gain_importance(m);
  EXPECT_EQ(std::max_element(g.begin(), g.end()) - g.begin(), 2);
}

TEST(Train, DeterministicAndLossDecreases) {
  std::mt19937_64 gen(5);
  const Matrix x = testing::random_matrix(300, 4, gen);
  std::vector<int> labels(300);
  for (std::size_t i = 0; i < 300; ++i) labels[i] = x(static_cast<Eigen::Index>(i), 0) > x(static_cast<Eigen::Index>(i), 1);
  const FlowTable data = testing::make_table(x, labels);
  GbtConfig cfg;
  cfg.subsample = 0.8;
  cfg.seed = 9;
  EXPECT_EQ(to_json(train_gbt(data, cfg)), to_json(train_gbt(data, cfg)));

  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t rounds = 0; rounds <= 5; ++rounds) {
    GbtModel m = train_gbt(data, 5, 3, 0.3, 0);
    m.trees.resize(rounds);
    const double current = log_loss(m, data);
    EXPECT_LT(current, previous) << "after " << rounds << " rounds";
    previous = current;
  }
}

TEST(Persistence, RoundTripAndValidation) {
  const auto dir = testing::scratch_dir("gbt");
  const GbtModel m = train_gbt(one_feature_separable(), 4, 2, 0.3, 0);
  save_model(m, dir / "m.json");
  const GbtModel back = load_model(dir / "m.json");
  EXPECT_EQ(predict(back, one_feature_separable().features), predict(m, one_feature_separable().features));

  nlohmann::json doc = to_json(m);
  doc["trees"][0]["nodes"][0]["left"] = 0;
  EXPECT_THROW(model_from_json(doc), Error);
}

}  // namespace
}  // namespace flowshap::gbt
