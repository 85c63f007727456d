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

#include "flowshap/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "flowshap/error.hpp"
#include "flowshap/io.hpp"
#include "flowshap/rng.hpp"

namespace flowshap::gbt {

namespace {

// Splits whose gain does not clear this are rounding noise.
constexpr double kMinGain = 1e-12;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<double>& grad, const std::vector<double>& hess,
              const GbtConfig& config)
      : x_(x), grad_(grad), hess_(hess), config_(config) {}

  Tree build(std::vector<std::size_t> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<std::size_t> rows, std::size_t depth) {
    double g = 0.0, h = 0.0;
    for (std::size_t r : rows) {
      g += grad_[r];
      h += hess_[r];
    }
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.push_back(Node{});

    SplitChoice best;
    if (depth < config_.max_depth && rows.size() >= 2) best = find_split(rows, g, h);
    if (best.feature < 0) {
      tree_.nodes[static_cast<std::size_t>(id)].value = -g / (h + config_.lambda);
      return id;
    }

    std::vector<std::size_t> left, right;
    for (std::size_t r : rows) {
      (x_(static_cast<Eigen::Index>(r), best.feature) < best.threshold ? left : right).push_back(r);
    }
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int rgt = grow(std::move(right), depth + 1);
    Node& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.gain = best.gain;
    node.left = l;
    node.right = rgt;
    return id;
  }

  double score(double g, double h) const { return g * g / (h + config_.lambda); }

  SplitChoice find_split(const std::vector<std::size_t>& rows, double g, double h) const {
    SplitChoice best;
    const double parent = score(g, h);
    std::vector<std::size_t> order(rows);
    for (Eigen::Index f = 0; f < x_.cols(); ++f) {
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x_(static_cast<Eigen::Index>(a), f) < x_(static_cast<Eigen::Index>(b), f);
      });
      double gl = 0.0, hl = 0.0;
      for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        gl += grad_[order[k]];
        hl += hess_[order[k]];
        const double lo = x_(static_cast<Eigen::Index>(order[k]), f);
        const double hi = x_(static_cast<Eigen::Index>(order[k + 1]), f);
        if (!(lo < hi)) continue;
        const double gain = 0.5 * (score(gl, hl) + score(g - gl, h - hl) - parent);
        if (gain > best.gain && gain > config_.gamma && gain > kMinGain) {
          double threshold = lo + (hi - lo) / 2.0;
          if (!(lo < threshold)) threshold = hi;
          best = {static_cast<int>(f), threshold, gain};
        }
      }
      order = rows;
    }
    return best;
  }

  const Matrix& x_;
  const std::vector<double>& grad_;
  const std::vector<double>& hess_;
  const GbtConfig& config_;
  Tree tree_;
};

void check_input(const GbtModel& model, std::size_t cols) {
  require(cols == model.num_features, ErrorCode::kDimensionMismatch,
          "model expects " + std::to_string(model.num_features) + " features, got " + std::to_string(cols));
}

}  // namespace

double Tree::predict(std::span<const double> x) const {
  std::size_t id = 0;
  while (!nodes[id].is_leaf()) {
    const Node& n = nodes[id];
    id = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right);
  }
  return nodes[id].value;
}

std::size_t Tree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Node& n = nodes[i];
    if (n.is_leaf()) continue;
    level[static_cast<std::size_t>(n.left)] = level[static_cast<std::size_t>(n.right)] = level[i] + 1;
    deepest = std::max(deepest, level[i] + 1);
  }
  return deepest;
}

void GbtConfig::validate() const {
  require(n_trees >= 1, ErrorCode::kInvalidArgument, "n_trees must be >= 1");
  require(max_depth >= 1, ErrorCode::kInvalidArgument, "max_depth must be >= 1");
  require(learning_rate > 0.0 && std::isfinite(learning_rate), ErrorCode::kInvalidArgument,
          "learning_rate must be positive");
  require(lambda >= 0.0 && gamma >= 0.0, ErrorCode::kInvalidArgument, "lambda and gamma must be non-negative");
  require(subsample > 0.0 && subsample <= 1.0, ErrorCode::kInvalidArgument, "subsample must lie in (0, 1]");
}

double GbtModel::margin(std::span<const double> x) const {
  check_input(*this, x.size());
  double sum = 0.0;
  for (const Tree& t : trees) sum += t.predict(x);
  return base_score + learning_rate * sum;
}

void GbtModel::validate() const {
  require(num_features > 0, ErrorCode::kInvalidArgument, "model has no features");
  require(std::isfinite(base_score) && learning_rate > 0.0, ErrorCode::kInvalidArgument, "bad model header");
  require(feature_names.empty() || feature_names.size() == num_features, ErrorCode::kInvalidArgument,
          "feature_names length differs from feature count");
  for (const Tree& t : trees) {
    require(!t.nodes.empty(), ErrorCode::kInvalidArgument, "empty tree");
    const auto count = static_cast<int>(t.nodes.size());
    for (int i = 0; i < count; ++i) {
      const Node& n = t.nodes[static_cast<std::size_t>(i)];
      if (n.is_leaf()) {
        require(std::isfinite(n.value), ErrorCode::kNumeric, "non-finite leaf value");
        continue;
      }
      require(static_cast<std::size_t>(n.feature) < num_features, ErrorCode::kInvalidArgument,
              "split feature index out of range");
      // Children always follow their parent, which also rules out cycles.
      require(n.left > i && n.left < count && n.right > i && n.right < count, ErrorCode::kInvalidArgument,
              "child index out of range");
    }
    require(max_depth == 0 || t.depth() <= max_depth, ErrorCode::kInvalidArgument, "tree exceeds max depth");
  }
}

GbtModel train_gbt(const FlowTable& data, const GbtConfig& config) {
  config.validate();
  data.validate();
  require(data.has_both_classes(), ErrorCode::kSingleClass, "single-class data");

  const std::size_t n = data.num_rows();
  const double mean = static_cast<double>(data.count_label(kBenign)) / static_cast<double>(n);
  GbtModel model;
  model.learning_rate = config.learning_rate;
  model.base_score = std::log(mean / (1.0 - mean));
  model.num_features = data.num_features();
  model.max_depth = config.max_depth;
  model.feature_names = data.feature_names;

  std::vector<double> margin(n, model.base_score), grad(n), hess(n);
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  Rng rng(config.seed);
  const auto per_tree = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.subsample * static_cast<double>(n))));

  TreeBuilder builder(data.features, grad, hess, config);
  for (std::size_t t = 0; t < config.n_trees; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - data.labels[i];
      hess[i] = p * (1.0 - p);
    }
    std::vector<std::size_t> rows = all;
    if (per_tree < n) {
      rng.shuffle(std::span(rows));
      rows.resize(per_tree);
      std::sort(rows.begin(), rows.end());
    }
    Tree tree = builder.build(std::move(rows));
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = data.features.row(static_cast<Eigen::Index>(i));
      margin[i] += model.learning_rate * tree.predict(std::span<const double>(row.data(), static_cast<std::size_t>(row.size())));
    }
    model.trees.push_back(std::move(tree));
  }
  model.validate();
  return model;
}

GbtModel train_gbt(const FlowTable& data, std::size_t n_trees, std::size_t max_depth, double learning_rate,
                   std::uint64_t seed) {
  GbtConfig config;
  config.n_trees = n_trees;
  config.max_depth = max_depth;
  config.learning_rate = learning_rate;
  config.seed = seed;
  return train_gbt(data, config);
}

double gbt_predict(const GbtModel& model, std::span<const double> x) { return sigmoid(model.margin(x)); }

std::vector<double> predict(const GbtModel& model, const Matrix& rows) {
  check_input(model, static_cast<std::size_t>(rows.cols()));
  std::vector<double> out(static_cast<std::size_t>(rows.rows()));
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    out[static_cast<std::size_t>(i)] =
        gbt_predict(model, std::span<const double>(rows.row(i).data(), static_cast<std::size_t>(rows.cols())));
  }
  return out;
}

std::vector<double> gain_importance(const GbtModel& model) {
  std::vector<double> scores(model.num_features, 0.0);
  for (const Tree& t : model.trees) {
    for (const Node& n : t.nodes) {
      if (!n.is_leaf()) scores[static_cast<std::size_t>(n.feature)] += n.gain;
    }
  }
  return scores;
}

double log_loss(const GbtModel& model, const FlowTable& data) {
  const std::vector<double> p = predict(model, data.features);
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], 1e-15, 1.0 - 1e-15);
    total -= data.labels[i] == 1 ? std::log(q) : std::log(1.0 - q);
  }
  return total / static_cast<double>(p.size());
}

nlohmann::json to_json(const GbtModel& model) {
  nlohmann::json trees = nlohmann::json::array();
  for (const Tree& t : model.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const Node& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"leaf", n.value}});
      } else {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"gain", n.gain}});
      }
    }
    trees.push_back({{"nodes", nodes}});
  }
  nlohmann::json doc = {{"base_score", model.base_score},
                        {"learning_rate", model.learning_rate},
                        {"num_features", model.num_features},
                        {"max_depth", model.max_depth},
                        {"trees", trees}};
  if (!model.feature_names.empty()) doc["feature_names"] = model.feature_names;
  return doc;
}

GbtModel model_from_json(const nlohmann::json& doc) {
  GbtModel model;
  try {
    model.base_score = doc.at("base_score").get<double>();
    model.learning_rate = doc.at("learning_rate").get<double>();
    model.num_features = doc.at("num_features").get<std::size_t>();
    model.max_depth = doc.value("max_depth", std::size_t{0});
    if (doc.contains("feature_names")) model.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    for (const auto& t : doc.at("trees")) {
      Tree tree;
      for (const auto& n : t.at("nodes")) {
        Node node;
        if (n.contains("leaf")) {
          node.value = n.at("leaf").get<double>();
        } else {
          node.feature = n.at("feature").get<int>();
          node.threshold = n.at("threshold").get<double>();
          node.left = n.at("left").get<int>();
          node.right = n.at("right").get<int>();
          node.gain = n.value("gain", 0.0);
        }
        tree.nodes.push_back(node);
      }
      model.trees.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kParse, std::string("gbt model file: ") + e.what());
  }
  model.validate();
  return model;
}

void save_model(const GbtModel& model, const std::filesystem::path& path) { write_json(path, to_json(model)); }

GbtModel load_model(const std::filesystem::path& path) { return model_from_json(read_json(path)); }

}  // namespace flowshap::gbt
