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

// Reference implementations used as test oracles, plus small fixtures.
// Each oracle is written for clarity, independently of the library code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "flowshap/dataio.hpp"
#include "flowshap/mlp.hpp"

namespace flowshap::testing {

// Shapley values as the average marginal contribution over all p!
// orderings of the players. `value` takes a bitmask coalition.
inline std::vector<double> shapley_by_orderings(std::size_t p, const std::function<double(std::uint32_t)>& value) {
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> phi(p, 0.0);
  double count = 0.0;
  do {
    std::uint32_t mask = 0;
    double before = value(mask);
    for (std::size_t j : order) {
      mask |= 1u << j;
      const double after = value(mask);
      phi[j] += after - before;
      before = after;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& v : phi) v /= count;
  return phi;
}

// Fraction of (label 1, label 0) pairs ordered correctly by score, ties 1/2.
inline double pairwise_auc(const std::vector<int>& labels, const std::vector<double>& scores) {
  double hits = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1) continue;
    for (std::size_t k = 0; k < labels.size(); ++k) {
      if (labels[k] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[k]) hits += 1.0;
      else if (scores[i] == scores[k]) hits += 0.5;
    }
  }
  return hits / pairs;
}

// Plain-loop forward pass of an MLP with ReLU hidden units.
inline double reference_forward(const mlp::MlpModel& m, const std::vector<double>& x) {
  std::vector<double> h = x;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    const auto& w = m.weights[l];
    std::vector<double> next(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      double z = m.biases[l](r);
      for (Eigen::Index c = 0; c < w.cols(); ++c) z += w(r, c) * h[static_cast<std::size_t>(c)];
      const bool last = l + 1 == m.weights.size();
      if (!last) z = m.hidden_activation == mlp::Activation::kRelu ? std::max(z, 0.0) : 1.0 / (1.0 + std::exp(-z));
      next[static_cast<std::size_t>(r)] = z;
    }
    h = std::move(next);
  }
  return 1.0 / (1.0 + std::exp(-h[0]));
}

// Interventional coalition value computed directly from its definition.
inline double reference_coalition_value(const std::function<double(const std::vector<double>&)>& f,
                                        const std::vector<double>& x, const Matrix& background, std::uint32_t mask) {
  double sum = 0.0;
  for (Eigen::Index b = 0; b < background.rows(); ++b) {
    std::vector<double> z(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
      z[j] = (mask >> j) & 1u ? x[j] : background(b, static_cast<Eigen::Index>(j));
    }
    sum += f(z);
  }
  return sum / static_cast<double>(background.rows());
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::mt19937_64& gen, double lo = 0.0,
                            double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = u(gen);
  return m;
}

inline std::vector<std::string> numbered_names(std::size_t p, const std::string& prefix = "f") {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) names.push_back(prefix + std::to_string(j));
  return names;
}

inline FlowTable make_table(const Matrix& features, std::vector<int> labels) {
  FlowTable t;
  t.feature_names = numbered_names(static_cast<std::size_t>(features.cols()));
  t.features = features;
  t.labels = std::move(labels);
  return t;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("flowshap_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace flowshap::testing
