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

#include "flowshap/shapley.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <Eigen/Cholesky>

#include "flowshap/error.hpp"
#include "flowshap/rng.hpp"

namespace flowshap::shap {

namespace {

// Rows per model call when evaluating coalitions.
constexpr Eigen::Index kMaxBatchRows = 1 << 16;
// Diagonal ridge added to the normal equations.
constexpr double kRidge = 1e-10;
// Reciprocal condition number below which the design counts as singular.
constexpr double kMinRcond = 1e-12;

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(c);
}

bool all_equal(const MaskMatrix& masks, Eigen::Index row, std::uint8_t value) {
  for (Eigen::Index j = 0; j < masks.cols(); ++j) {
    if (masks(row, j) != value) return false;
  }
  return true;
}

std::vector<std::string> default_names(std::size_t p) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < p; ++j) names.push_back("feature_" + std::to_string(j));
  return names;
}

ShapExplanation make_explanation(std::span<const double> x, std::vector<std::string> names, double base,
                                 double prediction, std::vector<double> phi) {
  if (names.empty()) names = default_names(x.size());
  require(names.size() == x.size(), ErrorCode::kDimensionMismatch, "feature_names length differs from instance");
  ShapExplanation e;
  e.base_value = base;
  e.prediction = prediction;
  e.phi = std::move(phi);
  e.feature_values.assign(x.begin(), x.end());
  e.feature_names = std::move(names);
  return e;
}

}  // namespace

// ---------------------------------------------------------------------------
// Games

std::vector<double> FunctionGame::values(const MaskMatrix& masks) const {
  require(static_cast<std::size_t>(masks.cols()) == players_, ErrorCode::kDimensionMismatch,
          "mask width differs from player count");
  std::vector<double> out(static_cast<std::size_t>(masks.rows()));
  for (Eigen::Index k = 0; k < masks.rows(); ++k) {
    out[static_cast<std::size_t>(k)] =
        fn_(std::span<const std::uint8_t>(masks.row(k).data(), static_cast<std::size_t>(masks.cols())));
  }
  return out;
}

InterventionalGame::InterventionalGame(PredictFn model, std::span<const double> x, Matrix background)
    : model_(std::move(model)), x_(x.begin(), x.end()), background_(std::move(background)) {
  require(!x_.empty(), ErrorCode::kInvalidArgument, "instance has no features");
  require(background_.rows() > 0, ErrorCode::kInvalidArgument, "background is empty");
  require(static_cast<std::size_t>(background_.cols()) == x_.size(), ErrorCode::kDimensionMismatch,
          "background width differs from instance");
  for (double v : x_) require(std::isfinite(v), ErrorCode::kInvalidArgument, "instance is not finite");

  Matrix row(1, static_cast<Eigen::Index>(x_.size()));
  for (std::size_t j = 0; j < x_.size(); ++j) row(0, static_cast<Eigen::Index>(j)) = x_[j];
  const std::vector<double> fx = model_(row);
  require(fx.size() == 1, ErrorCode::kDimensionMismatch, "model returned the wrong number of outputs");
  prediction_ = fx[0];

  const std::vector<double> fb = model_(background_);
  require(fb.size() == static_cast<std::size_t>(background_.rows()), ErrorCode::kDimensionMismatch,
          "model returned the wrong number of outputs");
  base_value_ = std::accumulate(fb.begin(), fb.end(), 0.0) / static_cast<double>(fb.size());
}

std::vector<double> InterventionalGame::values(const MaskMatrix& masks) const {
  require(static_cast<std::size_t>(masks.cols()) == x_.size(), ErrorCode::kDimensionMismatch,
          "mask width differs from player count");
  const Eigen::Index n_bg = background_.rows();
  const Eigen::Index p = background_.cols();
  std::vector<double> out(static_cast<std::size_t>(masks.rows()), 0.0);

  // Rows that need the model; the empty and full coalitions are known.
  std::vector<Eigen::Index> pending;
  for (Eigen::Index k = 0; k < masks.rows(); ++k) {
    if (all_equal(masks, k, 1)) {
      out[static_cast<std::size_t>(k)] = prediction_;
    } else if (all_equal(masks, k, 0)) {
      out[static_cast<std::size_t>(k)] = base_value_;
    } else {
      pending.push_back(k);
    }
  }

  const std::size_t per_chunk = static_cast<std::size_t>(std::max<Eigen::Index>(1, kMaxBatchRows / n_bg));
  Matrix hybrid;
  for (std::size_t start = 0; start < pending.size(); start += per_chunk) {
    const std::size_t stop = std::min(pending.size(), start + per_chunk);
    hybrid.resize(static_cast<Eigen::Index>(stop - start) * n_bg, p);
    for (std::size_t c = start; c < stop; ++c) {
      const Eigen::Index k = pending[c];
      const Eigen::Index base_row = static_cast<Eigen::Index>(c - start) * n_bg;
      hybrid.middleRows(base_row, n_bg) = background_;
      for (Eigen::Index j = 0; j < p; ++j) {
        if (masks(k, j)) hybrid.block(base_row, j, n_bg, 1).setConstant(x_[static_cast<std::size_t>(j)]);
      }
    }
    const std::vector<double> preds = model_(hybrid);
    require(preds.size() == static_cast<std::size_t>(hybrid.rows()), ErrorCode::kDimensionMismatch,
            "model returned the wrong number of outputs");
    for (std::size_t c = start; c < stop; ++c) {
      const std::size_t offset = (c - start) * static_cast<std::size_t>(n_bg);
      double sum = 0.0;
      for (Eigen::Index b = 0; b < n_bg; ++b) sum += preds[offset + static_cast<std::size_t>(b)];
      out[static_cast<std::size_t>(pending[c])] = sum / static_cast<double>(n_bg);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact enumeration

std::vector<double> exact_shapley(const CoalitionGame& game) {
  const std::size_t p = game.num_players();
  require(p >= 1, ErrorCode::kInvalidArgument, "game has no players");
  require(p <= kMaxExactPlayers, ErrorCode::kInvalidArgument,
          "exact enumeration supports at most " + std::to_string(kMaxExactPlayers) + " features, got " +
              std::to_string(p));

  const std::uint64_t total = std::uint64_t{1} << p;
  std::vector<double> value(total);
  constexpr std::uint64_t kChunk = 4096;
  MaskMatrix masks;
  for (std::uint64_t start = 0; start < total; start += kChunk) {
    const std::uint64_t stop = std::min(total, start + kChunk);
    masks.resize(static_cast<Eigen::Index>(stop - start), static_cast<Eigen::Index>(p));
    for (std::uint64_t s = start; s < stop; ++s) {
      for (std::size_t j = 0; j < p; ++j) {
        masks(static_cast<Eigen::Index>(s - start), static_cast<Eigen::Index>(j)) = (s >> j) & 1u;
      }
    }
    const std::vector<double> v = game.values(masks);
    std::copy(v.begin(), v.end(), value.begin() + static_cast<std::ptrdiff_t>(start));
  }

  // weight(s) = s!(p-s-1)!/p! = 1 / (p * C(p-1, s))
  std::vector<double> weight(p);
  for (std::size_t s = 0; s < p; ++s) weight[s] = 1.0 / (static_cast<double>(p) * binomial(p - 1, s));

  std::vector<double> phi(p, 0.0);
  for (std::uint64_t s = 0; s < total; ++s) {
    const auto size = static_cast<std::size_t>(std::popcount(s));
    if (size == p) continue;
    for (std::size_t j = 0; j < p; ++j) {
      const std::uint64_t bit = std::uint64_t{1} << j;
      if (s & bit) continue;
      phi[j] += weight[size] * (value[s | bit] - value[s]);
    }
  }
  return phi;
}

// ---------------------------------------------------------------------------
// Kernel SHAP

double ShapExplanation::efficiency_residual() const {
  return base_value + std::accumulate(phi.begin(), phi.end(), 0.0) - prediction;
}

double shapley_kernel_weight(std::size_t p, std::size_t s) {
  require(s > 0 && s < p, ErrorCode::kInvalidArgument, "kernel weight is infinite for empty/full coalitions");
  return static_cast<double>(p - 1) / (binomial(p, s) * static_cast<double>(s) * static_cast<double>(p - s));
}

CoalitionDesign enumerate_design(std::size_t p) {
  require(p >= 2, ErrorCode::kInvalidArgument, "enumeration needs at least two features");
  require(p <= kMaxEnumeratedPlayers, ErrorCode::kInvalidArgument,
          "full coalition enumeration supports at most " + std::to_string(kMaxEnumeratedPlayers) + " features");
  const std::uint64_t total = std::uint64_t{1} << p;
  CoalitionDesign design;
  design.masks.resize(static_cast<Eigen::Index>(total - 2), static_cast<Eigen::Index>(p));
  design.weights.reserve(total - 2);
  for (std::uint64_t s = 1; s + 1 < total; ++s) {
    for (std::size_t j = 0; j < p; ++j) {
      design.masks(static_cast<Eigen::Index>(s - 1), static_cast<Eigen::Index>(j)) = (s >> j) & 1u;
    }
    design.weights.push_back(shapley_kernel_weight(p, static_cast<std::size_t>(std::popcount(s))));
  }
  const double sum = std::accumulate(design.weights.begin(), design.weights.end(), 0.0);
  for (double& w : design.weights) w /= sum;
  return design;
}

CoalitionDesign sample_design(std::size_t p, std::size_t n_samples, std::uint64_t seed) {
  require(p >= 2, ErrorCode::kInvalidArgument, "sampling needs at least two features");
  require(n_samples >= p + 2, ErrorCode::kInvalidArgument,
          "n_samples must be at least p + 2 (" + std::to_string(p + 2) + ")");

  // Sizes s and p - s are grouped; the middle size (p even) stands alone.
  const std::size_t num_sizes = p / 2;        // ceil((p - 1) / 2)
  const std::size_t num_paired = (p - 1) / 2;  // floor((p - 1) / 2)
  std::vector<double> size_weight(num_sizes);
  for (std::size_t s = 1; s <= num_sizes; ++s) {
    size_weight[s - 1] = static_cast<double>(p - 1) / (static_cast<double>(s) * static_cast<double>(p - s));
    if (s <= num_paired) size_weight[s - 1] *= 2.0;
  }
  const double total_weight = std::accumulate(size_weight.begin(), size_weight.end(), 0.0);
  for (double& w : size_weight) w /= total_weight;

  std::vector<std::vector<std::uint8_t>> rows;
  std::vector<double> weights;
  auto add_row = [&](const std::vector<std::uint8_t>& mask, double w) {
    rows.push_back(mask);
    weights.push_back(w);
  };

  // Enumerate whole size groups while the remaining budget covers them.
  double budget = static_cast<double>(n_samples);
  std::vector<double> remaining = size_weight;
  std::size_t full_sizes = 0;
  for (std::size_t s = 1; s <= num_sizes; ++s) {
    const bool paired = s <= num_paired;
    const double count = binomial(p, s) * (paired ? 2.0 : 1.0);
    if (budget * remaining[s - 1] / count < 1.0 - 1e-8) break;
    ++full_sizes;
    budget -= count;
    if (remaining[s - 1] < 1.0) {
      const double rest = 1.0 - remaining[s - 1];
      for (double& w : remaining) w /= rest;
    }
    const double w = size_weight[s - 1] / binomial(p, s) / (paired ? 2.0 : 1.0);
    std::vector<std::size_t> pick(s);
    std::iota(pick.begin(), pick.end(), std::size_t{0});
    for (;;) {
      std::vector<std::uint8_t> mask(p, 0);
      for (std::size_t j : pick) mask[j] = 1;
      add_row(mask, w);
      if (paired) {
        for (auto& m : mask) m ^= 1u;
        add_row(mask, w);
      }
      // Next combination in lexicographic order.
      std::size_t i = s;
      while (i > 0 && pick[i - 1] == p - s + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t k = i; k < s; ++k) pick[k] = pick[k - 1] + 1;
    }
  }

  const std::size_t fixed = rows.size();
  auto samples_left = static_cast<std::ptrdiff_t>(std::llround(std::max(budget, 0.0)));
  if (full_sizes < num_sizes && samples_left > 0) {
    // Size distribution over the groups not enumerated; paired groups are
    // halved because each draw adds the complement too.
    std::vector<double> draw_weight;
    for (std::size_t s = full_sizes + 1; s <= num_sizes; ++s) {
      draw_weight.push_back(size_weight[s - 1] / (s <= num_paired ? 2.0 : 1.0));
    }
    std::vector<double> cumulative(draw_weight.size());
    std::partial_sum(draw_weight.begin(), draw_weight.end(), cumulative.begin());
    for (double& c : cumulative) c /= cumulative.back();

    Rng rng(seed);
    std::map<std::vector<std::uint8_t>, std::size_t> seen;
    std::vector<std::size_t> features(p);
    std::iota(features.begin(), features.end(), std::size_t{0});
    const std::ptrdiff_t max_draws = 4 * samples_left;
    for (std::ptrdiff_t draw = 0; draw < max_draws && samples_left > 0; ++draw) {
      const double u = rng.uniform();
      const auto group = static_cast<std::size_t>(
          std::upper_bound(cumulative.begin(), cumulative.end() - 1, u) - cumulative.begin());
      const std::size_t s = full_sizes + 1 + group;
      // Partial Fisher-Yates: the first s entries form a uniform subset.
      for (std::size_t i = 0; i < s; ++i) std::swap(features[i], features[i + rng.below(p - i)]);
      std::vector<std::uint8_t> mask(p, 0);
      for (std::size_t i = 0; i < s; ++i) mask[features[i]] = 1;

      auto [it, inserted] = seen.try_emplace(mask, rows.size());
      const std::size_t slot = it->second;
      if (inserted) {
        add_row(mask, 1.0);
        --samples_left;
      } else {
        weights[slot] += 1.0;
      }
      if (samples_left > 0 && s <= num_paired) {
        for (auto& m : mask) m ^= 1u;
        if (inserted) {
          add_row(mask, 1.0);
          --samples_left;
        } else {
          weights[slot + 1] += 1.0;
        }
      }
    }

    // Sampled rows share whatever kernel mass enumeration did not cover.
    double mass_left = 0.0;
    for (std::size_t s = full_sizes + 1; s <= num_sizes; ++s) mass_left += size_weight[s - 1];
    const double sampled = std::accumulate(weights.begin() + static_cast<std::ptrdiff_t>(fixed), weights.end(), 0.0);
    if (sampled > 0.0) {
      for (std::size_t k = fixed; k < weights.size(); ++k) weights[k] *= mass_left / sampled;
    }
  }

  CoalitionDesign design;
  design.masks.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (std::size_t j = 0; j < p; ++j) design.masks(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = rows[k][j];
  }
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  for (double& w : weights) w /= sum;
  design.weights = std::move(weights);
  return design;
}

std::vector<double> solve_kernel_regression(const CoalitionDesign& design, std::span<const double> coalition_values,
                                            double empty_value, double full_value) {
  const auto p = static_cast<std::size_t>(design.masks.cols());
  const auto rows = design.masks.rows();
  require(coalition_values.size() == static_cast<std::size_t>(rows) && design.weights.size() == coalition_values.size(),
          ErrorCode::kDimensionMismatch, "design, weights and values differ in length");
  const double total = full_value - empty_value;
  if (p == 1) return {total};

  // y_k - z_k,last * total = sum_{j<last} (z_kj - z_k,last) phi_j
  const auto free = static_cast<Eigen::Index>(p - 1);
  Eigen::MatrixXd a(rows, free);
  Eigen::VectorXd b(rows);
  Eigen::VectorXd w(rows);
  for (Eigen::Index k = 0; k < rows; ++k) {
    const double z_last = design.masks(k, free);
    for (Eigen::Index j = 0; j < free; ++j) a(k, j) = design.masks(k, j) - z_last;
    b(k) = coalition_values[static_cast<std::size_t>(k)] - empty_value - z_last * total;
    w(k) = design.weights[static_cast<std::size_t>(k)];
  }
  Eigen::MatrixXd normal = a.transpose() * w.asDiagonal() * a;
  const Eigen::VectorXd rhs = a.transpose() * (w.asDiagonal() * b);

  Eigen::LDLT<Eigen::MatrixXd> check(normal);
  // LDLT solves through zero pivots, so rcond() alone misses exact singularity.
  const Eigen::VectorXd pivots = check.vectorD().cwiseAbs();
  const double pivot_ratio = pivots.maxCoeff() > 0.0 ? pivots.minCoeff() / pivots.maxCoeff() : 0.0;
  if (check.info() != Eigen::Success || !(check.rcond() >= kMinRcond) || !(pivot_ratio >= kMinRcond)) {
    fail(ErrorCode::kNumeric, "singular regression system: degenerate coalition sample");
  }
  normal.diagonal().array() += kRidge;
  const Eigen::VectorXd beta = normal.ldlt().solve(rhs);
  require(beta.allFinite(), ErrorCode::kNumeric, "kernel regression produced non-finite coefficients");

  std::vector<double> phi(beta.begin(), beta.end());
  phi.push_back(total - beta.sum());
  return phi;
}

std::vector<double> kernel_shap(const CoalitionGame& game, double empty_value, double full_value,
                                const KernelShapOptions& options) {
  const std::size_t p = game.num_players();
  require(p >= 1, ErrorCode::kInvalidArgument, "game has no players");
  if (p == 1) return {full_value - empty_value};

  if (options.n_samples == 0) {
    const CoalitionDesign design = enumerate_design(p);
    return solve_kernel_regression(design, game.values(design.masks), empty_value, full_value);
  }
  require(options.n_samples >= p + 2, ErrorCode::kInvalidArgument,
          "n_samples must be 0 or at least p + 2 (" + std::to_string(p + 2) + ")");
  std::uint64_t seed = options.seed;
  for (std::size_t attempt = 0;; ++attempt) {
    const CoalitionDesign design = sample_design(p, options.n_samples, seed);
    try {
      return solve_kernel_regression(design, game.values(design.masks), empty_value, full_value);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNumeric || attempt >= options.max_retries) throw;
      seed = derive_seed(options.seed, attempt + 1);
    }
  }
}

ShapExplanation kernel_shap(const PredictFn& model, std::span<const double> x, const Matrix& background,
                            const KernelShapOptions& options, std::vector<std::string> feature_names) {
  const InterventionalGame game(model, x, background);
  std::vector<double> phi = kernel_shap(game, game.base_value(), game.prediction(), options);
  return make_explanation(x, std::move(feature_names), game.base_value(), game.prediction(), std::move(phi));
}

ShapExplanation exact_explain(const PredictFn& model, std::span<const double> x, const Matrix& background,
                              std::vector<std::string> feature_names) {
  const InterventionalGame game(model, x, background);
  std::vector<double> phi = exact_shapley(game);
  return make_explanation(x, std::move(feature_names), game.base_value(), game.prediction(), std::move(phi));
}

std::vector<ShapExplanation> batch_explain(const PredictFn& model, const FlowTable& table, const Matrix& background,
                                           const KernelShapOptions& options) {
  std::vector<ShapExplanation> out;
  out.reserve(table.num_rows());
  for (Eigen::Index i = 0; i < table.features.rows(); ++i) {
    const auto row = table.features.row(i);
    const std::span<const double> x(row.data(), static_cast<std::size_t>(row.size()));
    KernelShapOptions row_options = options;
    row_options.seed = derive_seed(options.seed, fnv1a64(std::as_bytes(x)));
    out.push_back(kernel_shap(model, x, background, row_options, table.feature_names));
  }
  return out;
}

Matrix sample_background(const FlowTable& table, std::size_t size, std::uint64_t seed) {
  require(size >= 1, ErrorCode::kInvalidArgument, "background size must be >= 1");
  require(table.num_rows() > 0, ErrorCode::kInvalidArgument, "cannot sample a background from an empty table");
  std::vector<std::size_t> rows(table.num_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  if (size < rows.size()) {
    Rng rng(seed);
    rng.shuffle(std::span(rows));
    rows.resize(size);
    std::sort(rows.begin(), rows.end());
  }
  Matrix out(static_cast<Eigen::Index>(rows.size()), table.features.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = table.features.row(static_cast<Eigen::Index>(rows[i]));
  }
  return out;
}

nlohmann::json to_json(const ShapExplanation& e) {
  return {{"feature_names", e.feature_names},
          {"feature_values", e.feature_values},
          {"phi", e.phi},
          {"base_value", e.base_value},
          {"prediction", e.prediction}};
}

ShapExplanation explanation_from_json(const nlohmann::json& doc) {
  ShapExplanation e;
  try {
    e.feature_names = doc.at("feature_names").get<std::vector<std::string>>();
    e.feature_values = doc.at("feature_values").get<std::vector<double>>();
    e.phi = doc.at("phi").get<std::vector<double>>();
    e.base_value = doc.at("base_value").get<double>();
    e.prediction = doc.at("prediction").get<double>();
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorCode::kParse, std::string("explanation: ") + ex.what());
  }
  require(e.phi.size() == e.feature_values.size() && e.phi.size() == e.feature_names.size(),
          ErrorCode::kParse, "explanation arrays differ in length");
  return e;
}

}  // namespace flowshap::shap
