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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "flowshap/dataio.hpp"
#include "json.hpp"

namespace flowshap::shap {

// Batched model: one output per input row.
using PredictFn = std::function<std::vector<double>(const Matrix&)>;

// Coalition masks, one per row; entry (k, j) == 1 means feature j is present.
using MaskMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Characteristic function of a cooperative game over `num_players()`
// features: the payout of each coalition.
class CoalitionGame {
 public:
  virtual ~CoalitionGame() = default;
  virtual std::size_t num_players() const = 0;
  virtual std::vector<double> values(const MaskMatrix& masks) const = 0;
};

// Game defined by an arbitrary callable, one coalition at a time.
class FunctionGame final : public CoalitionGame {
 public:
  using Fn = std::function<double(std::span<const std::uint8_t>)>;
  FunctionGame(std::size_t players, Fn fn) : players_(players), fn_(std::move(fn)) {}

  std::size_t num_players() const override { return players_; }
  std::vector<double> values(const MaskMatrix& masks) const override;

 private:
  std::size_t players_;
  Fn fn_;
};

// v(S) = mean over background rows b of model(x_S, b_rest): features in S
// take the explained instance's values, the others the background row's.
// The full coalition evaluates to model(x) exactly.
class InterventionalGame final : public CoalitionGame {
 public:
  InterventionalGame(PredictFn model, std::span<const double> x, Matrix background);

  std::size_t num_players() const override { return x_.size(); }
  std::vector<double> values(const MaskMatrix& masks) const override;

  double prediction() const { return prediction_; }
  double base_value() const { return base_value_; }

 private:
  PredictFn model_;
  std::vector<double> x_;
  Matrix background_;
  double prediction_ = 0.0;
  double base_value_ = 0.0;
};

// Largest player count accepted by exact enumeration (2^p evaluations).
inline constexpr std::size_t kMaxExactPlayers = 20;
// Largest player count accepted by Kernel SHAP's full enumeration mode.
inline constexpr std::size_t kMaxEnumeratedPlayers = 15;

// phi_j = sum over S not containing j of |S|!(p-|S|-1)!/p! (v(S + j) - v(S)),
// by enumerating all 2^p coalitions.
std::vector<double> exact_shapley(const CoalitionGame& game);

struct ShapExplanation {
  double base_value = 0.0;
  std::vector<double> phi;
  std::vector<double> feature_values;
  std::vector<std::string> feature_names;
  double prediction = 0.0;

  // base_value + sum(phi) - prediction
  double efficiency_residual() const;
};

struct KernelShapOptions {
  // 0 enumerates every coalition (p <= kMaxEnumeratedPlayers); otherwise
  // the coalition budget, which must be at least p + 2.
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::size_t max_retries = 4;
};

// Weighted coalition design for the Kernel SHAP regression.
struct CoalitionDesign {
  MaskMatrix masks;             // never contains the empty or full coalition
  std::vector<double> weights;  // sums to 1
};

// Shapley kernel weight (p-1) / (C(p, s) s (p-s)) for a coalition of size s.
double shapley_kernel_weight(std::size_t p, std::size_t s);

CoalitionDesign enumerate_design(std::size_t p);
// Fully enumerates the smallest/largest coalition sizes while the budget
// covers them (pairing each size with its complement), then spends the rest
// on paired random draws with sizes distributed by kernel weight. Repeated
// draws accumulate weight on one row.
CoalitionDesign sample_design(std::size_t p, std::size_t n_samples, std::uint64_t seed);

// Constrained weighted least squares over `design`: phi_0 is pinned to
// v(empty) and the last coefficient is eliminated via
// sum(phi) = v(full) - v(empty).
std::vector<double> solve_kernel_regression(const CoalitionDesign& design, std::span<const double> coalition_values,
                                            double empty_value, double full_value);

// Kernel SHAP attributions for any game with known v(empty) and v(full).
std::vector<double> kernel_shap(const CoalitionGame& game, double empty_value, double full_value,
                                const KernelShapOptions& options);

ShapExplanation kernel_shap(const PredictFn& model, std::span<const double> x, const Matrix& background,
                            const KernelShapOptions& options, std::vector<std::string> feature_names = {});

// Same explanation shape, attributions from exact enumeration.
ShapExplanation exact_explain(const PredictFn& model, std::span<const double> x, const Matrix& background,
                              std::vector<std::string> feature_names = {});

// Row-wise kernel_shap. Each row's seed is derived from `options.seed` and
// the row's contents, so equal rows get equal explanations.
std::vector<ShapExplanation> batch_explain(const PredictFn& model, const FlowTable& table, const Matrix& background,
                                           const KernelShapOptions& options);

// Up to `size` distinct rows drawn uniformly without replacement.
Matrix sample_background(const FlowTable& table, std::size_t size, std::uint64_t seed);

nlohmann::json to_json(const ShapExplanation& e);
ShapExplanation explanation_from_json(const nlohmann::json& doc);

}  // namespace flowshap::shap
