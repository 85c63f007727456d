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
#include <numeric>
#include <random>

#include "flowshap/error.hpp"
#include "flowshap/mlp.hpp"
#include "flowshap/predictor.hpp"
#include "flowshap/shapley.hpp"
#include "support.hpp"

namespace flowshap::shap {
namespace {

std::uint32_t bits_of(std::span<const std::uint8_t> mask) {
  std::uint32_t bits = 0;
  for (std::size_t j = 0; j < mask.size(); ++j) bits |= static_cast<std::uint32_t>(mask[j] != 0) << j;
  return bits;
}

// Game whose payout is given as a function of the coalition bitmask.
FunctionGame bitmask_game(std::size_t p, std::function<double(std::uint32_t)> v) {
  return FunctionGame(p, [v](std::span<const std::uint8_t> mask) { return v(bits_of(mask)); });
}

std::vector<double> kernel_on(const FunctionGame& game, std::function<double(std::uint32_t)> v,
                              KernelShapOptions options = {}) {
  const std::size_t p = game.num_players();
  return kernel_shap(game, v(0), v((1u << p) - 1u), options);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInternal;
}

std::vector<double> row_of(const Matrix& m, Eigen::Index i) { return {m.row(i).begin(), m.row(i).end()}; }

TEST(ExactShapley, LinearGame) {
  // v(S) = sum of w_j over present players; phi_j = w_j.
  const auto v = [](std::uint32_t s) { return (s & 1u ? 1.0 : 0.0) + (s & 2u ? 2.0 : 0.0); };
  const std::vector<double> phi = exact_shapley(bitmask_game(2, v));
  EXPECT_NEAR(phi[0], 1.0, 1e-12);
  EXPECT_NEAR(phi[1], 2.0, 1e-12);
}

TEST(ExactShapley, SinglePlayerTakesEverything) {
  const auto v = [](std::uint32_t s) { return s ? 4.5 : 1.0; };
  const std::vector<double> phi = exact_shapley(bitmask_game(1, v));
  ASSERT_EQ(phi.size(), 1u);
  EXPECT_DOUBLE_EQ(phi[0], 3.5);
  EXPECT_DOUBLE_EQ(kernel_on(bitmask_game(1, v), v)[0], 3.5);
}

TEST(ExactShapley, XorSplitsEvenly) {
  const auto v = [](std::uint32_t s) { return s == 1u || s == 2u ? 1.0 : 0.0; };
  const std::vector<double> phi = exact_shapley(bitmask_game(2, v));
  EXPECT_NEAR(phi[0], 0.0, 1e-12);
  EXPECT_NEAR(phi[1], 0.0, 1e-12);
  // With v(both) = 1 the gain is shared.
  const auto w = [](std::uint32_t s) { return s == 3u ? 1.0 : 0.0; };
  const std::vector<double> psi = exact_shapley(bitmask_game(2, w));
  EXPECT_NEAR(psi[0], 0.5, 1e-12);
  EXPECT_NEAR(psi[1], 0.5, 1e-12);
}

TEST(ExactShapley, TooManyPlayers) {
  const FunctionGame big(21, [](std::span<const std::uint8_t>) { return 0.0; });
  EXPECT_EQ(code_of([&] { exact_shapley(big); }), ErrorCode::kInvalidArgument);
}

TEST(ExactShapley, MatchesOrderingAverage) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t p = 1; p <= 6; ++p) {
    std::vector<double> table(1u << p);
    for (double& t : table) t = u(gen);
    const auto v = [&](std::uint32_t s) { return table[s]; };
    const std::vector<double> phi = exact_shapley(bitmask_game(p, v));
    const std::vector<double> oracle = testing::shapley_by_orderings(p, v);
    for (std::size_t j = 0; j < p; ++j) EXPECT_NEAR(phi[j], oracle[j], 1e-12) << "p=" << p << " j=" << j;
  }
}

TEST(KernelShap, EnumerationMatchesExactOnRandomGames) {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t p = 2; p <= 8; ++p) {
    std::vector<double> table(1u << p);
    for (double& t : table) t = u(gen);
    const auto v = [&](std::uint32_t s) { return table[s]; };
    const FunctionGame game = bitmask_game(p, v);
    const std::vector<double> exact = exact_shapley(game);
    const std::vector<double> kernel = kernel_on(game, v);
    for (std::size_t j = 0; j < p; ++j) EXPECT_NEAR(kernel[j], exact[j], 1e-9) << "p=" << p;
  }
}

TEST(KernelShap, EnumerationMatchesExactOnSmallNetworks) {
  std::mt19937_64 gen(5);
  for (std::size_t p : {3u, 5u, 7u}) {
    const mlp::MlpModel m = mlp::init(p, std::vector<std::size_t>{6, 4}, p);
    const PredictFn f = as_predictor(m);
    const Matrix bg = testing::random_matrix(8, p, gen);
    const Matrix xs = testing::random_matrix(3, p, gen);
    for (Eigen::Index i = 0; i < xs.rows(); ++i) {
      const ShapExplanation k = kernel_shap(f, row_of(xs, i), bg, KernelShapOptions{});
      const ShapExplanation e = exact_explain(f, row_of(xs, i), bg);
      for (std::size_t j = 0; j < p; ++j) EXPECT_NEAR(k.phi[j], e.phi[j], 1e-6);
      EXPECT_LT(std::abs(k.efficiency_residual()), 1e-9);
      EXPECT_EQ(k.feature_names[0], "feature_0");
    }
  }
}

TEST(Axioms, DummyPlayerGetsZero) {
  // Player 2 never changes the payout.
  const auto v = [](std::uint32_t s) { return (s & 1u ? 0.7 : 0.0) * (s & 2u ? 2.0 : 1.0); };
  const FunctionGame game = bitmask_game(3, v);
  EXPECT_NEAR(exact_shapley(game)[2], 0.0, 1e-12);
  EXPECT_NEAR(kernel_on(game, v)[2], 0.0, 1e-9);
}

TEST(Axioms, SymmetricPlayersShareEqually) {
  const auto v = [](std::uint32_t s) {
    const int a = (s & 1u) != 0, b = (s & 2u) != 0, c = (s & 4u) != 0;
    return 1.5 * (a + b) + 0.5 * a * b + 2.0 * c * (a + b);
  };
  const FunctionGame game = bitmask_game(3, v);
  const std::vector<double> phi = kernel_on(game, v);
  EXPECT_NEAR(phi[0], phi[1], 1e-10);
}

TEST(Axioms, Additivity) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> t1(32), t2(32);
  for (double& t : t1) t = u(gen);
  for (double& t : t2) t = u(gen);
  const auto v1 = [&](std::uint32_t s) { return t1[s]; };
  const auto v2 = [&](std::uint32_t s) { return t2[s]; };
  const auto sum = [&](std::uint32_t s) { return t1[s] + t2[s]; };
  const std::vector<double> a = kernel_on(bitmask_game(5, v1), v1);
  const std::vector<double> b = kernel_on(bitmask_game(5, v2), v2);
  const std::vector<double> c = kernel_on(bitmask_game(5, sum), sum);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(c[j], a[j] + b[j], 1e-10);
}

TEST(Axioms, EfficiencyHoldsForSampledRuns) {
  std::mt19937_64 gen(7);
  const std::size_t p = 18;
  const mlp::MlpModel m = mlp::init(p, std::vector<std::size_t>{10}, 2);
  const Matrix bg = testing::random_matrix(10, p, gen);
  const Matrix xs = testing::random_matrix(5, p, gen);
  for (Eigen::Index i = 0; i < xs.rows(); ++i) {
    KernelShapOptions opts;
    opts.n_samples = 300;
    opts.seed = static_cast<std::uint64_t>(i);
    const ShapExplanation e = kernel_shap(as_predictor(m), row_of(xs, i), bg, opts);
    EXPECT_LT(std::abs(e.efficiency_residual()), 1e-9);
    EXPECT_EQ(e.phi.size(), p);
  }
}

TEST(KernelShap, BudgetAndSizeErrors) {
  const auto v = [](std::uint32_t s) { return static_cast<double>(s); };
  KernelShapOptions opts;
  opts.n_samples = 5;
  EXPECT_EQ(code_of([&] { kernel_on(bitmask_game(4, v), v, opts); }), ErrorCode::kInvalidArgument);
  const FunctionGame big(16, [](std::span<const std::uint8_t>) { return 0.0; });
  EXPECT_EQ(code_of([&] { kernel_shap(big, 0.0, 0.0, KernelShapOptions{}); }), ErrorCode::kInvalidArgument);
}

TEST(KernelShap, SampledIsDeterministicPerSeed) {
  std::mt19937_64 gen(8);
  const mlp::MlpModel m = mlp::init(12, std::vector<std::size_t>{8}, 3);
  const Matrix bg = testing::random_matrix(6, 12, gen);
  const std::vector<double> x = row_of(testing::random_matrix(1, 12, gen), 0);
  KernelShapOptions opts;
  opts.n_samples = 200;
  opts.seed = 11;
  EXPECT_EQ(kernel_shap(as_predictor(m), x, bg, opts).phi, kernel_shap(as_predictor(m), x, bg, opts).phi);
}

TEST(Design, KernelWeightsAndEnumeration) {
  EXPECT_DOUBLE_EQ(shapley_kernel_weight(4, 1), 3.0 / (4.0 * 1 * 3));
  EXPECT_DOUBLE_EQ(shapley_kernel_weight(4, 2), 3.0 / (6.0 * 2 * 2));
  for (std::size_t p = 2; p <= 10; ++p) {
    const CoalitionDesign d = enumerate_design(p);
    EXPECT_EQ(static_cast<std::size_t>(d.masks.rows()), (std::size_t{1} << p) - 2);
    EXPECT_NEAR(std::accumulate(d.weights.begin(), d.weights.end(), 0.0), 1.0, 1e-12);
    for (Eigen::Index k = 0; k < d.masks.rows(); ++k) {
      const int size = d.masks.row(k).cast<int>().sum();
      EXPECT_GT(size, 0);
      EXPECT_LT(size, static_cast<int>(p));
    }
  }
  EXPECT_THROW(enumerate_design(1), Error);
  EXPECT_THROW(enumerate_design(16), Error);
}

TEST(Design, SampledDesignIsNormalizedAndProper) {
  for (std::size_t p : {5u, 12u, 20u}) {
    const CoalitionDesign d = sample_design(p, 200, 3);
    EXPECT_NEAR(std::accumulate(d.weights.begin(), d.weights.end(), 0.0), 1.0, 1e-12);
    EXPECT_LE(static_cast<std::size_t>(d.masks.rows()), 200u);
    for (Eigen::Index k = 0; k < d.masks.rows(); ++k) {
      const int size = d.masks.row(k).cast<int>().sum();
      EXPECT_GT(size, 0);
      EXPECT_LT(size, static_cast<int>(p));
    }
    for (double w : d.weights) EXPECT_GT(w, 0.0);
  }
  EXPECT_THROW(sample_design(5, 6, 1), Error);
}

TEST(Design, SingularSystemIsReported) {
  CoalitionDesign d;
  d.masks = MaskMatrix::Zero(2, 4);
  d.masks(0, 0) = 1;
  d.masks(1, 0) = 1;
  d.masks(1, 1) = 1;
  d.weights = {0.5, 0.5};
  EXPECT_EQ(code_of([&] { solve_kernel_regression(d, std::vector<double>{0.1, 0.2}, 0.0, 1.0); }),
            ErrorCode::kNumeric);
}

TEST(InterventionalGame, EndpointsAndInteriorCoalitions) {
  std::mt19937_64 gen(9);
  const mlp::MlpModel m = mlp::init(4, std::vector<std::size_t>{5}, 7);
  const auto f = [&](const std::vector<double>& z) { return mlp::forward(m, z); };
  const Matrix bg = testing::random_matrix(7, 4, gen);
  const std::vector<double> x = row_of(testing::random_matrix(1, 4, gen), 0);
  const InterventionalGame game(as_predictor(m), x, bg);
  EXPECT_DOUBLE_EQ(game.prediction(), f(x));
  EXPECT_NEAR(game.base_value(), testing::reference_coalition_value(f, x, bg, 0u), 1e-15);

  MaskMatrix masks(16, 4);
  for (std::uint32_t s = 0; s < 16; ++s)
    for (std::size_t j = 0; j < 4; ++j) masks(s, static_cast<Eigen::Index>(j)) = (s >> j) & 1u;
  const std::vector<double> v = game.values(masks);
  for (std::uint32_t s = 0; s < 16; ++s) {
    EXPECT_NEAR(v[s], testing::reference_coalition_value(f, x, bg, s), 1e-14) << "mask " << s;
  }
  EXPECT_EQ(v[15], f(x));
}

TEST(InterventionalGame, InputErrors) {
  const mlp::MlpModel m = mlp::init(3, std::vector<std::size_t>{2}, 1);
  EXPECT_THROW(InterventionalGame(as_predictor(m), std::vector<double>{0.1, 0.2, 0.3}, Matrix(0, 3)), Error);
  EXPECT_THROW(InterventionalGame(as_predictor(m), std::vector<double>{0.1, 0.2}, Matrix::Zero(2, 3)), Error);
}

TEST(BatchExplain, RowsAndDuplicates) {
  std::mt19937_64 gen(10);
  const mlp::MlpModel m = mlp::init(5, std::vector<std::size_t>{4}, 1);
  Matrix x = testing::random_matrix(3, 5, gen);
  x.row(2) = x.row(0);
  const FlowTable t = testing::make_table(x, {1, 0, 1});
  const Matrix bg = testing::random_matrix(5, 5, gen);
  KernelShapOptions opts;
  opts.n_samples = 12;
  const std::vector<ShapExplanation> out = batch_explain(as_predictor(m), t, bg, opts);
  ASSERT_EQ(out.size(), 3u);
  EXPECT_EQ(out[0].phi, out[2].phi);
  EXPECT_EQ(out[0].feature_names, t.feature_names);
  for (const auto& e : out) EXPECT_LT(std::abs(e.efficiency_residual()), 1e-9);

  FlowTable empty = t;
  empty.features.resize(0, 5);
  empty.labels.clear();
  EXPECT_TRUE(batch_explain(as_predictor(m), empty, bg, opts).empty());
}

TEST(Background, SampleSizes) {
  std::mt19937_64 gen(11);
  const FlowTable t = testing::make_table(testing::random_matrix(10, 3, gen), std::vector<int>(10, 1));
  EXPECT_EQ(sample_background(t, 50, 1), t.features);
  const Matrix bg = sample_background(t, 4, 1);
  EXPECT_EQ(bg.rows(), 4);
  EXPECT_EQ(bg, sample_background(t, 4, 1));
  for (Eigen::Index i = 0; i < bg.rows(); ++i) {
    bool found = false;
    for (Eigen::Index r = 0; r < t.features.rows(); ++r) found = found || bg.row(i) == t.features.row(r);
    EXPECT_TRUE(found);
  }
}

TEST(Json, ExplanationRoundTrip) {
  ShapExplanation e;
  e.base_value = 0.62;
  e.phi = {0.2, -0.5, 0.1};
  e.feature_values = {1.0, 0.0, 0.25};
  e.feature_names = {"a", "b", "c"};
  e.prediction = 0.42;
  const ShapExplanation back = explanation_from_json(to_json(e));
  EXPECT_EQ(back.phi, e.phi);
  EXPECT_EQ(back.feature_names, e.feature_names);
  EXPECT_EQ(back.base_value, e.base_value);
  EXPECT_EQ(back.prediction, e.prediction);
  EXPECT_EQ(code_of([] { explanation_from_json(nlohmann::json::object()); }), ErrorCode::kParse);
}

}  // namespace
}  // namespace flowshap::shap
