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
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "flowshap/flowshap.h"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("flowshap_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Single hidden unit, identity-like: z = 2*x0 - x1, p = sigmoid(z).
const char* kTinyModel = R"({
  "layer_sizes": [2, 1, 1],
  "hidden_activation": "relu",
  "output_activation": "sigmoid",
  "weights": [[[2.0, -1.0]], [[1.0]]],
  "biases": [[0.0], [0.0]]
})";

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

class CApi : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = scratch(::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::ofstream(dir_ / "model.json") << kTinyModel;
  }
  fs::path dir_;
};

TEST_F(CApi, StatusNamesAndExitCodes) {
  EXPECT_STREQ(flowshap_status_name(FLOWSHAP_OK), "ok");
  EXPECT_EQ(flowshap_exit_code(FLOWSHAP_OK), 0);
  for (flowshap_status s : {FLOWSHAP_ERR_INVALID_ARGUMENT, FLOWSHAP_ERR_NOT_FOUND, FLOWSHAP_ERR_PARSE,
                            FLOWSHAP_ERR_DIMENSION_MISMATCH, FLOWSHAP_ERR_SINGLE_CLASS}) {
    EXPECT_EQ(flowshap_exit_code(s), 2) << flowshap_status_name(s);
  }
  for (flowshap_status s : {FLOWSHAP_ERR_NUMERIC, FLOWSHAP_ERR_IO, FLOWSHAP_ERR_INTERNAL}) {
    EXPECT_EQ(flowshap_exit_code(s), 1) << flowshap_status_name(s);
  }
  EXPECT_GT(std::strlen(flowshap_version()), 0u);
}

TEST_F(CApi, ModelLoadPredictAndErrors) {
  flowshap_model* model = nullptr;
  ASSERT_EQ(flowshap_model_load((dir_ / "model.json").c_str(), &model), FLOWSHAP_OK);
  size_t p = 0;
  ASSERT_EQ(flowshap_model_num_features(model, &p), FLOWSHAP_OK);
  EXPECT_EQ(p, 2u);

  const double rows[] = {1.0, 0.5, 0.0, 3.0};
  double out[2] = {0, 0};
  ASSERT_EQ(flowshap_model_predict(model, rows, 2, 2, out), FLOWSHAP_OK);
  EXPECT_DOUBLE_EQ(out[0], sigmoid(1.5));
  EXPECT_DOUBLE_EQ(out[1], 0.5);  // relu clips the negative pre-activation

  EXPECT_EQ(flowshap_model_predict(model, rows, 1, 3, out), FLOWSHAP_ERR_DIMENSION_MISMATCH);
  EXPECT_NE(std::strlen(flowshap_last_error()), 0u);
  EXPECT_EQ(flowshap_model_predict(nullptr, rows, 1, 2, out), FLOWSHAP_ERR_INVALID_ARGUMENT);
  flowshap_model_free(model);
  flowshap_model_free(nullptr);

  flowshap_model* missing = nullptr;
  EXPECT_EQ(flowshap_model_load((dir_ / "nope.json").c_str(), &missing), FLOWSHAP_ERR_NOT_FOUND);
  EXPECT_EQ(missing, nullptr);
  std::ofstream(dir_ / "bad.json") << "{\"layer_sizes\": [2,";
  EXPECT_EQ(flowshap_model_load((dir_ / "bad.json").c_str(), &missing), FLOWSHAP_ERR_PARSE);
}

TEST_F(CApi, KernelShapIsEfficient) {
  flowshap_model* model = nullptr;
  ASSERT_EQ(flowshap_model_load((dir_ / "model.json").c_str(), &model), FLOWSHAP_OK);
  const double x[] = {1.0, 0.5};
  const double background[] = {0.0, 0.0, 0.2, 0.1, 0.4, 0.0};
  double phi[2], base = 0, prediction = 0;
  ASSERT_EQ(flowshap_kernel_shap(model, x, 2, background, 3, 0, 1, phi, &base, &prediction), FLOWSHAP_OK);
  EXPECT_DOUBLE_EQ(prediction, sigmoid(1.5));
  EXPECT_NEAR(base + phi[0] + phi[1], prediction, 1e-12);
  EXPECT_GT(phi[0], 0.0);
  EXPECT_LT(phi[1], 0.0);

  EXPECT_EQ(flowshap_kernel_shap(model, x, 2, background, 0, 0, 1, phi, &base, &prediction),
            FLOWSHAP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(flowshap_kernel_shap(model, x, 3, background, 2, 0, 1, phi, &base, &prediction),
            FLOWSHAP_ERR_DIMENSION_MISMATCH);
  flowshap_model_free(model);
}

TEST_F(CApi, RunAndConfigErrors) {
  char* result = nullptr;
  const std::string out = (dir_ / "flows.csv").string();
  const nlohmann::json config = {{"n-benign", 20}, {"n-attack", 20}, {"out", out}, {"output-dir", dir_.string()}};
  ASSERT_EQ(flowshap_run("synth", config.dump().c_str(), &result), FLOWSHAP_OK) << flowshap_last_error();
  ASSERT_NE(result, nullptr);
  const auto doc = nlohmann::json::parse(result);
  flowshap_string_free(result);
  EXPECT_EQ(doc.at("summary").at("rows"), 40);
  EXPECT_TRUE(fs::exists(out));

  result = nullptr;
  EXPECT_EQ(flowshap_run("explode", "{}", &result), FLOWSHAP_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(result, nullptr);
  EXPECT_EQ(flowshap_run("synth", "{not json", &result), FLOWSHAP_ERR_PARSE);
  EXPECT_STREQ(flowshap_last_error_stage(), "config");
  EXPECT_EQ(flowshap_run("synth", R"({"colour": 1})", &result), FLOWSHAP_ERR_INVALID_ARGUMENT);

  const nlohmann::json missing = {{"input", (dir_ / "absent.csv").string()}, {"output-dir", dir_.string()}};
  EXPECT_EQ(flowshap_run("preprocess", missing.dump().c_str(), &result), FLOWSHAP_ERR_NOT_FOUND);
  EXPECT_STREQ(flowshap_last_error_stage(), "load");
}

TEST_F(CApi, ConfigResolveFillsDefaults) {
  char* result = nullptr;
  ASSERT_EQ(flowshap_config_resolve(R"({"top-k": 7})", &result), FLOWSHAP_OK);
  const auto doc = nlohmann::json::parse(result);
  flowshap_string_free(result);
  EXPECT_EQ(doc.at("top-k"), 7);
  EXPECT_EQ(doc.at("seed"), 42);
  EXPECT_EQ(doc.at("scenario"), "one-to-all");
  flowshap_string_free(nullptr);
}

}  // namespace
