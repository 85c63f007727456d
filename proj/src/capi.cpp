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

#include "flowshap/flowshap.h"

#include <cstdlib>
#include <cstring>
#include <string>
#include <variant>

#include "flowshap/error.hpp"
#include "flowshap/gbt.hpp"
#include "flowshap/io.hpp"
#include "flowshap/mlp.hpp"
#include "flowshap/pipeline.hpp"
#include "flowshap/predictor.hpp"
#include "flowshap/shapley.hpp"

struct flowshap_model {
  std::variant<flowshap::mlp::MlpModel, flowshap::gbt::GbtModel> model;
  flowshap::shap::PredictFn predict;
  std::size_t num_features = 0;
};

namespace {

thread_local std::string g_error;
thread_local std::string g_stage;

flowshap_status to_status(flowshap::ErrorCode code) {
  using flowshap::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return FLOWSHAP_ERR_INVALID_ARGUMENT;
    case ErrorCode::kNotFound: return FLOWSHAP_ERR_NOT_FOUND;
    case ErrorCode::kParse: return FLOWSHAP_ERR_PARSE;
    case ErrorCode::kDimensionMismatch: return FLOWSHAP_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kSingleClass: return FLOWSHAP_ERR_SINGLE_CLASS;
    case ErrorCode::kNumeric: return FLOWSHAP_ERR_NUMERIC;
    case ErrorCode::kIo: return FLOWSHAP_ERR_IO;
    case ErrorCode::kInternal: return FLOWSHAP_ERR_INTERNAL;
  }
  return FLOWSHAP_ERR_INTERNAL;
}

template <typename Fn>
flowshap_status guarded(Fn&& fn) {
  g_error.clear();
  g_stage.clear();
  try {
    fn();
    return FLOWSHAP_OK;
  } catch (const flowshap::Error& e) {
    g_error = e.what();
    g_stage = e.stage();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_error = e.what();
    return FLOWSHAP_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_error = "out of memory";
    return FLOWSHAP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_error = e.what();
    return FLOWSHAP_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return FLOWSHAP_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require_ptr(const void* p, const char* what) {
  flowshap::require(p != nullptr, flowshap::ErrorCode::kInvalidArgument, std::string(what) + " is NULL");
}

flowshap::pipeline::RunConfig parse_config(const char* config_json) {
  if (config_json == nullptr || *config_json == '\0') return {};
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(config_json);
  } catch (const nlohmann::json::parse_error& e) {
    flowshap::Error err(flowshap::ErrorCode::kParse, std::string("config: ") + e.what());
    err.set_stage("config");
    throw err;
  }
  return flowshap::in_stage("config", [&] { return flowshap::pipeline::config_from_json(doc); });
}

}  // namespace

extern "C" {

const char* flowshap_version(void) { return "0.1.0"; }

const char* flowshap_last_error(void) { return g_error.c_str(); }

const char* flowshap_last_error_stage(void) { return g_stage.c_str(); }

const char* flowshap_status_name(flowshap_status status) {
  switch (status) {
    case FLOWSHAP_OK: return "ok";
    case FLOWSHAP_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case FLOWSHAP_ERR_NOT_FOUND: return "not_found";
    case FLOWSHAP_ERR_PARSE: return "parse";
    case FLOWSHAP_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
    case FLOWSHAP_ERR_SINGLE_CLASS: return "single_class";
    case FLOWSHAP_ERR_NUMERIC: return "numeric";
    case FLOWSHAP_ERR_IO: return "io";
    case FLOWSHAP_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

int flowshap_exit_code(flowshap_status status) {
  switch (status) {
    case FLOWSHAP_OK: return 0;
    case FLOWSHAP_ERR_INVALID_ARGUMENT:
    case FLOWSHAP_ERR_NOT_FOUND:
    case FLOWSHAP_ERR_PARSE:
    case FLOWSHAP_ERR_DIMENSION_MISMATCH:
    case FLOWSHAP_ERR_SINGLE_CLASS:
      return 2;
    default:
      return 1;
  }
}

void flowshap_string_free(char* s) { std::free(s); }

flowshap_status flowshap_run(const char* command, const char* config_json, char** result_json) {
  return guarded([&] {
    require_ptr(command, "command");
    require_ptr(result_json, "result_json");
    *result_json = nullptr;
    const auto config = parse_config(config_json);
    const auto result = flowshap::pipeline::run_command(command, config);
    const nlohmann::json doc = {{"artifacts", result.artifacts}, {"summary", result.summary}};
    *result_json = dup_string(doc.dump());
  });
}

flowshap_status flowshap_config_resolve(const char* config_json, char** result_json) {
  return guarded([&] {
    require_ptr(result_json, "result_json");
    *result_json = nullptr;
    const auto config = parse_config(config_json);
    flowshap::in_stage("config", [&] { config.validate(); });
    *result_json = dup_string(flowshap::pipeline::to_json(config).dump());
  });
}

flowshap_status flowshap_model_load(const char* path, flowshap_model** out) {
  return guarded([&] {
    require_ptr(path, "path");
    require_ptr(out, "out");
    *out = nullptr;
    const nlohmann::json doc = flowshap::read_json(path);
    auto handle = std::make_unique<flowshap_model>();
    if (doc.is_object() && doc.contains("trees")) {
      auto m = flowshap::gbt::model_from_json(doc);
      handle->num_features = m.num_features;
      handle->predict = flowshap::as_predictor(m);
      handle->model = std::move(m);
    } else {
      auto m = flowshap::mlp::model_from_json(doc);
      handle->num_features = m.input_dim();
      handle->predict = flowshap::as_predictor(m);
      handle->model = std::move(m);
    }
    *out = handle.release();
  });
}

void flowshap_model_free(flowshap_model* model) { delete model; }

flowshap_status flowshap_model_num_features(const flowshap_model* model, size_t* out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(out, "out");
    *out = model->num_features;
  });
}

flowshap_status flowshap_model_predict(const flowshap_model* model, const double* rows, size_t n_rows, size_t n_cols,
                                       double* out) {
  return guarded([&] {
    require_ptr(model, "model");
    if (n_rows == 0) return;
    require_ptr(rows, "rows");
    require_ptr(out, "out");
    const flowshap::Matrix m = Eigen::Map<const flowshap::Matrix>(rows, static_cast<Eigen::Index>(n_rows),
                                                                   static_cast<Eigen::Index>(n_cols));
    const std::vector<double> p = model->predict(m);
    std::copy(p.begin(), p.end(), out);
  });
}

flowshap_status flowshap_kernel_shap(const flowshap_model* model, const double* x, size_t p, const double* background,
                                     size_t n_background, size_t n_samples, uint64_t seed, double* phi,
                                     double* base_value, double* prediction) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(x, "x");
    require_ptr(background, "background");
    require_ptr(phi, "phi");
    flowshap::require(p == model->num_features, flowshap::ErrorCode::kDimensionMismatch,
                      "model expects " + std::to_string(model->num_features) + " features");
    const flowshap::Matrix bg = Eigen::Map<const flowshap::Matrix>(
        background, static_cast<Eigen::Index>(n_background), static_cast<Eigen::Index>(p));
    flowshap::shap::KernelShapOptions options;
    options.n_samples = n_samples;
    options.seed = seed;
    const auto e = flowshap::shap::kernel_shap(model->predict, std::span<const double>(x, p), bg, options);
    std::copy(e.phi.begin(), e.phi.end(), phi);
    if (base_value != nullptr) *base_value = e.base_value;
    if (prediction != nullptr) *prediction = e.prediction;
  });
}

}  // extern "C"
