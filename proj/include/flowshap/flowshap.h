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

#ifndef FLOWSHAP_FLOWSHAP_H_
#define FLOWSHAP_FLOWSHAP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(FLOWSHAP_BUILDING_LIBRARY)
#define FLOWSHAP_API __declspec(dllexport)
#else
#define FLOWSHAP_API __declspec(dllimport)
#endif
#else
#define FLOWSHAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum flowshap_status {
  FLOWSHAP_OK = 0,
  FLOWSHAP_ERR_INVALID_ARGUMENT = 1,
  FLOWSHAP_ERR_NOT_FOUND = 2,
  FLOWSHAP_ERR_PARSE = 3,
  FLOWSHAP_ERR_DIMENSION_MISMATCH = 4,
  FLOWSHAP_ERR_SINGLE_CLASS = 5,
  FLOWSHAP_ERR_NUMERIC = 6,
  FLOWSHAP_ERR_IO = 7,
  FLOWSHAP_ERR_INTERNAL = 8
} flowshap_status;

/* Library version, e.g. "0.1.0". */
FLOWSHAP_API const char* flowshap_version(void);

/* Message and stage of the last failure on the calling thread. Both are
 * empty strings after a successful call. */
FLOWSHAP_API const char* flowshap_last_error(void);
FLOWSHAP_API const char* flowshap_last_error_stage(void);

FLOWSHAP_API const char* flowshap_status_name(flowshap_status status);

/* Process exit code for a status: 0 success, 2 bad input or configuration,
 * 1 any other failure. */
FLOWSHAP_API int flowshap_exit_code(flowshap_status status);

/* Frees strings returned through char** out-parameters. NULL is ignored. */
FLOWSHAP_API void flowshap_string_free(char* s);

/* Runs a subcommand ("synth", "preprocess", "select-features", "train",
 * "evaluate", "explain-global", "explain-local", "pipeline") with a JSON
 * object of kebab-case settings. On success *result_json receives
 * {"artifacts": [...], "summary": {...}}. */
FLOWSHAP_API flowshap_status flowshap_run(const char* command, const char* config_json, char** result_json);

/* Validates a JSON config and returns it with every default filled in. */
FLOWSHAP_API flowshap_status flowshap_config_resolve(const char* config_json, char** result_json);

/* Trained classifier (MLP or boosted trees), loaded from its JSON file. */
typedef struct flowshap_model flowshap_model;

FLOWSHAP_API flowshap_status flowshap_model_load(const char* path, flowshap_model** out);
FLOWSHAP_API void flowshap_model_free(flowshap_model* model);
FLOWSHAP_API flowshap_status flowshap_model_num_features(const flowshap_model* model, size_t* out);

/* rows: n_rows x n_cols, row-major. out: n_rows probabilities of benign. */
FLOWSHAP_API flowshap_status flowshap_model_predict(const flowshap_model* model, const double* rows, size_t n_rows,
                                                    size_t n_cols, double* out);

/* Kernel SHAP attributions of x (length p) against n_background rows
 * (row-major, n_background x p). n_samples 0 enumerates all coalitions
 * (p <= 15). phi receives p values. */
FLOWSHAP_API flowshap_status flowshap_kernel_shap(const flowshap_model* model, const double* x, size_t p,
                                                  const double* background, size_t n_background, size_t n_samples,
                                                  uint64_t seed, double* phi, double* base_value,
                                                  double* prediction);

#ifdef __cplusplus
}
#endif

#endif /* FLOWSHAP_FLOWSHAP_H_ */
