/* Copyright 2026 The PlusDC Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to libplusdc.
 *
 * Every function returns a plusdc_status. On failure, plusdc_last_error()
 * returns a message for the calling thread until its next API call. Strings
 * returned through char** must be released with plusdc_string_free. Handles
 * are released with the matching *_free function; passing NULL is a no-op.
 *
 * Object ids are 1-based in files and JSON. Structured options and results
 * are JSON documents; an options argument may be NULL for defaults.
 */

#ifndef PLUSDC_PLUSDC_H_
#define PLUSDC_PLUSDC_H_

#include <stdint.h>

#if defined(PLUSDC_BUILDING_LIBRARY)
#define PLUSDC_API __attribute__((visibility("default")))
#else
#define PLUSDC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum plusdc_status {
  PLUSDC_OK = 0,
  PLUSDC_ERR_INPUT = 1,
  PLUSDC_ERR_DOMAIN = 2,
  PLUSDC_ERR_CAPABILITY = 3,
  PLUSDC_ERR_NUMERIC = 4,
  PLUSDC_ERR_IO = 5,
  PLUSDC_ERR_PRECONDITION = 6,
  PLUSDC_ERR_INTERNAL = 7
} plusdc_status;

typedef enum plusdc_existence {
  PLUSDC_EXISTS = 0,
  PLUSDC_NONEXISTENT = 1,
  PLUSDC_UNDETERMINED = 2
} plusdc_existence;

typedef struct plusdc_graph plusdc_graph;
typedef struct plusdc_dataset plusdc_dataset;
typedef struct plusdc_params plusdc_params;
typedef struct plusdc_fit_result plusdc_fit_result;

PLUSDC_API const char* plusdc_version(void);
PLUSDC_API const char* plusdc_last_error(void);
PLUSDC_API void plusdc_string_free(char* s);

/* Lowercase hex SHA-256 of a file's bytes. */
PLUSDC_API plusdc_status plusdc_file_sha256(const char* path, char** hex);

/* ---- datasets ---------------------------------------------------------- */

/* num_objects = 0 infers n from the largest object id. */
PLUSDC_API plusdc_status plusdc_dataset_read_csv(const char* path,
                                                 int num_objects,
                                                 int require_outcomes,
                                                 plusdc_dataset** out);
PLUSDC_API plusdc_status plusdc_dataset_write_csv(const plusdc_dataset* data,
                                                  const char* path);
PLUSDC_API plusdc_status plusdc_dataset_shape(const plusdc_dataset* data,
                                              int* num_objects,
                                              int* num_covariates,
                                              int* num_comparisons);
PLUSDC_API void plusdc_dataset_free(plusdc_dataset* data);

/* Draws covariates and outcomes on a graph. Options:
 * {"d": 3, "v_star": [...], "u_half_width": 0.5, "seed": 0}.
 * truth may be NULL. */
PLUSDC_API plusdc_status plusdc_simulate_data(const plusdc_graph* graph,
                                              const char* options_json,
                                              plusdc_dataset** out,
                                              plusdc_params** truth);

/* ---- graphs ------------------------------------------------------------ */

PLUSDC_API plusdc_status plusdc_graph_read_csv(const char* path,
                                               int num_vertices,
                                               plusdc_graph** out);
PLUSDC_API plusdc_status plusdc_graph_from_dataset(const plusdc_dataset* data,
                                                   plusdc_graph** out);
PLUSDC_API plusdc_status plusdc_graph_write_csv(const plusdc_graph* graph,
                                                const char* path);
/* Options: {"cheeger": true, "lambda": 0.5 | null}. */
PLUSDC_API plusdc_status plusdc_graph_stats(const plusdc_graph* graph,
                                            const char* options_json,
                                            char** report_json);
/* Spec: {"model": "nurhm6" | "hsbm2", "n": 200, "num_edges": N (optional),
 *        "seed": S}
 *   or  {"model": "nurhm", "n": ..., "edge_probability": [p2, p3, ...]}
 *   or  {"model": "hsbm", "n": ..., "edge_size": m, "block_sizes": [...],
 *        "within_probability": [...], "cross_probability": q}.
 * meta_json receives the resolved spec, seed, generator and realized N. */
PLUSDC_API plusdc_status plusdc_graph_simulate(const char* spec_json,
                                               plusdc_graph** out,
                                               char** meta_json);
PLUSDC_API void plusdc_graph_free(plusdc_graph* graph);

/* ---- parameters and fitting -------------------------------------------- */

PLUSDC_API plusdc_status plusdc_params_read_json(const char* path,
                                                 plusdc_params** out);
PLUSDC_API plusdc_status plusdc_params_write_json(const plusdc_params* params,
                                                  const char* meta_json,
                                                  const char* path);
PLUSDC_API plusdc_status plusdc_params_shape(const plusdc_params* params,
                                             int* num_objects,
                                             int* num_covariates);
PLUSDC_API void plusdc_params_free(plusdc_params* params);

/* Config: {"epsilon", "max_outer", "inner_u_tol", "inner_u_max",
 *          "inner_v_tol", "inner_v_max", "step_size",
 *          "existence": "off" | "divergence" | "lp"}. */
PLUSDC_API plusdc_status plusdc_fit(const plusdc_dataset* data,
                                    const char* config_json,
                                    plusdc_fit_result** out);
PLUSDC_API plusdc_status plusdc_fit_result_status(
    const plusdc_fit_result* result, int* converged,
    plusdc_existence* existence);
/* {"u", "v", "meta": {diagnostics}}. */
PLUSDC_API plusdc_status plusdc_fit_result_json(const plusdc_fit_result* result,
                                                char** json);
/* iteration,loglik_norm */
PLUSDC_API plusdc_status plusdc_fit_result_write_trace(
    const plusdc_fit_result* result, const char* path);
PLUSDC_API plusdc_status plusdc_fit_result_params(
    const plusdc_fit_result* result, plusdc_params** out);
PLUSDC_API void plusdc_fit_result_free(plusdc_fit_result* result);

/* ---- analysis ---------------------------------------------------------- */

/* comparison_id,object_id,win_prob[,ranking_prob]. The ranking column is
 * written for observed comparisons when with_ranking is nonzero. */
PLUSDC_API plusdc_status plusdc_predict(const plusdc_params* params,
                                        const plusdc_dataset* data,
                                        int with_ranking, const char* path);

/* Options: {"lp": false, "cheeger": true, "lambda": null,
 *           "triangles": [[1, 2, 4], ...]}. */
PLUSDC_API plusdc_status plusdc_check(const plusdc_dataset* data,
                                      const char* options_json,
                                      char** report_json);

/* Spec: {"design", "n": [...], "reps", "v_star", "seed", "threads",
 *        "fit": {...}}. Writes one CSV row per replicate to rows_path and
 * returns the per-n summary. */
PLUSDC_API plusdc_status plusdc_experiment_consistency(const char* spec_json,
                                                       const char* rows_path,
                                                       char** summary_json);
/* Spec: {"k", "modes": ["top1", ...], "seed", "include_pl", "threads",
 *        "fit"}. */
PLUSDC_API plusdc_status plusdc_cv(const plusdc_dataset* data,
                                   const char* spec_json,
                                   const char* rows_path,
                                   char** summary_json);
/* Spec: {"subsets": "all" | [[1, 3], [], ...], "threads", "fit"}.
 * Covariate indices are 1-based. */
PLUSDC_API plusdc_status plusdc_select(const plusdc_dataset* data,
                                       const char* spec_json,
                                       const char* rows_path,
                                       char** summary_json);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* PLUSDC_PLUSDC_H_ */
