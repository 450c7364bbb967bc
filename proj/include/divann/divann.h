/* Copyright 2026 The Authors.
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

/* C interface to the diverse nearest neighbor library.
 *
 * Every fallible call returns a divann_status; on failure a message is kept
 * per thread and can be read with divann_last_error(). Handles are opaque and
 * released with the matching *_free function, which accepts NULL.
 */

#ifndef DIVANN_DIVANN_H_
#define DIVANN_DIVANN_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define DIVANN_API __declspec(dllexport)
#else
#define DIVANN_API __attribute__((visibility("default")))
#endif

typedef enum divann_status {
  DIVANN_OK = 0,
  DIVANN_ERR_USAGE = 1,
  DIVANN_ERR_FORMAT = 2,
  DIVANN_ERR_DEGENERATE = 3,
  DIVANN_ERR_INFEASIBLE = 4,
  DIVANN_ERR_IO = 5,
  DIVANN_ERR_INTERNAL = 6
} divann_status;

typedef enum divann_rho {
  DIVANN_RHO_BINARY_COLOR = 0,
  DIVANN_RHO_EUCLIDEAN = 1
} divann_rho;

typedef enum divann_builder {
  DIVANN_BUILDER_SLOW_COLORFUL = 0,
  DIVANN_BUILDER_SLOW_DIVERSE = 1,
  DIVANN_BUILDER_FAST = 2
} divann_builder;

typedef enum divann_color_scheme {
  DIVANN_SCHEME_ARXIV = 0,
  DIVANN_SCHEME_SIFT_SKEWED = 1
} divann_color_scheme;

typedef struct divann_vectors divann_vectors;
typedef struct divann_dataset divann_dataset;
typedef struct divann_index divann_index;
typedef struct divann_result divann_result;
typedef struct divann_gt divann_gt;

DIVANN_API const char* divann_last_error(void);
DIVANN_API const char* divann_status_name(divann_status status);

/* Vector sets (base or query vectors without colors). */
DIVANN_API divann_status divann_vectors_create(const float* data, size_t n,
                                               size_t dim, divann_vectors** out);
DIVANN_API divann_status divann_vectors_load_fvecs(const char* path,
                                                   divann_vectors** out);
DIVANN_API divann_status divann_vectors_save_fvecs(const divann_vectors* v,
                                                   const char* path);
DIVANN_API divann_status divann_vectors_gaussian_mixture(
    size_t n, size_t dim, size_t centers, double spread, uint64_t center_seed,
    uint64_t seed, divann_vectors** out);
DIVANN_API size_t divann_vectors_size(const divann_vectors* v);
DIVANN_API size_t divann_vectors_dim(const divann_vectors* v);
/* Row-major n * dim floats, valid while the handle lives. */
DIVANN_API const float* divann_vectors_data(const divann_vectors* v);
DIVANN_API void divann_vectors_free(divann_vectors* v);

/* Colors. Paths ending in ".txt" use one decimal id per line. */
DIVANN_API divann_status divann_colors_load(const char* path, size_t n,
                                            uint32_t* out);
DIVANN_API divann_status divann_colors_save(const uint32_t* colors, size_t n,
                                            const char* path);
DIVANN_API divann_status divann_colors_skewed(size_t n,
                                              divann_color_scheme scheme,
                                              uint64_t seed, uint32_t* out);
/* Writes v's size colors into out. */
DIVANN_API divann_status divann_colors_hyperplane(const divann_vectors* v,
                                                  size_t buckets,
                                                  double primary_prob,
                                                  uint64_t seed, uint32_t* out);

/* Colored datasets. The vectors are copied. */
DIVANN_API divann_status divann_dataset_create(const divann_vectors* v,
                                               const uint32_t* colors,
                                               divann_dataset** out);
DIVANN_API size_t divann_dataset_size(const divann_dataset* ds);
DIVANN_API size_t divann_dataset_dim(const divann_dataset* ds);
DIVANN_API uint32_t divann_dataset_color(const divann_dataset* ds, uint32_t id);
DIVANN_API void divann_dataset_free(divann_dataset* ds);

typedef struct divann_fast_params {
  double alpha;
  uint32_t R;
  uint32_t L;
  uint32_t m;
  uint32_t passes;
  uint64_t seed;
  uint32_t threads;
} divann_fast_params;

/* alpha 1.2, R 64, L 200, m 1, two passes, seed 0, one thread. */
DIVANN_API void divann_fast_params_default(divann_fast_params* params);

DIVANN_API divann_status divann_build_fast(const divann_dataset* ds,
                                           const divann_fast_params* params,
                                           divann_index** out);
DIVANN_API divann_status divann_build_colorful_slow(const divann_dataset* ds,
                                                    size_t k, double alpha,
                                                    uint32_t threads,
                                                    divann_index** out);
DIVANN_API divann_status divann_build_diverse_slow(const divann_dataset* ds,
                                                   size_t k, size_t k_prime,
                                                   double alpha, divann_rho rho,
                                                   uint32_t threads,
                                                   divann_index** out);

typedef struct divann_index_info {
  divann_builder builder;
  divann_rho rho;
  size_t n;
  size_t edges;
  size_t max_degree;
  double alpha;
  uint32_t k;
  uint32_t k_prime;
  uint32_t degree_cap; /* 0xFFFFFFFF when absent */
  uint32_t build_list_size;
  uint32_t m;          /* 0xFFFFFFFF when absent */
  uint32_t passes;
  uint64_t seed;
  uint32_t start_node; /* 0xFFFFFFFF when absent */
} divann_index_info;

DIVANN_API divann_status divann_index_info_get(const divann_index* index,
                                               divann_index_info* info);
DIVANN_API size_t divann_index_degree(const divann_index* index, uint32_t node);
/* Copies up to cap neighbor ids of node; returns the full degree. */
DIVANN_API size_t divann_index_neighbors(const divann_index* index,
                                         uint32_t node, uint32_t* out,
                                         size_t cap);
/* Saves the graph with the dataset's colors. */
DIVANN_API divann_status divann_index_save(const divann_index* index,
                                           const divann_dataset* ds,
                                           const char* path);
/* A loaded index keeps the colors and dimension stored with it. */
DIVANN_API divann_status divann_index_load(const char* path, divann_index** out);
/* Writes n colors; fails for indexes that were built rather than loaded. */
DIVANN_API divann_status divann_index_colors(const divann_index* index,
                                             uint32_t* out);
DIVANN_API size_t divann_index_dim(const divann_index* index);
DIVANN_API void divann_index_free(divann_index* index);

/* Searches. query holds divann_dataset_dim floats. */
DIVANN_API divann_status divann_search_diverse(const divann_index* index,
                                               const divann_dataset* ds,
                                               const float* query, size_t k,
                                               size_t k_prime, size_t L,
                                               divann_result** out);
DIVANN_API divann_status divann_search_baseline(const divann_index* index,
                                                const divann_dataset* ds,
                                                const float* query, size_t k,
                                                size_t k_prime, size_t r,
                                                divann_result** out);
DIVANN_API divann_status divann_search_colorful(const divann_index* index,
                                                const divann_dataset* ds,
                                                const float* query, size_t k,
                                                size_t steps, int monotone,
                                                divann_result** out);
DIVANN_API divann_status divann_search_primal(const divann_index* index,
                                              const divann_dataset* ds,
                                              const float* query, size_t k,
                                              size_t k_prime, double C,
                                              divann_rho rho, size_t steps,
                                              divann_result** out);

typedef struct divann_dual_info {
  double init_C;
  double certified_C;
  double measured_C;
  uint32_t halvings;
  int best_effort;
} divann_dual_info;

DIVANN_API divann_status divann_search_dual(const divann_index* index,
                                            const divann_dataset* ds,
                                            const float* query, size_t k,
                                            size_t k_prime, double R,
                                            divann_rho rho, double epsilon,
                                            uint32_t c_loop, divann_result** out,
                                            divann_dual_info* info);

/* k * ceil(log_alpha(aspect ratio / epsilon)) with the aspect ratio
 * estimated from a seeded sample. */
DIVANN_API divann_status divann_default_steps(const divann_dataset* ds,
                                              size_t k, double alpha,
                                              double epsilon, size_t* out);

DIVANN_API size_t divann_result_size(const divann_result* r);
DIVANN_API uint32_t divann_result_id(const divann_result* r, size_t i);
DIVANN_API double divann_result_distance(const divann_result* r, size_t i);
DIVANN_API double divann_result_radius(const divann_result* r);
DIVANN_API uint64_t divann_result_steps(const divann_result* r);
DIVANN_API uint64_t divann_result_distance_evals(const divann_result* r);
DIVANN_API int divann_result_underfull(const divann_result* r);
DIVANN_API void divann_result_free(divann_result* r);

/* Structural checks on result ids. */
DIVANN_API int divann_is_k_colorful(const divann_dataset* ds,
                                    const uint32_t* ids, size_t n,
                                    size_t k_prime);
DIVANN_API int divann_is_diverse(const divann_dataset* ds, const uint32_t* ids,
                                 size_t n, size_t k_prime, double C,
                                 divann_rho rho);

/* Ground truth. */
DIVANN_API divann_status divann_gt_compute(const divann_dataset* ds,
                                           const divann_vectors* queries,
                                           size_t k, size_t k_prime,
                                           uint32_t threads, divann_gt** out);
DIVANN_API divann_status divann_gt_save(const divann_gt* gt, const char* path);
DIVANN_API divann_status divann_gt_load(const char* path, divann_gt** out);
DIVANN_API size_t divann_gt_queries(const divann_gt* gt);
DIVANN_API uint32_t divann_gt_k(const divann_gt* gt);
DIVANN_API uint32_t divann_gt_k_prime(const divann_gt* gt);
/* Copies up to cap ids of query q; returns the list length. */
DIVANN_API size_t divann_gt_list(const divann_gt* gt, size_t q, uint32_t* out,
                                 size_t cap);
/* |result ∩ truth(q)| / |truth(q)|. */
DIVANN_API divann_status divann_gt_recall(const divann_gt* gt, size_t q,
                                          const divann_result* r, double* out);
DIVANN_API void divann_gt_free(divann_gt* gt);

/* Benchmarks. Each sweep row is written as CSV to csv_path ("-" writes to
 * standard output). Indexes may be NULL to skip their configurations:
 * std_index drives the baseline and std-build rows, div_index the
 * div-build rows. */
DIVANN_API divann_status divann_bench_sweep(
    const divann_dataset* ds, const divann_vectors* queries,
    const divann_gt* gt, const divann_index* std_index,
    const divann_index* div_index, const uint32_t* L_values, size_t n_L,
    uint32_t threads, const char* csv_path);
/* Also writes an (m, build_seconds) table to times_path when non-NULL. */
DIVANN_API divann_status divann_bench_ablation_m(
    const divann_dataset* ds, const divann_vectors* queries,
    const divann_gt* gt, const uint32_t* m_values, size_t n_m,
    const uint32_t* L_values, size_t n_L, const divann_fast_params* base,
    uint32_t threads, const char* csv_path, const char* times_path);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* DIVANN_DIVANN_H_ */
