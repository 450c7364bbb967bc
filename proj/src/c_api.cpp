// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "divann/divann.h"

#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <new>
#include <string>
#include <vector>

#include "divann/bench.hpp"
#include "divann/core.hpp"
#include "divann/error.hpp"
#include "divann/fast.hpp"
#include "divann/graph.hpp"
#include "divann/io.hpp"
#include "divann/oracle.hpp"
#include "divann/theory.hpp"

struct divann_vectors {
  divann::VectorSet v;
};

struct divann_dataset {
  divann::VectorDataset d;
};

struct divann_index {
  divann::DiverseGraph graph;
  std::vector<divann::Color> colors;  // filled for loaded snapshots
  std::uint32_t dim = 0;
  bool loaded = false;
};

struct divann_result {
  divann::QueryResult r;
};

struct divann_gt {
  divann::GroundTruth gt;
};

namespace {

using divann::ErrorKind;

thread_local std::string g_last_error;

divann_status status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage: return DIVANN_ERR_USAGE;
    case ErrorKind::kFormat: return DIVANN_ERR_FORMAT;
    case ErrorKind::kDegenerate: return DIVANN_ERR_DEGENERATE;
    case ErrorKind::kInfeasible: return DIVANN_ERR_INFEASIBLE;
    case ErrorKind::kIo: return DIVANN_ERR_IO;
  }
  return DIVANN_ERR_INTERNAL;
}

template <typename Fn>
divann_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return DIVANN_OK;
  } catch (const divann::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return DIVANN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return DIVANN_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw divann::UsageError(what);
}

divann::RhoMode rho_of(divann_rho rho) {
  switch (rho) {
    case DIVANN_RHO_BINARY_COLOR: return divann::RhoMode::kBinaryColor;
    case DIVANN_RHO_EUCLIDEAN: return divann::RhoMode::kEuclidean;
  }
  throw divann::UsageError("unknown rho mode");
}

std::uint32_t opt_u32(const std::optional<std::uint32_t>& v) {
  return v.has_value() ? *v : divann::kAbsent;
}

divann::BuildParams params_of(const divann_fast_params& p) {
  divann::BuildParams out;
  out.alpha = p.alpha;
  out.R = p.R;
  out.L = p.L;
  out.m = p.m;
  out.passes = p.passes;
  out.seed = p.seed;
  out.threads = p.threads;
  return out;
}

std::span<const float> query_span(const divann_dataset* ds, const float* q) {
  require(q != nullptr, "query is null");
  return {q, ds->d.dim()};
}

void emit(divann_result** out, divann::QueryResult r) {
  *out = new divann_result{std::move(r)};
}

// Opens path for writing, or standard output for "-".
template <typename Fn>
void with_output(const char* path, Fn&& fn) {
  require(path != nullptr, "output path is null");
  if (std::strcmp(path, "-") == 0) {
    fn(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream f(path);
  if (!f) throw divann::IoError(std::string("cannot open ") + path);
  fn(f);
  f.flush();
  if (!f) throw divann::IoError(std::string("write failed: ") + path);
}

}  // namespace

extern "C" {

const char* divann_last_error(void) { return g_last_error.c_str(); }

const char* divann_status_name(divann_status status) {
  switch (status) {
    case DIVANN_OK: return "ok";
    case DIVANN_ERR_USAGE: return "usage";
    case DIVANN_ERR_FORMAT: return "format";
    case DIVANN_ERR_DEGENERATE: return "degenerate";
    case DIVANN_ERR_INFEASIBLE: return "infeasible";
    case DIVANN_ERR_IO: return "io";
    case DIVANN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

divann_status divann_vectors_create(const float* data, size_t n, size_t dim,
                                    divann_vectors** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    require(data != nullptr || n == 0, "data is null");
    std::vector<float> buf(data, data + n * dim);
    *out = new divann_vectors{divann::VectorSet(dim, std::move(buf))};
  });
}

divann_status divann_vectors_load_fvecs(const char* path, divann_vectors** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new divann_vectors{divann::load_fvecs(path)};
  });
}

divann_status divann_vectors_save_fvecs(const divann_vectors* v,
                                        const char* path) {
  return guarded([&] {
    require(v != nullptr && path != nullptr, "null argument");
    divann::save_fvecs(v->v, path);
  });
}

divann_status divann_vectors_gaussian_mixture(size_t n, size_t dim,
                                              size_t centers, double spread,
                                              uint64_t center_seed,
                                              uint64_t seed,
                                              divann_vectors** out) {
  return guarded([&] {
    require(out != nullptr, "out is null");
    *out = new divann_vectors{
        divann::gen_gaussian_mixture(n, dim, centers, spread, center_seed, seed)};
  });
}

size_t divann_vectors_size(const divann_vectors* v) {
  return v == nullptr ? 0 : v->v.size();
}

size_t divann_vectors_dim(const divann_vectors* v) {
  return v == nullptr ? 0 : v->v.dim();
}

const float* divann_vectors_data(const divann_vectors* v) {
  return v == nullptr ? nullptr : v->v.data().data();
}

void divann_vectors_free(divann_vectors* v) { delete v; }

divann_status divann_colors_load(const char* path, size_t n, uint32_t* out) {
  return guarded([&] {
    require(path != nullptr && (out != nullptr || n == 0), "null argument");
    const auto colors = divann::load_colors(path, n);
    std::copy(colors.begin(), colors.end(), out);
  });
}

divann_status divann_colors_save(const uint32_t* colors, size_t n,
                                 const char* path) {
  return guarded([&] {
    require(path != nullptr && (colors != nullptr || n == 0), "null argument");
    divann::save_colors(std::span<const divann::Color>(colors, n), path);
  });
}

divann_status divann_colors_skewed(size_t n, divann_color_scheme scheme,
                                   uint64_t seed, uint32_t* out) {
  return guarded([&] {
    require(out != nullptr || n == 0, "out is null");
    std::vector<divann::ColorTier> tiers;
    switch (scheme) {
      case DIVANN_SCHEME_ARXIV: tiers = divann::arxiv_color_scheme(); break;
      case DIVANN_SCHEME_SIFT_SKEWED:
        tiers = divann::sift_skewed_color_scheme();
        break;
      default: throw divann::UsageError("unknown color scheme");
    }
    const auto colors = divann::gen_colors_skewed(n, tiers, seed);
    std::copy(colors.begin(), colors.end(), out);
  });
}

divann_status divann_colors_hyperplane(const divann_vectors* v, size_t buckets,
                                       double primary_prob, uint64_t seed,
                                       uint32_t* out) {
  return guarded([&] {
    require(v != nullptr && out != nullptr, "null argument");
    const auto colors =
        divann::gen_colors_hyperplane(v->v, buckets, primary_prob, seed);
    std::copy(colors.begin(), colors.end(), out);
  });
}

divann_status divann_dataset_create(const divann_vectors* v,
                                    const uint32_t* colors,
                                    divann_dataset** out) {
  return guarded([&] {
    require(v != nullptr && colors != nullptr && out != nullptr,
            "null argument");
    std::vector<divann::Color> c(colors, colors + v->v.size());
    *out = new divann_dataset{divann::VectorDataset(v->v, std::move(c))};
  });
}

size_t divann_dataset_size(const divann_dataset* ds) {
  return ds == nullptr ? 0 : ds->d.size();
}

size_t divann_dataset_dim(const divann_dataset* ds) {
  return ds == nullptr ? 0 : ds->d.dim();
}

uint32_t divann_dataset_color(const divann_dataset* ds, uint32_t id) {
  if (ds == nullptr || id >= ds->d.size()) return divann::kAbsent;
  return ds->d.color(id);
}

void divann_dataset_free(divann_dataset* ds) { delete ds; }

void divann_fast_params_default(divann_fast_params* params) {
  if (params == nullptr) return;
  const divann::BuildParams d;
  params->alpha = d.alpha;
  params->R = d.R;
  params->L = d.L;
  params->m = d.m;
  params->passes = d.passes;
  params->seed = d.seed;
  params->threads = d.threads;
}

divann_status divann_build_fast(const divann_dataset* ds,
                                const divann_fast_params* params,
                                divann_index** out) {
  return guarded([&] {
    require(ds != nullptr && params != nullptr && out != nullptr,
            "null argument");
    auto graph = divann::build_fast(ds->d, params_of(*params));
    *out = new divann_index{std::move(graph), {},
                            static_cast<std::uint32_t>(ds->d.dim()), false};
  });
}

divann_status divann_build_colorful_slow(const divann_dataset* ds, size_t k,
                                         double alpha, uint32_t threads,
                                         divann_index** out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null argument");
    divann::SlowBuildOptions opts;
    opts.threads = threads;
    auto graph = divann::build_colorful_slow(ds->d, k, alpha, opts);
    *out = new divann_index{std::move(graph), {},
                            static_cast<std::uint32_t>(ds->d.dim()), false};
  });
}

divann_status divann_build_diverse_slow(const divann_dataset* ds, size_t k,
                                        size_t k_prime, double alpha,
                                        divann_rho rho, uint32_t threads,
                                        divann_index** out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null argument");
    divann::SlowBuildOptions opts;
    opts.threads = threads;
    auto graph =
        divann::build_diverse_slow(ds->d, k, k_prime, alpha, rho_of(rho), opts);
    *out = new divann_index{std::move(graph), {},
                            static_cast<std::uint32_t>(ds->d.dim()), false};
  });
}

divann_status divann_index_info_get(const divann_index* index,
                                    divann_index_info* info) {
  return guarded([&] {
    require(index != nullptr && info != nullptr, "null argument");
    const auto& meta = index->graph.meta();
    info->builder = static_cast<divann_builder>(meta.builder);
    info->rho = static_cast<divann_rho>(meta.rho);
    info->n = index->graph.size();
    info->edges = index->graph.edge_count();
    info->max_degree = index->graph.max_out_degree();
    info->alpha = meta.alpha;
    info->k = meta.k;
    info->k_prime = meta.k_prime;
    info->degree_cap = opt_u32(meta.degree_cap);
    info->build_list_size = meta.build_list_size;
    info->m = opt_u32(meta.m);
    info->passes = meta.passes;
    info->seed = meta.seed;
    info->start_node = opt_u32(meta.start_node);
  });
}

size_t divann_index_degree(const divann_index* index, uint32_t node) {
  if (index == nullptr || node >= index->graph.size()) return 0;
  return index->graph.neighbors(node).size();
}

size_t divann_index_neighbors(const divann_index* index, uint32_t node,
                              uint32_t* out, size_t cap) {
  if (index == nullptr || node >= index->graph.size()) return 0;
  const auto nb = index->graph.neighbors(node);
  if (out != nullptr) {
    std::copy_n(nb.begin(), std::min(cap, nb.size()), out);
  }
  return nb.size();
}

divann_status divann_index_save(const divann_index* index,
                                const divann_dataset* ds, const char* path) {
  return guarded([&] {
    require(index != nullptr && ds != nullptr && path != nullptr,
            "null argument");
    require(ds->d.size() == index->graph.size(),
            "dataset size does not match the index");
    divann::save_index(index->graph, ds->d.colors(),
                       static_cast<std::uint32_t>(ds->d.dim()), path);
  });
}

divann_status divann_index_load(const char* path, divann_index** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto snap = divann::load_index(path);
    *out = new divann_index{std::move(snap.graph), std::move(snap.colors),
                            snap.dim, true};
  });
}

divann_status divann_index_colors(const divann_index* index, uint32_t* out) {
  return guarded([&] {
    require(index != nullptr && out != nullptr, "null argument");
    require(index->loaded, "index was not loaded from a snapshot");
    std::copy(index->colors.begin(), index->colors.end(), out);
  });
}

size_t divann_index_dim(const divann_index* index) {
  return index == nullptr ? 0 : index->dim;
}

void divann_index_free(divann_index* index) { delete index; }

namespace {

void check_pair(const divann_index* index, const divann_dataset* ds,
                divann_result** out) {
  require(index != nullptr && ds != nullptr && out != nullptr, "null argument");
  require(index->graph.size() == ds->d.size(),
          "dataset size does not match the index");
}

}  // namespace

divann_status divann_search_diverse(const divann_index* index,
                                    const divann_dataset* ds,
                                    const float* query, size_t k,
                                    size_t k_prime, size_t L,
                                    divann_result** out) {
  return guarded([&] {
    check_pair(index, ds, out);
    auto r = divann::diverse_search(index->graph, ds->d, query_span(ds, query),
                                    k_prime, k, L);
    emit(out, std::move(r.top_k));
  });
}

divann_status divann_search_baseline(const divann_index* index,
                                     const divann_dataset* ds,
                                     const float* query, size_t k,
                                     size_t k_prime, size_t r,
                                     divann_result** out) {
  return guarded([&] {
    check_pair(index, ds, out);
    emit(out, divann::baseline_postprocess_search(
                  index->graph, ds->d, query_span(ds, query), k, k_prime, r));
  });
}

divann_status divann_search_colorful(const divann_index* index,
                                     const divann_dataset* ds,
                                     const float* query, size_t k,
                                     size_t steps, int monotone,
                                     divann_result** out) {
  return guarded([&] {
    check_pair(index, ds, out);
    divann::ColorfulSearchOptions opts;
    opts.monotone = monotone != 0;
    emit(out, divann::search_colorful(index->graph, ds->d,
                                      query_span(ds, query), k, steps, opts));
  });
}

divann_status divann_search_primal(const divann_index* index,
                                   const divann_dataset* ds,
                                   const float* query, size_t k,
                                   size_t k_prime, double C, divann_rho rho,
                                   size_t steps, divann_result** out) {
  return guarded([&] {
    check_pair(index, ds, out);
    divann::DiversityConstraint c{k, k_prime, C, rho_of(rho)};
    emit(out, divann::search_primal(index->graph, ds->d, query_span(ds, query),
                                    c, steps));
  });
}

divann_status divann_search_dual(const divann_index* index,
                                 const divann_dataset* ds, const float* query,
                                 size_t k, size_t k_prime, double R,
                                 divann_rho rho, double epsilon,
                                 uint32_t c_loop, divann_result** out,
                                 divann_dual_info* info) {
  return guarded([&] {
    check_pair(index, ds, out);
    divann::DualSearchOptions opts;
    opts.epsilon = epsilon;
    opts.c_loop = c_loop;
    auto r = divann::search_dual(index->graph, ds->d, query_span(ds, query), k,
                                 k_prime, R, rho_of(rho), opts);
    if (info != nullptr) {
      info->init_C = r.init_C;
      info->certified_C = r.certified_C;
      info->measured_C = r.measured_C;
      info->halvings = r.halvings;
      info->best_effort = r.best_effort ? 1 : 0;
    }
    emit(out, std::move(r.result));
  });
}

divann_status divann_default_steps(const divann_dataset* ds, size_t k,
                                   double alpha, double epsilon, size_t* out) {
  return guarded([&] {
    require(ds != nullptr && out != nullptr, "null argument");
    const auto stats = divann::estimate_stats(ds->d);
    *out = divann::default_steps(k, alpha, stats.aspect_ratio, epsilon);
  });
}

size_t divann_result_size(const divann_result* r) {
  return r == nullptr ? 0 : r->r.hits.size();
}

uint32_t divann_result_id(const divann_result* r, size_t i) {
  if (r == nullptr || i >= r->r.hits.size()) return divann::kInvalidId;
  return r->r.hits[i].id;
}

double divann_result_distance(const divann_result* r, size_t i) {
  if (r == nullptr || i >= r->r.hits.size()) return divann::kInfinity;
  return r->r.hits[i].distance;
}

double divann_result_radius(const divann_result* r) {
  return r == nullptr ? 0.0 : r->r.radius;
}

uint64_t divann_result_steps(const divann_result* r) {
  return r == nullptr ? 0 : r->r.steps;
}

uint64_t divann_result_distance_evals(const divann_result* r) {
  return r == nullptr ? 0 : r->r.distance_evals;
}

int divann_result_underfull(const divann_result* r) {
  return r != nullptr && r->r.underfull ? 1 : 0;
}

void divann_result_free(divann_result* r) { delete r; }

int divann_is_k_colorful(const divann_dataset* ds, const uint32_t* ids,
                         size_t n, size_t k_prime) {
  int ok = 0;
  const auto st = guarded([&] {
    require(ds != nullptr && (ids != nullptr || n == 0), "null argument");
    for (size_t i = 0; i < n; ++i) ds->d.check_id(ids[i]);
    ok = divann::is_k_colorful(ds->d, std::span<const divann::PointId>(ids, n),
                               k_prime)
             ? 1
             : 0;
  });
  return st == DIVANN_OK ? ok : -1;
}

int divann_is_diverse(const divann_dataset* ds, const uint32_t* ids, size_t n,
                      size_t k_prime, double C, divann_rho rho) {
  int ok = 0;
  const auto st = guarded([&] {
    require(ds != nullptr && (ids != nullptr || n == 0), "null argument");
    for (size_t i = 0; i < n; ++i) ds->d.check_id(ids[i]);
    divann::DiversityConstraint c{std::max<std::size_t>(n, k_prime), k_prime,
                                  C, rho_of(rho)};
    ok = divann::is_diverse(ds->d, std::span<const divann::PointId>(ids, n), c)
             ? 1
             : 0;
  });
  return st == DIVANN_OK ? ok : -1;
}

divann_status divann_gt_compute(const divann_dataset* ds,
                                const divann_vectors* queries, size_t k,
                                size_t k_prime, uint32_t threads,
                                divann_gt** out) {
  return guarded([&] {
    require(ds != nullptr && queries != nullptr && out != nullptr,
            "null argument");
    *out = new divann_gt{
        divann::compute_ground_truth(ds->d, queries->v, k, k_prime, threads)};
  });
}

divann_status divann_gt_save(const divann_gt* gt, const char* path) {
  return guarded([&] {
    require(gt != nullptr && path != nullptr, "null argument");
    divann::save_gt(gt->gt, path);
  });
}

divann_status divann_gt_load(const char* path, divann_gt** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new divann_gt{divann::load_gt(path)};
  });
}

size_t divann_gt_queries(const divann_gt* gt) {
  return gt == nullptr ? 0 : gt->gt.lists.size();
}

uint32_t divann_gt_k(const divann_gt* gt) { return gt == nullptr ? 0 : gt->gt.k; }

uint32_t divann_gt_k_prime(const divann_gt* gt) {
  return gt == nullptr ? 0 : gt->gt.k_prime;
}

size_t divann_gt_list(const divann_gt* gt, size_t q, uint32_t* out,
                      size_t cap) {
  if (gt == nullptr || q >= gt->gt.lists.size()) return 0;
  const auto& list = gt->gt.lists[q];
  if (out != nullptr) {
    for (std::size_t i = 0; i < std::min(cap, list.size()); ++i) {
      out[i] = list[i].id;
    }
  }
  return list.size();
}

divann_status divann_gt_recall(const divann_gt* gt, size_t q,
                               const divann_result* r, double* out) {
  return guarded([&] {
    require(gt != nullptr && r != nullptr && out != nullptr, "null argument");
    require(q < gt->gt.lists.size(), "query index out of range");
    *out = divann::recall_at_k(r->r.ids(), gt->gt.lists[q]);
  });
}

void divann_gt_free(divann_gt* gt) { delete gt; }

divann_status divann_bench_sweep(const divann_dataset* ds,
                                 const divann_vectors* queries,
                                 const divann_gt* gt,
                                 const divann_index* std_index,
                                 const divann_index* div_index,
                                 const uint32_t* L_values, size_t n_L,
                                 uint32_t threads, const char* csv_path) {
  return guarded([&] {
    require(ds != nullptr && queries != nullptr && gt != nullptr,
            "null argument");
    require(L_values != nullptr && n_L > 0, "no search list sizes given");
    require(std_index != nullptr || div_index != nullptr, "no index given");
    std::vector<divann::SweepConfig> configs;
    if (std_index != nullptr) {
      configs.push_back({divann::kBaselineLabel,
                         divann::SearchMode::kPostprocess, &std_index->graph});
      configs.push_back({divann::kStdBuildLabel, divann::SearchMode::kDiverse,
                         &std_index->graph});
    }
    if (div_index != nullptr) {
      configs.push_back({divann::kDivBuildLabel, divann::SearchMode::kDiverse,
                         &div_index->graph});
    }
    for (const auto& c : configs) {
      require(c.graph->size() == ds->d.size(),
              "dataset size does not match the index");
    }
    divann::SweepOptions opts;
    opts.threads = threads;
    const auto out = divann::run_sweep(
        ds->d, queries->v, gt->gt, configs,
        std::span<const std::uint32_t>(L_values, n_L), opts);
    with_output(csv_path,
                [&](std::ostream& o) { divann::write_sweep_csv(o, out.rows); });
  });
}

divann_status divann_bench_ablation_m(
    const divann_dataset* ds, const divann_vectors* queries,
    const divann_gt* gt, const uint32_t* m_values, size_t n_m,
    const uint32_t* L_values, size_t n_L, const divann_fast_params* base,
    uint32_t threads, const char* csv_path, const char* times_path) {
  return guarded([&] {
    require(ds != nullptr && queries != nullptr && gt != nullptr &&
                base != nullptr,
            "null argument");
    require(m_values != nullptr && n_m > 0, "no m values given");
    require(L_values != nullptr && n_L > 0, "no search list sizes given");
    divann::SweepOptions opts;
    opts.threads = threads;
    const auto out = divann::run_ablation_m(
        ds->d, queries->v, gt->gt, std::span<const std::uint32_t>(m_values, n_m),
        std::span<const std::uint32_t>(L_values, n_L), params_of(*base), opts);
    with_output(csv_path,
                [&](std::ostream& o) { divann::write_sweep_csv(o, out.rows); });
    if (times_path != nullptr) {
      with_output(times_path, [&](std::ostream& o) {
        divann::write_build_times_csv(o, out);
      });
    }
  });
}

}  // extern "C"
