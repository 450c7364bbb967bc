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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "divann/divann.h"

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("divann_capi_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

struct World {
  divann_vectors* v = nullptr;
  divann_dataset* ds = nullptr;
  std::vector<uint32_t> colors;

  explicit World(size_t n) {
    REQUIRE(divann_vectors_gaussian_mixture(n, 8, 8, 1.0, 1, 2, &v) == DIVANN_OK);
    colors.resize(n);
    REQUIRE(divann_colors_skewed(n, DIVANN_SCHEME_SIFT_SKEWED, 3, colors.data()) ==
            DIVANN_OK);
    REQUIRE(divann_dataset_create(v, colors.data(), &ds) == DIVANN_OK);
  }
  ~World() {
    divann_dataset_free(ds);
    divann_vectors_free(v);
  }
};

std::vector<uint32_t> result_ids(const divann_result* r) {
  std::vector<uint32_t> ids;
  for (size_t i = 0; i < divann_result_size(r); ++i) ids.push_back(divann_result_id(r, i));
  return ids;
}

TEST_CASE("status names and last error") {
  CHECK(std::string(divann_status_name(DIVANN_OK)) == "ok");
  CHECK(std::string(divann_status_name(DIVANN_ERR_FORMAT)) != "ok");
  divann_vectors* v = nullptr;
  const float bad[3] = {1, 2, 3};
  CHECK(divann_vectors_create(bad, 1, 0, &v) == DIVANN_ERR_USAGE);
  CHECK(v == nullptr);
  CHECK(std::string(divann_last_error()).size() > 0);
  CHECK(divann_vectors_create(bad, 1, 3, nullptr) == DIVANN_ERR_USAGE);
  CHECK(divann_vectors_load_fvecs("/nonexistent/x.fvecs", &v) == DIVANN_ERR_IO);

  const auto dir = scratch("status");
  const std::string trunc = (dir / "t.fvecs").string();
  {
    std::ofstream f(trunc, std::ios::binary);
    f.write("\x02\x00\x00\x00\x00", 5);
  }
  CHECK(divann_vectors_load_fvecs(trunc.c_str(), &v) == DIVANN_ERR_FORMAT);
  CHECK(std::string(divann_last_error()).find("t.fvecs") != std::string::npos);
}

TEST_CASE("handles report their shape and free null safely") {
  const float data[6] = {0, 0, 3, 4, 1, 1};
  divann_vectors* v = nullptr;
  REQUIRE(divann_vectors_create(data, 3, 2, &v) == DIVANN_OK);
  CHECK(divann_vectors_size(v) == 3);
  CHECK(divann_vectors_dim(v) == 2);
  CHECK(divann_vectors_data(v)[2] == 3.0f);
  const uint32_t colors[3] = {5, 5, 9};
  divann_dataset* ds = nullptr;
  REQUIRE(divann_dataset_create(v, colors, &ds) == DIVANN_OK);
  CHECK(divann_dataset_size(ds) == 3);
  CHECK(divann_dataset_dim(ds) == 2);
  CHECK(divann_dataset_color(ds, 2) == 9u);
  CHECK(divann_dataset_color(ds, 3) == 0xFFFFFFFFu);

  const uint32_t pair[2] = {0, 1};
  const uint32_t mixed[2] = {0, 2};
  CHECK(divann_is_k_colorful(ds, pair, 2, 1) == 0);
  CHECK(divann_is_k_colorful(ds, mixed, 2, 1) == 1);
  CHECK(divann_is_k_colorful(ds, pair, 2, 2) == 1);
  CHECK(divann_is_diverse(ds, pair, 2, 1, 4.9, DIVANN_RHO_EUCLIDEAN) == 1);
  CHECK(divann_is_diverse(ds, pair, 2, 1, 5.1, DIVANN_RHO_EUCLIDEAN) == 0);
  const uint32_t oob[1] = {7};
  CHECK(divann_is_k_colorful(ds, oob, 1, 1) == -1);

  divann_dataset_free(ds);
  divann_vectors_free(v);
  divann_dataset_free(nullptr);
  divann_vectors_free(nullptr);
  divann_index_free(nullptr);
  divann_result_free(nullptr);
  divann_gt_free(nullptr);
  CHECK(divann_vectors_size(nullptr) == 0);
}

TEST_CASE("fast build, search, save, load") {
  World w(2000);
  divann_fast_params p;
  divann_fast_params_default(&p);
  CHECK(p.alpha == doctest::Approx(1.2));
  CHECK(p.m == 1);
  p.R = 16;
  p.L = 32;
  p.m = 3;
  divann_index* idx = nullptr;
  REQUIRE(divann_build_fast(w.ds, &p, &idx) == DIVANN_OK);
  divann_index_info info;
  REQUIRE(divann_index_info_get(idx, &info) == DIVANN_OK);
  CHECK(info.builder == DIVANN_BUILDER_FAST);
  CHECK(info.n == 2000);
  CHECK(info.max_degree <= 16);
  CHECK(info.degree_cap == 16);
  CHECK(info.m == 3);
  CHECK(info.start_node < 2000);
  CHECK(info.k == 0);

  std::vector<uint32_t> nb(32);
  const size_t deg = divann_index_degree(idx, 0);
  CHECK(divann_index_neighbors(idx, 0, nb.data(), nb.size()) == deg);
  CHECK(divann_index_degree(idx, 5000) == 0);

  const float* q = divann_vectors_data(w.v) + 8 * 17;
  divann_result* r = nullptr;
  REQUIRE(divann_search_diverse(idx, w.ds, q, 10, 1, 64, &r) == DIVANN_OK);
  const auto ids = result_ids(r);
  CHECK(ids.size() == 10);
  CHECK(divann_is_k_colorful(w.ds, ids.data(), ids.size(), 1) == 1);
  CHECK(divann_result_distance(r, 0) <= divann_result_distance(r, 9));
  CHECK(divann_result_radius(r) == divann_result_distance(r, 9));
  CHECK(divann_result_distance_evals(r) > 0);
  CHECK(divann_result_underfull(r) == 0);

  CHECK(divann_search_diverse(idx, w.ds, q, 10, 1, 5, &r) == DIVANN_ERR_USAGE);
  CHECK(divann_index_colors(idx, nb.data()) == DIVANN_ERR_USAGE);

  const auto dir = scratch("index");
  const std::string path = (dir / "i.dvrs").string();
  REQUIRE(divann_index_save(idx, w.ds, path.c_str()) == DIVANN_OK);
  divann_index* back = nullptr;
  REQUIRE(divann_index_load(path.c_str(), &back) == DIVANN_OK);
  CHECK(divann_index_dim(back) == 8);
  std::vector<uint32_t> c(2000);
  REQUIRE(divann_index_colors(back, c.data()) == DIVANN_OK);
  CHECK(c == w.colors);
  divann_result* r2 = nullptr;
  REQUIRE(divann_search_diverse(back, w.ds, q, 10, 1, 64, &r2) == DIVANN_OK);
  CHECK(result_ids(r2) == ids);

  divann_result* b = nullptr;
  REQUIRE(divann_search_baseline(idx, w.ds, q, 10, 1, 64, &b) == DIVANN_OK);
  CHECK(divann_is_k_colorful(w.ds, result_ids(b).data(), divann_result_size(b), 1) == 1);

  divann_result_free(b);
  divann_result_free(r2);
  divann_result_free(r);
  divann_index_free(back);
  divann_index_free(idx);

  std::ofstream(dir / "junk.dvrs") << "not an index";
  CHECK(divann_index_load((dir / "junk.dvrs").string().c_str(), &back) ==
        DIVANN_ERR_FORMAT);
}

TEST_CASE("theory builders and searches through the C API") {
  World w(600);
  divann_index* cidx = nullptr;
  REQUIRE(divann_build_colorful_slow(w.ds, 4, 2.0, 1, &cidx) == DIVANN_OK);
  divann_index_info info;
  REQUIRE(divann_index_info_get(cidx, &info) == DIVANN_OK);
  CHECK(info.builder == DIVANN_BUILDER_SLOW_COLORFUL);
  CHECK(info.k == 4);
  CHECK(info.degree_cap == 0xFFFFFFFFu);

  const float* q = divann_vectors_data(w.v) + 8 * 3;
  size_t steps = 0;
  REQUIRE(divann_default_steps(w.ds, 4, 2.0, 0.5, &steps) == DIVANN_OK);
  CHECK(steps >= 1);
  divann_result* r = nullptr;
  REQUIRE(divann_search_colorful(cidx, w.ds, q, 4, steps, 0, &r) == DIVANN_OK);
  CHECK(divann_result_size(r) == 4);
  CHECK(divann_is_k_colorful(w.ds, result_ids(r).data(), 4, 1) == 1);
  divann_result_free(r);

  divann_index* didx = nullptr;
  REQUIRE(divann_build_diverse_slow(w.ds, 4, 2, 2.0, DIVANN_RHO_EUCLIDEAN, 1, &didx) ==
          DIVANN_OK);
  REQUIRE(divann_search_primal(didx, w.ds, q, 4, 2, 0.5, DIVANN_RHO_EUCLIDEAN, steps,
                               &r) == DIVANN_OK);
  auto ids = result_ids(r);
  CHECK(ids.size() == 4);
  CHECK(divann_is_diverse(w.ds, ids.data(), ids.size(), 2, 0.5 / 12.0,
                          DIVANN_RHO_EUCLIDEAN) == 1);
  divann_result_free(r);
  // Wrong builder for the search.
  CHECK(divann_search_primal(cidx, w.ds, q, 4, 2, 0.5, DIVANN_RHO_EUCLIDEAN, steps,
                             &r) == DIVANN_ERR_USAGE);

  divann_dual_info d;
  REQUIRE(divann_search_dual(didx, w.ds, q, 4, 2, 1e6, DIVANN_RHO_EUCLIDEAN, 0.5, 2,
                             &r, &d) == DIVANN_OK);
  CHECK(d.certified_C <= d.measured_C);
  CHECK(divann_result_size(r) == 4);
  divann_result_free(r);
  divann_index_free(didx);
  divann_index_free(cidx);
}

TEST_CASE("ground truth and bench through the C API") {
  World w(1500);
  divann_vectors* queries = nullptr;
  REQUIRE(divann_vectors_gaussian_mixture(20, 8, 8, 1.0, 1, 77, &queries) == DIVANN_OK);
  divann_gt* gt = nullptr;
  CHECK(divann_gt_compute(w.ds, queries, 5, 6, 1, &gt) == DIVANN_ERR_USAGE);
  REQUIRE(divann_gt_compute(w.ds, queries, 5, 1, 2, &gt) == DIVANN_OK);
  CHECK(divann_gt_queries(gt) == 20);
  CHECK(divann_gt_k(gt) == 5);
  CHECK(divann_gt_k_prime(gt) == 1);
  std::vector<uint32_t> list(5);
  CHECK(divann_gt_list(gt, 0, list.data(), list.size()) == 5);

  const auto dir = scratch("gt");
  const std::string path = (dir / "g.gt").string();
  REQUIRE(divann_gt_save(gt, path.c_str()) == DIVANN_OK);
  divann_gt* back = nullptr;
  REQUIRE(divann_gt_load(path.c_str(), &back) == DIVANN_OK);
  std::vector<uint32_t> list2(5);
  divann_gt_list(back, 0, list2.data(), list2.size());
  CHECK(list == list2);

  divann_fast_params p;
  divann_fast_params_default(&p);
  p.R = 16;
  p.L = 32;
  divann_index* std_idx = nullptr;
  REQUIRE(divann_build_fast(w.ds, &p, &std_idx) == DIVANN_OK);
  p.m = 4;
  divann_index* div_idx = nullptr;
  REQUIRE(divann_build_fast(w.ds, &p, &div_idx) == DIVANN_OK);

  divann_result* r = nullptr;
  REQUIRE(divann_search_diverse(div_idx, w.ds, divann_vectors_data(queries), 5, 1, 100,
                                &r) == DIVANN_OK);
  double recall = -1.0;
  REQUIRE(divann_gt_recall(gt, 0, r, &recall) == DIVANN_OK);
  CHECK(recall >= 0.0);
  CHECK(recall <= 1.0);
  CHECK(divann_gt_recall(gt, 99, r, &recall) == DIVANN_ERR_USAGE);
  divann_result_free(r);

  const uint32_t Ls[2] = {20, 40};
  const std::string csv = (dir / "sweep.csv").string();
  REQUIRE(divann_bench_sweep(w.ds, queries, gt, std_idx, div_idx, Ls, 2, 1,
                             csv.c_str()) == DIVANN_OK);
  std::ifstream in(csv);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("config,L,k", 0) == 0);
  size_t rows = 0;
  for (std::string l; std::getline(in, l);) ++rows;
  CHECK(rows == 6);

  const uint32_t ms[2] = {1, 2};
  const std::string times = (dir / "times.csv").string();
  REQUIRE(divann_bench_ablation_m(w.ds, queries, gt, ms, 2, Ls, 2, &p, 1,
                                  (dir / "ab.csv").string().c_str(),
                                  times.c_str()) == DIVANN_OK);
  CHECK(fs::file_size(times) > 0);

  divann_index_free(div_idx);
  divann_index_free(std_idx);
  divann_gt_free(back);
  divann_gt_free(gt);
  divann_vectors_free(queries);
}

}  // namespace
