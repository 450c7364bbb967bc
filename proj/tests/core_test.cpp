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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "doctest.h"
#include "divann/core.hpp"
#include "divann/random.hpp"
#include "test_util.hpp"

namespace divann {
namespace {

using testing::line;

TEST_CASE("vector set validates shape and values") {
  CHECK_THROWS_AS(VectorSet(0, {}), UsageError);
  CHECK_THROWS_AS(VectorSet(2, {1.0f, 2.0f, 3.0f}), UsageError);
  CHECK_THROWS_AS(VectorSet(1, {std::numeric_limits<float>::quiet_NaN()}),
                  UsageError);
  CHECK_THROWS_AS(VectorSet(1, {std::numeric_limits<float>::infinity()}),
                  UsageError);
  VectorSet v(2, {1.0f, 2.0f, 3.0f, 4.0f});
  CHECK(v.size() == 2);
  CHECK(v.row(1)[0] == 3.0f);
}

TEST_CASE("dataset requires one color per point and at least one point") {
  CHECK_THROWS_AS(VectorDataset(VectorSet(1, {0.0f, 1.0f}), {0}), UsageError);
  CHECK_THROWS_AS(VectorDataset(VectorSet(), {}), UsageError);
  auto ds = line({0.0f, 1.0f}, {7, 1000000});
  CHECK(ds.color(1) == 1000000u);
  CHECK_THROWS_AS(ds.check_id(2), UsageError);
}

TEST_CASE("constraint validation") {
  CHECK_NOTHROW((DiversityConstraint{3, 1, 0.0, RhoMode::kEuclidean}.validate()));
  CHECK_THROWS_AS((DiversityConstraint{0, 1, 1.0}.validate()), UsageError);
  CHECK_THROWS_AS((DiversityConstraint{3, 0, 1.0}.validate()), UsageError);
  CHECK_THROWS_AS((DiversityConstraint{3, 4, 1.0}.validate()), UsageError);
  CHECK_THROWS_AS((DiversityConstraint{3, 1, -1.0}.validate()), UsageError);
}

TEST_CASE("distance basics") {
  const std::vector<float> x{1.5f, -2.0f};
  CHECK(distance(x, x) == 0.0);
  const std::vector<float> a{0.0f, 0.0f}, b{3.0f, 4.0f};
  CHECK(distance(a, b) == doctest::Approx(5.0));
  const std::vector<float> c{1.0f};
  CHECK_THROWS_AS(distance(a, c), UsageError);
}

TEST_CASE("distance matches extended-precision recomputation") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    for (std::size_t dim : {1u, 3u, 7u, 8u, 16u, 33u, 128u}) {
      std::vector<float> a(dim), b(dim);
      for (std::size_t i = 0; i < dim; ++i) {
        a[i] = static_cast<float>(rng.normal() * 10.0);
        b[i] = static_cast<float>(rng.normal() * 10.0);
      }
      long double s = 0.0L;
      for (std::size_t i = 0; i < dim; ++i) {
        const long double d = static_cast<long double>(a[i]) - b[i];
        s += d * d;
      }
      const double ref = static_cast<double>(std::sqrt(s));
      CHECK(std::abs(distance(a, b) - ref) <= 1e-6 * std::max(ref, 1e-12));
    }
  }
}

TEST_CASE("distance is symmetric and satisfies the triangle inequality") {
  Rng rng(3);
  for (int t = 0; t < 2000; ++t) {
    const auto a = testing::random_query(16, rng);
    const auto b = testing::random_query(16, rng);
    const auto c = testing::random_query(16, rng);
    CHECK(distance(a, b) == distance(b, a));
    CHECK(distance(a, c) <= distance(a, b) + distance(b, c) + 1e-6);
  }
}

TEST_CASE("rho modes") {
  auto ds = VectorDataset(VectorSet(2, {0, 0, 3, 4, 1, 1}), {5, 5, 9});
  CHECK(rho(ds, 0, 1, RhoMode::kBinaryColor) == 0.0);
  CHECK(rho(ds, 0, 2, RhoMode::kBinaryColor) == 1.0);
  CHECK(rho(ds, 0, 1, RhoMode::kEuclidean) == doctest::Approx(5.0));
  CHECK_THROWS_AS(rho(ds, 0, 3, RhoMode::kBinaryColor), UsageError);
  const Rho r(ds, RhoMode::kEuclidean);
  CHECK(r(0, 1) == doctest::Approx(5.0));
}

TEST_CASE("k'-colorful predicate") {
  const std::vector<Color> abc{1, 2, 3}, aab{1, 1, 2};
  CHECK(is_k_colorful(abc, 1));
  CHECK_FALSE(is_k_colorful(aab, 1));
  CHECK(is_k_colorful(aab, 2));
  CHECK(is_k_colorful(std::vector<Color>{}, 1));
}

TEST_CASE("diversity predicate on the line") {
  auto ds = line({0.0f, 0.3f, 2.0f}, {0, 0, 0});
  const std::vector<PointId> s{0, 1, 2};
  CHECK_FALSE(is_diverse(ds, s, {3, 1, 1.0, RhoMode::kEuclidean}));
  CHECK(is_diverse(ds, s, {3, 2, 1.0, RhoMode::kEuclidean}));
  // Open ball: a pair exactly C apart does not share a ball.
  auto edge = line({0.0f, 1.0f}, {0, 0});
  CHECK(is_diverse(edge, std::vector<PointId>{0, 1},
                   {2, 1, 1.0, RhoMode::kEuclidean}));
}

TEST_CASE("binary diversity with C=1 and k'=1 on distinct colors") {
  auto ds = line({0, 1, 2, 3}, {4, 8, 15, 16});
  const std::vector<PointId> s{0, 1, 2, 3};
  CHECK(is_diverse(ds, s, {4, 1, 1.0, RhoMode::kBinaryColor}));
  CHECK(is_k_colorful(ds, s, 1));
}

TEST_CASE("binary diversity agrees with k'-colorful on random multisets") {
  Rng rng(5);
  for (int t = 0; t < 10000; ++t) {
    const std::size_t n = 1 + rng.below(8);
    const std::size_t kp = 1 + rng.below(n);
    std::vector<float> xs(n);
    std::vector<Color> colors(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = static_cast<float>(i);
      colors[i] = static_cast<Color>(rng.below(4));
    }
    auto ds = line(xs, colors);
    std::vector<PointId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<PointId>(i);
    const double c = t % 2 == 0 ? 1.0 : 0.25 + 0.75 * rng.uniform();
    REQUIRE(is_diverse(ds, ids, {n, kp, c, RhoMode::kBinaryColor}) ==
            is_k_colorful(colors, kp));
  }
}

TEST_CASE("diversity is closed under subsets") {
  Rng rng(8);
  for (int t = 0; t < 2000; ++t) {
    auto ds = testing::uniform_dataset(10, 2, 3, 100 + t);
    std::vector<PointId> ids(10);
    for (PointId i = 0; i < 10; ++i) ids[i] = i;
    const std::size_t kp = 1 + rng.below(3);
    const RhoMode mode = t % 2 ? RhoMode::kEuclidean : RhoMode::kBinaryColor;
    const double c = mode == RhoMode::kEuclidean ? 0.3 * rng.uniform() : 1.0;
    const DiversityConstraint con{10, kp, c, mode};
    if (!is_diverse(ds, ids, con)) continue;
    std::vector<PointId> sub;
    for (PointId i : ids) {
      if (rng.below(2)) sub.push_back(i);
    }
    DiversityConstraint sc = con;
    sc.k = std::max(sub.size(), kp);
    CHECK(is_diverse(ds, sub, sc));
  }
}

TEST_CASE("(1,C)-diverse iff every pairwise rho reaches C") {
  Rng rng(9);
  for (int t = 0; t < 3000; ++t) {
    auto ds = testing::uniform_dataset(6, 2, 3, 500 + t);
    std::vector<PointId> ids{0, 1, 2, 3, 4, 5};
    const RhoMode mode = t % 2 ? RhoMode::kEuclidean : RhoMode::kBinaryColor;
    const double c = mode == RhoMode::kEuclidean ? 0.5 * rng.uniform() : 1.0;
    bool pairwise = true;
    for (PointId i = 0; i < 6; ++i) {
      for (PointId j = i + 1; j < 6; ++j) {
        if (rho(ds, i, j, mode) < c) pairwise = false;
      }
    }
    CHECK(is_diverse(ds, ids, {6, 1, c, mode}) == pairwise);
  }
}

TEST_CASE("diversity level is the largest C that still passes") {
  Rng rng(10);
  for (int t = 0; t < 500; ++t) {
    auto ds = testing::uniform_dataset(6, 2, 3, 900 + t);
    std::vector<PointId> ids{0, 1, 2, 3, 4, 5};
    const std::size_t kp = 1 + rng.below(3);
    const double level = diversity_level(ds, ids, kp, RhoMode::kEuclidean);
    REQUIRE(std::isfinite(level));
    CHECK(is_diverse(ds, ids, {6, kp, level, RhoMode::kEuclidean}));
    CHECK_FALSE(is_diverse(ds, ids, {6, kp, std::nextafter(level, 1e9),
                                     RhoMode::kEuclidean}));
  }
  auto ds = line({0, 1}, {0, 1});
  CHECK(diversity_level(ds, std::vector<PointId>{0, 1}, 2,
                        RhoMode::kEuclidean) == kInfinity);
}

TEST_CASE("stats on tiny sets") {
  auto two = line({0.0f, 7.0f}, {0, 0});
  const auto s = estimate_stats(two);
  CHECK(s.d_max == doctest::Approx(7.0));
  CHECK(s.d_min == doctest::Approx(7.0));
  CHECK(s.aspect_ratio == doctest::Approx(1.0));
  CHECK(s.exact);
  auto dup = line({1.0f, 2.0f, 1.0f}, {0, 1, 2});
  CHECK_THROWS_AS(estimate_stats(dup), DegenerateDataError);
  CHECK_THROWS_AS(estimate_stats(line({1.0f}, {0})), UsageError);
}

TEST_CASE("sampled aspect ratio is within a factor of two of exhaustive") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto ds = testing::uniform_dataset(200, 2, 5, seed);
    const auto exact = estimate_stats(ds, 5000, seed);
    const auto sampled = estimate_stats(ds, 100, seed);
    REQUIRE(exact.exact);
    REQUIRE_FALSE(sampled.exact);
    CHECK(sampled.d_max <= exact.d_max + 1e-9);
    CHECK(sampled.d_min >= exact.d_min - 1e-9);
    CHECK(sampled.aspect_ratio <= exact.aspect_ratio * 1.0000001);
    CHECK(sampled.aspect_ratio >= exact.aspect_ratio / 2.0);
  }
}

TEST_CASE("query result finalize sorts and sets the radius") {
  QueryResult r;
  r.hits = {{4, 2.0}, {1, 1.0}, {3, 2.0}};
  r.finalize();
  CHECK(r.ids() == std::vector<PointId>{1, 3, 4});
  CHECK(r.radius == 2.0);
}

}  // namespace
}  // namespace divann
