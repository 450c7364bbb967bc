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

#include "divann/oracle.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "parallel.hpp"

namespace divann {

namespace {

void check_query(const VectorDataset& data, std::span<const float> query) {
  if (query.size() != data.dim()) {
    throw UsageError("query dimension " + std::to_string(query.size()) +
                     " does not match dataset dimension " +
                     std::to_string(data.dim()));
  }
}

void check_tiny(const VectorDataset& data, std::size_t k) {
  if (data.size() > kExhaustiveMaxPoints || k > kExhaustiveMaxK) {
    throw UsageError("exhaustive oracles need n <= " +
                     std::to_string(kExhaustiveMaxPoints) + " and k <= " +
                     std::to_string(kExhaustiveMaxK));
  }
}

// Calls fn(indices) for every size-r index subset of [0, n) in
// lexicographic order.
template <typename Fn>
void for_each_subset(std::size_t n, std::size_t r, Fn&& fn) {
  if (r > n) return;
  std::vector<std::size_t> idx(r);
  for (std::size_t i = 0; i < r; ++i) idx[i] = i;
  for (;;) {
    fn(static_cast<const std::vector<std::size_t>&>(idx));
    std::size_t i = r;
    while (i > 0 && idx[i - 1] == n - r + (i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

QueryResult greedy_diverse_ground_truth(const VectorDataset& data,
                                        std::span<const float> query,
                                        std::size_t k, std::size_t k_prime) {
  if (k == 0) throw UsageError("k must be positive");
  if (k_prime == 0 || k_prime > k) throw UsageError("k' must lie in [1, k]");
  check_query(data, query);
  const std::size_t n = data.size();
  std::vector<Hit> all(n);
  for (PointId i = 0; i < n; ++i) {
    all[i] = Hit{i, l2_distance(query.data(), data.point_ptr(i), data.dim())};
  }

  QueryResult result;
  result.distance_evals = n;
  std::unordered_map<Color, std::size_t> counts;
  // Selects and sorts successively larger prefixes, so the scan rarely has
  // to order the whole set.
  std::size_t lo = 0;
  std::size_t chunk = std::max<std::size_t>(4 * k, 256);
  while (result.hits.size() < k && lo < n) {
    const std::size_t hi = std::min(n, lo + chunk);
    auto first = all.begin() + static_cast<std::ptrdiff_t>(lo);
    auto last = all.begin() + static_cast<std::ptrdiff_t>(hi);
    if (hi < n) std::nth_element(first, last, all.end(), hit_less);
    std::sort(first, last, hit_less);
    for (auto it = first; it != last && result.hits.size() < k; ++it) {
      auto& c = counts[data.color(it->id)];
      if (c >= k_prime) continue;
      ++c;
      result.hits.push_back(*it);
    }
    lo = hi;
    chunk *= 2;
  }
  result.finalize();
  result.underfull = result.hits.size() < k;
  return result;
}

GroundTruth compute_ground_truth(const VectorDataset& data,
                                 const VectorSet& queries, std::size_t k,
                                 std::size_t k_prime, std::uint32_t threads) {
  if (queries.dim() != data.dim()) {
    throw UsageError("query dimension " + std::to_string(queries.dim()) +
                     " does not match dataset dimension " +
                     std::to_string(data.dim()));
  }
  GroundTruth truth;
  truth.k = static_cast<std::uint32_t>(k);
  truth.k_prime = static_cast<std::uint32_t>(k_prime);
  truth.lists.resize(queries.size());
  detail::parallel_for(queries.size(), threads, [&](std::size_t i) {
    truth.lists[i] =
        greedy_diverse_ground_truth(data, queries.row(i), k, k_prime).hits;
  });
  return truth;
}

QueryResult exhaustive_primal_optimum(const VectorDataset& data,
                                      std::span<const float> query,
                                      const DiversityConstraint& constraint) {
  constraint.validate();
  check_query(data, query);
  check_tiny(data, constraint.k);
  const std::size_t n = data.size();
  std::vector<double> dist(n);
  for (PointId i = 0; i < n; ++i) {
    dist[i] = l2_distance(query.data(), data.point_ptr(i), data.dim());
  }

  double best = kInfinity;
  std::vector<PointId> best_ids;
  std::vector<PointId> ids(constraint.k);
  for_each_subset(n, constraint.k, [&](const std::vector<std::size_t>& idx) {
    double s_k = 0.0;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      ids[j] = static_cast<PointId>(idx[j]);
      s_k = std::max(s_k, dist[idx[j]]);
    }
    if (!(s_k < best) && !best_ids.empty()) return;
    if (!is_diverse(data, ids, constraint)) return;
    best = s_k;
    best_ids = ids;
  });
  if (best_ids.empty()) {
    throw InfeasibleError("no (k', C)-diverse subset of size " +
                          std::to_string(constraint.k) + " exists");
  }
  QueryResult result;
  for (PointId id : best_ids) result.hits.push_back(Hit{id, dist[id]});
  result.finalize();
  result.distance_evals = n;
  return result;
}

DualOptimum exhaustive_dual_optimum(const VectorDataset& data,
                                    std::span<const float> query, std::size_t k,
                                    std::size_t k_prime, double R, RhoMode rho) {
  if (k == 0) throw UsageError("k must be positive");
  if (k_prime == 0 || k_prime > k) throw UsageError("k' must lie in [1, k]");
  check_query(data, query);
  check_tiny(data, k);
  std::vector<PointId> ball;
  for (PointId i = 0; i < data.size(); ++i) {
    if (l2_distance(query.data(), data.point_ptr(i), data.dim()) <= R) {
      ball.push_back(i);
    }
  }
  if (ball.empty()) throw InfeasibleError("no point within distance R");
  const std::size_t take = std::min(k, ball.size());

  DualOptimum best;
  best.C_star = -1.0;
  std::vector<PointId> ids(take);
  for_each_subset(ball.size(), take, [&](const std::vector<std::size_t>& idx) {
    for (std::size_t j = 0; j < idx.size(); ++j) ids[j] = ball[idx[j]];
    const double level = diversity_level(data, ids, k_prime, rho);
    if (level > best.C_star) {
      best.C_star = level;
      best.ids = ids;
    }
  });
  return best;
}

double recall_at_k(std::span<const PointId> result, std::span<const Hit> truth) {
  if (truth.empty()) throw UsageError("recall needs a non-empty truth list");
  std::unordered_set<PointId> wanted;
  for (const Hit& h : truth) wanted.insert(h.id);
  std::size_t shared = 0;
  for (PointId id : result) shared += wanted.erase(id);
  return static_cast<double>(shared) / static_cast<double>(truth.size());
}

double recall_at_k(const QueryResult& result, const QueryResult& truth) {
  return recall_at_k(result.ids(), truth.hits);
}

}  // namespace divann
