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

#include "divann/fast.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "divann/diverse_queue.hpp"
#include "divann/random.hpp"
#include "parallel.hpp"
#include "visited_table.hpp"

namespace divann {

void BuildParams::validate() const {
  if (!(alpha > 1.0)) throw UsageError("alpha must be > 1");
  if (R < 1) throw UsageError("degree cap R must be >= 1");
  if (L < R) {
    throw UsageError("build list size L (" + std::to_string(L) +
                     ") must be >= degree cap R (" + std::to_string(R) + ")");
  }
  if (m < 1) throw UsageError("m must be >= 1");
  if (passes < 1) throw UsageError("passes must be >= 1");
  if (threads < 1) throw UsageError("threads must be >= 1");
}

namespace {

constexpr double kReverseSlack = 1.3;

struct SearchOutput {
  std::vector<Hit> top;
  std::vector<Candidate> visited;
  std::uint64_t distance_evals = 0;
};

// NeighborFn(p, out) fills `out` with the current out-neighbors of p.
template <typename NeighborFn>
SearchOutput search_impl(NeighborFn&& neighbors_of, std::size_t n,
                         const VectorDataset& data, const float* query,
                         PointId start, std::size_t k_prime, std::size_t k,
                         std::size_t L) {
  SearchOutput out;
  const std::size_t dim = data.dim();
  auto& seen = detail::thread_visited_table();
  seen.reset(n);

  DiverseQueue queue(L, k_prime);
  seen.test_and_set(start);
  queue.insert_new(start, l2_distance(query, data.point_ptr(start), dim),
               data.color(start));
  ++out.distance_evals;

  std::vector<PointId> scratch;
  while (auto next = queue.pop_unexpanded()) {
    out.visited.push_back(Candidate{next->id, next->distance});
    scratch.clear();
    neighbors_of(next->id, scratch);
    for (PointId v : scratch) {
      // Each id is scored at most once: a rejected or evicted entry can never
      // beat the queue's thresholds later, which only tighten.
      if (seen.test_and_set(v)) continue;
      const double d = l2_distance(query, data.point_ptr(v), dim);
      ++out.distance_evals;
      queue.insert_new(v, d, data.color(v));
    }
  }

  const auto& entries = queue.entries();
  const std::size_t take = std::min(k, entries.size());
  out.top.reserve(take);
  for (std::size_t i = 0; i < take; ++i) {
    out.top.push_back(Hit{entries[i].id, entries[i].distance});
  }
  return out;
}

void check_search_args(std::size_t k_prime, std::size_t k, std::size_t L) {
  if (k == 0) throw UsageError("k must be positive");
  if (k_prime == 0) throw UsageError("k' must be positive");
  if (L < k) {
    throw UsageError("search list size L (" + std::to_string(L) +
                     ") must be >= k (" + std::to_string(k) + ")");
  }
}

PointId require_start(const DiverseGraph& graph) {
  if (!graph.meta().start_node) throw UsageError("graph has no start node");
  const PointId s = *graph.meta().start_node;
  if (s >= graph.size()) throw UsageError("graph start node out of range");
  return s;
}

}  // namespace

DiverseSearchResult diverse_search(const DiverseGraph& graph,
                                   const VectorDataset& data,
                                   std::span<const float> query,
                                   std::size_t k_prime, std::size_t k,
                                   std::size_t L) {
  check_search_args(k_prime, k, L);
  if (query.size() != data.dim()) {
    throw UsageError("query dimension " + std::to_string(query.size()) +
                     " does not match dataset dimension " +
                     std::to_string(data.dim()));
  }
  if (graph.size() != data.size()) {
    throw UsageError("graph and dataset sizes differ");
  }
  const PointId start = require_start(graph);
  auto output = search_impl(
      [&graph](PointId p, std::vector<PointId>& out) {
        const auto nb = graph.neighbors(p);
        out.assign(nb.begin(), nb.end());
      },
      graph.size(), data, query.data(), start, k_prime, k, L);

  DiverseSearchResult result;
  result.top_k.hits = std::move(output.top);
  result.top_k.finalize();
  result.top_k.underfull = result.top_k.hits.size() < k;
  result.top_k.steps = output.visited.size();
  result.top_k.distance_evals = output.distance_evals;
  result.visited.reserve(output.visited.size());
  for (const Candidate& c : output.visited) result.visited.push_back(c.id);
  return result;
}

std::vector<PointId> diverse_prune(const VectorDataset& data, PointId p,
                                   std::vector<Candidate> candidates,
                                   double alpha, std::size_t R_cap,
                                   std::size_t m, std::uint64_t* distance_evals) {
  if (!(alpha > 1.0)) throw UsageError("alpha must be > 1");
  if (R_cap < 1) throw UsageError("R must be >= 1");
  if (m < 1) throw UsageError("m must be >= 1");

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return a.distance < b.distance ||
                     (a.distance == b.distance && a.id < b.id);
            });
  candidates.erase(std::unique(candidates.begin(), candidates.end(),
                               [](const Candidate& a, const Candidate& b) {
                                 return a.id == b.id;
                               }),
                   candidates.end());
  std::erase_if(candidates, [p](const Candidate& c) { return c.id == p; });

  const std::size_t count = candidates.size();
  const std::size_t dim = data.dim();
  // Candidate w is tested against the keepers in the order they were kept,
  // which is exactly the order in which they would have blocked it; doing the
  // test when w is reached avoids scoring candidates past the R-th keeper.
  std::vector<PointId> kept;
  std::vector<Color> kept_colors;
  kept.reserve(std::min(count, R_cap));
  kept_colors.reserve(kept.capacity());
  std::vector<Color> blk;
  blk.reserve(std::min(m, R_cap));
  std::uint64_t evals = 0;

  for (std::size_t j = 0; j < count && kept.size() < R_cap; ++j) {
    const PointId w = candidates[j].id;
    const Color cw = data.color(w);
    const float* pw = data.point_ptr(w);
    const double reach = candidates[j].distance / alpha;
    blk.clear();
    bool alive = true;
    for (std::size_t t = 0; t < kept.size(); ++t) {
      const double d_uw = l2_distance(data.point_ptr(kept[t]), pw, dim);
      ++evals;
      if (d_uw > reach) continue;
      const Color cu = kept_colors[t];
      if (cu == cw) {
        alive = false;
        break;
      }
      if (std::find(blk.begin(), blk.end(), cu) == blk.end()) blk.push_back(cu);
      if (blk.size() >= m) {
        alive = false;
        break;
      }
    }
    if (alive) {
      kept.push_back(w);
      kept_colors.push_back(cw);
    }
  }
  if (distance_evals) *distance_evals += evals;
  return kept;
}

std::vector<PointId> diverse_prune(const VectorDataset& data, PointId p,
                                   std::span<const PointId> candidates,
                                   double alpha, std::size_t R_cap,
                                   std::size_t m) {
  data.check_id(p);
  std::vector<Candidate> scored;
  scored.reserve(candidates.size());
  for (PointId id : candidates) {
    data.check_id(id);
    scored.push_back(
        Candidate{id, l2_distance(data.point_ptr(p), data.point_ptr(id), data.dim())});
  }
  return diverse_prune(data, p, std::move(scored), alpha, R_cap, m);
}

PointId estimate_medoid(const VectorDataset& data, std::uint64_t seed,
                        std::size_t sample_size) {
  const std::size_t n = data.size();
  const std::size_t dim = data.dim();
  std::vector<PointId> sample;
  if (n <= sample_size) {
    sample.resize(n);
    for (PointId i = 0; i < n; ++i) sample[i] = i;
  } else {
    Rng rng(seed ^ 0x9e3779b97f4a7c15ULL);
    sample.reserve(sample_size);
    for (std::size_t s = 0; s < sample_size; ++s) {
      sample.push_back(static_cast<PointId>(rng.below(n)));
    }
  }
  std::vector<double> mean(dim, 0.0);
  for (PointId id : sample) {
    const float* x = data.point_ptr(id);
    for (std::size_t j = 0; j < dim; ++j) mean[j] += x[j];
  }
  std::vector<float> centroid(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    centroid[j] = static_cast<float>(mean[j] / static_cast<double>(sample.size()));
  }
  PointId best = 0;
  double best_d = kInfinity;
  for (PointId i = 0; i < n; ++i) {
    const double d = l2_distance(centroid.data(), data.point_ptr(i), dim);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

DiverseGraph build_fast(const VectorDataset& data, const BuildParams& params) {
  params.validate();
  const std::size_t n = data.size();
  if (n == 0) throw UsageError("cannot build an index over an empty dataset");
  const std::size_t dim = data.dim();

  GraphMeta meta;
  meta.builder = BuilderTag::kFast;
  meta.alpha = params.alpha;
  meta.degree_cap = params.R;
  meta.build_list_size = params.L;
  meta.m = params.m;
  meta.passes = params.passes;
  meta.seed = params.seed;
  meta.start_node = estimate_medoid(data, params.seed);

  std::vector<std::vector<PointId>> adjacency(n);
  std::unique_ptr<std::mutex[]> locks(new std::mutex[n]);

  std::vector<PointId> order(n);
  for (PointId i = 0; i < n; ++i) order[i] = i;
  Rng rng(params.seed);
  rng.shuffle(order);

  const std::size_t search_cap = (params.L + params.m - 1) / params.m;
  const PointId start = *meta.start_node;

  auto neighbors_of = [&](PointId p, std::vector<PointId>& out) {
    std::lock_guard<std::mutex> lock(locks[p]);
    out.assign(adjacency[p].begin(), adjacency[p].end());
  };

  // Reverse edges accumulate up to slack_cap before a node is re-pruned back
  // to R; a final sweep enforces the cap everywhere.
  const std::size_t slack_cap = std::max<std::size_t>(
      params.R, static_cast<std::size_t>(kReverseSlack * static_cast<double>(params.R)));
  // Caller must have exclusive access to adjacency[j].
  auto reprune = [&](PointId j) {
    auto& nb = adjacency[j];
    const float* xj = data.point_ptr(j);
    std::vector<Candidate> back;
    back.reserve(nb.size());
    for (PointId v : nb) {
      back.push_back(Candidate{v, l2_distance(xj, data.point_ptr(v), dim)});
    }
    nb = diverse_prune(data, j, std::move(back), params.alpha, params.R, params.m);
  };

  auto insert_point = [&](PointId p) {
    const float* xp = data.point_ptr(p);
    SearchOutput found = search_impl(neighbors_of, n, data, xp, start,
                                     search_cap, params.L, params.L);
    std::vector<Candidate> pool = std::move(found.visited);
    {
      std::lock_guard<std::mutex> lock(locks[p]);
      for (PointId v : adjacency[p]) {
        pool.push_back(Candidate{v, l2_distance(xp, data.point_ptr(v), dim)});
      }
    }
    std::vector<PointId> out =
        diverse_prune(data, p, std::move(pool), params.alpha, params.R, params.m);
    {
      std::lock_guard<std::mutex> lock(locks[p]);
      adjacency[p] = out;
    }
    for (PointId j : out) {
      std::lock_guard<std::mutex> lock(locks[j]);
      auto& nb = adjacency[j];
      if (std::find(nb.begin(), nb.end(), p) != nb.end()) continue;
      nb.push_back(p);
      if (nb.size() > slack_cap) reprune(j);
    }
  };

  for (std::uint32_t pass = 0; pass < params.passes; ++pass) {
    detail::parallel_for(n, params.threads,
                         [&](std::size_t i) { insert_point(order[i]); });
  }
  detail::parallel_for(n, params.threads, [&](std::size_t j) {
    if (adjacency[j].size() > params.R) reprune(static_cast<PointId>(j));
  });
  return DiverseGraph(std::move(adjacency), meta);
}

QueryResult filter_k_colorful(const VectorDataset& data,
                              std::span<const Hit> sorted_hits, std::size_t k,
                              std::size_t k_prime) {
  QueryResult result;
  std::unordered_map<Color, std::size_t> counts;
  for (const Hit& h : sorted_hits) {
    if (result.hits.size() == k) break;
    auto& c = counts[data.color(h.id)];
    if (c >= k_prime) continue;
    ++c;
    result.hits.push_back(h);
  }
  result.finalize();
  result.underfull = result.hits.size() < k;
  return result;
}

QueryResult baseline_postprocess_search(const DiverseGraph& graph,
                                        const VectorDataset& data,
                                        std::span<const float> query,
                                        std::size_t k, std::size_t k_prime,
                                        std::size_t r) {
  if (k == 0) throw UsageError("k must be positive");
  if (k_prime == 0 || k_prime > k) throw UsageError("k' must lie in [1, k]");
  if (r < k) {
    throw UsageError("candidate count r (" + std::to_string(r) +
                     ") must be >= k (" + std::to_string(k) + ")");
  }
  DiverseSearchResult fetched = diverse_search(graph, data, query, r, r, r);
  QueryResult result = filter_k_colorful(data, fetched.top_k.hits, k, k_prime);
  result.steps = fetched.top_k.steps;
  result.distance_evals = fetched.top_k.distance_evals;
  return result;
}

}  // namespace divann
