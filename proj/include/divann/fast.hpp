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

// Practical diverse index: color-capped beam search, m-blocker pruning and
// incremental graph construction, plus the retrieve-then-filter baseline.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "divann/core.hpp"
#include "divann/graph.hpp"

namespace divann {

struct BuildParams {
  double alpha = 1.2;
  std::uint32_t R = 64;   // out-degree cap
  std::uint32_t L = 200;  // build-time search list size
  std::uint32_t m = 1;    // distinct blocker colors needed to drop an edge
  std::uint32_t passes = 2;
  std::uint64_t seed = 0;
  std::uint32_t threads = 1;

  // Throws UsageError unless alpha > 1, L >= R >= 1, m >= 1, passes >= 1.
  void validate() const;
};

struct DiverseSearchResult {
  QueryResult top_k;
  std::vector<PointId> visited;  // expansion order
};

// Best-first search from the graph's start node with a color-capped queue
// of capacity L. Throws UsageError if L < k, k == 0 or k_prime == 0.
DiverseSearchResult diverse_search(const DiverseGraph& graph,
                                   const VectorDataset& data,
                                   std::span<const float> query,
                                   std::size_t k_prime, std::size_t k,
                                   std::size_t L);

// Candidate ids with their precomputed distance to the pruned node.
struct Candidate {
  PointId id;
  double distance;
};

// Keeps candidates closest-first; a later candidate w is dropped once m
// distinct colors of kept nodes block it (D(u,w) <= D(p,w)/alpha), or a
// blocker shares its color. Stops at R_cap keepers.
std::vector<PointId> diverse_prune(const VectorDataset& data, PointId p,
                                   std::span<const PointId> candidates,
                                   double alpha, std::size_t R_cap,
                                   std::size_t m);
std::vector<PointId> diverse_prune(const VectorDataset& data, PointId p,
                                   std::vector<Candidate> candidates,
                                   double alpha, std::size_t R_cap,
                                   std::size_t m,
                                   std::uint64_t* distance_evals = nullptr);

// Nearest point to the coordinate mean of a seeded sample of up to
// sample_size points; ties go to the lower id.
PointId estimate_medoid(const VectorDataset& data, std::uint64_t seed,
                        std::size_t sample_size = 10000);

DiverseGraph build_fast(const VectorDataset& data, const BuildParams& params);

// Fetches r candidates with the color cap disabled, then keeps them in
// distance order while each color stays under k_prime, up to k results.
QueryResult baseline_postprocess_search(const DiverseGraph& graph,
                                        const VectorDataset& data,
                                        std::span<const float> query,
                                        std::size_t k, std::size_t k_prime,
                                        std::size_t r);

// Greedy k'-cap filter over hits already sorted by distance.
QueryResult filter_k_colorful(const VectorDataset& data,
                              std::span<const Hit> sorted_hits, std::size_t k,
                              std::size_t k_prime);

}  // namespace divann
