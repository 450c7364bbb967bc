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

// Reference answers: the greedy diverse scan used as benchmark ground truth
// and exhaustive optima for tiny instances.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "divann/core.hpp"

namespace divann {

struct GroundTruth {
  std::uint32_t k = 0;
  std::uint32_t k_prime = 0;
  // Per query, sorted by (distance, id); shorter than k when underfull.
  std::vector<std::vector<Hit>> lists;

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

// Scans points by (distance, id) and keeps each one whose color has fewer
// than k_prime kept so far, stopping at k.
QueryResult greedy_diverse_ground_truth(const VectorDataset& data,
                                        std::span<const float> query,
                                        std::size_t k, std::size_t k_prime);

GroundTruth compute_ground_truth(const VectorDataset& data,
                                 const VectorSet& queries, std::size_t k,
                                 std::size_t k_prime, std::uint32_t threads = 1);

inline constexpr std::size_t kExhaustiveMaxPoints = 20;
inline constexpr std::size_t kExhaustiveMaxK = 6;

// Closest (k', C)-diverse k-subset by S_k; ties go to the lexicographically
// smallest sorted id set. Throws InfeasibleError if none exists.
QueryResult exhaustive_primal_optimum(const VectorDataset& data,
                                      std::span<const float> query,
                                      const DiversityConstraint& constraint);

struct DualOptimum {
  double C_star = 0.0;  // +inf when the witness has at most k' points
  std::vector<PointId> ids;
};

// Most diverse subset of size min(k, |ball|) inside the closed ball of
// radius R around the query. Throws InfeasibleError if the ball is empty.
DualOptimum exhaustive_dual_optimum(const VectorDataset& data,
                                    std::span<const float> query, std::size_t k,
                                    std::size_t k_prime, double R, RhoMode rho);

// |result ∩ truth| / |truth|. Throws UsageError for an empty truth.
double recall_at_k(const QueryResult& result, const QueryResult& truth);
double recall_at_k(std::span<const PointId> result, std::span<const Hit> truth);

}  // namespace divann
