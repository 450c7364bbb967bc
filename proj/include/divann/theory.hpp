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

// Slow-preprocessing indexes with provable guarantees and their searches.
// Quadratic build time; intended for datasets up to about 20k points.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "divann/core.hpp"
#include "divann/graph.hpp"

namespace divann {

// Hooks into the per-point sweep of the slow builders. Calls for different
// p may arrive from different threads when threads > 1.
class BuildObserver {
 public:
  virtual ~BuildObserver() = default;
  // v was absorbed by anchor u while sweeping around p.
  virtual void on_absorb(PointId /*p*/, PointId /*u*/, PointId /*v*/,
                         double /*d_pu*/, double /*d_uv*/) {}
  // Anchor u of p finished with the given bag (anchor first) and rep.
  virtual void on_group(PointId /*p*/, PointId /*u*/,
                        std::span<const PointId> /*bag*/,
                        std::span<const PointId> /*rep*/) {}
};

struct SlowBuildOptions {
  std::uint32_t threads = 1;
  BuildObserver* observer = nullptr;
};

// Throws DegenerateDataError if two points coincide.
DiverseGraph build_colorful_slow(const VectorDataset& data, std::size_t k,
                                 double alpha,
                                 const SlowBuildOptions& options = {});

DiverseGraph build_diverse_slow(const VectorDataset& data, std::size_t k,
                                std::size_t k_prime, double alpha, RhoMode rho,
                                const SlowBuildOptions& options = {});

// Max-min greedy selection of min(m, |ids|) points. The first pick is `first`
// when given and present in ids, else the lowest id; later ties go to the
// lowest id.
std::vector<PointId> gonzalez_select(std::span<const PointId> ids,
                                     std::size_t m, const Rho& rho,
                                     std::optional<PointId> first = std::nullopt);

// First occurrence of each color in id order until k are held.
// Throws InfeasibleError with fewer than k colors.
std::vector<PointId> init_colorful(const VectorDataset& data, std::size_t k);

// Ball-removal initialization at threshold constraint.C. On success the
// result (ascending ids) is (k', C/4)-diverse; throws InfeasibleError when
// fewer than k points survive.
std::vector<PointId> init_diverse(const VectorDataset& data,
                                  const DiversityConstraint& constraint);

// k * ceil(log_alpha(aspect_ratio / epsilon)), at least 1.
std::size_t default_steps(std::size_t k, double alpha, double aspect_ratio,
                          double epsilon = 0.1);

using StepObserver = std::function<void(std::size_t step,
                                        std::span<const PointId> current)>;

struct ColorfulSearchOptions {
  // Accept a swap only when the newcomer is strictly closer than the point
  // it replaces, and stop at the first step without a swap.
  bool monotone = false;
  StepObserver observer;
};

QueryResult search_colorful(const DiverseGraph& graph, const VectorDataset& data,
                            std::span<const float> query, std::size_t k,
                            std::size_t steps,
                            const ColorfulSearchOptions& options = {});

struct PrimalSearchOptions {
  // Starting set; computed with init_diverse at threshold C/3 when absent.
  std::optional<std::vector<PointId>> init;
  StepObserver observer;
};

// Output is (k', C/12)-diverse.
QueryResult search_primal(const DiverseGraph& graph, const VectorDataset& data,
                          std::span<const float> query,
                          const DiversityConstraint& constraint,
                          std::size_t steps,
                          const PrimalSearchOptions& options = {});

struct DualSearchOptions {
  double epsilon = 0.1;
  std::uint32_t c_loop = 4;
  // Estimated with estimate_stats when absent.
  std::optional<DatasetStats> stats;
};

struct DualSearchResult {
  QueryResult result;
  double init_C = 0.0;         // largest threshold at which init succeeded
  double certified_C = 0.0;    // diversity guaranteed by construction
  double measured_C = 0.0;     // diversity_level of the returned set
  std::uint32_t halvings = 0;
  bool best_effort = false;    // radius bound not met before the floor
};

DualSearchResult search_dual(const DiverseGraph& graph,
                             const VectorDataset& data,
                             std::span<const float> query, std::size_t k,
                             std::size_t k_prime, double R, RhoMode rho,
                             const DualSearchOptions& options = {});

}  // namespace divann
