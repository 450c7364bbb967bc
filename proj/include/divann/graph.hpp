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

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "divann/core.hpp"

namespace divann {

enum class BuilderTag : std::uint32_t {
  kSlowColorful = 0,
  kSlowDiverse = 1,
  kFast = 2,
};

const char* to_string(BuilderTag tag);

struct GraphMeta {
  BuilderTag builder = BuilderTag::kFast;
  double alpha = 1.2;
  std::uint32_t k = 0;        // slow builders only
  std::uint32_t k_prime = 0;  // slow builders only
  RhoMode rho = RhoMode::kBinaryColor;
  std::optional<std::uint32_t> degree_cap;  // fast builder R
  std::uint32_t build_list_size = 0;        // fast builder L
  std::optional<std::uint32_t> m;
  std::uint32_t passes = 0;
  std::uint64_t seed = 0;
  std::optional<PointId> start_node;

  friend bool operator==(const GraphMeta&, const GraphMeta&) = default;
};

// Directed adjacency over point ids 0..n-1.
class DiverseGraph {
 public:
  DiverseGraph() = default;
  explicit DiverseGraph(std::size_t n) : adjacency_(n) {}
  DiverseGraph(std::vector<std::vector<PointId>> adjacency, GraphMeta meta)
      : adjacency_(std::move(adjacency)), meta_(meta) {}

  std::size_t size() const noexcept { return adjacency_.size(); }
  std::span<const PointId> neighbors(PointId p) const { return adjacency_[p]; }
  std::vector<PointId>& mutable_neighbors(PointId p) { return adjacency_[p]; }

  const GraphMeta& meta() const noexcept { return meta_; }
  GraphMeta& mutable_meta() noexcept { return meta_; }

  std::size_t max_out_degree() const noexcept;
  std::size_t edge_count() const noexcept;
  const std::vector<std::vector<PointId>>& adjacency() const noexcept {
    return adjacency_;
  }

  friend bool operator==(const DiverseGraph&, const DiverseGraph&) = default;

 private:
  std::vector<std::vector<PointId>> adjacency_;
  GraphMeta meta_;
};

}  // namespace divann
