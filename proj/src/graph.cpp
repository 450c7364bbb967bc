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

#include "divann/graph.hpp"

#include <algorithm>

namespace divann {

const char* to_string(BuilderTag tag) {
  switch (tag) {
    case BuilderTag::kSlowColorful:
      return "slow-colorful";
    case BuilderTag::kSlowDiverse:
      return "slow-diverse";
    case BuilderTag::kFast:
      return "fast";
  }
  return "unknown";
}

std::size_t DiverseGraph::max_out_degree() const noexcept {
  std::size_t best = 0;
  for (const auto& nb : adjacency_) best = std::max(best, nb.size());
  return best;
}

std::size_t DiverseGraph::edge_count() const noexcept {
  std::size_t total = 0;
  for (const auto& nb : adjacency_) total += nb.size();
  return total;
}

}  // namespace divann
