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

#include "divann/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "divann/random.hpp"

namespace divann {

VectorSet::VectorSet(std::size_t dim, std::vector<float> data)
    : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0) throw UsageError("vector dimension must be positive");
  if (data_.size() % dim_ != 0) {
    throw UsageError("vector data length " + std::to_string(data_.size()) +
                     " is not a multiple of dim " + std::to_string(dim_));
  }
  for (std::size_t i = 0; i < data_.size(); ++i) {
    if (!std::isfinite(data_[i])) {
      throw UsageError("non-finite coordinate in vector " +
                       std::to_string(i / dim_));
    }
  }
}

VectorDataset::VectorDataset(VectorSet vectors, std::vector<Color> colors)
    : vectors_(std::move(vectors)), colors_(std::move(colors)) {
  if (vectors_.empty()) throw UsageError("dataset must hold at least one point");
  if (colors_.size() != vectors_.size()) {
    throw UsageError("dataset has " + std::to_string(vectors_.size()) +
                     " vectors but " + std::to_string(colors_.size()) +
                     " colors");
  }
  if (vectors_.size() >= kInvalidId) throw UsageError("dataset too large");
}

void VectorDataset::check_id(PointId i) const {
  if (i >= size()) {
    throw UsageError("point id " + std::to_string(i) + " out of range [0, " +
                     std::to_string(size()) + ")");
  }
}

const char* to_string(RhoMode mode) {
  switch (mode) {
    case RhoMode::kBinaryColor:
      return "binary-color";
    case RhoMode::kEuclidean:
      return "euclidean";
  }
  return "unknown";
}

void DiversityConstraint::validate() const {
  if (k == 0) throw UsageError("k must be positive");
  if (k_prime < 1 || k_prime > k) {
    throw UsageError("k' must lie in [1, k]; got k=" + std::to_string(k) +
                     " k'=" + std::to_string(k_prime));
  }
  if (!(C >= 0.0)) throw UsageError("diversity threshold C must be >= 0");
}

std::vector<PointId> QueryResult::ids() const {
  std::vector<PointId> out;
  out.reserve(hits.size());
  for (const Hit& h : hits) out.push_back(h.id);
  return out;
}

void QueryResult::finalize() {
  std::sort(hits.begin(), hits.end(), hit_less);
  radius = hits.empty() ? 0.0 : hits.back().distance;
}

double l2_distance(const float* a, const float* b, std::size_t dim) noexcept {
  // Eight independent lanes summed in a fixed order, so the result does not
  // depend on how the compiler vectorizes the loop.
  constexpr std::size_t kLanes = 8;
  double lane[kLanes] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t i = 0;
  for (; i + kLanes <= dim; i += kLanes) {
    for (std::size_t j = 0; j < kLanes; ++j) {
      const double d = static_cast<double>(a[i + j]) - static_cast<double>(b[i + j]);
      lane[j] += d * d;
    }
  }
  for (std::size_t j = 0; i < dim; ++i, ++j) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    lane[j] += d * d;
  }
  const double sum = ((lane[0] + lane[4]) + (lane[2] + lane[6])) +
                     ((lane[1] + lane[5]) + (lane[3] + lane[7]));
  return std::sqrt(sum);
}

double distance(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) {
    throw UsageError("dimension mismatch: " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
  return l2_distance(a.data(), b.data(), a.size());
}

double rho(const VectorDataset& data, PointId i, PointId j, RhoMode mode) {
  data.check_id(i);
  data.check_id(j);
  return Rho(data, mode)(i, j);
}

bool is_k_colorful(std::span<const Color> colors, std::size_t k_prime) {
  std::unordered_map<Color, std::size_t> counts;
  for (Color c : colors) {
    if (++counts[c] > k_prime) return false;
  }
  return true;
}

bool is_k_colorful(const VectorDataset& data, std::span<const PointId> ids,
                   std::size_t k_prime) {
  std::vector<Color> colors;
  colors.reserve(ids.size());
  for (PointId id : ids) colors.push_back(data.color(id));
  return is_k_colorful(colors, k_prime);
}

bool is_diverse(const VectorDataset& data, std::span<const PointId> ids,
                const DiversityConstraint& constraint) {
  const Rho metric(data, constraint.rho);
  for (PointId p : ids) {
    std::size_t in_ball = 0;
    for (PointId s : ids) {
      if (metric(p, s) < constraint.C && ++in_ball > constraint.k_prime) {
        return false;
      }
    }
  }
  return true;
}

double diversity_level(const VectorDataset& data, std::span<const PointId> ids,
                       std::size_t k_prime, RhoMode mode) {
  if (ids.size() <= k_prime) return kInfinity;
  const Rho metric(data, mode);
  double level = kInfinity;
  std::vector<double> row(ids.size());
  for (PointId p : ids) {
    for (std::size_t j = 0; j < ids.size(); ++j) row[j] = metric(p, ids[j]);
    // Self sits at rho = 0, so index k_prime is the (k'+1)-th smallest.
    std::nth_element(row.begin(), row.begin() + k_prime, row.end());
    level = std::min(level, row[k_prime]);
  }
  return level;
}

namespace {

[[noreturn]] void throw_duplicate(PointId a, PointId b) {
  throw DegenerateDataError("points " + std::to_string(a) + " and " +
                            std::to_string(b) +
                            " coincide; aspect ratio is undefined");
}

PointId farthest_from(const VectorDataset& data, PointId from, double* dist) {
  PointId best = from;
  double best_d = -1.0;
  for (PointId i = 0; i < data.size(); ++i) {
    const double d = l2_distance(data.point_ptr(from), data.point_ptr(i), data.dim());
    if (d > best_d) {
      best_d = d;
      best = i;
    }
  }
  *dist = best_d;
  return best;
}

}  // namespace

DatasetStats estimate_stats(const VectorDataset& data, std::size_t sample_size,
                            std::uint64_t seed) {
  const std::size_t n = data.size();
  if (n < 2) throw UsageError("dataset statistics need at least two points");
  DatasetStats stats;
  stats.d_min = kInfinity;
  if (n <= sample_size) {
    stats.exact = true;
    for (PointId i = 0; i < n; ++i) {
      for (PointId j = i + 1; j < n; ++j) {
        const double d = l2_distance(data.point_ptr(i), data.point_ptr(j), data.dim());
        if (d == 0.0) throw_duplicate(i, j);
        stats.d_max = std::max(stats.d_max, d);
        stats.d_min = std::min(stats.d_min, d);
      }
    }
  } else {
    Rng rng(seed);
    // Two farthest-point sweeps give a diameter within a factor of 2.
    double d = 0.0;
    const PointId a = farthest_from(data, static_cast<PointId>(rng.below(n)), &d);
    farthest_from(data, a, &d);
    stats.d_max = d;
    for (std::size_t s = 0; s < sample_size; ++s) {
      const auto i = static_cast<PointId>(rng.below(n));
      for (PointId j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dij = l2_distance(data.point_ptr(i), data.point_ptr(j), data.dim());
        if (dij == 0.0) throw_duplicate(std::min(i, j), std::max(i, j));
        stats.d_min = std::min(stats.d_min, dij);
        stats.d_max = std::max(stats.d_max, dij);
      }
    }
  }
  stats.aspect_ratio = stats.d_max / stats.d_min;
  return stats;
}

}  // namespace divann
