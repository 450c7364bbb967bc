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

// Domain types shared by every index and search: point sets, colors,
// diversity constraints and query results.

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "divann/error.hpp"

namespace divann {

using PointId = std::uint32_t;
using Color = std::uint32_t;

inline constexpr PointId kInvalidId = std::numeric_limits<PointId>::max();
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Row-major dense float vectors of a single dimension. Used both for the
// indexed base set and for query sets.
class VectorSet {
 public:
  VectorSet() = default;
  // Throws UsageError if dim == 0, data.size() is not a multiple of dim, or
  // any coordinate is not finite.
  VectorSet(std::size_t dim, std::vector<float> data);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const noexcept { return size() == 0; }

  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dim_, dim_};
  }
  const float* row_ptr(std::size_t i) const noexcept {
    return data_.data() + i * dim_;
  }
  const std::vector<float>& data() const noexcept { return data_; }

  friend bool operator==(const VectorSet&, const VectorSet&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<float> data_;
};

// The colored point set P. Immutable after construction.
class VectorDataset {
 public:
  VectorDataset() = default;
  // Throws UsageError if the set is empty or colors.size() != vectors.size().
  VectorDataset(VectorSet vectors, std::vector<Color> colors);

  std::size_t size() const noexcept { return vectors_.size(); }
  std::size_t dim() const noexcept { return vectors_.dim(); }
  std::span<const float> point(PointId i) const { return vectors_.row(i); }
  const float* point_ptr(PointId i) const noexcept { return vectors_.row_ptr(i); }
  Color color(PointId i) const { return colors_[i]; }

  const VectorSet& vectors() const noexcept { return vectors_; }
  const std::vector<Color>& colors() const noexcept { return colors_; }

  // Throws UsageError naming the id if out of range.
  void check_id(PointId i) const;

 private:
  VectorSet vectors_;
  std::vector<Color> colors_;
};

enum class RhoMode : std::uint32_t {
  kBinaryColor = 0,  // 0 for equal colors, 1 otherwise
  kEuclidean = 1,    // same as the search distance
};

const char* to_string(RhoMode mode);

struct DiversityConstraint {
  std::size_t k = 1;
  std::size_t k_prime = 1;
  double C = 1.0;
  RhoMode rho = RhoMode::kBinaryColor;

  // Throws UsageError when k == 0, k_prime outside [1, k] or C < 0.
  void validate() const;
};

struct DatasetStats {
  double d_max = 0.0;
  double d_min = 0.0;
  double aspect_ratio = 1.0;
  bool exact = false;
};

struct Hit {
  PointId id = kInvalidId;
  double distance = 0.0;

  friend bool operator==(const Hit&, const Hit&) = default;
};

// Ascending by distance, then by id. This is the only ordering used for
// results, ground truth and candidate lists.
inline bool hit_less(const Hit& a, const Hit& b) noexcept {
  return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
}

struct QueryResult {
  std::vector<Hit> hits;
  double radius = 0.0;  // S_k: distance of the last hit
  std::uint64_t steps = 0;
  std::uint64_t distance_evals = 0;
  bool underfull = false;

  std::vector<PointId> ids() const;
  // Sorts hits with hit_less and refreshes radius.
  void finalize();
};

double distance(std::span<const float> a, std::span<const float> b);
double l2_distance(const float* a, const float* b, std::size_t dim) noexcept;

double rho(const VectorDataset& data, PointId i, PointId j, RhoMode mode);

// Diversity metric bound to a dataset; cheap to copy.
class Rho {
 public:
  Rho(const VectorDataset& data, RhoMode mode) : data_(&data), mode_(mode) {}

  double operator()(PointId i, PointId j) const noexcept {
    if (mode_ == RhoMode::kBinaryColor) {
      return data_->color(i) == data_->color(j) ? 0.0 : 1.0;
    }
    return l2_distance(data_->point_ptr(i), data_->point_ptr(j), data_->dim());
  }
  RhoMode mode() const noexcept { return mode_; }

 private:
  const VectorDataset* data_;
  RhoMode mode_;
};

bool is_k_colorful(std::span<const Color> colors, std::size_t k_prime);
bool is_k_colorful(const VectorDataset& data, std::span<const PointId> ids,
                   std::size_t k_prime);

// True iff every p in ids has at most k_prime members s of ids with
// rho(p, s) < C (p itself included when C > 0).
bool is_diverse(const VectorDataset& data, std::span<const PointId> ids,
                const DiversityConstraint& constraint);

// Largest C for which ids is (k_prime, C)-diverse: the minimum over members of
// the (k_prime + 1)-th smallest rho to the set. +inf when |ids| <= k_prime.
double diversity_level(const VectorDataset& data, std::span<const PointId> ids,
                       std::size_t k_prime, RhoMode mode);

// Exhaustive pairwise scan when n <= sample_size; otherwise nearest-neighbor
// distances of sample_size seeded sample points plus a two-sweep diameter
// bound. Throws DegenerateDataError on a zero distance between distinct ids.
DatasetStats estimate_stats(const VectorDataset& data,
                            std::size_t sample_size = 5000,
                            std::uint64_t seed = 0);

}  // namespace divann
