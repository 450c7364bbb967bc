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

#include <algorithm>
#include <cstdint>
#include <vector>

namespace divann::detail {

// Epoch-stamped membership set over [0, n); reset is O(1) amortized.
class VisitedTable {
 public:
  void reset(std::size_t n) {
    if (marks_.size() < n) {
      marks_.assign(n, 0);
      epoch_ = 0;
    }
    if (++epoch_ == 0) {
      std::fill(marks_.begin(), marks_.end(), 0);
      epoch_ = 1;
    }
  }

  // Returns true if i was already marked.
  bool test_and_set(std::uint32_t i) {
    if (marks_[i] == epoch_) return true;
    marks_[i] = epoch_;
    return false;
  }

  bool test(std::uint32_t i) const { return marks_[i] == epoch_; }

 private:
  std::vector<std::uint32_t> marks_;
  std::uint32_t epoch_ = 0;
};

// Independent per-thread tables; slot selects one.
inline VisitedTable& thread_visited_table(std::size_t slot = 0) {
  thread_local VisitedTable tables[2];
  return tables[slot];
}

// Memoized distances from one query to dataset points.
class DistanceCache {
 public:
  void reset(std::size_t n) {
    seen_.reset(n);
    if (values_.size() < n) values_.resize(n);
  }

  template <typename Fn>
  double get(std::uint32_t i, Fn&& compute) {
    if (!seen_.test_and_set(i)) {
      values_[i] = compute(i);
      ++misses_;
    }
    return values_[i];
  }

  std::uint64_t misses() const { return misses_; }
  void clear_misses() { misses_ = 0; }

 private:
  VisitedTable seen_;
  std::vector<double> values_;
  std::uint64_t misses_ = 0;
};

inline DistanceCache& thread_distance_cache() {
  thread_local DistanceCache cache;
  return cache;
}

}  // namespace divann::detail
