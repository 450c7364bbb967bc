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

#include <cstddef>
#include <optional>
#include <vector>

#include "divann/core.hpp"

namespace divann {

// Bounded best-first candidate list holding at most `capacity` entries and at
// most `per_color_cap` entries of any one color. Entries are ordered by
// (distance, id); a higher id is worse on equal distance.
class DiverseQueue {
 public:
  struct Entry {
    double distance;
    PointId id;
    Color color;
    bool expanded;
  };

  DiverseQueue(std::size_t capacity, std::size_t per_color_cap);

  // Returns true if the entry is present after the call. An id already in
  // the queue is ignored and reports false.
  bool insert(PointId id, double distance, Color color);

  // Same as insert() for callers that guarantee `id` is not in the queue
  // (for example because every id is offered at most once).
  bool insert_new(PointId id, double distance, Color color);

  // Closest entry not yet expanded; marks it expanded.
  std::optional<Entry> pop_unexpanded();
  bool has_unexpanded() const noexcept;

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t per_color_cap() const noexcept { return per_color_cap_; }
  std::size_t count(Color c) const;
  bool contains(PointId id) const;

  const std::vector<Entry>& entries() const noexcept { return entries_; }

 private:
  struct Key {
    double distance;
    PointId id;
  };
  static bool key_less(const Key& a, const Key& b) noexcept {
    return a.distance < b.distance || (a.distance == b.distance && a.id < b.id);
  }
  static Key key_of(const Entry& e) noexcept { return Key{e.distance, e.id}; }

  struct ColorSlot {
    Color color;
    std::uint32_t count;  // zero means the slot is unused by the queue
    Key worst;
    bool used;
  };

  ColorSlot& slot(Color c);
  const ColorSlot* find_slot(Color c) const;
  void grow_table();
  std::size_t position_of(const Key& key) const;
  void erase_at(std::size_t pos);
  // Refreshes slot.worst by scanning from the back of the queue.
  void rescan_worst(ColorSlot& s) const;

  std::size_t capacity_;
  std::size_t per_color_cap_;
  std::vector<Entry> entries_;
  // Open-addressing color table; slots are reused, never deleted.
  std::vector<ColorSlot> table_;
  std::size_t table_used_ = 0;
  std::size_t cursor_ = 0;
};

}  // namespace divann
