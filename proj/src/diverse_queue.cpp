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

#include "divann/diverse_queue.hpp"

#include <algorithm>

namespace divann {

namespace {

std::size_t hash_color(Color c) noexcept {
  std::uint64_t x = c;
  x *= 0x9e3779b97f4a7c15ULL;
  return static_cast<std::size_t>(x >> 32);
}

}  // namespace

DiverseQueue::DiverseQueue(std::size_t capacity, std::size_t per_color_cap)
    : capacity_(capacity), per_color_cap_(per_color_cap) {
  if (capacity_ == 0) throw UsageError("queue capacity must be positive");
  if (per_color_cap_ == 0) throw UsageError("per-color cap must be positive");
  entries_.reserve(capacity_ + 1);
  table_.resize(64);
}

const DiverseQueue::ColorSlot* DiverseQueue::find_slot(Color c) const {
  const std::size_t mask = table_.size() - 1;
  for (std::size_t i = hash_color(c) & mask;; i = (i + 1) & mask) {
    const ColorSlot& s = table_[i];
    if (!s.used) return nullptr;
    if (s.color == c) return &s;
  }
}

void DiverseQueue::grow_table() {
  std::vector<ColorSlot> old = std::move(table_);
  table_.assign(old.size() * 2, ColorSlot{});
  const std::size_t mask = table_.size() - 1;
  table_used_ = 0;
  for (const ColorSlot& s : old) {
    if (!s.used || s.count == 0) continue;
    std::size_t i = hash_color(s.color) & mask;
    while (table_[i].used) i = (i + 1) & mask;
    table_[i] = s;
    ++table_used_;
  }
}

DiverseQueue::ColorSlot& DiverseQueue::slot(Color c) {
  if (2 * (table_used_ + 1) > table_.size()) grow_table();
  const std::size_t mask = table_.size() - 1;
  std::size_t i = hash_color(c) & mask;
  for (;; i = (i + 1) & mask) {
    ColorSlot& s = table_[i];
    if (!s.used) break;
    if (s.color == c) return s;
  }
  table_[i] = ColorSlot{c, 0, Key{0.0, 0}, true};
  ++table_used_;
  return table_[i];
}

std::size_t DiverseQueue::count(Color c) const {
  const ColorSlot* s = find_slot(c);
  return s == nullptr ? 0 : s->count;
}

bool DiverseQueue::contains(PointId id) const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [id](const Entry& e) { return e.id == id; });
}

bool DiverseQueue::has_unexpanded() const noexcept {
  for (std::size_t i = cursor_; i < entries_.size(); ++i) {
    if (!entries_[i].expanded) return true;
  }
  return false;
}

std::size_t DiverseQueue::position_of(const Key& key) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), key,
      [](const Entry& e, const Key& k) { return key_less(key_of(e), k); });
  return static_cast<std::size_t>(it - entries_.begin());
}

void DiverseQueue::erase_at(std::size_t pos) {
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(pos));
  if (pos < cursor_) --cursor_;
}

void DiverseQueue::rescan_worst(ColorSlot& s) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->color == s.color) {
      s.worst = key_of(*it);
      return;
    }
  }
}

bool DiverseQueue::insert(PointId id, double distance, Color color) {
  if (contains(id)) return false;
  return insert_new(id, distance, color);
}

bool DiverseQueue::insert_new(PointId id, double distance, Color color) {
  const Key key{distance, id};
  // A full queue drops anything not better than its worst entry; inserting
  // it would only evict it again.
  if (entries_.size() >= capacity_ && !key_less(key, key_of(entries_.back()))) {
    return false;
  }
  ColorSlot* s = &slot(color);
  if (s->count >= per_color_cap_ && !key_less(key, s->worst)) return false;

  const std::size_t at = position_of(key);
  entries_.insert(entries_.begin() + static_cast<std::ptrdiff_t>(at),
                  Entry{distance, id, color, false});
  if (at < cursor_) cursor_ = at;
  if (s->count == 0 || key_less(s->worst, key)) s->worst = key;
  ++s->count;

  if (s->count > per_color_cap_) {
    // The new key beat the old worst, so the old worst is evicted.
    const std::size_t pos = position_of(s->worst);
    erase_at(pos);
    --s->count;
    rescan_worst(*s);
  }
  if (entries_.size() > capacity_) {
    const Entry worst = entries_.back();
    erase_at(entries_.size() - 1);
    ColorSlot& ws = slot(worst.color);
    --ws.count;
    if (ws.count > 0) rescan_worst(ws);
    if (worst.id == id) return false;
  }
  return true;
}

std::optional<DiverseQueue::Entry> DiverseQueue::pop_unexpanded() {
  while (cursor_ < entries_.size() && entries_[cursor_].expanded) ++cursor_;
  if (cursor_ >= entries_.size()) return std::nullopt;
  entries_[cursor_].expanded = true;
  return entries_[cursor_++];
}

}  // namespace divann
