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

// File formats and synthetic data. All binary formats are little-endian.
//
// DVRS index snapshot, version 1:
//   "DVRS" u32 version u32 builder u32 rho f64 alpha u32 k u32 k_prime
//   u32 R u32 L u32 m u32 passes u64 seed u32 start u64 n u32 dim
//   u64 offsets[n + 1] u32 neighbors[offsets[n]] u32 colors[n]
// Absent optional fields (R, m, start) are stored as 0xFFFFFFFF.
//
// Ground truth:
//   u32 queries u16 k u16 k_prime, then per query k u32 ids followed by k
//   f32 distances; unused slots hold id 0xFFFFFFFF and distance +inf.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "divann/core.hpp"
#include "divann/graph.hpp"
#include "divann/oracle.hpp"

namespace divann {

inline constexpr std::uint32_t kAbsent = 0xFFFFFFFFu;

VectorSet load_fvecs(const std::string& path);
void save_fvecs(const VectorSet& vectors, const std::string& path);

// Binary u32 ids, or one decimal per line when the path ends in ".txt".
std::vector<Color> load_colors(const std::string& path, std::size_t n);
void save_colors(std::span<const Color> colors, const std::string& path);

// Colors uniform over the closed range [lo, hi], drawn with probability prob.
struct ColorTier {
  Color lo;
  Color hi;
  double prob;
};

// 0.9 on {1,2,3}, 0.1 on {4..1000}.
std::vector<ColorTier> arxiv_color_scheme();
// 0.8 on color 0, 0.2 on {1..999}.
std::vector<ColorTier> sift_skewed_color_scheme();

std::vector<Color> gen_colors_skewed(std::size_t n,
                                     std::span<const ColorTier> tiers,
                                     std::uint64_t seed);

// Buckets round up to a power of two. Hyperplanes pass through the mean of
// the vectors; bucket b has primary color b.
std::vector<Color> gen_colors_hyperplane(const VectorSet& vectors,
                                         std::size_t buckets,
                                         double primary_prob, std::uint64_t seed);

// n points around `centers` standard-normal centers, with per-coordinate
// noise of standard deviation `spread`. Centers depend only on center_seed so
// base and query sets drawn with different seeds share them.
VectorSet gen_gaussian_mixture(std::size_t n, std::size_t dim,
                               std::size_t centers, double spread,
                               std::uint64_t center_seed, std::uint64_t seed);

struct IndexSnapshot {
  DiverseGraph graph;
  std::vector<Color> colors;
  std::uint32_t dim = 0;

  friend bool operator==(const IndexSnapshot&, const IndexSnapshot&) = default;
};

std::vector<std::uint8_t> encode_index(const DiverseGraph& graph,
                                       std::span<const Color> colors,
                                       std::uint32_t dim);
IndexSnapshot decode_index(std::span<const std::uint8_t> bytes);
void save_index(const DiverseGraph& graph, std::span<const Color> colors,
                std::uint32_t dim, const std::string& path);
IndexSnapshot load_index(const std::string& path);

std::vector<std::uint8_t> encode_gt(const GroundTruth& truth);
GroundTruth decode_gt(std::span<const std::uint8_t> bytes);
void save_gt(const GroundTruth& truth, const std::string& path);
GroundTruth load_gt(const std::string& path);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);

}  // namespace divann
