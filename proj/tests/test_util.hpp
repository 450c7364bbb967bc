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
#include <filesystem>
#include <string>
#include <vector>

#include "divann/core.hpp"
#include "divann/random.hpp"

namespace divann::testing {

// Points on a line with the given colors.
inline VectorDataset line(const std::vector<float>& xs,
                          const std::vector<Color>& colors) {
  return VectorDataset(VectorSet(1, xs), colors);
}

inline VectorSet uniform_vectors(std::size_t n, std::size_t dim, Rng& rng,
                                 double scale = 1.0) {
  std::vector<float> data(n * dim);
  for (float& x : data) x = static_cast<float>(rng.uniform() * scale);
  return VectorSet(dim, std::move(data));
}

inline std::vector<Color> random_colors(std::size_t n, std::uint32_t palette,
                                        Rng& rng) {
  std::vector<Color> c(n);
  for (Color& x : c) x = static_cast<Color>(rng.below(palette));
  return c;
}

inline VectorDataset uniform_dataset(std::size_t n, std::size_t dim,
                                     std::uint32_t palette, std::uint64_t seed) {
  Rng rng(seed);
  auto v = uniform_vectors(n, dim, rng);
  return VectorDataset(std::move(v), random_colors(n, palette, rng));
}

inline std::vector<float> random_query(std::size_t dim, Rng& rng) {
  std::vector<float> q(dim);
  for (float& x : q) x = static_cast<float>(rng.uniform());
  return q;
}

// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("divann_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace divann::testing
