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

// Recall/latency sweeps over search list sizes, and the m ablation.

#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "divann/core.hpp"
#include "divann/fast.hpp"
#include "divann/graph.hpp"
#include "divann/oracle.hpp"

namespace divann {

inline constexpr const char* kBaselineLabel = "baseline";
inline constexpr const char* kStdBuildLabel = "std-build+div-search";
inline constexpr const char* kDivBuildLabel = "div-build+div-search";

enum class SearchMode {
  kPostprocess,  // fetch L candidates uncapped, then filter
  kDiverse,      // color-capped beam search with list size L
};

struct SweepConfig {
  std::string label;
  SearchMode mode = SearchMode::kDiverse;
  const DiverseGraph* graph = nullptr;
};

struct SweepRow {
  std::string config;
  std::uint32_t L = 0;
  std::uint32_t k = 0;
  std::uint32_t k_prime = 0;
  std::uint32_t m = 0;
  double recall = 0.0;
  double mean_us = 0.0;
  double p95_us = 0.0;
  double dist_evals = 0.0;  // mean per query
};

struct SweepOptions {
  std::uint32_t threads = 1;
  // Keep every query's returned ids, indexed [row][query].
  bool keep_results = false;
};

struct SweepOutput {
  std::vector<SweepRow> rows;
  std::vector<std::vector<std::vector<PointId>>> results;
};

// Throws UsageError when gt and queries disagree in count.
SweepOutput run_sweep(const VectorDataset& data, const VectorSet& queries,
                      const GroundTruth& gt, std::span<const SweepConfig> configs,
                      std::span<const std::uint32_t> L_values,
                      const SweepOptions& options = {});

struct AblationOutput {
  std::vector<SweepRow> rows;
  std::vector<std::uint32_t> m_values;
  std::vector<double> build_seconds;
  std::vector<DiverseGraph> graphs;
};

// Builds one index per m from `base` (only m changes) and sweeps each with
// diverse search.
AblationOutput run_ablation_m(const VectorDataset& data, const VectorSet& queries,
                              const GroundTruth& gt,
                              std::span<const std::uint32_t> m_values,
                              std::span<const std::uint32_t> L_values,
                              const BuildParams& base,
                              const SweepOptions& options = {});

inline constexpr const char* kSweepCsvHeader =
    "config,L,k,kprime,m,recall,mean_us,p95_us,dist_evals";

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
void write_build_times_csv(std::ostream& out, const AblationOutput& ablation);

}  // namespace divann
