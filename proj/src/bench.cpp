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

#include "divann/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "parallel.hpp"

namespace divann {

namespace {

using Clock = std::chrono::steady_clock;

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (v[hi] - v[lo]) * (pos - static_cast<double>(lo));
}

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

SweepOutput run_sweep(const VectorDataset& data, const VectorSet& queries,
                      const GroundTruth& gt, std::span<const SweepConfig> configs,
                      std::span<const std::uint32_t> L_values,
                      const SweepOptions& options) {
  if (gt.lists.size() != queries.size()) {
    throw UsageError("ground truth has " + std::to_string(gt.lists.size()) +
                     " queries, query set has " + std::to_string(queries.size()));
  }
  if (queries.dim() != data.dim()) throw UsageError("query dimension mismatch");
  for (const SweepConfig& c : configs) {
    if (c.graph == nullptr) throw UsageError("sweep config " + c.label + " has no graph");
  }
  const std::size_t nq = queries.size();
  SweepOutput out;
  std::vector<double> recall(nq), latency(nq), evals(nq);
  std::vector<std::vector<PointId>> ids(nq);

  for (const SweepConfig& config : configs) {
    for (std::uint32_t L : L_values) {
      detail::parallel_for(nq, options.threads, [&](std::size_t i) {
        const auto q = queries.row(i);
        const auto t0 = Clock::now();
        QueryResult r;
        if (config.mode == SearchMode::kPostprocess) {
          r = baseline_postprocess_search(*config.graph, data, q, gt.k,
                                          gt.k_prime, L);
        } else {
          r = diverse_search(*config.graph, data, q, gt.k_prime, gt.k, L).top_k;
        }
        const auto t1 = Clock::now();
        latency[i] = std::chrono::duration<double, std::micro>(t1 - t0).count();
        evals[i] = static_cast<double>(r.distance_evals);
        ids[i] = r.ids();
        recall[i] = recall_at_k(ids[i], gt.lists[i]);
      });
      SweepRow row;
      row.config = config.label;
      row.L = L;
      row.k = gt.k;
      row.k_prime = gt.k_prime;
      row.m = config.graph->meta().m.value_or(0);
      double rsum = 0.0, lsum = 0.0, esum = 0.0;
      for (std::size_t i = 0; i < nq; ++i) {
        rsum += recall[i];
        lsum += latency[i];
        esum += evals[i];
      }
      const double denom = static_cast<double>(std::max<std::size_t>(nq, 1));
      row.recall = rsum / denom;
      row.mean_us = lsum / denom;
      row.p95_us = percentile(latency, 0.95);
      row.dist_evals = esum / denom;
      out.rows.push_back(row);
      if (options.keep_results) out.results.push_back(ids);
    }
  }
  return out;
}

AblationOutput run_ablation_m(const VectorDataset& data, const VectorSet& queries,
                              const GroundTruth& gt,
                              std::span<const std::uint32_t> m_values,
                              std::span<const std::uint32_t> L_values,
                              const BuildParams& base,
                              const SweepOptions& options) {
  if (gt.lists.size() != queries.size()) {
    throw UsageError("ground truth has " + std::to_string(gt.lists.size()) +
                     " queries, query set has " + std::to_string(queries.size()));
  }
  AblationOutput out;
  out.graphs.reserve(m_values.size());
  for (std::uint32_t m : m_values) {
    BuildParams params = base;
    params.m = m;
    const auto t0 = Clock::now();
    out.graphs.push_back(build_fast(data, params));
    out.build_seconds.push_back(
        std::chrono::duration<double>(Clock::now() - t0).count());
    out.m_values.push_back(m);
  }
  for (std::size_t i = 0; i < out.graphs.size(); ++i) {
    const SweepConfig config{kDivBuildLabel, SearchMode::kDiverse, &out.graphs[i]};
    auto sweep = run_sweep(data, queries, gt, std::span(&config, 1), L_values, options);
    out.rows.insert(out.rows.end(), sweep.rows.begin(), sweep.rows.end());
  }
  return out;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows) {
    out << r.config << ',' << r.L << ',' << r.k << ',' << r.k_prime << ','
        << r.m << ',' << format("%.6f", r.recall) << ','
        << format("%.2f", r.mean_us) << ',' << format("%.2f", r.p95_us) << ','
        << format("%.1f", r.dist_evals) << '\n';
  }
}

void write_build_times_csv(std::ostream& out, const AblationOutput& ablation) {
  out << "m,build_seconds\n";
  for (std::size_t i = 0; i < ablation.m_values.size(); ++i) {
    out << ablation.m_values[i] << ',' << format("%.3f", ablation.build_seconds[i])
        << '\n';
  }
}

}  // namespace divann
