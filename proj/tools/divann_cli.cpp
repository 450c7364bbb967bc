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

// Command-line front end. Exit codes: 0 success, 1 internal error, 2 usage or
// configuration error, 3 data or format error, 4 infeasible constraint.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "divann/divann.h"
#include "json.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInfeasible = 4;

constexpr std::size_t kSlowBuildGuard = 20000;

// Carries an exit code out of a command.
struct Failure {
  int code;
  std::string message;
};

int exit_code(divann_status s) {
  switch (s) {
    case DIVANN_OK: return 0;
    case DIVANN_ERR_USAGE: return kExitUsage;
    case DIVANN_ERR_FORMAT:
    case DIVANN_ERR_IO:
    case DIVANN_ERR_DEGENERATE: return kExitData;
    case DIVANN_ERR_INFEASIBLE: return kExitInfeasible;
    case DIVANN_ERR_INTERNAL: return kExitInternal;
  }
  return kExitInternal;
}

void check(divann_status s) {
  if (s != DIVANN_OK) {
    throw Failure{exit_code(s), std::string(divann_status_name(s)) +
                                    " error: " + divann_last_error()};
  }
}

[[noreturn]] void usage(const std::string& message) {
  throw Failure{kExitUsage, message};
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Vectors =
    std::unique_ptr<divann_vectors, Deleter<divann_vectors, divann_vectors_free>>;
using Dataset =
    std::unique_ptr<divann_dataset, Deleter<divann_dataset, divann_dataset_free>>;
using Index =
    std::unique_ptr<divann_index, Deleter<divann_index, divann_index_free>>;
using Result =
    std::unique_ptr<divann_result, Deleter<divann_result, divann_result_free>>;
using Gt = std::unique_ptr<divann_gt, Deleter<divann_gt, divann_gt_free>>;

Vectors load_vectors(const std::string& path) {
  if (path.empty()) usage("missing vector file");
  divann_vectors* v = nullptr;
  check(divann_vectors_load_fvecs(path.c_str(), &v));
  return Vectors(v);
}

std::vector<uint32_t> load_colors(const std::string& path, std::size_t n) {
  if (path.empty()) usage("missing color file");
  std::vector<uint32_t> colors(n);
  check(divann_colors_load(path.c_str(), n, colors.data()));
  return colors;
}

Dataset make_dataset(const divann_vectors* v, const std::vector<uint32_t>& c) {
  divann_dataset* ds = nullptr;
  check(divann_dataset_create(v, c.data(), &ds));
  return Dataset(ds);
}

Index load_index(const std::string& path) {
  if (path.empty()) usage("missing index file");
  divann_index* index = nullptr;
  check(divann_index_load(path.c_str(), &index));
  return Index(index);
}

// Dataset from a vector file with the colors stored in a loaded index. An
// index built on a prefix (build --n) uses the same prefix of the file.
Dataset dataset_for_index(const divann_vectors* v, const divann_index* index) {
  divann_index_info info{};
  check(divann_index_info_get(index, &info));
  if (info.n > divann_vectors_size(v)) {
    throw Failure{kExitData, "index has " + std::to_string(info.n) +
                                 " points, vector file has only " +
                                 std::to_string(divann_vectors_size(v))};
  }
  if (divann_index_dim(index) != divann_vectors_dim(v)) {
    throw Failure{kExitData, "index dimension does not match vector file"};
  }
  std::vector<uint32_t> colors(info.n);
  check(divann_index_colors(index, colors.data()));
  if (info.n == divann_vectors_size(v)) return make_dataset(v, colors);
  divann_vectors* prefix = nullptr;
  check(divann_vectors_create(divann_vectors_data(v), info.n, divann_vectors_dim(v),
                              &prefix));
  Vectors owned(prefix);
  return make_dataset(owned.get(), colors);
}

divann_rho parse_rho(const std::string& s) {
  if (s == "binary") return DIVANN_RHO_BINARY_COLOR;
  if (s == "euclidean") return DIVANN_RHO_EUCLIDEAN;
  usage("unknown rho '" + s + "' (expected binary or euclidean)");
}

std::vector<uint32_t> parse_list(const std::string& s, const char* what) {
  std::vector<uint32_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(item, &used);
      if (used != item.size() || v == 0 || v > 0xFFFFFFFFul) throw 0;
      out.push_back(static_cast<uint32_t>(v));
    } catch (...) {
      usage(std::string("bad ") + what + " list entry '" + item + "'");
    }
  }
  if (out.empty()) usage(std::string("empty ") + what + " list");
  return out;
}

// Values from a JSON config file fill options not given on the command line.
// Keys are long option names; an object under the subcommand's name
// overrides top-level keys. The file is expanded into extra arguments before
// parsing so required options can come from it too.
std::vector<std::string> expand_config(CLI::App& app, int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[0]);
  } catch (const CLI::OptionNotFound&) {
    return args;  // let the parser report the bad subcommand
  }

  std::ifstream in(path);
  if (!in) usage("cannot open config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    usage("bad config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) usage("config file must hold a JSON object");
  json merged = json::object();
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_object()) merged[it.key()] = it.value();
  }
  if (doc.contains(sub->get_name()) && doc[sub->get_name()].is_object()) {
    merged.update(doc[sub->get_name()]);
  }

  std::vector<std::string> extra;
  for (auto it = merged.begin(); it != merged.end(); ++it) {
    const std::string flag = "--" + it.key();
    try {
      sub->get_option(flag);
    } catch (const CLI::OptionNotFound&) {
      usage("unknown config key '" + it.key() + "' for " + sub->get_name());
    }
    if (it.key() == "config") continue;
    bool given = false;
    for (const auto& a : args) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (given) continue;
    const json& v = it.value();
    if (v.is_boolean()) {
      if (v.get<bool>()) extra.push_back(flag);
      continue;
    }
    std::string text;
    if (v.is_string()) {
      text = v.get<std::string>();
    } else if (v.is_array()) {
      for (const auto& e : v) {
        if (!text.empty()) text += ",";
        text += e.is_string() ? e.get<std::string>() : e.dump();
      }
    } else {
      text = v.dump();
    }
    extra.push_back(flag + "=" + text);
  }
  args.insert(args.begin() + 1, extra.begin(), extra.end());
  return args;
}

void echo_config(const CLI::App* sub) {
  json cfg = json::object();
  cfg["command"] = sub->get_name();
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    std::string value;
    if (opt->count() > 0) {
      for (const auto& r : opt->results()) {
        if (!value.empty()) value += ",";
        value += r;
      }
    } else {
      value = opt->get_default_str();
      if (value.empty() && opt->get_expected_max() == 0) value = "false";
    }
    cfg[name] = value;
  }
  std::cout << "# config " << cfg.dump() << "\n";
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- gen-colors ----

struct GenColorsArgs {
  std::string scheme;
  std::size_t n = 0;
  std::string vectors;
  std::size_t buckets = 32;
  double primary_prob = 0.9;
  uint64_t seed = 0;
  std::string out = "colors.bin";
};

void print_histogram(const std::vector<uint32_t>& colors) {
  std::map<uint32_t, std::size_t> counts;
  for (uint32_t c : colors) ++counts[c];
  std::vector<std::pair<std::size_t, uint32_t>> order;
  order.reserve(counts.size());
  for (const auto& [c, n] : counts) order.emplace_back(n, c);
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return a.first > b.first || (a.first == b.first && a.second < b.second);
  });
  std::cout << "points " << colors.size() << "\n";
  std::cout << "distinct_colors " << counts.size() << "\n";
  std::cout << "color,count,fraction\n";
  const std::size_t shown = std::min<std::size_t>(order.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) {
    std::printf("%u,%zu,%.4f\n", order[i].second, order[i].first,
                static_cast<double>(order[i].first) /
                    static_cast<double>(colors.size()));
  }
  if (order.size() > shown) {
    std::size_t rest = 0;
    for (std::size_t i = shown; i < order.size(); ++i) rest += order[i].first;
    std::printf("other,%zu,%.4f\n", rest,
                static_cast<double>(rest) / static_cast<double>(colors.size()));
  }
  std::fflush(stdout);
}

void run_gen_colors(const GenColorsArgs& a) {
  std::vector<uint32_t> colors;
  if (a.scheme == "arxiv" || a.scheme == "sift-skewed") {
    if (a.n == 0) usage("--n is required for scheme " + a.scheme);
    colors.resize(a.n);
    check(divann_colors_skewed(
        a.n, a.scheme == "arxiv" ? DIVANN_SCHEME_ARXIV : DIVANN_SCHEME_SIFT_SKEWED,
        a.seed, colors.data()));
  } else if (a.scheme == "hyperplane") {
    auto v = load_vectors(a.vectors);
    colors.resize(divann_vectors_size(v.get()));
    check(divann_colors_hyperplane(v.get(), a.buckets, a.primary_prob, a.seed,
                                   colors.data()));
  } else {
    usage("unknown scheme '" + a.scheme +
          "' (expected arxiv, sift-skewed or hyperplane)");
  }
  check(divann_colors_save(colors.data(), colors.size(), a.out.c_str()));
  std::cout << "wrote " << a.out << "\n";
  print_histogram(colors);
}

// ---- gen-vectors ----

struct GenVectorsArgs {
  std::size_t n = 0;
  std::size_t dim = 16;
  std::size_t centers = 64;
  double spread = 1.0;
  uint64_t center_seed = 0;
  uint64_t seed = 0;
  std::string out;
};

void run_gen_vectors(const GenVectorsArgs& a) {
  divann_vectors* v = nullptr;
  check(divann_vectors_gaussian_mixture(a.n, a.dim, a.centers, a.spread,
                                        a.center_seed, a.seed, &v));
  Vectors owned(v);
  check(divann_vectors_save_fvecs(owned.get(), a.out.c_str()));
  std::cout << "wrote " << a.out << " (" << a.n << " x " << a.dim << ")\n";
}

// ---- build ----

struct BuildArgs {
  std::string vectors;
  std::string colors;
  std::string out;
  std::string builder = "fast";
  std::size_t n = 0;
  double alpha = 1.2;
  uint32_t R = 64;
  uint32_t L = 200;
  uint32_t m = 1;
  uint32_t passes = 2;
  uint64_t seed = 0;
  uint32_t threads = 1;
  std::size_t k = 100;
  std::size_t k_prime = 1;
  std::string rho = "binary";
  bool force = false;
};

void run_build(const BuildArgs& a) {
  if (a.builder != "fast" && a.builder != "slow-colorful" &&
      a.builder != "slow-diverse") {
    usage("unknown builder '" + a.builder +
          "' (expected fast, slow-colorful or slow-diverse)");
  }
  const divann_rho rho = parse_rho(a.rho);
  auto v = load_vectors(a.vectors);
  const std::size_t have = divann_vectors_size(v.get());
  auto colors = load_colors(a.colors, have);
  if (a.n > 0) {
    if (a.n > have) {
      usage("--n " + std::to_string(a.n) + " exceeds the " +
            std::to_string(have) + " points in " + a.vectors);
    }
    divann_vectors* prefix = nullptr;
    check(divann_vectors_create(divann_vectors_data(v.get()), a.n,
                                divann_vectors_dim(v.get()), &prefix));
    v.reset(prefix);
  }
  const std::size_t n = divann_vectors_size(v.get());
  if (a.builder != "fast" && n > kSlowBuildGuard && !a.force) {
    usage("slow builders are quadratic; refusing " + std::to_string(n) +
          " points (limit " + std::to_string(kSlowBuildGuard) +
          ", pass --force to override)");
  }
  colors.resize(n);
  auto ds = make_dataset(v.get(), colors);

  divann_index* raw = nullptr;
  const auto t0 = Clock::now();
  if (a.builder == "fast") {
    divann_fast_params p;
    divann_fast_params_default(&p);
    p.alpha = a.alpha;
    p.R = a.R;
    p.L = a.L;
    p.m = a.m;
    p.passes = a.passes;
    p.seed = a.seed;
    p.threads = a.threads;
    check(divann_build_fast(ds.get(), &p, &raw));
  } else if (a.builder == "slow-colorful") {
    check(divann_build_colorful_slow(ds.get(), a.k, a.alpha, a.threads, &raw));
  } else {
    check(divann_build_diverse_slow(ds.get(), a.k, a.k_prime, a.alpha, rho,
                                    a.threads, &raw));
  }
  Index index(raw);
  const double secs = seconds_since(t0);
  check(divann_index_save(index.get(), ds.get(), a.out.c_str()));

  divann_index_info info{};
  check(divann_index_info_get(index.get(), &info));
  std::printf("wrote %s\n", a.out.c_str());
  std::printf("points %zu\nedges %zu\nmax_degree %zu\n", info.n, info.edges,
              info.max_degree);
  std::printf("build_seconds %.3f\npasses %u\n", secs, info.passes);
  std::fflush(stdout);
}

// ---- gt ----

struct GtArgs {
  std::string vectors;
  std::string colors;
  std::string queries;
  std::string out;
  std::size_t k = 100;
  std::size_t k_prime = 1;
  uint32_t threads = 1;
};

void run_gt(const GtArgs& a) {
  if (a.k_prime > a.k) usage("--kprime must not exceed --k");
  auto v = load_vectors(a.vectors);
  auto ds = make_dataset(v.get(), load_colors(a.colors, divann_vectors_size(v.get())));
  auto q = load_vectors(a.queries);
  divann_gt* raw = nullptr;
  const auto t0 = Clock::now();
  check(divann_gt_compute(ds.get(), q.get(), a.k, a.k_prime, a.threads, &raw));
  Gt gt(raw);
  check(divann_gt_save(gt.get(), a.out.c_str()));
  std::size_t underfull = 0;
  for (std::size_t i = 0; i < divann_gt_queries(gt.get()); ++i) {
    if (divann_gt_list(gt.get(), i, nullptr, 0) < a.k) ++underfull;
  }
  std::printf("wrote %s\nqueries %zu\nunderfull %zu\nseconds %.3f\n",
              a.out.c_str(), divann_gt_queries(gt.get()), underfull,
              seconds_since(t0));
  std::fflush(stdout);
}

// ---- search ----

struct SearchArgs {
  std::string index;
  std::string vectors;
  std::string queries;
  std::string gt;
  std::string out;
  std::string mode = "diverse";
  std::size_t k = 100;
  std::size_t k_prime = 1;
  std::size_t L = 200;
  std::size_t r = 0;
  std::optional<double> C;
  std::optional<double> radius;
  std::size_t T = 0;
  double epsilon = 0.1;
  uint32_t c_loop = 4;
  std::string rho;
  bool monotone = false;
};

void run_search(const SearchArgs& a) {
  static const char* const kModes[] = {"baseline", "diverse", "theory-colorful",
                                       "theory-primal", "theory-dual"};
  if (std::find(std::begin(kModes), std::end(kModes), a.mode) ==
      std::end(kModes)) {
    usage("unknown mode '" + a.mode +
          "' (expected baseline, diverse, theory-colorful, theory-primal or "
          "theory-dual)");
  }
  auto index = load_index(a.index);
  divann_index_info info{};
  check(divann_index_info_get(index.get(), &info));
  auto v = load_vectors(a.vectors);
  auto ds = dataset_for_index(v.get(), index.get());
  auto q = load_vectors(a.queries);
  if (divann_vectors_dim(q.get()) != divann_dataset_dim(ds.get())) {
    throw Failure{kExitData, "query dimension does not match the index"};
  }
  const divann_rho rho = a.rho.empty() ? info.rho : parse_rho(a.rho);
  if (a.mode == "theory-primal" && !a.C) usage("--C is required for theory-primal");
  if (a.mode == "theory-dual" && !a.radius) {
    usage("--radius is required for theory-dual");
  }

  Gt gt;
  if (!a.gt.empty()) {
    divann_gt* raw = nullptr;
    check(divann_gt_load(a.gt.c_str(), &raw));
    gt.reset(raw);
    if (divann_gt_queries(gt.get()) != divann_vectors_size(q.get())) {
      throw Failure{kExitData, "ground truth and query counts differ"};
    }
  }

  std::size_t steps = a.T;
  if (steps == 0 && a.mode.rfind("theory-", 0) == 0) {
    check(divann_default_steps(ds.get(), a.k, info.alpha, a.epsilon, &steps));
  }
  const std::size_t r = a.r == 0 ? a.L : a.r;

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!a.out.empty()) {
    file.open(a.out);
    if (!file) throw Failure{kExitData, "cannot open " + a.out};
    out = &file;
  }

  const std::size_t nq = divann_vectors_size(q.get());
  const std::size_t dim = divann_vectors_dim(q.get());
  const float* qdata = divann_vectors_data(q.get());
  double recall_sum = 0.0, evals_sum = 0.0, steps_sum = 0.0;
  double measured_sum = 0.0;
  std::size_t audit_fail = 0, underfull = 0, best_effort = 0;
  std::vector<uint32_t> ids;
  for (std::size_t i = 0; i < nq; ++i) {
    const float* query = qdata + i * dim;
    divann_result* raw = nullptr;
    divann_dual_info dual{};
    if (a.mode == "baseline") {
      check(divann_search_baseline(index.get(), ds.get(), query, a.k, a.k_prime,
                                   r, &raw));
    } else if (a.mode == "diverse") {
      check(divann_search_diverse(index.get(), ds.get(), query, a.k, a.k_prime,
                                  a.L, &raw));
    } else if (a.mode == "theory-colorful") {
      check(divann_search_colorful(index.get(), ds.get(), query, a.k, steps,
                                   a.monotone ? 1 : 0, &raw));
    } else if (a.mode == "theory-primal") {
      check(divann_search_primal(index.get(), ds.get(), query, a.k, a.k_prime,
                                 *a.C, rho, steps, &raw));
    } else {
      check(divann_search_dual(index.get(), ds.get(), query, a.k, a.k_prime,
                               *a.radius, rho, a.epsilon, a.c_loop, &raw, &dual));
    }
    Result res(raw);
    const std::size_t size = divann_result_size(res.get());
    ids.resize(size);
    *out << i;
    for (std::size_t j = 0; j < size; ++j) {
      ids[j] = divann_result_id(res.get(), j);
      char buf[64];
      std::snprintf(buf, sizeof(buf), " %u:%.6g", ids[j],
                    divann_result_distance(res.get(), j));
      *out << buf;
    }
    if (a.mode == "theory-dual") {
      char buf[128];
      std::snprintf(buf, sizeof(buf), " | C=%.6g certified=%.6g%s",
                    dual.measured_C, dual.certified_C,
                    dual.best_effort ? " best-effort" : "");
      *out << buf;
      measured_sum += dual.measured_C;
      best_effort += dual.best_effort ? 1 : 0;
    }
    *out << "\n";

    const std::size_t cap = a.mode == "theory-colorful" ? 1 : a.k_prime;
    const bool audit_colors =
        a.mode != "theory-dual" &&
        (a.mode != "theory-primal" || rho == DIVANN_RHO_BINARY_COLOR);
    if (audit_colors &&
        divann_is_k_colorful(ds.get(), ids.data(), ids.size(), cap) != 1) {
      ++audit_fail;
    }
    underfull += divann_result_underfull(res.get()) ? 1 : 0;
    evals_sum += static_cast<double>(divann_result_distance_evals(res.get()));
    steps_sum += static_cast<double>(divann_result_steps(res.get()));
    if (gt) {
      double rec = 0.0;
      check(divann_gt_recall(gt.get(), i, res.get(), &rec));
      recall_sum += rec;
    }
  }
  out->flush();

  const double denom = static_cast<double>(std::max<std::size_t>(nq, 1));
  std::printf("# summary queries=%zu mode=%s", nq, a.mode.c_str());
  if (gt) std::printf(" recall=%.4f", recall_sum / denom);
  std::printf(" dist_evals=%.1f steps=%.1f underfull=%zu colorful_violations=%zu",
              evals_sum / denom, steps_sum / denom, underfull, audit_fail);
  if (a.mode == "theory-dual") {
    std::printf(" mean_C=%.6g best_effort=%zu", measured_sum / denom,
                best_effort);
  }
  std::printf("\n");
  std::fflush(stdout);
}

// ---- bench ----

struct BenchArgs {
  std::string vectors;
  std::string queries;
  std::string gt;
  std::string index;
  std::string std_index;
  std::string colors;
  std::string L = "120,150,200,300,500";
  std::string ablate_m;
  std::string out = "-";
  std::string times_out;
  double alpha = 1.2;
  uint32_t R = 64;
  uint32_t build_L = 200;
  uint32_t passes = 2;
  uint64_t seed = 0;
  uint32_t threads = 1;
};

void run_bench(const BenchArgs& a) {
  if (a.gt.empty()) usage("--gt is required");
  const auto L_values = parse_list(a.L, "L");
  auto v = load_vectors(a.vectors);
  auto q = load_vectors(a.queries);
  divann_gt* raw_gt = nullptr;
  check(divann_gt_load(a.gt.c_str(), &raw_gt));
  Gt gt(raw_gt);

  if (!a.ablate_m.empty()) {
    const auto m_values = parse_list(a.ablate_m, "m");
    auto ds = make_dataset(v.get(), load_colors(a.colors, divann_vectors_size(v.get())));
    divann_fast_params p;
    divann_fast_params_default(&p);
    p.alpha = a.alpha;
    p.R = a.R;
    p.L = a.build_L;
    p.passes = a.passes;
    p.seed = a.seed;
    p.threads = a.threads;
    const std::string times = a.times_out.empty() ? std::string("-") : a.times_out;
    check(divann_bench_ablation_m(ds.get(), q.get(), gt.get(), m_values.data(),
                                  m_values.size(), L_values.data(),
                                  L_values.size(), &p, a.threads, a.out.c_str(),
                                  times.c_str()));
    return;
  }

  if (a.index.empty() && a.std_index.empty()) {
    usage("give --index, --std-index or --ablate-m");
  }
  Index div, std_idx;
  if (!a.index.empty()) div = load_index(a.index);
  if (!a.std_index.empty()) std_idx = load_index(a.std_index);
  auto ds = dataset_for_index(v.get(), div ? div.get() : std_idx.get());
  check(divann_bench_sweep(ds.get(), q.get(), gt.get(), std_idx.get(), div.get(),
                           L_values.data(), L_values.size(), a.threads,
                           a.out.c_str()));
}

int run(int argc, char** argv) {
  CLI::App app{"Diverse nearest neighbor search tools"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string config;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config, "JSON file of option defaults");
  };

  GenColorsArgs gc;
  auto* s_gc = app.add_subcommand("gen-colors", "Generate a color file");
  s_gc->add_option("--scheme", gc.scheme, "arxiv | sift-skewed | hyperplane")
      ->required();
  s_gc->add_option("--n", gc.n, "Number of points (skewed schemes)");
  s_gc->add_option("--vectors", gc.vectors, "fvecs file (hyperplane scheme)");
  s_gc->add_option("--buckets", gc.buckets, "Hyperplane buckets");
  s_gc->add_option("--primary-prob", gc.primary_prob,
                   "Probability of a bucket's primary color");
  s_gc->add_option("--seed", gc.seed);
  s_gc->add_option("--out", gc.out, "Output color file");
  add_config(s_gc);

  GenVectorsArgs gv;
  auto* s_gv = app.add_subcommand("gen-vectors",
                                  "Generate Gaussian-mixture vectors");
  s_gv->add_option("--n", gv.n)->required();
  s_gv->add_option("--dim", gv.dim);
  s_gv->add_option("--centers", gv.centers);
  s_gv->add_option("--spread", gv.spread, "Noise standard deviation");
  s_gv->add_option("--center-seed", gv.center_seed);
  s_gv->add_option("--seed", gv.seed);
  s_gv->add_option("--out", gv.out)->required();
  add_config(s_gv);

  BuildArgs b;
  auto* s_b = app.add_subcommand("build", "Build an index");
  s_b->add_option("--vectors", b.vectors)->required();
  s_b->add_option("--colors", b.colors)->required();
  s_b->add_option("--out", b.out)->required();
  s_b->add_option("--builder", b.builder, "fast | slow-colorful | slow-diverse");
  s_b->add_option("--n", b.n, "Use only the first n points");
  s_b->add_option("--alpha", b.alpha);
  s_b->add_option("--R", b.R, "Out-degree cap");
  s_b->add_option("--L", b.L, "Build list size");
  s_b->add_option("--m", b.m, "Blocker colors needed to drop an edge");
  s_b->add_option("--passes", b.passes);
  s_b->add_option("--seed", b.seed);
  s_b->add_option("--threads", b.threads);
  s_b->add_option("--k", b.k, "Slow builders: result size");
  s_b->add_option("--kprime", b.k_prime, "Slow diverse builder: k'");
  s_b->add_option("--rho", b.rho, "binary | euclidean");
  s_b->add_flag("--force", b.force, "Allow slow builds above the size guard");
  add_config(s_b);

  GtArgs g;
  auto* s_g = app.add_subcommand("gt", "Compute diverse ground truth");
  s_g->add_option("--vectors", g.vectors)->required();
  s_g->add_option("--colors", g.colors)->required();
  s_g->add_option("--queries", g.queries)->required();
  s_g->add_option("--out", g.out)->required();
  s_g->add_option("--k", g.k);
  s_g->add_option("--kprime", g.k_prime);
  s_g->add_option("--threads", g.threads);
  add_config(s_g);

  SearchArgs s;
  auto* s_s = app.add_subcommand("search", "Run queries against an index");
  s_s->add_option("--index", s.index)->required();
  s_s->add_option("--vectors", s.vectors, "Base vectors of the index")
      ->required();
  s_s->add_option("--queries", s.queries)->required();
  s_s->add_option("--gt", s.gt, "Ground truth for recall");
  s_s->add_option("--out", s.out, "Per-query results file (default stdout)");
  s_s->add_option("--mode", s.mode,
                  "baseline | diverse | theory-colorful | theory-primal | "
                  "theory-dual");
  s_s->add_option("--k", s.k);
  s_s->add_option("--kprime", s.k_prime);
  s_s->add_option("--L", s.L, "Search list size");
  s_s->add_option("--r", s.r, "Baseline candidates (default L)");
  s_s->add_option("--C", s.C, "Diversity threshold (theory-primal)");
  s_s->add_option("--radius", s.radius, "Radius bound (theory-dual)");
  s_s->add_option("--T", s.T, "Theory search steps (default from data)");
  s_s->add_option("--epsilon", s.epsilon);
  s_s->add_option("--c-loop", s.c_loop, "Dual: rounds per halving factor");
  s_s->add_option("--rho", s.rho, "binary | euclidean (default from index)");
  s_s->add_flag("--monotone", s.monotone, "Colorful: only improving swaps");
  add_config(s_s);

  BenchArgs be;
  auto* s_be = app.add_subcommand("bench", "Recall and cost sweeps");
  s_be->add_option("--vectors", be.vectors)->required();
  s_be->add_option("--queries", be.queries)->required();
  s_be->add_option("--gt", be.gt);
  s_be->add_option("--index", be.index, "Diverse-built index");
  s_be->add_option("--std-index", be.std_index, "Standard-built index");
  s_be->add_option("--colors", be.colors, "Colors (required with --ablate-m)");
  s_be->add_option("--L", be.L, "Comma-separated search list sizes");
  s_be->add_option("--ablate-m", be.ablate_m, "Comma-separated m values");
  s_be->add_option("--out", be.out, "CSV path, - for stdout");
  s_be->add_option("--times-out", be.times_out,
                   "Build-time CSV for --ablate-m (default stdout)");
  s_be->add_option("--alpha", be.alpha);
  s_be->add_option("--R", be.R);
  s_be->add_option("--build-L", be.build_L);
  s_be->add_option("--passes", be.passes);
  s_be->add_option("--seed", be.seed);
  s_be->add_option("--threads", be.threads);
  add_config(s_be);

  std::vector<std::string> args;
  try {
    args = expand_config(app, argc, argv);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  try {
    echo_config(sub);
    if (sub == s_gc) run_gen_colors(gc);
    else if (sub == s_gv) run_gen_vectors(gv);
    else if (sub == s_b) run_build(b);
    else if (sub == s_g) run_gt(g);
    else if (sub == s_s) run_search(s);
    else run_bench(be);
  } catch (const Failure& f) {
    std::cout.flush();
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}
