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

#include "divann/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "parallel.hpp"
#include "visited_table.hpp"

namespace divann {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 1.0)) throw UsageError("alpha must be > 1");
}

void check_query(const VectorDataset& data, std::span<const float> query) {
  if (query.size() != data.dim()) {
    throw UsageError("query dimension " + std::to_string(query.size()) +
                     " does not match dataset dimension " +
                     std::to_string(data.dim()));
  }
}

struct SweepScratch {
  std::vector<Hit> order;
  std::vector<std::uint32_t> parent;  // skip pointers over absorbed entries
  std::vector<PointId> bag;
  std::vector<std::uint32_t> pos;  // sweep index of each id
  std::vector<std::pair<std::uint32_t, double>> absorbed;
};

std::uint32_t find_live(std::vector<std::uint32_t>& parent, std::uint32_t i) {
  std::uint32_t root = i;
  while (parent[root] != root) root = parent[root];
  while (parent[i] != root) {
    const std::uint32_t next = parent[i];
    parent[i] = root;
    i = next;
  }
  return root;
}

// Visits the anchors around p nearest first. on_group(u, bag) receives the
// anchor's bag: the anchor followed by the points it absorbed, in sweep order.
// Every point's other points sorted by (distance, id), kept for small inputs
// so an anchor's absorbable points are a prefix of its row.
struct NeighborTable {
  std::size_t width = 0;  // n - 1
  std::vector<PointId> ids;
  std::vector<double> dist;
};

inline constexpr std::size_t kNeighborTableMax = 3000;

NeighborTable make_table(const VectorDataset& data, std::uint32_t threads) {
  const std::size_t n = data.size();
  NeighborTable t;
  t.width = n - 1;
  t.ids.resize(n * t.width);
  t.dist.resize(n * t.width);
  detail::parallel_for(n, threads, [&](std::size_t u) {
    thread_local std::vector<Hit> row;
    row.clear();
    const float* xu = data.point_ptr(static_cast<PointId>(u));
    for (PointId v = 0; v < n; ++v) {
      if (v != u) row.push_back({v, l2_distance(xu, data.point_ptr(v), data.dim())});
    }
    std::sort(row.begin(), row.end(), hit_less);
    for (std::size_t i = 0; i < row.size(); ++i) {
      t.ids[u * t.width + i] = row[i].id;
      t.dist[u * t.width + i] = row[i].distance;
    }
  });
  return t;
}

template <typename GroupFn>
void sweep(const VectorDataset& data, PointId p, double alpha,
           const NeighborTable* table, SweepScratch& scratch,
           BuildObserver* observer, GroupFn&& on_group) {
  const std::size_t n = data.size();
  const std::size_t dim = data.dim();
  const float* xp = data.point_ptr(p);
  auto& order = scratch.order;
  order.clear();
  for (PointId v = 0; v < n; ++v) {
    if (v == p) continue;
    const double d = l2_distance(xp, data.point_ptr(v), dim);
    if (d == 0.0) {
      throw DegenerateDataError("points " + std::to_string(p) + " and " +
                                std::to_string(v) + " coincide");
    }
    order.push_back(Hit{v, d});
  }
  std::sort(order.begin(), order.end(), hit_less);

  const auto m = static_cast<std::uint32_t>(order.size());
  auto& parent = scratch.parent;
  parent.resize(m + 1);
  for (std::uint32_t i = 0; i <= m; ++i) parent[i] = i;
  if (table) {
    scratch.pos.resize(n);
    for (std::uint32_t i = 0; i < m; ++i) scratch.pos[order[i].id] = i;
  }

  auto& bag = scratch.bag;
  for (std::uint32_t i = find_live(parent, 0); i < m;
       i = find_live(parent, i + 1)) {
    const PointId u = order[i].id;
    const double d_pu = order[i].distance;
    const double radius = d_pu / (2.0 * alpha);
    // Any absorbed v has D(p,v) <= D(p,u) + radius; the slack absorbs
    // rounding in the triangle inequality.
    const double window = (d_pu + radius) * (1.0 + 1e-9);
    const float* xu = data.point_ptr(u);
    bag.clear();
    bag.push_back(u);
    if (table) {
      auto& hits = scratch.absorbed;
      hits.clear();
      const PointId* row = table->ids.data() + u * table->width;
      const double* dist = table->dist.data() + u * table->width;
      for (std::size_t r = 0; r < table->width && dist[r] <= radius; ++r) {
        if (row[r] == p) continue;
        const std::uint32_t j = scratch.pos[row[r]];
        if (j > i && parent[j] == j) hits.push_back({j, dist[r]});
      }
      std::sort(hits.begin(), hits.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      for (const auto& [j, d_uv] : hits) {
        parent[j] = j + 1;
        bag.push_back(order[j].id);
        if (observer) observer->on_absorb(p, u, order[j].id, d_pu, d_uv);
      }
      on_group(u, std::span<const PointId>(bag));
      continue;
    }
    for (std::uint32_t j = find_live(parent, i + 1);
         j < m && order[j].distance <= window; j = find_live(parent, j + 1)) {
      const PointId v = order[j].id;
      const double d_uv = l2_distance(xu, data.point_ptr(v), dim);
      if (d_uv <= radius) {
        parent[j] = j + 1;
        bag.push_back(v);
        if (observer) observer->on_absorb(p, u, v, d_pu, d_uv);
      }
    }
    on_group(u, std::span<const PointId>(bag));
  }
}

template <typename RepFn>
std::vector<std::vector<PointId>> slow_build(const VectorDataset& data,
                                             double alpha,
                                             const SlowBuildOptions& options,
                                             RepFn&& make_rep) {
  const std::size_t n = data.size();
  std::vector<std::vector<PointId>> adjacency(n);
  NeighborTable table;
  if (n >= 2 && n <= kNeighborTableMax) table = make_table(data, options.threads);
  const NeighborTable* tp = table.width ? &table : nullptr;
  detail::parallel_for(n, options.threads, [&](std::size_t i) {
    thread_local SweepScratch scratch;
    thread_local std::vector<PointId> rep;
    const auto p = static_cast<PointId>(i);
    auto& out = adjacency[p];
    sweep(data, p, alpha, tp, scratch, options.observer,
          [&](PointId u, std::span<const PointId> bag) {
            make_rep(bag, rep);
            if (options.observer) options.observer->on_group(p, u, bag, rep);
            out.insert(out.end(), rep.begin(), rep.end());
          });
  });
  return adjacency;
}

}  // namespace

DiverseGraph build_colorful_slow(const VectorDataset& data, std::size_t k,
                                 double alpha, const SlowBuildOptions& options) {
  check_alpha(alpha);
  if (k == 0) throw UsageError("k must be positive");
  auto adjacency = slow_build(
      data, alpha, options,
      [&](std::span<const PointId> bag, std::vector<PointId>& rep) {
        rep.clear();
        rep.push_back(bag[0]);
        for (std::size_t i = 1; i < bag.size() && rep.size() < k; ++i) {
          const Color c = data.color(bag[i]);
          const bool fresh = std::none_of(rep.begin(), rep.end(), [&](PointId r) {
            return data.color(r) == c;
          });
          if (fresh) rep.push_back(bag[i]);
        }
      });
  GraphMeta meta;
  meta.builder = BuilderTag::kSlowColorful;
  meta.alpha = alpha;
  meta.k = static_cast<std::uint32_t>(k);
  meta.k_prime = 1;
  meta.rho = RhoMode::kBinaryColor;
  meta.passes = 1;
  return DiverseGraph(std::move(adjacency), meta);
}

DiverseGraph build_diverse_slow(const VectorDataset& data, std::size_t k,
                                std::size_t k_prime, double alpha, RhoMode rho,
                                const SlowBuildOptions& options) {
  check_alpha(alpha);
  if (k == 0) throw UsageError("k must be positive");
  if (k_prime == 0 || k_prime > k) throw UsageError("k' must lie in [1, k]");
  const std::size_t group = std::max<std::size_t>(1, k / k_prime);
  const Rho metric(data, rho);
  auto adjacency = slow_build(
      data, alpha, options,
      [&](std::span<const PointId> bag, std::vector<PointId>& rep) {
        rep = gonzalez_select(bag, group, metric, bag[0]);
      });
  GraphMeta meta;
  meta.builder = BuilderTag::kSlowDiverse;
  meta.alpha = alpha;
  meta.k = static_cast<std::uint32_t>(k);
  meta.k_prime = static_cast<std::uint32_t>(k_prime);
  meta.rho = rho;
  meta.passes = 1;
  return DiverseGraph(std::move(adjacency), meta);
}

std::vector<PointId> gonzalez_select(std::span<const PointId> ids,
                                     std::size_t m, const Rho& rho,
                                     std::optional<PointId> first) {
  if (m == 0) throw UsageError("m must be positive");
  const std::size_t n = ids.size();
  std::vector<PointId> picks;
  if (n == 0) return picks;
  const std::size_t want = std::min(m, n);
  picks.reserve(want);

  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (ids[i] < ids[start]) start = i;
  }
  if (first) {
    for (std::size_t i = 0; i < n; ++i) {
      if (ids[i] == *first) start = i;
    }
  }
  std::vector<double> gap(n, kInfinity);
  std::vector<char> taken(n, 0);
  std::size_t cur = start;
  for (;;) {
    taken[cur] = 1;
    picks.push_back(ids[cur]);
    if (picks.size() == want) break;
    std::size_t best = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      gap[i] = std::min(gap[i], rho(ids[i], ids[cur]));
      if (best == n || gap[i] > gap[best] ||
          (gap[i] == gap[best] && ids[i] < ids[best])) {
        best = i;
      }
    }
    cur = best;
  }
  return picks;
}

std::vector<PointId> init_colorful(const VectorDataset& data, std::size_t k) {
  if (k == 0) throw UsageError("k must be positive");
  std::vector<PointId> out;
  std::unordered_set<Color> seen;
  for (PointId i = 0; i < data.size() && out.size() < k; ++i) {
    if (seen.insert(data.color(i)).second) out.push_back(i);
  }
  if (out.size() < k) {
    throw InfeasibleError("dataset has " + std::to_string(seen.size()) +
                          " colors, fewer than k = " + std::to_string(k));
  }
  return out;
}

namespace {

std::vector<PointId> finish_init(std::vector<PointId> sol, std::size_t k,
                                 double C) {
  std::sort(sol.begin(), sol.end());
  if (sol.size() < k) {
    throw InfeasibleError("initialization at C = " + std::to_string(C) +
                          " kept " + std::to_string(sol.size()) +
                          " points, fewer than k = " + std::to_string(k));
  }
  sol.resize(k);
  return sol;
}

// Under the 0/1 color metric every ball is either one color class or the
// whole set, so removals act on entire classes.
std::vector<PointId> init_diverse_binary(const VectorDataset& data,
                                         const DiversityConstraint& c) {
  const double inner = c.C / 4.0;
  const double outer = c.C / 2.0;
  const std::size_t n = data.size();
  std::unordered_map<Color, std::vector<PointId>> classes;
  for (PointId i = 0; i < n; ++i) classes[data.color(i)].push_back(i);
  std::unordered_map<Color, char> dead;
  std::size_t live = n;
  bool all_dead = false;
  std::vector<PointId> sol;

  for (PointId p = 0; p < n && !all_dead; ++p) {
    const Color cp = data.color(p);
    if (dead[cp]) continue;
    const auto& cls = classes[cp];
    const std::size_t ball = inner > 1.0 ? live : cls.size();
    if (ball <= c.k_prime) continue;
    if (inner > 1.0) {
      for (PointId s = 0; s < n && sol.size() < c.k_prime; ++s) {
        if (!dead[data.color(s)]) sol.push_back(s);
      }
    } else {
      sol.insert(sol.end(), cls.begin(), cls.begin() + c.k_prime);
    }
    if (outer > 1.0) {
      all_dead = true;
    } else {
      dead[cp] = 1;
      live -= cls.size();
    }
  }
  if (!all_dead) {
    for (PointId s = 0; s < n; ++s) {
      if (!dead[data.color(s)]) sol.push_back(s);
    }
  }
  return finish_init(std::move(sol), c.k, c.C);
}

std::vector<PointId> init_diverse_general(const VectorDataset& data,
                                          const DiversityConstraint& c) {
  const double inner = c.C / 4.0;
  const double outer = c.C / 2.0;
  const std::size_t n = data.size();
  const Rho rho(data, c.rho);
  std::vector<char> live(n, 1);
  std::vector<PointId> sol;
  std::vector<PointId> ball;
  for (PointId p = 0; p < n; ++p) {
    if (!live[p]) continue;
    ball.clear();
    for (PointId s = 0; s < n; ++s) {
      if (live[s] && rho(p, s) < inner) ball.push_back(s);
    }
    if (ball.size() <= c.k_prime) continue;
    sol.insert(sol.end(), ball.begin(), ball.begin() + c.k_prime);
    for (PointId s = 0; s < n; ++s) {
      if (live[s] && rho(p, s) < outer) live[s] = 0;
    }
  }
  for (PointId s = 0; s < n; ++s) {
    if (live[s]) sol.push_back(s);
  }
  return finish_init(std::move(sol), c.k, c.C);
}

}  // namespace

std::vector<PointId> init_diverse(const VectorDataset& data,
                                  const DiversityConstraint& constraint) {
  constraint.validate();
  if (!(constraint.C > 0.0)) throw UsageError("initialization needs C > 0");
  if (constraint.rho == RhoMode::kBinaryColor) {
    return init_diverse_binary(data, constraint);
  }
  return init_diverse_general(data, constraint);
}

std::size_t default_steps(std::size_t k, double alpha, double aspect_ratio,
                          double epsilon) {
  check_alpha(alpha);
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  const double ratio = std::max(aspect_ratio, 1.0) / epsilon;
  const double rounds = std::ceil(std::log(ratio) / std::log(alpha));
  return std::max<std::size_t>(1, k * static_cast<std::size_t>(std::max(rounds, 1.0)));
}

namespace {

void check_graph(const DiverseGraph& graph, const VectorDataset& data,
                 BuilderTag tag, std::size_t k, std::size_t k_prime) {
  if (graph.size() != data.size()) {
    throw UsageError("graph and dataset sizes differ");
  }
  const GraphMeta& meta = graph.meta();
  if (meta.builder != tag) {
    throw UsageError(std::string("search needs a ") + to_string(tag) +
                     " graph, got " + to_string(meta.builder));
  }
  if (meta.k != k || meta.k_prime != k_prime) {
    throw UsageError("graph was built for k = " + std::to_string(meta.k) +
                     ", k' = " + std::to_string(meta.k_prime) +
                     "; search asked for k = " + std::to_string(k) +
                     ", k' = " + std::to_string(k_prime));
  }
}

QueryResult to_result(const std::vector<Hit>& alg, std::uint64_t steps,
                      std::uint64_t evals) {
  QueryResult r;
  r.hits = alg;
  r.finalize();
  r.steps = steps;
  r.distance_evals = evals;
  return r;
}

std::vector<PointId> ids_of(const std::vector<Hit>& hits) {
  std::vector<PointId> ids;
  ids.reserve(hits.size());
  for (const Hit& h : hits) ids.push_back(h.id);
  return ids;
}

// One round of the batched local search: keep the k-1 closest members and
// add the closest candidate from ALG and its out-neighbors that keeps the set
// (k', level)-diverse. Returns true if the set changed.
class PrimalRounds {
 public:
  PrimalRounds(const DiverseGraph& graph, const VectorDataset& data,
               const float* query, std::size_t k_prime, RhoMode mode)
      : graph_(graph), data_(data), query_(query), k_prime_(k_prime),
        rho_(data, mode), cache_(detail::thread_distance_cache()),
        seen_(detail::thread_visited_table(1)) {
    cache_.reset(data.size());
    cache_.clear_misses();
  }

  double dist(PointId id) {
    return cache_.get(id, [this](PointId i) {
      return l2_distance(query_, data_.point_ptr(i), data_.dim());
    });
  }

  std::vector<Hit> start(std::span<const PointId> ids) {
    std::vector<Hit> alg;
    for (PointId id : ids) alg.push_back(Hit{id, dist(id)});
    std::sort(alg.begin(), alg.end(), hit_less);
    return alg;
  }

  bool round(std::vector<Hit>& alg, double level) {
    pool_.clear();
    seen_.reset(data_.size());
    for (const Hit& h : alg) {
      if (!seen_.test_and_set(h.id)) pool_.push_back(h);
      for (PointId v : graph_.neighbors(h.id)) {
        if (!seen_.test_and_set(v)) pool_.push_back(Hit{v, dist(v)});
      }
    }
    std::sort(pool_.begin(), pool_.end(), hit_less);

    std::sort(alg.begin(), alg.end(), hit_less);
    const Hit dropped = alg.back();
    alg.pop_back();
    counts_.assign(alg.size(), 0);
    for (std::size_t i = 0; i < alg.size(); ++i) {
      for (std::size_t j = 0; j < alg.size(); ++j) {
        if (rho_(alg[i].id, alg[j].id) < level) ++counts_[i];
      }
    }
    for (const Hit& u : pool_) {
      if (std::any_of(alg.begin(), alg.end(),
                      [&](const Hit& h) { return h.id == u.id; })) {
        continue;
      }
      if (admissible(alg, u.id, level)) {
        alg.push_back(u);
        std::sort(alg.begin(), alg.end(), hit_less);
        return u.id != dropped.id;
      }
    }
    alg.push_back(dropped);
    return false;
  }

  std::uint64_t evals() const { return cache_.misses(); }

 private:
  bool admissible(const std::vector<Hit>& alg, PointId u, double level) {
    std::size_t own = 1;
    for (std::size_t i = 0; i < alg.size(); ++i) {
      if (rho_(u, alg[i].id) < level) {
        if (++own > k_prime_) return false;
        if (counts_[i] + 1 > k_prime_) return false;
      }
    }
    return true;
  }

  const DiverseGraph& graph_;
  const VectorDataset& data_;
  const float* query_;
  std::size_t k_prime_;
  Rho rho_;
  detail::DistanceCache& cache_;
  detail::VisitedTable& seen_;
  std::vector<Hit> pool_;
  std::vector<std::size_t> counts_;
};

}  // namespace

QueryResult search_colorful(const DiverseGraph& graph, const VectorDataset& data,
                            std::span<const float> query, std::size_t k,
                            std::size_t steps,
                            const ColorfulSearchOptions& options) {
  check_query(data, query);
  check_graph(graph, data, BuilderTag::kSlowColorful, k, 1);
  const float* q = query.data();
  auto& cache = detail::thread_distance_cache();
  cache.reset(data.size());
  cache.clear_misses();
  auto dist = [&](PointId id) {
    return cache.get(id, [&](PointId i) {
      return l2_distance(q, data.point_ptr(i), data.dim());
    });
  };

  std::vector<Hit> alg;
  for (PointId id : init_colorful(data, k)) alg.push_back(Hit{id, dist(id)});
  std::unordered_map<Color, std::size_t> colors;
  for (const Hit& h : alg) ++colors[data.color(h.id)];
  std::unordered_set<PointId> members;
  for (const Hit& h : alg) members.insert(h.id);

  std::vector<Hit> candidates;
  std::uint64_t done = 0;
  for (std::size_t step = 0; step < steps; ++step) {
    auto worst = std::max_element(alg.begin(), alg.end(), hit_less);
    const Hit far = *worst;
    const Color far_color = data.color(far.id);
    candidates.clear();
    for (PointId u : graph.neighbors(far.id)) candidates.push_back(Hit{u, dist(u)});
    std::sort(candidates.begin(), candidates.end(), hit_less);

    bool swapped = false;
    for (const Hit& u : candidates) {
      if (members.count(u.id)) continue;
      if (options.monotone && !(u.distance < far.distance)) break;
      const Color cu = data.color(u.id);
      if (cu != far_color && colors.count(cu)) continue;
      members.erase(far.id);
      members.insert(u.id);
      if (--colors[far_color] == 0) colors.erase(far_color);
      ++colors[cu];
      *worst = u;
      swapped = true;
      break;
    }
    ++done;
    if (options.observer) {
      const auto ids = ids_of(alg);
      options.observer(step, ids);
    }
    // Without a swap the state is a fixed point of the step.
    if (!swapped) break;
  }
  return to_result(alg, done, cache.misses());
}

QueryResult search_primal(const DiverseGraph& graph, const VectorDataset& data,
                          std::span<const float> query,
                          const DiversityConstraint& constraint,
                          std::size_t steps, const PrimalSearchOptions& options) {
  constraint.validate();
  check_query(data, query);
  check_graph(graph, data, BuilderTag::kSlowDiverse, constraint.k,
              constraint.k_prime);
  if (graph.meta().rho != constraint.rho) {
    throw UsageError(std::string("graph was built with rho = ") +
                     to_string(graph.meta().rho) + ", search asked for " +
                     to_string(constraint.rho));
  }
  const double level = constraint.C / 12.0;
  DiversityConstraint target = constraint;
  target.C = level;

  std::vector<PointId> init;
  if (options.init) {
    init = *options.init;
    if (init.size() != constraint.k || !is_diverse(data, init, target)) {
      throw UsageError("initial set must hold k points and be (k', C/12)-diverse");
    }
  } else {
    DiversityConstraint start = constraint;
    start.C = constraint.C / 3.0;
    if (start.C > 0.0) {
      init = init_diverse(data, start);
    } else {
      init.resize(constraint.k);
      if (data.size() < constraint.k) throw InfeasibleError("fewer than k points");
      for (PointId i = 0; i < constraint.k; ++i) init[i] = i;
    }
  }

  PrimalRounds rounds(graph, data, query.data(), constraint.k_prime,
                      constraint.rho);
  std::vector<Hit> alg = rounds.start(init);
  std::uint64_t done = 0;
  for (std::size_t step = 0; step < steps; ++step) {
    const bool changed = rounds.round(alg, level);
    ++done;
    if (options.observer) {
      const auto ids = ids_of(alg);
      options.observer(step, ids);
    }
    if (!changed) break;
  }
  return to_result(alg, done, rounds.evals());
}

DualSearchResult search_dual(const DiverseGraph& graph,
                             const VectorDataset& data,
                             std::span<const float> query, std::size_t k,
                             std::size_t k_prime, double R, RhoMode rho,
                             const DualSearchOptions& options) {
  check_query(data, query);
  check_graph(graph, data, BuilderTag::kSlowDiverse, k, k_prime);
  if (graph.meta().rho != rho) {
    throw UsageError("graph and search disagree on rho");
  }
  if (!(R > 0.0)) throw UsageError("R must be positive");
  if (!(options.epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (options.c_loop == 0) throw UsageError("c_loop must be positive");
  if (data.size() < k) throw InfeasibleError("fewer than k points");

  const DatasetStats stats = options.stats ? *options.stats : estimate_stats(data);
  const bool binary = rho == RhoMode::kBinaryColor;
  const double rho_max = binary ? 1.0 : stats.d_max;
  const double floor_C = binary ? 1.0 : stats.d_min;

  auto try_init = [&](double C) -> std::optional<std::vector<PointId>> {
    try {
      return init_diverse(data, DiversityConstraint{k, k_prime, C, rho});
    } catch (const InfeasibleError&) {
      return std::nullopt;
    }
  };

  // Geometric descent to the first success, then bisection against the
  // last failure.
  double hi = 4.0 * rho_max;
  std::optional<std::vector<PointId>> found = try_init(hi);
  double lo = hi;
  if (!found) {
    lo = hi / 2.0;
    for (int i = 0; i < 200 && !(found = try_init(lo)); ++i) {
      hi = lo;
      lo /= 2.0;
    }
    if (!found) throw InfeasibleError("initialization fails at every C");
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (lo + hi);
      if (!(mid > lo && mid < hi)) break;
      if (auto r = try_init(mid)) {
        lo = mid;
        found = std::move(r);
      } else {
        hi = mid;
      }
    }
  }

  DualSearchResult out;
  out.init_C = lo;
  double c_bar = lo;
  out.certified_C = k <= k_prime ? kInfinity : lo / 4.0;

  const double alpha = graph.meta().alpha;
  const double bound = ((alpha + 1.0) / (alpha - 1.0) + options.epsilon) * R;
  const std::size_t per_level =
      static_cast<std::size_t>(options.c_loop) *
      default_steps(k, alpha, stats.aspect_ratio, options.epsilon);

  PrimalRounds rounds(graph, data, query.data(), k_prime, rho);
  std::vector<Hit> alg = rounds.start(*found);
  std::uint64_t done = 0;
  while (alg.back().distance > bound) {
    // At least one halving runs; under binary rho the start sits just below 2.
    if (out.halvings > 0 && c_bar / 2.0 < floor_C) {
      out.best_effort = true;
      break;
    }
    c_bar /= 2.0;
    ++out.halvings;
    if (k > k_prime) out.certified_C = c_bar / 12.0;
    for (std::size_t i = 0; i < per_level; ++i) {
      ++done;
      if (!rounds.round(alg, c_bar / 12.0)) break;
    }
  }
  out.result = to_result(alg, done, rounds.evals());
  const auto ids = out.result.ids();
  out.measured_C = diversity_level(data, ids, k_prime, rho);
  return out;
}

}  // namespace divann
