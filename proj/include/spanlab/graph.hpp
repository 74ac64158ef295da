#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "spanlab/errors.hpp"
#include "spanlab/metric.hpp"

namespace spanlab {

struct Edge {
  int u = 0, v = 0;  // canonical: u < v
  double w = 0.0;
};

inline bool edge_weight_less(const Edge& a, const Edge& b) {
  if (a.w != b.w) return a.w < b.w;
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

inline bool edge_lex_less(const Edge& a, const Edge& b) {
  if (a.u != b.u) return a.u < b.u;
  return a.v < b.v;
}

/// Undirected graph with positive edge weights. Edges are stored with
/// u < v; no self-loops.
struct WeightedGraph {
  int n = 0;
  std::vector<Edge> edges;
  // Set by metric_graph(): edges are the complete graph in (u,v) lex order
  // and weights satisfy the triangle inequality, so direct_weight() is an
  // O(1) lookup and a valid shortest-path lower bound.
  bool complete_metric = false;

  void validate() const {
    for (const auto& e : edges) {
      if (e.u < 0 || e.v >= n || e.u >= e.v)
        throw BadSpec("edge endpoints must satisfy 0 <= u < v < n");
      if (!(e.w > 0.0) || !std::isfinite(e.w)) throw BadSpec("edge weights must be finite and > 0");
    }
  }

  std::size_t lex_index(int u, int v) const {
    // position of (u,v), u < v, in lexicographic complete-graph order
    return static_cast<std::size_t>(u) * n - static_cast<std::size_t>(u) * (u + 1) / 2 +
           (v - u - 1);
  }

  double direct_weight(int u, int v) const {
    if (u == v) return 0.0;
    if (u > v) std::swap(u, v);
    return edges[lex_index(u, v)].w;
  }
};

/// Complete graph on the metric's points; edge pq weighs d(p,q).
inline WeightedGraph metric_graph(const MetricSpace& m) {
  int n = m.size();
  if (n < 2) throw SinglePoint();
  WeightedGraph g;
  g.n = n;
  g.edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) g.edges.push_back({u, v, m.distance(u, v)});
  g.complete_metric = true;
  return g;
}

enum class PathStatus { Reached, Unreachable, AboveCutoff };

struct PathResult {
  PathStatus status = PathStatus::Unreachable;
  double distance = std::numeric_limits<double>::infinity();
  std::vector<int> path;  // s..t vertex chain when Reached
};

namespace detail {

/// Growable undirected adjacency used while the greedy spanner is built.
struct DynamicAdj {
  std::vector<std::vector<std::pair<int, double>>> nbr;

  explicit DynamicAdj(int n = 0) : nbr(n) {}
  void reset(int n) { nbr.assign(n, {}); }
  void add_edge(int u, int v, double w) {
    nbr[u].emplace_back(v, w);
    nbr[v].emplace_back(u, w);
  }
  std::span<const std::pair<int, double>> neighbors(int u) const { return nbr[u]; }
  int size() const { return static_cast<int>(nbr.size()); }
};

/// Compressed adjacency for repeated read-only queries.
struct Csr {
  std::vector<int> head;  // n+1
  std::vector<std::pair<int, double>> adj;

  static Csr build(int n, std::span<const Edge> edges) {
    Csr c;
    c.head.assign(n + 1, 0);
    for (const auto& e : edges) {
      ++c.head[e.u + 1];
      ++c.head[e.v + 1];
    }
    for (int i = 0; i < n; ++i) c.head[i + 1] += c.head[i];
    c.adj.resize(edges.size() * 2);
    std::vector<int> pos(c.head.begin(), c.head.end() - 1);
    for (const auto& e : edges) {
      c.adj[pos[e.u]++] = {e.v, e.w};
      c.adj[pos[e.v]++] = {e.u, e.w};
    }
    return c;
  }
  std::span<const std::pair<int, double>> neighbors(int u) const {
    return {adj.data() + head[u], static_cast<std::size_t>(head[u + 1] - head[u])};
  }
  int size() const { return static_cast<int>(head.size()) - 1; }
};

struct ZeroHeuristic {
  double operator()(int) const { return 0.0; }
};

/// Reusable single-source search workspace. Visit stamps avoid O(n)
/// clearing between queries; each query consumes two stamp values
/// (labeled / settled).
class SearchWorkspace {
 public:
  explicit SearchWorkspace(int n = 0) { resize(n); }

  void resize(int n) {
    dist_.assign(n, 0.0);
    parent_.assign(n, -1);
    stamp_.assign(n, 0);
    round_ = 0;
  }

  int size() const { return static_cast<int>(dist_.size()); }

  /// Exact bounded Dijkstra. Returns Reached with the exact s-t distance
  /// when it is <= cutoff, AboveCutoff when every path exceeds the cutoff,
  /// Unreachable when no path exists at all.
  template <class G>
  PathStatus dijkstra(const G& g, int s, int t, double cutoff, double* out_dist,
                      bool want_parents = false) {
    new_round();
    heap_.clear();
    label(s, 0.0);
    if (want_parents) parent_[s] = s;
    push(0.0, s);
    bool pruned = false;
    while (!heap_.empty()) {
      auto [d, u] = pop();
      if (stamp_[u] != round_ || d != dist_[u]) continue;
      stamp_[u] = round_ + 1;
      if (u == t) {
        *out_dist = d;
        return PathStatus::Reached;
      }
      for (auto [v, w] : g.neighbors(u)) {
        double nd = d + w;
        if (nd > cutoff) {
          pruned = true;
          continue;
        }
        if (stamp_[v] == round_ + 1) continue;
        if (stamp_[v] != round_ || nd < dist_[v]) {
          label(v, nd);
          if (want_parents) parent_[v] = u;
          push(nd, v);
        }
      }
    }
    *out_dist = std::numeric_limits<double>::infinity();
    return pruned ? PathStatus::AboveCutoff : PathStatus::Unreachable;
  }

  /// Decides whether some s-t path of length <= cutoff exists, with the
  /// same outcome as exact bounded Dijkstra. An admissible metric lower
  /// bound h speeds up the typical (rejecting) query; any outcome inside a
  /// small band around the cutoff is re-derived with the exact search.
  template <class G, class H>
  bool path_within(const G& g, int s, int t, double cutoff, H h) {
    const double band = cutoff * 1e-9;
    const double limit = cutoff + band;
    new_round();
    heap_.clear();
    label(s, 0.0);
    push(h(s), s);
    bool ambiguous = false;
    double found = std::numeric_limits<double>::infinity();
    while (!heap_.empty()) {
      auto [f, u] = pop();
      if (stamp_[u] == round_ + 1) continue;  // settled duplicate
      if (stamp_[u] != round_) continue;      // stale from another query
      if (u == t) {
        found = dist_[u];
        break;
      }
      if (f > limit) {
        if (f <= cutoff + 2 * band) ambiguous = true;
        break;  // min key above limit: all remaining paths exceed the cutoff
      }
      stamp_[u] = round_ + 1;
      double d = dist_[u];
      for (auto [v, w] : g.neighbors(u)) {
        if (stamp_[v] == round_ + 1) continue;
        double nd = d + w;
        if (stamp_[v] != round_ || nd < dist_[v]) {
          double f2 = nd + h(v);
          if (f2 > limit) {
            if (f2 <= cutoff + 2 * band) ambiguous = true;
            continue;
          }
          label(v, nd);
          push(f2, v);
        }
      }
    }
    if (std::isfinite(found)) {
      if (std::abs(found - cutoff) > 2 * band) return found <= cutoff;
      ambiguous = true;
    }
    if (!ambiguous) return false;
    double d;
    return dijkstra(g, s, t, cutoff, &d) == PathStatus::Reached;
  }

  /// Full single-source distances; +inf marks unreachable vertices.
  template <class G>
  void sssp(const G& g, int s, std::vector<double>& dist) {
    int n = size();
    dist.assign(n, std::numeric_limits<double>::infinity());
    new_round();
    heap_.clear();
    label(s, 0.0);
    push(0.0, s);
    while (!heap_.empty()) {
      auto [d, u] = pop();
      if (stamp_[u] != round_ || d != dist_[u]) continue;
      stamp_[u] = round_ + 1;
      dist[u] = d;
      for (auto [v, w] : g.neighbors(u)) {
        double nd = d + w;
        if (stamp_[v] == round_ + 1) continue;
        if (stamp_[v] != round_ || nd < dist_[v]) {
          label(v, nd);
          push(nd, v);
        }
      }
    }
  }

  std::vector<int> extract_path(int s, int t) const {
    std::vector<int> p;
    for (int v = t;; v = parent_[v]) {
      p.push_back(v);
      if (v == s) break;
    }
    std::reverse(p.begin(), p.end());
    return p;
  }

 private:
  void new_round() { round_ += 2; }
  void label(int v, double d) {
    dist_[v] = d;
    stamp_[v] = round_;
  }
  void push(double key, int v) {
    heap_.push_back({key, v});
    std::push_heap(heap_.begin(), heap_.end(), cmp);
  }
  std::pair<double, int> pop() {
    std::pop_heap(heap_.begin(), heap_.end(), cmp);
    auto r = heap_.back();
    heap_.pop_back();
    return r;
  }
  static bool cmp(const std::pair<double, int>& a, const std::pair<double, int>& b) {
    return a.first > b.first || (a.first == b.first && a.second > b.second);
  }

  std::vector<double> dist_;
  std::vector<int> parent_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t round_ = 0;
  std::vector<std::pair<double, int>> heap_;
};

}  // namespace detail

/// Exact shortest path between s and t. With a cutoff, any finite result
/// is still exact; paths longer than the cutoff report AboveCutoff.
inline PathResult shortest_path(const WeightedGraph& g, int s, int t,
                                std::optional<double> cutoff = {}) {
  if (s < 0 || s >= g.n) throw InvalidVertex(s);
  if (t < 0 || t >= g.n) throw InvalidVertex(t);
  PathResult r;
  if (s == t) {
    r.status = PathStatus::Reached;
    r.distance = 0.0;
    r.path = {s};
    return r;
  }
  auto csr = detail::Csr::build(g.n, g.edges);
  detail::SearchWorkspace ws(g.n);
  double limit = cutoff ? *cutoff : std::numeric_limits<double>::infinity();
  double d;
  r.status = ws.dijkstra(csr, s, t, limit, &d, /*want_parents=*/true);
  r.distance = d;
  if (r.status == PathStatus::Reached) r.path = ws.extract_path(s, t);
  return r;
}

}  // namespace spanlab
