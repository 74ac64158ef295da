#pragma once

#include <algorithm>
#include <limits>
#include <memory>
#include <mutex>
#include <numeric>
#include <utility>
#include <vector>

#include "spanlab/graph.hpp"
#include "spanlab/mst.hpp"
#include "spanlab/parallel.hpp"

namespace spanlab {

/// A greedy (1+eps)-spanner: subgraph of `base` containing its MST.
struct Spanner {
  std::shared_ptr<const WeightedGraph> base;
  std::vector<Edge> edges;  // in insertion order == sorted by (w, u, v)
  double eps = 0.0;

  int n() const { return base ? base->n : 0; }
  double weight() const {
    double s = 0;
    for (const auto& e : edges) s += e.w;
    return s;
  }
};

/// Greedy spanner of Althofer et al.: scan edges by non-decreasing weight
/// (ties by (u,v)), keep xy iff (1+eps)*w(xy) < d_S(x,y) on the spanner so
/// far. The insertion test runs as a bounded search with cutoff
/// (1+eps)*w(xy); a metric lower bound prunes it when the base graph is a
/// metric graph. Edges that join two components are kept without a search;
/// they are exactly the MST under the same tie-break.
inline Spanner greedy_spanner(std::shared_ptr<const WeightedGraph> base, double eps) {
  const WeightedGraph& g = *base;
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidEps(eps);
  if (g.n < 1) throw BadSpec("empty graph");

  std::vector<int> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return edge_weight_less(g.edges[a], g.edges[b]); });

  detail::DynamicAdj adj(g.n);
  detail::DisjointSets dsu(g.n);
  detail::SearchWorkspace ws(g.n);

  Spanner s;
  s.base = base;
  s.eps = eps;
  int tree_edges = 0;
  for (int id : order) {
    const Edge& e = g.edges[id];
    double cutoff = (1.0 + eps) * e.w;
    bool accept;
    if (dsu.unite(e.u, e.v)) {
      accept = true;  // d_S infinite: joins two components
      ++tree_edges;
    } else if (g.complete_metric) {
      int t = e.v;
      accept = !ws.path_within(adj, e.u, e.v, cutoff,
                               [&g, t](int x) { return g.direct_weight(x, t); });
    } else {
      accept = !ws.path_within(adj, e.u, e.v, cutoff, detail::ZeroHeuristic{});
    }
    if (accept) {
      adj.add_edge(e.u, e.v, e.w);
      s.edges.push_back(e);
    }
  }
  if (tree_edges != g.n - 1) throw DisconnectedGraph();
  return s;
}

inline Spanner greedy_spanner(WeightedGraph g, double eps) {
  return greedy_spanner(std::make_shared<const WeightedGraph>(std::move(g)), eps);
}

struct StretchReport {
  double max_stretch = 1.0;
  int worst_u = -1, worst_v = -1;
};

/// Exact all-pairs stretch check: max over pairs of d_S(x,y)/d_G(x,y),
/// parallelized over source vertices.
inline StretchReport verify_stretch(const Spanner& s, int jobs = 0) {
  const WeightedGraph& g = *s.base;
  int n = g.n;
  StretchReport best;
  if (n < 2) return best;
  auto span_csr = detail::Csr::build(n, s.edges);

  std::mutex mu;
  jobs = detail::resolve_jobs(jobs);
  detail::parallel_for(n, jobs, [&](int src) {
    thread_local detail::SearchWorkspace ws;
    thread_local std::vector<double> ds, dg;
    if (ws.size() != n) ws.resize(n);
    ws.sssp(span_csr, src, ds);
    const double* base_row = nullptr;
    if (!g.complete_metric) {
      auto base_csr = detail::Csr::build(n, g.edges);  // small graphs only on this path
      ws.sssp(base_csr, src, dg);
      base_row = dg.data();
    }
    StretchReport local;
    for (int t = 0; t < n; ++t) {
      if (t == src) continue;
      double base_d = g.complete_metric ? g.direct_weight(src, t) : base_row[t];
      if (!(base_d > 0) || !std::isfinite(base_d)) continue;
      double ratio = ds[t] / base_d;
      if (ratio > local.max_stretch) {
        local.max_stretch = ratio;
        local.worst_u = std::min(src, t);
        local.worst_v = std::max(src, t);
      }
    }
    std::lock_guard<std::mutex> lock(mu);
    if (local.max_stretch > best.max_stretch ||
        (local.max_stretch == best.max_stretch && local.worst_u >= 0 &&
         (best.worst_u < 0 || std::pair(local.worst_u, local.worst_v) <
                                  std::pair(best.worst_u, best.worst_v)))) {
      best = local;
    }
  });
  if (best.worst_u < 0) {
    best.worst_u = 0;
    best.worst_v = n > 1 ? 1 : 0;
  }
  return best;
}

struct SpannerMetrics {
  double lightness = 1.0;
  double sparsity = 0.0;
  double max_stretch = 1.0;
  double mst_weight = 0.0;
  int n = 0;
  int m_spanner = 0;
};

inline SpannerMetrics spanner_metrics(const Spanner& s, int jobs = 0) {
  SpannerMetrics m;
  m.n = s.n();
  m.m_spanner = static_cast<int>(s.edges.size());
  m.sparsity = m.n > 0 ? static_cast<double>(m.m_spanner) / m.n : 0.0;
  m.mst_weight = total_weight(mst(*s.base));
  m.lightness = m.mst_weight > 0 ? s.weight() / m.mst_weight : 1.0;
  m.max_stretch = verify_stretch(s, jobs).max_stretch;
  return m;
}

/// True iff the base MST edge set is contained in the spanner and the
/// spanner's own MST has the same weight (Kruskal under the shared
/// tie-break).
inline bool mst_preserved(const Spanner& s, double rel_tol = 1e-9) {
  auto base_tree = mst(*s.base);
  std::vector<std::pair<int, int>> have;
  have.reserve(s.edges.size());
  for (const auto& e : s.edges) have.emplace_back(e.u, e.v);
  std::sort(have.begin(), have.end());
  for (const auto& e : base_tree.edges)
    if (!std::binary_search(have.begin(), have.end(), std::pair(e.u, e.v))) return false;
  WeightedGraph sg;
  sg.n = s.n();
  sg.edges = s.edges;
  double ws = total_weight(mst(sg));
  double wb = total_weight(base_tree);
  return std::abs(ws - wb) <= rel_tol * std::max(ws, wb);
}

}  // namespace spanlab
