#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spanlab/partition.hpp"

namespace spanlab {

enum class Provenance { Base, Phase1, Phase2, Phase4 };

inline const char* provenance_name(Provenance p, bool aug3, bool aug4) {
  switch (p) {
    case Provenance::Base: return "base";
    case Provenance::Phase1: return aug4 ? "phase1+aug4" : (aug3 ? "phase1+aug3" : "phase1");
    case Provenance::Phase2: return aug4 ? "phase2+aug4" : (aug3 ? "phase2+aug3" : "phase2");
    case Provenance::Phase4: return "phase4";
  }
  return "?";
}

/// One cluster of the per-level hierarchy over S'. Credit accounts are
/// affine in the credit constant: value(c) = c*alpha - beta, which lets the
/// feasibility search reuse one structure build.
struct Cluster {
  int id = -1;
  int level = 0;
  Provenance provenance = Provenance::Base;
  bool aug3 = false, aug4 = false;

  std::vector<int> vertices;        // S' vertex ids, sorted
  std::vector<int> internal_edges;  // S' edge ids forming the cluster subgraph
  double diameter = 0.0;
  std::vector<int> diam_path;  // S' vertex chain realizing the diameter
  int center = -1;          // smallest non-virtual vertex; -1 for virtual clusters
  bool is_virtual = false;  // only virtual vertices
  bool undersized = false;  // whole tree smaller than the scale
  bool carried = false;     // identity-carried through a degenerate level

  std::vector<int> members;     // previous-level cluster ids (empty at base)
  std::vector<int> connectors;  // S' MST piece ids consumed by this cluster

  // Phase bookkeeping.
  int branch_member = -1;                    // Phase 1: the branching eps-cluster
  std::vector<int> branch_neighbors;         // its tree neighbors inside the cluster
  std::vector<int> path_p1, path_p2, path_q1, path_q2;  // Phase 2 subpaths (member ids)
  int phase2_edge = -1;                      // S' edge id of the grouping spanner edge
  bool phase2_overlap = false;               // P1 == Q1 == P_xy
  bool p4_long = false, p4_internal = false, p4_affix = false;
  int pay_delegate = -1;  // short affix: same-level cluster that pays its edges

  // Credit account, affine in c.
  double alpha = 0.0, beta = 0.0;
  double dc1_requirement = 0.0;  // max(diameter, ell/2), possibly waived
  bool dc1_floor_waived = false;

  double balance(double c) const { return c * alpha - beta; }
};

namespace detail {

/// Subgraph diameter helpers over S' edge ids.
struct SubgraphView {
  const WeightedGraph* g = nullptr;
  std::vector<int>* scratch_home_ = nullptr;
  std::vector<int> verts;                 // sorted
  std::vector<int> local_of;              // global -> local (-1 outside), sized g->n
  std::vector<std::vector<std::pair<int, double>>> adj;  // local adjacency

  SubgraphView(const WeightedGraph& graph, const std::vector<int>& vertices,
               const std::vector<int>& edge_ids, std::vector<int>& scratch_map)
      : g(&graph), scratch_home_(&scratch_map), verts(vertices) {
    if (static_cast<int>(scratch_map.size()) != graph.n) scratch_map.assign(graph.n, -1);
    local_of.swap(scratch_map);
    for (int i = 0; i < static_cast<int>(verts.size()); ++i) local_of[verts[i]] = i;
    adj.assign(verts.size(), {});
    for (int eid : edge_ids) {
      const Edge& e = graph.edges[eid];
      int a = local_of[e.u], b = local_of[e.v];
      if (a < 0 || b < 0) continue;
      adj[a].emplace_back(b, e.w);
      adj[b].emplace_back(a, e.w);
    }
  }
  ~SubgraphView() {
    for (int v : verts) local_of[v] = -1;
    local_of.swap(*scratch_home_);
  }
  SubgraphView(const SubgraphView&) = delete;

  int size() const { return static_cast<int>(verts.size()); }

  void dijkstra(int src_local, std::vector<double>& dist, std::vector<int>* parent = nullptr) const {
    int k = size();
    dist.assign(k, std::numeric_limits<double>::infinity());
    if (parent) parent->assign(k, -1);
    std::vector<std::pair<double, int>> heap;
    auto cmp = [](const std::pair<double, int>& a, const std::pair<double, int>& b) {
      return a.first > b.first || (a.first == b.first && a.second > b.second);
    };
    dist[src_local] = 0;
    if (parent) (*parent)[src_local] = src_local;
    heap.push_back({0.0, src_local});
    while (!heap.empty()) {
      std::pop_heap(heap.begin(), heap.end(), cmp);
      auto [d, u] = heap.back();
      heap.pop_back();
      if (d != dist[u]) continue;
      for (auto [v, w] : adj[u]) {
        double nd = d + w;
        if (nd < dist[v]) {
          dist[v] = nd;
          if (parent) (*parent)[v] = u;
          heap.push_back({nd, v});
          std::push_heap(heap.begin(), heap.end(), cmp);
        }
      }
    }
  }

  /// Exact diameter and a realizing vertex path (global ids), deterministic
  /// tie-break on the smallest endpoint pair.
  double diameter_path(std::vector<int>* out_path) const {
    int k = size();
    if (k == 1) {
      if (out_path) *out_path = {verts[0]};
      return 0.0;
    }
    double best = -1;
    int bs = -1, bt = -1;
    std::vector<double> dist;
    for (int s = 0; s < k; ++s) {
      dijkstra(s, dist);
      for (int t = s + 1; t < k; ++t) {
        if (dist[t] > best) {
          best = dist[t];
          bs = s;
          bt = t;
        }
      }
    }
    if (out_path) {
      std::vector<int> parent;
      dijkstra(bs, dist, &parent);
      std::vector<int> p;
      for (int v = bt;; v = parent[v]) {
        p.push_back(verts[v]);
        if (v == bs) break;
      }
      std::reverse(p.begin(), p.end());
      *out_path = std::move(p);
    }
    return best;
  }
};

/// Tree over previous-level clusters connected by live MST pieces; the
/// substrate the per-level phases operate on.
struct LevelForest {
  struct TEdge {
    int a = 0, b = 0;  // cluster node ids
    int piece = -1;    // S' edge id
    double w = 0.0;
  };
  int k = 0;
  std::vector<double> node_diam;
  std::vector<TEdge> edges;
  std::vector<std::vector<int>> adj;  // node -> incident TEdge ids
  std::vector<bool> alive;

  void init(int nodes) {
    k = nodes;
    node_diam.assign(k, 0.0);
    edges.clear();
    adj.assign(k, {});
    alive.assign(k, true);
  }
  void add_edge(int a, int b, int piece, double w) {
    adj[a].push_back(static_cast<int>(edges.size()));
    adj[b].push_back(static_cast<int>(edges.size()));
    edges.push_back({a, b, piece, w});
  }
  int other(int eid, int v) const { return edges[eid].a == v ? edges[eid].b : edges[eid].a; }

  int alive_degree(int v) const {
    int d = 0;
    for (int eid : adj[v]) d += alive[other(eid, v)];
    return d;
  }

  /// Connected components of the alive subgraph, each sorted, ordered by
  /// smallest node.
  std::vector<std::vector<int>> components() const {
    std::vector<std::vector<int>> comps;
    std::vector<bool> seen(k, false);
    for (int s = 0; s < k; ++s) {
      if (!alive[s] || seen[s]) continue;
      std::vector<int> comp, stack{s};
      seen[s] = true;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        comp.push_back(u);
        for (int eid : adj[u]) {
          int v = other(eid, u);
          if (alive[v] && !seen[v]) {
            seen[v] = true;
            stack.push_back(v);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    return comps;
  }

  struct DiamPath {
    std::vector<int> nodes;  // cluster ids along the path
    double ediam = 0.0;      // sum of node diameters along it
    double pathw = 0.0;      // node diameters + connecting piece weights
  };

  /// Diameter path of a connected alive node set, at cluster granularity:
  /// the path maximizing sum(node diameters) + sum(edge weights).
  /// Deterministic via smallest-id expansion.
  DiamPath diameter_path(const std::vector<int>& comp) const {
    DiamPath out;
    if (comp.empty()) return out;
    if (comp.size() == 1) {
      out.nodes = comp;
      out.ediam = node_diam[comp[0]];
      out.pathw = out.ediam;
      return out;
    }
    std::set<int> in(comp.begin(), comp.end());
    // Root at comp[0]; iterative post-order.
    int root = comp[0];
    std::vector<int> order, parent_edge(k, -1), parent(k, -1);
    order.reserve(comp.size());
    {
      std::vector<int> stack{root};
      std::vector<bool> seen(k, false);
      seen[root] = true;
      while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        order.push_back(u);
        // children in ascending id for determinism
        std::vector<std::pair<int, int>> nbrs;
        for (int eid : adj[u]) {
          int v = other(eid, u);
          if (alive[v] && in.count(v) && !seen[v]) nbrs.emplace_back(v, eid);
        }
        std::sort(nbrs.begin(), nbrs.end());
        for (auto [v, eid] : nbrs) {
          seen[v] = true;
          parent[v] = u;
          parent_edge[v] = eid;
          stack.push_back(v);
        }
      }
    }
    // down[v]: best downward path weight starting at v (inclusive), with the
    // child achieving it; process in reverse BFS order (children first).
    std::vector<double> down(k, 0.0);
    std::vector<int> down_child(k, -1);
    double best = -1;
    int best_apex = -1;
    std::vector<int> second_child(k, -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      int u = *it;
      double b1 = 0, b2 = 0;
      int c1 = -1, c2 = -1;
      for (int eid : adj[u]) {
        int v = other(eid, u);
        if (!alive[v] || !in.count(v) || parent[v] != u || parent_edge[v] != eid) continue;
        double val = edges[eid].w + down[v];
        if (val > b1 || (val == b1 && (c1 < 0 || v < c1))) {
          b2 = b1;
          c2 = c1;
          b1 = val;
          c1 = v;
        } else if (val > b2 || (val == b2 && (c2 < 0 || v < c2))) {
          b2 = val;
          c2 = v;
        }
      }
      down[u] = node_diam[u] + b1;
      down_child[u] = c1;
      second_child[u] = c2;
      double through = node_diam[u] + b1 + b2;
      if (through > best || (through == best && (best_apex < 0 || u < best_apex))) {
        best = through;
        best_apex = u;
      }
    }
    // Reconstruct: descend both best branches from the apex.
    std::vector<int> left, right;
    for (int v = down_child[best_apex]; v >= 0; v = down_child[v]) left.push_back(v);
    for (int v = second_child[best_apex]; v >= 0; v = down_child[v]) right.push_back(v);
    std::reverse(left.begin(), left.end());
    out.nodes = std::move(left);
    out.nodes.push_back(best_apex);
    out.nodes.insert(out.nodes.end(), right.begin(), right.end());
    out.pathw = best;
    for (int v : out.nodes) out.ediam += node_diam[v];
    return out;
  }

  double ediam(const std::vector<int>& comp) const { return diameter_path(comp).ediam; }

  bool is_path(const std::vector<int>& comp) const {
    for (int v : comp) {
      int d = 0;
      for (int eid : adj[v])
        if (alive[other(eid, v)]) ++d;
      if (d > 2) return false;
    }
    return true;
  }

  /// Orders a path component from its smaller-id endpoint.
  std::vector<int> path_order(const std::vector<int>& comp) const {
    if (comp.size() <= 1) return comp;
    int start = -1;
    for (int v : comp)
      if (alive_degree(v) <= 1 && (start < 0 || v < start)) start = v;
    if (start < 0) start = comp[0];  // defensive; cycles cannot happen in a tree
    std::vector<int> order{start};
    int prev = -1, cur = start;
    while (true) {
      int nxt = -1;
      for (int eid : adj[cur]) {
        int v = other(eid, cur);
        if (alive[v] && v != prev) {
          nxt = v;
          break;
        }
      }
      if (nxt < 0) break;
      order.push_back(nxt);
      prev = cur;
      cur = nxt;
    }
    return order;
  }

  /// Tree edges with both endpoints inside a node set.
  std::vector<int> internal_tedges(const std::vector<int>& nodes) const {
    std::set<int> in(nodes.begin(), nodes.end());
    std::set<int> out;
    for (int v : nodes)
      for (int eid : adj[v])
        if (in.count(other(eid, v))) out.insert(eid);
    return {out.begin(), out.end()};
  }
};

}  // namespace detail

/// Greedy decomposition of the S' MST into level-0 clusters of diameter in
/// [ell0, 4*ell0] (one undersized cluster when the whole tree is smaller).
/// Credits are seeded from the MST pieces on each cluster's diameter path.
///
/// piece_state records what happened to every MST piece: 0 live (between
/// clusters), 1 consumed (credits a cluster), 2 interior surplus.
inline std::vector<Cluster> base_clusters(const SubdividedSpanner& sp, double ell0,
                                          std::vector<int>* piece_state_out = nullptr) {
  const WeightedGraph& g = sp.graph;
  if (ell0 < sp.w0 * (1.0 - 1e-12)) throw BadSpec("ell0 must be at least w0");
  int n = g.n;
  // MST piece adjacency (spanning tree of S').
  std::vector<std::vector<std::pair<int, int>>> adj(n);  // (nbr, edge id)
  for (int eid = 0; eid < static_cast<int>(g.edges.size()); ++eid) {
    if (!sp.is_mst_piece(eid)) continue;
    adj[g.edges[eid].u].emplace_back(g.edges[eid].v, eid);
    adj[g.edges[eid].v].emplace_back(g.edges[eid].u, eid);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());

  // Post-order over the tree rooted at vertex 0.
  std::vector<int> parent(n, -1), parent_edge(n, -1), order;
  order.reserve(n);
  {
    std::vector<int> stack{0};
    std::vector<bool> seen(n, false);
    seen[0] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      order.push_back(u);
      for (auto [v, eid] : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          parent[v] = u;
          parent_edge[v] = eid;
          stack.push_back(v);
        }
    }
  }

  // Bottom-up accumulation; cut the pending subtree at its apex once its
  // exact (tree) diameter reaches ell0.
  std::vector<double> height(n, 0.0), pdiam(n, 0.0);
  std::vector<bool> cut_apex(n, false), consumed(n, false);
  std::vector<int> cluster_of(n, -1);
  std::vector<std::vector<int>> cluster_vertices;

  auto collect_pending = [&](int apex) {
    // pending subtree: apex plus all uncut descendants
    std::vector<int> vs, stack{apex};
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      vs.push_back(u);
      consumed[u] = true;
      for (auto [v, eid] : adj[u])
        if (parent[v] == u && !consumed[v] && !cut_apex[v]) stack.push_back(v);
    }
    std::sort(vs.begin(), vs.end());
    return vs;
  };

  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    int u = *it;
    double h1 = 0, h2 = 0, dmax = 0;
    for (auto [v, eid] : adj[u]) {
      if (parent[v] != u || cut_apex[v]) continue;
      double hv = height[v] + g.edges[eid].w;
      dmax = std::max(dmax, pdiam[v]);
      if (hv > h1) {
        h2 = h1;
        h1 = hv;
      } else if (hv > h2) {
        h2 = hv;
      }
    }
    height[u] = h1;
    pdiam[u] = std::max(dmax, h1 + h2);
    if (pdiam[u] >= ell0) {
      cut_apex[u] = true;
      int cid = static_cast<int>(cluster_vertices.size());
      auto vs = collect_pending(u);
      for (int v : vs) cluster_of[v] = cid;
      cluster_vertices.push_back(std::move(vs));
    }
  }

  bool undersized = false;
  if (cluster_vertices.empty()) {
    // Whole tree below the scale: single undersized cluster.
    undersized = true;
    std::vector<int> vs(n);
    for (int i = 0; i < n; ++i) vs[i] = i;
    for (int v : vs) cluster_of[v] = 0;
    cluster_vertices.push_back(std::move(vs));
  } else if (!consumed[0]) {
    // Root leftover (< ell0): merge across the lexicographically smallest
    // boundary piece; the far endpoint is a cut apex, so the merged
    // diameter stays within 4*ell0.
    auto leftover = collect_pending(0);
    int best_piece = -1, target = -1;
    for (int v : leftover)
      for (auto [w, eid] : adj[v]) {
        if (cluster_of[w] < 0) continue;
        if (best_piece < 0 || eid < best_piece) {
          best_piece = eid;
          target = cluster_of[w];
        }
      }
    // target is always found: some vertex was consumed, the tree is connected
    auto& tv = cluster_vertices[target];
    for (int v : leftover) cluster_of[v] = target;
    tv.insert(tv.end(), leftover.begin(), leftover.end());
    std::sort(tv.begin(), tv.end());
  }

  // Assemble clusters, exact diameters and diameter-path credits.
  std::vector<int> piece_state(g.edges.size(), 0);
  std::vector<Cluster> out;
  std::vector<int> scratch(n, -1);
  out.reserve(cluster_vertices.size());
  for (int cid = 0; cid < static_cast<int>(cluster_vertices.size()); ++cid) {
    Cluster c;
    c.id = cid;
    c.level = 0;
    c.provenance = Provenance::Base;
    c.vertices = cluster_vertices[cid];
    c.undersized = undersized;
    // internal pieces
    std::vector<int> internal;
    for (int v : c.vertices)
      for (auto [w, eid] : adj[v])
        if (v < w && cluster_of[w] == cid) internal.push_back(eid);
    std::sort(internal.begin(), internal.end());
    c.internal_edges = internal;
    for (int eid : internal) piece_state[eid] = 2;  // interior; path pieces upgraded below
    detail::SubgraphView view(g, c.vertices, internal, scratch);
    c.diameter = view.diameter_path(&c.diam_path);
    const auto& dpath = c.diam_path;
    // consume diameter-path pieces into the credit seed
    int path_pieces = 0;
    for (std::size_t i = 0; i + 1 < dpath.size(); ++i) {
      int a = dpath[i], b = dpath[i + 1];
      for (auto [w, eid] : adj[a])
        if (w == b) {
          piece_state[eid] = 1;
          ++path_pieces;
          break;
        }
    }
    c.alpha = sp.w0 * path_pieces;
    c.beta = 0.0;
    c.is_virtual = true;
    for (int v : c.vertices)
      if (!sp.is_virtual(v)) {
        c.is_virtual = false;
        c.center = v;
        break;
      }
    out.push_back(std::move(c));
  }
  if (piece_state_out) *piece_state_out = std::move(piece_state);
  return out;
}

}  // namespace spanlab
