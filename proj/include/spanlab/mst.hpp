#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "spanlab/errors.hpp"
#include "spanlab/graph.hpp"

namespace spanlab {

namespace detail {

struct DisjointSets {
  std::vector<int> parent, rank_;

  explicit DisjointSets(int n = 0) { reset(n); }
  void reset(int n) {
    parent.resize(n);
    std::iota(parent.begin(), parent.end(), 0);
    rank_.assign(n, 0);
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }
};

}  // namespace detail

/// Edge ids of a minimum spanning tree of g under the deterministic
/// tie-break (weight, u, v); Kruskal.
inline std::vector<int> mst_edge_ids(const WeightedGraph& g) {
  if (g.n < 1) throw BadSpec("empty graph");
  std::vector<int> order(g.edges.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return edge_weight_less(g.edges[a], g.edges[b]);
  });
  detail::DisjointSets dsu(g.n);
  std::vector<int> tree;
  tree.reserve(g.n - 1);
  for (int id : order) {
    if (dsu.unite(g.edges[id].u, g.edges[id].v)) {
      tree.push_back(id);
      if (static_cast<int>(tree.size()) == g.n - 1) break;
    }
  }
  if (static_cast<int>(tree.size()) != g.n - 1) throw DisconnectedGraph();
  return tree;
}

/// Minimum spanning tree as a graph; edges sorted by (weight, u, v).
inline WeightedGraph mst(const WeightedGraph& g) {
  auto ids = mst_edge_ids(g);
  WeightedGraph t;
  t.n = g.n;
  t.edges.reserve(ids.size());
  for (int id : ids) t.edges.push_back(g.edges[id]);
  std::sort(t.edges.begin(), t.edges.end(), edge_weight_less);
  return t;
}

inline double total_weight(const WeightedGraph& g) {
  double s = 0;
  for (const auto& e : g.edges) s += e.w;
  return s;
}

}  // namespace spanlab
