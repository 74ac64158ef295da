#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "spanlab/mst.hpp"
#include "spanlab/spanner.hpp"

namespace spanlab {

struct MstSummary {
  std::vector<Edge> mst_edges;  // sorted by (weight, u, v)
  double total_weight = 0.0;
  double w0 = 0.0;  // average MST edge weight, total/(n-1)
  int n = 0;
};

inline MstSummary mst_summary(const WeightedGraph& g) {
  if (g.n < 2) throw SingleVertex();
  MstSummary s;
  s.n = g.n;
  auto t = mst(g);  // throws DisconnectedGraph
  s.mst_edges = std::move(t.edges);
  s.total_weight = 0;
  for (const auto& e : s.mst_edges) s.total_weight += e.w;
  s.w0 = s.total_weight / (g.n - 1);
  return s;
}

/// The spanner with every MST edge heavier than w0 subdivided into
/// ceil(w/w0) equal pieces. Vertices >= n_original are virtual.
struct SubdividedSpanner {
  WeightedGraph graph;  // S'
  int n_original = 0;
  double w0 = 0.0;
  // Per S' edge: index into the originating MST edge list, or -1 for a
  // non-MST spanner edge.
  std::vector<int> piece_origin;
  // Per S' edge: index into the original spanner edge list when the edge
  // is an original (unsubdivided) edge, else -1.
  std::vector<int> source_edge;

  bool is_virtual(int v) const { return v >= n_original; }
  bool is_mst_piece(int eid) const { return piece_origin[eid] >= 0; }
  int n_pieces() const {
    int k = 0;
    for (int o : piece_origin) k += o >= 0;
    return k;
  }
};

inline SubdividedSpanner subdivide(const Spanner& s, const MstSummary& summary) {
  SubdividedSpanner out;
  out.n_original = s.n();
  out.w0 = summary.w0;
  out.graph.n = s.n();

  // Identify MST edges inside the spanner edge list by (u,v).
  std::map<std::pair<int, int>, int> mst_index;
  for (int i = 0; i < static_cast<int>(summary.mst_edges.size()); ++i)
    mst_index[{summary.mst_edges[i].u, summary.mst_edges[i].v}] = i;

  std::map<std::pair<int, int>, int> span_index;
  for (int i = 0; i < static_cast<int>(s.edges.size()); ++i) {
    const Edge& e = s.edges[i];
    span_index[{e.u, e.v}] = i;
    if (mst_index.find({e.u, e.v}) == mst_index.end()) {
      out.graph.edges.push_back(e);
      out.piece_origin.push_back(-1);
      out.source_edge.push_back(i);
    }
  }
  // MST edges in (weight, u, v) order; heavy ones split into equal pieces.
  for (int mi = 0; mi < static_cast<int>(summary.mst_edges.size()); ++mi) {
    const Edge& e = summary.mst_edges[mi];
    int k = e.w > summary.w0 ? static_cast<int>(std::ceil(e.w / summary.w0)) : 1;
    if (k <= 1) {
      out.graph.edges.push_back(e);
      out.piece_origin.push_back(mi);
      auto it = span_index.find({e.u, e.v});
      out.source_edge.push_back(it == span_index.end() ? -1 : it->second);
      continue;
    }
    double piece_w = e.w / k;
    int prev = e.u;
    for (int p = 0; p < k; ++p) {
      int next;
      if (p == k - 1) {
        next = e.v;
      } else {
        next = out.graph.n++;  // new virtual vertex
      }
      int a = std::min(prev, next), b = std::max(prev, next);
      out.graph.edges.push_back({a, b, piece_w});
      out.piece_origin.push_back(mi);
      out.source_edge.push_back(-1);
      prev = next;
    }
  }
  return out;
}

/// Initial credit allocation: every S' MST piece holds c*w0. Total is
/// asserted against the 2*c*w(MST) bound.
struct CreditLedger {
  double c = 0.0;
  double w0 = 0.0;
  double per_piece = 0.0;
  int piece_count = 0;
  double total = 0.0;

  struct Payment {
    int j = 0, level = 0;
    int payer_cluster = -1;  // -1: exceptional set B
    Edge edge;
    double amount = 0.0;
  };
  std::vector<Payment> payments;  // filled by the certifier
};

inline CreditLedger allocate_credits(const SubdividedSpanner& sp, double c) {
  if (!(c > 0.0)) throw BadSpec("credit constant c must be positive");
  CreditLedger led;
  led.c = c;
  led.w0 = sp.w0;
  led.per_piece = c * sp.w0;
  led.piece_count = sp.n_pieces();
  led.total = led.per_piece * led.piece_count;
  double mst_w = 0;
  for (int i = 0; i < static_cast<int>(sp.graph.edges.size()); ++i)
    if (sp.is_mst_piece(i)) mst_w += sp.graph.edges[i].w;
  double bound = 2.0 * c * mst_w;
  if (led.total > bound * (1.0 + 1e-9))
    throw CreditOverflowAssertion("total credit " + std::to_string(led.total) +
                                  " exceeds 2*c*w(MST) = " + std::to_string(bound));
  return led;
}

/// Classification of spanner edges for one j-stream: light edges (w <= w0),
/// the J0 band (w0 < w <= 2w0/eps), and per-level sets with weight in
/// (2^j/eps^i * w0, 2^{j+1}/eps^i * w0], i >= 1. An edge whose bracket
/// resolves to a different j belongs to that stream instead.
struct LevelPartition {
  int j = 0;
  int I_eps = 0, I_n = 0;
  double eps = 0.0, w0 = 0.0;

  std::vector<int> light_edges;  // ids into the spanner edge list (L_S)
  std::vector<int> j0_edges;     // J_0
  struct Bucket {
    int i = 0;
    double ell = 0.0;
    std::vector<int> edge_ids;
    double weight = 0.0;
  };
  std::map<int, Bucket> levels;  // i -> bucket (only this stream's edges)
  double light_weight = 0.0, j0_weight = 0.0;

  double ell(int i) const { return std::pow(2.0, j + 1) / std::pow(eps, i) * w0; }
};

namespace detail {

/// Canonical (i, j) bracket for a heavy edge: smallest i >= 1 whose bracket
/// admits a j in [0, I_eps). Brackets can overlap across i when 1/eps is
/// not a power of two; the smallest-i rule makes the classification a
/// partition.
inline bool level_bracket(double ratio, double eps, int I_eps, int* out_i, int* out_j) {
  for (int i = 1; i < 4096; ++i) {
    double x = ratio * std::pow(eps, i);  // bracket: (2^j, 2^{j+1}] after scaling by eps^i
    if (x <= 1.0) break;                  // larger i only shrinks x further
    int j = static_cast<int>(std::ceil(std::log2(x))) - 1;
    // Guard against log rounding at bracket boundaries.
    while (j > 0 && std::pow(2.0, j) >= x) --j;
    while (std::pow(2.0, j + 1) < x) ++j;
    if (j < 0 || j >= I_eps) continue;
    *out_i = i;
    *out_j = j;
    return true;
  }
  return false;
}

}  // namespace detail

inline LevelPartition classify_edges(const Spanner& s, const MstSummary& summary, double eps,
                                     int j) {
  if (!(eps > 0.0 && eps < 1.0)) throw EpsOutOfRange("analysis eps must lie in (0,1)");
  LevelPartition p;
  p.eps = eps;
  p.w0 = summary.w0;
  p.I_eps = static_cast<int>(std::ceil(std::log2(1.0 / eps)));
  p.I_n = static_cast<int>(std::ceil(std::log2(static_cast<double>(std::max(2, s.n())))));
  p.j = j;
  if (j < 0 || j >= p.I_eps) throw EpsOutOfRange("stream index j out of [0, I_eps)");

  double j0_cap = 2.0 * summary.w0 / eps;
  for (int id = 0; id < static_cast<int>(s.edges.size()); ++id) {
    double w = s.edges[id].w;
    if (w <= summary.w0) {
      p.light_edges.push_back(id);
      p.light_weight += w;
    } else if (w <= j0_cap) {
      p.j0_edges.push_back(id);
      p.j0_weight += w;
    } else {
      int bi, bj;
      if (!detail::level_bracket(w / summary.w0, eps, p.I_eps, &bi, &bj))
        throw Error("edge weight " + std::to_string(w) + " fits no level bracket");
      if (bj != j) continue;  // belongs to a different stream
      auto& bucket = p.levels[bi];
      bucket.i = bi;
      bucket.ell = p.ell(bi);
      bucket.edge_ids.push_back(id);
      bucket.weight += w;
    }
  }
  return p;
}

struct WeightBoundsReport {
  double delta = 0.0;
  double light_weight = 0.0, light_bound = 0.0;
  double j0_weight = 0.0, j0_bound = 0.0;
  bool light_ok = false, j0_ok = false;
  bool ok() const { return light_ok && j0_ok; }
};

/// Checks w(L_S) <= 2*delta*w(MST) and w(J_0) <= 4*delta/eps * w(MST)
/// with delta the measured sparsity |E(S)|/n.
inline WeightBoundsReport check_weight_bounds(const LevelPartition& p, double mst_weight,
                                              double delta) {
  WeightBoundsReport r;
  r.delta = delta;
  r.light_weight = p.light_weight;
  r.light_bound = 2.0 * delta * mst_weight;
  r.light_ok = r.light_weight <= r.light_bound * (1.0 + 1e-9);
  r.j0_weight = p.j0_weight;
  r.j0_bound = 4.0 * delta / p.eps * mst_weight;
  r.j0_ok = r.j0_weight <= r.j0_bound * (1.0 + 1e-9);
  return r;
}

}  // namespace spanlab
