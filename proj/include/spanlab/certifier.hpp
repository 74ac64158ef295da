#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spanlab/clusters.hpp"

namespace spanlab {

struct CertConfig {
  double g = 33.0;
  double s = 400.0;           // analysis stretch coupling: spanner stretch = 1 + s*eps
  double eps_analysis = 0.0;  // 0: derived as spanner.eps / s
  int j = -1;                 // stream index; -1 runs every stream
  double c_fixed = 0.0;       // > 0: skip the search, audit at this credit constant
  double c_lo = 1.0;
  double c_hi = 1099511627776.0;  // 2^40
  bool dump_clusters = false;

  void validate() const {
    if (!(g > 2.0)) throw BadSpec("g must exceed 2");
    if (s < 12.0 * g + 4.0 || s < 8.0 * g + 1.0)
      throw BadSpec("s must satisfy s >= 12g+4 and s >= 8g+1");
    if (!(eps_analysis > 0.0)) throw EpsOutOfRange("analysis eps must be positive");
    if (eps_analysis > 0.25 || eps_analysis >= 1.0 / g || eps_analysis >= 1.0 / (2.0 * g))
      throw EpsOutOfRange("analysis eps must satisfy eps <= 1/4, eps < 1/g and eps < 1/(2g)");
  }
};

/// Contraction of the previous-level clusters against one level's spanner
/// edges. Simplicity violations are recorded, never thrown.
struct ClusterGraph {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;  // deduplicated, a < b
  std::vector<int> degree;                 // distinct neighbors per node
  int max_degree = 0;
  int self_loops = 0;
  int parallel = 0;
  bool simple = true;
  std::vector<std::string> violations;
};

inline ClusterGraph build_cluster_graph(const std::vector<Cluster>& prev,
                                        const std::vector<Edge>& level_edges, int n_vertices) {
  std::vector<int> owner(n_vertices, -1);
  for (const auto& c : prev)
    for (int v : c.vertices)
      if (v < n_vertices) owner[v] = c.id;
  ClusterGraph kg;
  kg.nodes = static_cast<int>(prev.size());
  kg.degree.assign(kg.nodes, 0);
  std::map<std::pair<int, int>, int> mult;
  for (const auto& e : level_edges) {
    if (e.u >= n_vertices || e.v >= n_vertices || owner[e.u] < 0 || owner[e.v] < 0)
      throw UncoveredEndpoint(e.u < n_vertices && owner[e.u] >= 0 ? e.v : e.u);
    int a = owner[e.u], b = owner[e.v];
    if (a == b) {
      ++kg.self_loops;
      kg.simple = false;
      kg.violations.push_back("self-loop at cluster " + std::to_string(a) + " via edge (" +
                              std::to_string(e.u) + "," + std::to_string(e.v) + ")");
      continue;
    }
    if (a > b) std::swap(a, b);
    ++mult[{a, b}];
  }
  for (auto& [pair, count] : mult) {
    kg.edges.push_back(pair);
    ++kg.degree[pair.first];
    ++kg.degree[pair.second];
    if (count > 1) {
      kg.parallel += count - 1;
      kg.simple = false;
      kg.violations.push_back("parallel edges (" + std::to_string(count) + ") between clusters " +
                              std::to_string(pair.first) + " and " + std::to_string(pair.second));
    }
  }
  for (int d : kg.degree) kg.max_degree = std::max(kg.max_degree, d);
  return kg;
}

struct SeparationReport {
  int pairs_checked = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Center separation around every hub: pairwise center distances of a hub
/// and its cluster-graph neighbors must exceed eps*ell, and neighbors must
/// stay within 3*ell of the hub.
template <class DistFn>
SeparationReport check_center_separation(const std::vector<Cluster>& prev, const ClusterGraph& kg,
                                         double ell, double eps, DistFn dist) {
  SeparationReport rep;
  std::vector<std::vector<int>> nbrs(kg.nodes);
  for (auto [a, b] : kg.edges) {
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  for (int hub = 0; hub < kg.nodes; ++hub) {
    if (nbrs[hub].empty()) continue;
    if (prev[hub].center < 0) {
      rep.violations.push_back("virtual cluster " + std::to_string(hub) + " is not isolated");
      continue;
    }
    std::vector<int> group{hub};
    group.insert(group.end(), nbrs[hub].begin(), nbrs[hub].end());
    for (std::size_t x = 0; x < group.size(); ++x) {
      if (prev[group[x]].center < 0) continue;
      if (x > 0) {
        double d = dist(prev[hub].center, prev[group[x]].center);
        if (d > 3.0 * ell * (1.0 + 1e-9))
          rep.violations.push_back("neighbor center " + std::to_string(group[x]) +
                                   " at distance " + std::to_string(d) + " > 3*ell from hub " +
                                   std::to_string(hub));
      }
      for (std::size_t y = x + 1; y < group.size(); ++y) {
        if (prev[group[y]].center < 0) continue;
        ++rep.pairs_checked;
        double d = dist(prev[group[x]].center, prev[group[y]].center);
        if (!(d > eps * ell * (1.0 - 1e-9)))
          rep.violations.push_back("centers of clusters " + std::to_string(group[x]) + "," +
                                   std::to_string(group[y]) + " only " + std::to_string(d) +
                                   " apart (need > " + std::to_string(eps * ell) + ")");
      }
    }
  }
  return rep;
}

struct CanonicalRecord {
  int cluster = -1;
  int case_fired = 0;  // 1: branching; 2: four distinct paths; 3: overlapped paths
  bool structural_ok = false;
  int y_cluster = -1;
  int s_size = 0;
  double alpha_s = 0.0, beta_s = 0.0, req = 0.0;
  std::string note;

  bool numeric_ok(double c) const {
    double have = c * alpha_s - beta_s;
    double need = c * req;
    return have >= need - 1e-9 * (std::abs(have) + std::abs(need) + 1.0);
  }
  bool ok(double c) const { return structural_ok && numeric_ok(c); }
};

struct LevelOutcome {
  int j = 0, i = 0;
  double ell = 0.0;
  bool built = false;       // phases ran
  bool degenerate = false;  // structure below scale; identity-carried
  bool idle = false;        // above the top occupied level
  bool exception_case = false;
  int phase1 = 0, phase2 = 0, phase3 = 0, phase4 = 0;
  int cluster_count = 0;
  double max_diam = 0.0, max_ratio = 0.0;
  bool dc2_ok = true;
  int k_degree = 0;
  bool k_simple = true;
  int k_self_loops = 0, k_parallel = 0;
  int edge_count = 0;
  double paid_weight = 0.0;
  int b_count = 0;
  double b_weight = 0.0;
  int obs13_violations = 0;
  double sum_req = 0.0;
  std::vector<std::pair<int, int>> payments;  // (payer cluster id, spanner edge id)
  std::vector<int> b_edges;                   // spanner edge ids routed to B
  std::vector<CanonicalRecord> canonical;
  std::vector<std::string> warnings;
  // resolved at the reported credit constant:
  bool dc1_ok = true;
  bool fallback_used = false;
};

struct CertReport {
  CertConfig config;
  double eps_build = 0.0;
  int I_eps = 0, I_n = 0;
  double w0 = 0.0, mst_weight = 0.0;
  std::vector<LevelOutcome> per_level;
  int b_count = 0;
  double b_weight = 0.0;
  double min_feasible_c = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> anomalies;
  std::vector<std::string> warnings;
  std::vector<CreditLedger::Payment> payments;
  int canonical_success = 0, canonical_fail = 0;
  bool fallback_used = false;
  bool credit_conserved = true;
  bool passed = false;

  struct ClusterDump {
    int j, level, id;
    std::string provenance;
    double diameter, alpha, beta;
    std::vector<int> vertices;
  };
  std::vector<ClusterDump> clusters_dump;

  bool checks_ok() const {
    for (const auto& lv : per_level)
      if (!lv.dc1_ok || !lv.dc2_ok || !lv.k_simple || lv.obs13_violations > 0) return false;
    return true;
  }
};

namespace detail {

struct ForestBuild {
  LevelForest forest;
  bool connected = true;
};

inline ForestBuild build_forest(const SubdividedSpanner& sp, const std::vector<Cluster>& prev,
                                const std::vector<int>& prev_of_vertex,
                                const std::vector<int>& piece_state,
                                std::vector<std::string>* anomalies) {
  const WeightedGraph& g = sp.graph;
  int k = static_cast<int>(prev.size());
  ForestBuild fb;
  fb.forest.init(k);
  for (int c = 0; c < k; ++c) fb.forest.node_diam[c] = prev[c].diameter;
  struct Cand {
    double w;
    int piece, a, b;
  };
  std::vector<Cand> cands;
  for (int eid = 0; eid < static_cast<int>(g.edges.size()); ++eid) {
    if (!sp.is_mst_piece(eid) || piece_state[eid] != 0) continue;
    int a = prev_of_vertex[g.edges[eid].u], b = prev_of_vertex[g.edges[eid].v];
    if (a == b) {
      if (anomalies)
        anomalies->push_back("live MST piece " + std::to_string(eid) +
                             " has both endpoints in one cluster");
      continue;
    }
    cands.push_back({g.edges[eid].w, eid, a, b});
  }
  std::sort(cands.begin(), cands.end(),
            [](const Cand& x, const Cand& y) { return x.w != y.w ? x.w < y.w : x.piece < y.piece; });
  DisjointSets dsu(k);
  int joined = 0;
  for (const auto& c : cands)
    if (dsu.unite(c.a, c.b)) {
      fb.forest.add_edge(c.a, c.b, c.piece, c.w);
      ++joined;
    }
  fb.connected = (joined == k - 1);
  return fb;
}

/// Phases 1-4 of one level's cluster construction over a prepared forest.
inline std::vector<Cluster> run_phases(const SubdividedSpanner& sp,
                                       const std::vector<Cluster>& prev,
                                       const std::vector<int>& prev_of_vertex,
                                       std::vector<int>& piece_state, LevelForest& forest,
                                       const std::vector<int>& level_edge_sids, double ell,
                                       double two_g_over_eps, LevelOutcome& out,
                                       std::vector<std::string>& anomalies) {
  const WeightedGraph& g = sp.graph;
  int k = static_cast<int>(prev.size());

  std::vector<Cluster> next;
  std::vector<int> new_of_prev(k, -1);
  auto start_cluster = [&](Provenance prov) {
    Cluster c;
    c.id = static_cast<int>(next.size());
    c.provenance = prov;
    next.push_back(std::move(c));
    return static_cast<int>(next.size()) - 1;
  };
  auto absorb = [&](int cid, const std::vector<int>& nodes) {
    for (int v : nodes) {
      forest.alive[v] = false;
      new_of_prev[v] = cid;
      next[cid].members.push_back(v);
    }
  };

  // Phase 1, step 1: subtrees of effective diameter in [ell, 2*ell] grown
  // around a branching eps-cluster and its neighbors.
  for (;;) {
    auto comps = forest.components();
    int pick = -1;
    for (const auto& comp : comps) {
      if (forest.ediam(comp) < ell) continue;
      for (int v : comp)
        if (forest.alive_degree(v) >= 3 && (pick < 0 || v < pick)) pick = v;
    }
    if (pick < 0) break;
    std::vector<int> grown{pick};
    std::set<int> in{pick};
    for (int eid : forest.adj[pick]) {
      int v = forest.other(eid, pick);
      if (forest.alive[v] && !in.count(v)) {
        grown.push_back(v);
        in.insert(v);
      }
    }
    std::sort(grown.begin(), grown.end());
    while (forest.ediam(grown) < ell) {
      int add = -1;
      for (int u : grown)
        for (int eid : forest.adj[u]) {
          int v = forest.other(eid, u);
          if (forest.alive[v] && !in.count(v) && (add < 0 || v < add)) add = v;
        }
      if (add < 0) break;  // grew to the whole component
      grown.insert(std::lower_bound(grown.begin(), grown.end(), add), add);
      in.insert(add);
    }
    if (forest.ediam(grown) < ell) {
      anomalies.push_back("phase1 growth stalled below ell at level " + std::to_string(out.i));
      break;
    }
    int cid = start_cluster(Provenance::Phase1);
    next[cid].branch_member = pick;
    for (int eid : forest.adj[pick]) {
      int v = forest.other(eid, pick);
      if (in.count(v)) next[cid].branch_neighbors.push_back(v);
    }
    std::sort(next[cid].branch_neighbors.begin(), next[cid].branch_neighbors.end());
    absorb(cid, grown);
    ++out.phase1;
  }

  // Phase 1, step 2: internal eps-clusters of long cluster paths that have
  // an MST edge into a phase-1 cluster migrate into it.
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& comp : forest.components()) {
      if (!forest.is_path(comp) || forest.ediam(comp) < ell) continue;
      auto order = forest.path_order(comp);
      for (std::size_t idx = 1; idx + 1 < order.size(); ++idx) {
        int x = order[idx];
        int best_piece = -1, target = -1;
        for (int eid : forest.adj[x]) {
          int v = forest.other(eid, x);
          if (forest.alive[v] || new_of_prev[v] < 0) continue;
          if (next[new_of_prev[v]].provenance != Provenance::Phase1) continue;
          if (best_piece < 0 || forest.edges[eid].piece < best_piece) {
            best_piece = forest.edges[eid].piece;
            target = new_of_prev[v];
          }
        }
        if (target >= 0) {
          absorb(target, {x});
          changed = true;
          break;
        }
      }
      if (changed) break;
    }
  }

  // Phase 2: level edges with both endpoints deep inside long cluster paths.
  for (int sid : level_edge_sids) {
    const Edge& e = g.edges[sid];
    int a = prev_of_vertex[e.u], b = prev_of_vertex[e.v];
    if (a == b || !forest.alive[a] || !forest.alive[b]) continue;
    auto comps = forest.components();
    const std::vector<int>* compA = nullptr;
    const std::vector<int>* compB = nullptr;
    for (const auto& comp : comps) {
      if (std::binary_search(comp.begin(), comp.end(), a)) compA = &comp;
      if (std::binary_search(comp.begin(), comp.end(), b)) compB = &comp;
    }
    if (!compA || !compB) continue;
    if (!forest.is_path(*compA) || !forest.is_path(*compB)) continue;
    auto orderA = forest.path_order(*compA);
    auto orderB = (compA == compB) ? orderA : forest.path_order(*compB);
    auto pos = [](const std::vector<int>& ord, int node) {
      return static_cast<int>(std::find(ord.begin(), ord.end(), node) - ord.begin());
    };
    auto ediam_range = [&](const std::vector<int>& ord, int lo, int hi) {
      double sum = 0;
      for (int t = lo; t <= hi; ++t) sum += forest.node_diam[ord[t]];
      return sum;
    };
    int pa = pos(orderA, a), pb = pos(orderB, b);
    int lastA = static_cast<int>(orderA.size()) - 1;
    int lastB = static_cast<int>(orderB.size()) - 1;
    if (ediam_range(orderA, 0, pa) < ell || ediam_range(orderA, pa, lastA) < ell) continue;
    if (ediam_range(orderB, 0, pb) < ell || ediam_range(orderB, pb, lastB) < ell) continue;
    auto minimal = [&](const std::vector<int>& ord, int p, int dir) {
      double sum = 0;
      int t = p;
      for (;; t += dir) {
        sum += forest.node_diam[ord[t]];
        if (sum >= ell) break;
      }
      return t;
    };
    int aL = minimal(orderA, pa, -1), aR = minimal(orderA, pa, +1);
    int bL = minimal(orderB, pb, -1), bR = minimal(orderB, pb, +1);

    int cid = start_cluster(Provenance::Phase2);
    auto slice = [&](const std::vector<int>& ord, int lo, int hi) {
      return std::vector<int>(ord.begin() + lo, ord.begin() + hi + 1);
    };
    if (compA != compB) {
      next[cid].path_p1 = slice(orderA, aL, pa);
      next[cid].path_p2 = slice(orderA, pa, aR);
      next[cid].path_q1 = slice(orderB, bL, pb);
      next[cid].path_q2 = slice(orderB, pb, bR);
      auto nodes = slice(orderA, aL, aR);
      auto nb = slice(orderB, bL, bR);
      nodes.insert(nodes.end(), nb.begin(), nb.end());
      absorb(cid, nodes);
    } else {
      int left = std::min(pa, pb), right = std::max(pa, pb);
      int lo1 = (pa <= pb) ? aL : bL, hi1 = (pa <= pb) ? aR : bR;
      int lo2 = (pa <= pb) ? bL : aL, hi2 = (pa <= pb) ? bR : aR;
      if (hi1 >= lo2) {
        // overlapped minimal subpaths: P1 = Q1 = P_xy
        next[cid].phase2_overlap = true;
        next[cid].path_p1 = slice(orderA, left, right);
        next[cid].path_q1 = next[cid].path_p1;
        next[cid].path_p2 = slice(orderA, lo1, left);
        next[cid].path_q2 = slice(orderA, right, hi2);
        absorb(cid, slice(orderA, lo1, hi2));
      } else {
        next[cid].path_p1 = slice(orderA, left, hi1);
        next[cid].path_p2 = slice(orderA, lo1, left);
        next[cid].path_q1 = slice(orderA, lo2, right);
        next[cid].path_q2 = slice(orderA, right, hi2);
        auto nodes = slice(orderA, lo1, hi1);
        auto nb = slice(orderA, lo2, hi2);
        nodes.insert(nodes.end(), nb.begin(), nb.end());
        absorb(cid, nodes);
      }
    }
    next[cid].phase2_edge = sid;
    ++out.phase2;
  }

  // Phase 3: low-diameter residual components attach to an existing cluster.
  for (const auto& comp : forest.components()) {
    if (forest.is_path(comp) && forest.ediam(comp) >= ell) continue;  // phase 4 material
    if (!forest.is_path(comp) && forest.ediam(comp) >= ell)
      anomalies.push_back("unexpected branching residual of ediam >= ell at level " +
                          std::to_string(out.i));
    int best_piece = -1, target = -1;
    for (int v : comp)
      for (int eid : forest.adj[v]) {
        int u = forest.other(eid, v);
        if (forest.alive[u] || new_of_prev[u] < 0) continue;
        if (best_piece < 0 || forest.edges[eid].piece < best_piece) {
          best_piece = forest.edges[eid].piece;
          target = new_of_prev[u];
        }
      }
    if (target < 0) {
      anomalies.push_back("orphan residual component at level " + std::to_string(out.i));
      int cid = start_cluster(Provenance::Base);
      next[cid].undersized = true;
      absorb(cid, comp);
      continue;
    }
    next[target].aug3 = true;
    absorb(target, comp);
    ++out.phase3;
  }

  // Phase 4: break remaining long paths into subpaths of effective diameter
  // in [ell, 2*ell]; affixes with an MST edge to an earlier cluster merge
  // into it, the rest become clusters.
  for (const auto& comp : forest.components()) {
    auto order = forest.path_order(comp);
    double total = 0;
    for (int v : order) total += forest.node_diam[v];
    std::vector<std::pair<int, int>> pieces;
    double cur = 0, used = 0;
    int lo = 0;
    for (int t = 0; t < static_cast<int>(order.size()); ++t) {
      cur += forest.node_diam[order[t]];
      if (cur >= ell && (total - used - cur) >= ell) {
        pieces.emplace_back(lo, t);
        used += cur;
        cur = 0;
        lo = t + 1;
      }
    }
    if (lo < static_cast<int>(order.size()))
      pieces.emplace_back(lo, static_cast<int>(order.size()) - 1);

    int num = static_cast<int>(pieces.size());
    std::vector<int> piece_cluster(num, -1);
    std::vector<bool> merged(num, false);
    std::vector<int> merge_target(num, -1);
    for (int p = 0; p < num; ++p) {
      bool is_affix = (p == 0 || p == num - 1);
      std::vector<int> nodes;
      for (int t = pieces[p].first; t <= pieces[p].second; ++t) nodes.push_back(order[t]);
      if (is_affix) {
        int best_piece = -1, target = -1;
        for (int v : nodes)
          for (int eid : forest.adj[v]) {
            int u = forest.other(eid, v);
            if (forest.alive[u] || new_of_prev[u] < 0) continue;
            if (next[new_of_prev[u]].provenance == Provenance::Phase4) continue;
            if (best_piece < 0 || forest.edges[eid].piece < best_piece) {
              best_piece = forest.edges[eid].piece;
              target = new_of_prev[u];
            }
          }
        if (target >= 0) {
          merged[p] = true;
          merge_target[p] = target;
          next[target].aug4 = true;
          absorb(target, nodes);
          continue;
        }
      }
      int cid = start_cluster(Provenance::Phase4);
      piece_cluster[p] = cid;
      next[cid].p4_affix = is_affix;
      next[cid].p4_internal = !is_affix;
      absorb(cid, nodes);
      ++out.phase4;
    }
    for (int p = 0; p < num; ++p) {
      if (merged[p] || piece_cluster[p] < 0 || !next[piece_cluster[p]].p4_affix) continue;
      int sibling = (p == 0) ? num - 1 : 0;
      if (sibling == p || !merged[sibling]) continue;
      next[piece_cluster[p]].pay_delegate = merge_target[sibling];
    }
  }

  for (int v = 0; v < k; ++v)
    if (forest.alive[v]) {
      anomalies.push_back("cluster " + std::to_string(v) + " left unassigned at level " +
                          std::to_string(out.i));
      int cid = start_cluster(Provenance::Base);
      next[cid].undersized = true;
      absorb(cid, {v});
    }

  // Composition: vertices, internal edges, connectors, credit accounts.
  for (auto& c : next) {
    std::sort(c.members.begin(), c.members.end());
    for (int m : c.members) {
      c.vertices.insert(c.vertices.end(), prev[m].vertices.begin(), prev[m].vertices.end());
      c.internal_edges.insert(c.internal_edges.end(), prev[m].internal_edges.begin(),
                              prev[m].internal_edges.end());
      c.alpha += prev[m].alpha;
      c.beta += prev[m].beta;
    }
    std::sort(c.vertices.begin(), c.vertices.end());
    c.p4_long = c.provenance == Provenance::Phase4 &&
                static_cast<double>(c.members.size()) >= two_g_over_eps + 1.0;
  }
  for (int eid = 0; eid < static_cast<int>(g.edges.size()); ++eid) {
    if (!sp.is_mst_piece(eid) || piece_state[eid] != 0) continue;
    int pa = prev_of_vertex[g.edges[eid].u], pb = prev_of_vertex[g.edges[eid].v];
    int a = new_of_prev[pa], b = new_of_prev[pb];
    if (a >= 0 && a == b) {
      piece_state[eid] = 1;
      next[a].connectors.push_back(eid);
      next[a].internal_edges.push_back(eid);
      next[a].alpha += sp.w0;
    }
  }
  std::vector<int> scratch;
  for (auto& c : next) {
    if (c.phase2_edge >= 0) c.internal_edges.push_back(c.phase2_edge);
    std::sort(c.internal_edges.begin(), c.internal_edges.end());
    c.internal_edges.erase(std::unique(c.internal_edges.begin(), c.internal_edges.end()),
                           c.internal_edges.end());
    c.is_virtual = !c.vertices.empty() && sp.is_virtual(c.vertices.front());
    c.center = c.is_virtual ? -1 : c.vertices.front();
    SubgraphView view(g, c.vertices, c.internal_edges, scratch);
    c.diameter = view.diameter_path(&c.diam_path);
  }
  return next;
}

}  // namespace detail

/// Runs the full level-by-level certification: classification, base
/// clusters, phases, cluster-graph checks, diameter-credit invariants and
/// the payment audit, searching for the least feasible credit constant.
CertReport certify(const Spanner& spanner, const MstSummary& summary, CertConfig cfg);

}  // namespace spanlab

#include "spanlab/certify_impl.hpp"
