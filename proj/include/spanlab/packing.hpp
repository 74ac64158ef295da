#pragma once

#include <cmath>
#include <vector>

#include "spanlab/errors.hpp"
#include "spanlab/metric.hpp"

namespace spanlab {

struct PackingResult {
  int count = 0;
  double bound = 0.0;
  bool pass = false;
};

/// Checks the doubling-metric packing bound |X| <= (4R/r)^d for a point
/// subset contained in the radius-R ball around `center` with pairwise
/// separation > r. Precondition failures throw; the bound itself is
/// reported, never thrown.
inline PackingResult packing_test(const MetricSpace& m, const std::vector<int>& subset, int center,
                                  double R, double r, int d) {
  if (center < 0 || center >= m.size()) throw InvalidVertex(center);
  if (!(R > 0.0) || !(r > 0.0)) throw BadSpec("R and r must be positive");
  if (d < 1) throw BadSpec("dimension must be >= 1");
  for (int p : subset) {
    if (p < 0 || p >= m.size()) throw InvalidVertex(p);
    double dist = m.distance(center, p);
    if (dist > R) throw NotInBall(p, dist, R);
  }
  for (std::size_t a = 0; a < subset.size(); ++a)
    for (std::size_t b = a + 1; b < subset.size(); ++b) {
      double dist = m.distance(subset[a], subset[b]);
      if (!(dist > r)) throw PairTooClose(subset[a], subset[b], dist, r);
    }
  PackingResult res;
  res.count = static_cast<int>(subset.size());
  res.bound = std::pow(4.0 * R / r, d);
  res.pass = res.count <= res.bound;
  return res;
}

}  // namespace spanlab
