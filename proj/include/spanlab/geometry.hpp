#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "spanlab/errors.hpp"

namespace spanlab {

enum class Norm { L1, L2, LInf };

inline const char* norm_name(Norm p) {
  switch (p) {
    case Norm::L1: return "l1";
    case Norm::L2: return "l2";
    case Norm::LInf: return "linf";
  }
  return "?";
}

/// A finite set of points with real coordinates, stored row-major.
struct PointSet {
  int dim = 0;
  std::vector<double> coords;  // size() * dim entries

  int size() const { return dim == 0 ? 0 : static_cast<int>(coords.size()) / dim; }

  std::span<const double> point(int i) const {
    return {coords.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }

  static PointSet create(int dim, std::vector<double> coords) {
    if (dim < 1) throw BadSpec("point dimension must be >= 1");
    if (coords.empty() || coords.size() % static_cast<std::size_t>(dim) != 0)
      throw BadSpec("coordinate count is not a positive multiple of dim");
    for (double c : coords)
      if (!std::isfinite(c)) throw BadSpec("coordinates must be finite");
    return PointSet{dim, std::move(coords)};
  }

  double distance(int a, int b, Norm p) const {
    const double* pa = coords.data() + static_cast<std::size_t>(a) * dim;
    const double* pb = coords.data() + static_cast<std::size_t>(b) * dim;
    switch (p) {
      case Norm::L1: {
        double s = 0;
        for (int k = 0; k < dim; ++k) s += std::abs(pa[k] - pb[k]);
        return s;
      }
      case Norm::L2: {
        double s = 0;
        for (int k = 0; k < dim; ++k) {
          double d = pa[k] - pb[k];
          s += d * d;
        }
        return std::sqrt(s);
      }
      case Norm::LInf: {
        double s = 0;
        for (int k = 0; k < dim; ++k) s = std::max(s, std::abs(pa[k] - pb[k]));
        return s;
      }
    }
    return 0;
  }
};

}  // namespace spanlab
