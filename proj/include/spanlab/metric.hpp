#pragma once

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "spanlab/errors.hpp"
#include "spanlab/geometry.hpp"

namespace spanlab {

inline constexpr double kMetricTol = 1e-9;  // relative tolerance for metric validation

/// A finite metric space: either an Lp metric over a point set or an
/// explicit validated distance matrix.
class MetricSpace {
 public:
  enum class Kind { Points, Matrix };

  static MetricSpace from_points(PointSet pts, Norm p) {
    MetricSpace m;
    m.kind_ = Kind::Points;
    m.n_ = pts.size();
    m.norm_ = p;
    m.points_ = std::make_shared<PointSet>(std::move(pts));
    return m;
  }

  /// Validates symmetry, zero diagonal, positivity and the triangle
  /// inequality (relative tolerance 1e-9) before accepting the matrix.
  static MetricSpace from_matrix(std::vector<double> flat, int n) {
    if (n < 1 || flat.size() != static_cast<std::size_t>(n) * n)
      throw BadSpec("matrix must be square with size >= 1");
    for (int i = 0; i < n; ++i) {
      double d = flat[static_cast<std::size_t>(i) * n + i];
      if (d != 0.0) throw NonpositiveDistance(i, i, d);
    }
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        double a = flat[static_cast<std::size_t>(i) * n + j];
        double b = flat[static_cast<std::size_t>(j) * n + i];
        if (!std::isfinite(a) || a <= 0.0) throw NonpositiveDistance(i, j, a);
        if (!std::isfinite(b) || b <= 0.0) throw NonpositiveDistance(j, i, b);
        if (std::abs(a - b) > kMetricTol * std::max(std::abs(a), std::abs(b)))
          throw AsymmetricMatrix(i, j, a, b);
      }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        if (i == j) continue;
        double dij = flat[static_cast<std::size_t>(i) * n + j];
        for (int k = i + 1; k < n; ++k) {
          if (k == j) continue;
          double dik = flat[static_cast<std::size_t>(i) * n + k];
          double djk = flat[static_cast<std::size_t>(j) * n + k];
          if (dik > (dij + djk) * (1.0 + kMetricTol))
            throw TriangleViolation(i, j, k, dik, dij, djk);
        }
      }
    MetricSpace m;
    m.kind_ = Kind::Matrix;
    m.n_ = n;
    m.matrix_ = std::make_shared<std::vector<double>>(std::move(flat));
    return m;
  }

  Kind kind() const { return kind_; }
  int size() const { return n_; }
  Norm norm() const { return norm_; }

  /// Ambient dimension for point metrics, 0 for explicit matrices.
  int ambient_dim() const { return kind_ == Kind::Points ? points_->dim : 0; }

  const PointSet* points() const { return kind_ == Kind::Points ? points_.get() : nullptr; }

  double distance(int a, int b) const {
    if (a == b) return 0.0;
    if (kind_ == Kind::Points) return points_->distance(a, b, norm_);
    return (*matrix_)[static_cast<std::size_t>(a) * n_ + b];
  }

 private:
  Kind kind_ = Kind::Points;
  int n_ = 0;
  Norm norm_ = Norm::L2;
  std::shared_ptr<PointSet> points_;
  std::shared_ptr<std::vector<double>> matrix_;
};

/// Accepts a square matrix as a metric iff symmetry, positivity and the
/// triangle inequality all hold; throws with a witness otherwise.
inline MetricSpace validate_metric(const std::vector<std::vector<double>>& matrix) {
  int n = static_cast<int>(matrix.size());
  if (n < 1) throw BadSpec("matrix must have size >= 1");
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : matrix) {
    if (static_cast<int>(row.size()) != n) throw BadSpec("matrix is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return MetricSpace::from_matrix(std::move(flat), n);
}

}  // namespace spanlab
