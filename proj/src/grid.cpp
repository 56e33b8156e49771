#include "frfx/grid.hpp"

namespace frfx {

namespace {

Eigen::VectorXd trapezoid_weights(const Eigen::VectorXd& pts) {
  const auto n = pts.size();
  Eigen::VectorXd w(n);
  w(0) = 0.5 * (pts(1) - pts(0));
  for (Eigen::Index j = 1; j + 1 < n; ++j) {
    w(j) = 0.5 * (pts(j + 1) - pts(j - 1));
  }
  w(n - 1) = 0.5 * (pts(n - 1) - pts(n - 2));
  return w;
}

}  // namespace

TimeGrid TimeGrid::uniform(double lo, double hi, int n) {
  if (n < 4) throw InvalidGrid("time grid needs at least 4 points");
  if (!(hi > lo)) throw InvalidGrid("time grid needs hi > lo");
  Eigen::VectorXd pts(n);
  for (int j = 0; j < n; ++j) {
    pts(j) = lo + (hi - lo) * static_cast<double>(j) / (n - 1);
  }
  pts(n - 1) = hi;
  return from_points(std::move(pts));
}

TimeGrid TimeGrid::from_points(Eigen::VectorXd pts) {
  if (pts.size() < 4) throw InvalidGrid("time grid needs at least 4 points");
  for (Eigen::Index j = 1; j < pts.size(); ++j) {
    if (!(pts(j) > pts(j - 1))) {
      throw InvalidGrid("time grid points must be strictly increasing");
    }
  }
  TimeGrid grid;
  grid.quadrature_weights = trapezoid_weights(pts);
  grid.points = std::move(pts);
  return grid;
}

bool TimeGrid::same_as(const TimeGrid& other) const {
  return points.size() == other.points.size() && points == other.points;
}

double weighted_inner(const TimeGrid& grid, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y) {
  if (x.size() != grid.size() || y.size() != grid.size()) {
    throw GridMismatch("curve length does not match grid");
  }
  return (grid.quadrature_weights.array() * x.array() * y.array()).sum();
}

double weighted_norm(const TimeGrid& grid, const Eigen::VectorXd& x) {
  return std::sqrt(weighted_inner(grid, x, x));
}

}  // namespace frfx
