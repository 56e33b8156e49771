#pragma once

#include <Eigen/Dense>

#include "frfx/errors.hpp"

namespace frfx {

/// Discrete sampling of the curve domain together with the trapezoidal
/// quadrature weights used for every inner product in the library.
struct TimeGrid {
  Eigen::VectorXd points;
  Eigen::VectorXd quadrature_weights;

  static TimeGrid uniform(double lo, double hi, int n);
  static TimeGrid from_points(Eigen::VectorXd pts);

  int size() const { return static_cast<int>(points.size()); }
  double domain_length() const {
    return points(points.size() - 1) - points(0);
  }
  bool same_as(const TimeGrid& other) const;
};

/// Quadrature inner product <x, y>_w = sum_j w_j x(t_j) y(t_j).
double weighted_inner(const TimeGrid& grid, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& y);
double weighted_norm(const TimeGrid& grid, const Eigen::VectorXd& x);

}  // namespace frfx
