#pragma once

#include <Eigen/Dense>

#include "frfx/grid.hpp"

namespace frfx {

/// Clamped B-spline basis on a grid. `order` is polynomial degree + 1
/// (order 4 = cubic). Knots are uniform over the grid span; the evaluation
/// of every basis function at every grid point is cached on construction.
struct BasisSystem {
  TimeGrid grid;
  int order = 0;
  int n_basis = 0;
  Eigen::VectorXd knots;       // clamped, size n_basis + order
  Eigen::MatrixXd eval_cache;  // n_basis x T
};

BasisSystem build_basis(const TimeGrid& grid, int n_basis, int order);

/// All n_basis values at an arbitrary point of the domain.
Eigen::VectorXd basis_row(const BasisSystem& basis, double t);

}  // namespace frfx
