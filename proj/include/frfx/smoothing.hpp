#pragma once

#include <Eigen/Dense>

#include "frfx/basis.hpp"
#include "frfx/dataset.hpp"

namespace frfx {

/// Curves expressed as basis coefficients, one row per curve.
struct SmoothedCurves {
  BasisSystem basis;
  Eigen::MatrixXd coefficients;  // N x S

  int n_curves() const { return static_cast<int>(coefficients.rows()); }

  /// Curve values on the basis grid (N x T).
  Eigen::MatrixXd evaluate() const;
  Eigen::VectorXd evaluate_row(int i) const;
};

/// Penalized least-squares fit of every curve onto the basis. The penalty
/// acts on second differences of the coefficient vector; penalty 0 is a
/// plain least-squares fit. Throws SingularFit when the normal equations
/// are rank deficient (too few points for the requested basis).
SmoothedCurves smooth(const FunctionalDataset& dataset,
                      const BasisSystem& basis, double penalty);

}  // namespace frfx
