#pragma once

#include <optional>

#include <Eigen/Dense>

#include "frfx/grid.hpp"

namespace frfx {

/// Normalized weighted L2 distance between two curves on the same grid:
/// sqrt( integral |x1-x2|^2 w dt / integral w dt ), trapezoidal quadrature.
/// With no weight function, w = 1 and the normalizer is the domain length.
double l2_distance(const TimeGrid& grid, const Eigen::VectorXd& x1,
                   const Eigen::VectorXd& x2,
                   const std::optional<Eigen::VectorXd>& weight = std::nullopt);

}  // namespace frfx
