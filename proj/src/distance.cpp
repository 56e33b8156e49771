#include "frfx/distance.hpp"

namespace frfx {

double l2_distance(const TimeGrid& grid, const Eigen::VectorXd& x1,
                   const Eigen::VectorXd& x2,
                   const std::optional<Eigen::VectorXd>& weight) {
  if (x1.size() != grid.size() || x2.size() != grid.size()) {
    throw GridMismatch("curve length does not match grid");
  }
  Eigen::VectorXd w = grid.quadrature_weights;
  if (weight) {
    if (weight->size() != grid.size()) {
      throw GridMismatch("weight length does not match grid");
    }
    if ((weight->array() <= 0.0).any()) {
      throw NonpositiveWeight("weight function must be strictly positive");
    }
    w = w.cwiseProduct(*weight);
  }
  const Eigen::ArrayXd diff = (x1 - x2).array();
  return std::sqrt((w.array() * diff.square()).sum() / w.sum());
}

}  // namespace frfx
