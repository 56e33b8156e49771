#include "frfx/smoothing.hpp"

namespace frfx {

Eigen::MatrixXd SmoothedCurves::evaluate() const {
  return coefficients * basis.eval_cache;
}

Eigen::VectorXd SmoothedCurves::evaluate_row(int i) const {
  return (coefficients.row(i) * basis.eval_cache).transpose();
}

SmoothedCurves smooth(const FunctionalDataset& dataset,
                      const BasisSystem& basis, double penalty) {
  if (!dataset.grid.same_as(basis.grid)) {
    throw GridMismatch("dataset grid differs from basis grid");
  }
  if (penalty < 0.0) throw InvalidConfig("smoothing penalty must be >= 0");

  const int s = basis.n_basis;
  const Eigen::MatrixXd& phi = basis.eval_cache;  // S x T

  Eigen::MatrixXd normal = phi * phi.transpose();  // S x S
  if (penalty > 0.0) {
    Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(s - 2, s);
    for (int r = 0; r + 2 < s; ++r) {
      d2(r, r) = 1.0;
      d2(r, r + 1) = -2.0;
      d2(r, r + 2) = 1.0;
    }
    normal += penalty * (d2.transpose() * d2);
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(normal);
  if (qr.rank() < s) {
    throw SingularFit("normal equations are rank deficient (" +
                      std::to_string(qr.rank()) + " < " + std::to_string(s) +
                      "); fewer grid points than basis functions?");
  }

  const Eigen::MatrixXd rhs = phi * dataset.values.transpose();  // S x N
  SmoothedCurves out;
  out.basis = basis;
  out.coefficients = qr.solve(rhs).transpose();  // N x S
  return out;
}

}  // namespace frfx
