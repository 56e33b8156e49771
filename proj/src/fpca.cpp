#include "frfx/fpca.hpp"

#include <algorithm>

namespace frfx {

FpcaModel fit_fpca(const SmoothedCurves& smoothed, int K) {
  const TimeGrid& grid = smoothed.basis.grid;
  const int n = smoothed.n_curves();
  const int t = grid.size();
  const int max_k = std::min(n - 1, smoothed.basis.n_basis);
  if (K < 1 || K > max_k) {
    throw RankError("K=" + std::to_string(K) + " outside [1, min(N-1, S)] = [1, " +
                    std::to_string(max_k) + "]");
  }

  const Eigen::MatrixXd x = smoothed.evaluate();  // N x T
  FpcaModel model;
  model.grid = grid;
  model.mean_curve = x.colwise().mean();

  const Eigen::MatrixXd centered = x.rowwise() - model.mean_curve.transpose();
  const Eigen::VectorXd sqrt_w = grid.quadrature_weights.cwiseSqrt();
  const Eigen::MatrixXd y = centered * sqrt_w.asDiagonal();  // N x T

  // Weighted sample covariance on the grid; its standard eigenvectors map to
  // quadrature-orthonormal eigenfunctions via division by sqrt(w).
  const Eigen::MatrixXd cov = (y.transpose() * y) / static_cast<double>(n - 1);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw RankError("eigendecomposition of the covariance failed");
  }
  model.total_variance = cov.trace();

  model.eigenvalues.resize(K);
  model.eigenfunctions.resize(K, t);
  Eigen::MatrixXd u(t, K);  // columns: sqrt(w)-scaled eigenfunctions
  for (int k = 0; k < K; ++k) {
    const int src = t - 1 - k;  // solver returns ascending order
    model.eigenvalues(k) = std::max(0.0, solver.eigenvalues()(src));
    Eigen::VectorXd uk = solver.eigenvectors().col(src);
    Eigen::VectorXd xi = uk.cwiseQuotient(sqrt_w);
    Eigen::Index arg_max = 0;
    xi.cwiseAbs().maxCoeff(&arg_max);
    if (xi(arg_max) < 0.0) {
      xi = -xi;
      uk = -uk;
    }
    model.eigenfunctions.row(k) = xi.transpose();
    u.col(k) = uk;
  }

  model.scores = y * u;  // N x K

  const Eigen::MatrixXd residual =
      centered - model.scores * model.eigenfunctions;
  model.reconstruction_residual_norm.resize(n);
  for (int i = 0; i < n; ++i) {
    model.reconstruction_residual_norm(i) =
        weighted_norm(grid, residual.row(i).transpose());
  }
  return model;
}

Eigen::MatrixXd project(const FpcaModel& model, const SmoothedCurves& smoothed) {
  if (!smoothed.basis.grid.same_as(model.grid)) {
    throw GridMismatch("curves are sampled on a different grid than the model");
  }
  const Eigen::MatrixXd centered =
      smoothed.evaluate().rowwise() - model.mean_curve.transpose();
  // nu_ik = <x_i - mu, xi_k>_w
  return centered * model.grid.quadrature_weights.asDiagonal() *
         model.eigenfunctions.transpose();
}

Eigen::VectorXd reconstruct(const FpcaModel& model,
                            const Eigen::VectorXd& score_row, int truncate_at) {
  if (truncate_at < 1 || truncate_at > model.n_components()) {
    throw RankError("truncation level outside [1, K]");
  }
  if (score_row.size() != model.n_components()) {
    throw RankError("score row length does not match K");
  }
  return model.mean_curve + model.eigenfunctions.topRows(truncate_at).transpose() *
                                score_row.head(truncate_at);
}

Eigen::VectorXd reconstruct_single(const FpcaModel& model, int k, double score,
                                   bool include_mean) {
  if (k < 0 || k >= model.n_components()) {
    throw RankError("component index outside [0, K)");
  }
  Eigen::VectorXd curve = score * model.eigenfunctions.row(k).transpose();
  if (include_mean) curve += model.mean_curve;
  return curve;
}

Eigen::VectorXd explained_variance(const FpcaModel& model) {
  const double total = model.eigenvalues.sum();
  if (total <= 0.0) {
    throw DegenerateModel("all eigenvalues are zero; no variance to explain");
  }
  return model.eigenvalues / total;
}

}  // namespace frfx
