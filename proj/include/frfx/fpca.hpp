#pragma once

#include <Eigen/Dense>

#include "frfx/smoothing.hpp"

namespace frfx {

/// Functional PCA of a set of smoothed curves, everything sampled on the
/// grid. Eigenfunctions are orthonormal under the grid's quadrature inner
/// product and sign-normalized so the grid entry of largest magnitude is
/// positive. Score column k has mean zero and sample variance lambda_k.
struct FpcaModel {
  TimeGrid grid;
  Eigen::VectorXd mean_curve;      // T
  Eigen::MatrixXd eigenfunctions;  // K x T
  Eigen::VectorXd eigenvalues;     // K, nonincreasing, >= 0
  Eigen::MatrixXd scores;          // N x K (training scores)
  double total_variance = 0.0;     // trace of the weighted covariance
  Eigen::VectorXd reconstruction_residual_norm;  // per training curve, at full K

  int n_components() const { return static_cast<int>(eigenvalues.size()); }
};

/// Eigendecomposition of the quadrature-weighted sample covariance of the
/// mean-centered curves. K must satisfy 1 <= K <= min(N-1, n_basis).
FpcaModel fit_fpca(const SmoothedCurves& smoothed, int K);

/// Scores of new curves in an already-fitted model: centered quadrature
/// inner products with the training eigenfunctions. Grids must match.
Eigen::MatrixXd project(const FpcaModel& model, const SmoothedCurves& smoothed);

/// mu(t) + sum_{k < truncate_at} score_k * xi_k(t).
Eigen::VectorXd reconstruct(const FpcaModel& model,
                            const Eigen::VectorXd& score_row, int truncate_at);

/// Contribution of a single component: score * xi_k(t), optionally around
/// the mean. k is 0-based.
Eigen::VectorXd reconstruct_single(const FpcaModel& model, int k, double score,
                                   bool include_mean);

/// lambda_k / sum(lambda); sums to 1 over the K fitted components.
Eigen::VectorXd explained_variance(const FpcaModel& model);

}  // namespace frfx
