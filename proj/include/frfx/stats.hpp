#pragma once

#include <vector>

#include <Eigen/Dense>

#include "frfx/errors.hpp"

namespace frfx {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation. Accurate to ~1e-12 for moderate a, b.
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail P(F(df1, df2) >= f).
double f_distribution_sf(double f, double df1, double df2);

struct AnovaResult {
  double f = 0.0;
  double p_value = 1.0;
  double eta_squared = 0.0;
  bool infinite_f = false;  // MS_error was zero with a nonzero group effect
  double ss_model = 0.0;
  double ss_error = 0.0;
  double ss_total = 0.0;  // computed independently, not as model + error
};

/// One-way two-group ANOVA of a single column against binary labels.
/// df_model = 1, df_error = N - 2; requires both groups nonempty and N >= 3.
AnovaResult anova_two_group(const Eigen::VectorXd& values,
                            const std::vector<int>& labels);

/// Column-wise ANOVA of a score matrix, one result per FPC.
std::vector<AnovaResult> anova_fpc(const Eigen::MatrixXd& scores,
                                   const std::vector<int>& labels);

/// Quantile with the linear-interpolation convention h = (n-1)p ("type 7").
double quantile_linear(std::vector<double> sample, double p);

/// Silverman's rule of thumb, 0.9 min(sd, IQR/1.34) n^(-1/5); falls back to
/// a small positive width for degenerate samples.
double silverman_bandwidth(const std::vector<double>& sample);

struct KernelDensity {
  Eigen::VectorXd grid;
  Eigen::VectorXd density;
  double bandwidth = 0.0;
};

/// Gaussian KDE on an equispaced grid spanning the sample plus 4 bandwidths
/// of padding on both sides, so the trapezoid integral is ~1.
KernelDensity gaussian_kde(const std::vector<double>& sample, int grid_size = 128);

}  // namespace frfx
