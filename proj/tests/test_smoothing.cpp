#include <doctest.h>

#include "frfx/smoothing.hpp"
#include "helpers.hpp"

using namespace frfx;

TEST_CASE("constant curves are reproduced exactly by the spline span") {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 60);
  const BasisSystem basis = build_basis(grid, 8, 4);
  const FunctionalDataset data = FunctionalDataset::make(
      grid, Eigen::MatrixXd::Constant(3, grid.size(), 5.0));
  const SmoothedCurves fit = smooth(data, basis, 0.0);
  const Eigen::MatrixXd values = fit.evaluate();
  CHECK((values.array() - 5.0).abs().maxCoeff() < 1e-8);
}

TEST_CASE("S = T with zero penalty interpolates; matches a direct solve") {
  const int t = 12;
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, t);
  const BasisSystem basis = build_basis(grid, t, 4);

  Rng rng(7);
  Eigen::MatrixXd values(2, t);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < t; ++j) values(i, j) = rng.normal();
  }
  const FunctionalDataset data = FunctionalDataset::make(grid, values);
  const SmoothedCurves fit = smooth(data, basis, 0.0);
  CHECK((fit.evaluate() - values).cwiseAbs().maxCoeff() < 1e-6);

  // oracle: solve the square collocation system directly per curve
  const Eigen::MatrixXd design = basis.eval_cache.transpose();  // T x S
  for (int i = 0; i < 2; ++i) {
    const Eigen::VectorXd direct =
        design.fullPivLu().solve(values.row(i).transpose());
    CHECK((fit.coefficients.row(i).transpose() - direct).cwiseAbs().maxCoeff() <
          1e-6);
  }
}

TEST_CASE("residual is monotone nondecreasing in the penalty") {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 80);
  const BasisSystem basis = build_basis(grid, 20, 4);
  Rng rng(11);
  Eigen::MatrixXd values(1, grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    values(0, j) = std::sin(8.0 * grid.points(j)) + 0.2 * rng.normal();
  }
  const FunctionalDataset data = FunctionalDataset::make(grid, values);

  double previous = -1.0;
  for (double penalty : {0.0, 1.0, 1000.0}) {
    const SmoothedCurves fit = smooth(data, basis, penalty);
    const double residual = (fit.evaluate() - values).norm();
    CHECK(residual >= previous);
    previous = residual;
  }

  // a huge penalty drives the fit toward a straight line: second differences
  // of the coefficients shrink to nothing
  const SmoothedCurves stiff = smooth(data, basis, 1e9);
  double max_dd = 0.0;
  for (int s = 0; s + 2 < basis.n_basis; ++s) {
    max_dd = std::max(max_dd, std::abs(stiff.coefficients(0, s) -
                                       2.0 * stiff.coefficients(0, s + 1) +
                                       stiff.coefficients(0, s + 2)));
  }
  CHECK(max_dd < 1e-6);
}

TEST_CASE("too many basis functions for the grid is a singular fit") {
  const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 6);
  const BasisSystem basis = build_basis(grid, 10, 4);
  const FunctionalDataset data = FunctionalDataset::make(
      grid, Eigen::MatrixXd::Random(2, grid.size()));
  CHECK_THROWS_AS(smooth(data, basis, 0.0), SingularFit);
}

TEST_CASE("smoothing rejects a mismatched grid") {
  const TimeGrid grid_a = TimeGrid::uniform(0.0, 1.0, 30);
  const TimeGrid grid_b = TimeGrid::uniform(0.0, 2.0, 30);
  const BasisSystem basis = build_basis(grid_b, 8, 4);
  const FunctionalDataset data = FunctionalDataset::make(
      grid_a, Eigen::MatrixXd::Zero(1, grid_a.size()));
  CHECK_THROWS_AS(smooth(data, basis, 0.0), GridMismatch);
}
