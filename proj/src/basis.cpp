#include "frfx/basis.hpp"

#include <vector>

namespace frfx {

namespace {

// Index i with knots[i] <= t < knots[i+1], clamped to the valid span range
// [order-1, n_basis-1]; t at the right end of the domain maps to the last span.
int find_span(const Eigen::VectorXd& knots, int n_basis, int order, double t) {
  if (t >= knots(n_basis)) return n_basis - 1;
  if (t <= knots(order - 1)) return order - 1;
  int low = order - 1;
  int high = n_basis;
  int mid = (low + high) / 2;
  while (t < knots(mid) || t >= knots(mid + 1)) {
    if (t < knots(mid)) {
      high = mid;
    } else {
      low = mid;
    }
    mid = (low + high) / 2;
  }
  return mid;
}

// Cox-de Boor, the usual triangular scheme: values of the `order` basis
// functions that are nonzero on the span. Sums to 1 by construction.
void nonzero_basis(const Eigen::VectorXd& knots, int span, double t, int degree,
                   std::vector<double>& out) {
  std::vector<double> left(degree + 1), right(degree + 1);
  out.assign(degree + 1, 0.0);
  out[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[j] = t - knots(span + 1 - j);
    right[j] = knots(span + j) - t;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = out[r] / (right[r + 1] + left[j - r]);
      out[r] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    out[j] = saved;
  }
}

}  // namespace

BasisSystem build_basis(const TimeGrid& grid, int n_basis, int order) {
  if (order < 2) throw InvalidBasisConfig("B-spline order must be at least 2");
  if (n_basis < order) {
    throw InvalidBasisConfig("need n_basis >= order, got n_basis=" +
                             std::to_string(n_basis) + " order=" +
                             std::to_string(order));
  }
  if (grid.size() < order) {
    throw InvalidBasisConfig("grid too short for B-spline order " +
                             std::to_string(order));
  }

  const double lo = grid.points(0);
  const double hi = grid.points(grid.size() - 1);
  const int n_interior = n_basis - order;

  BasisSystem basis;
  basis.grid = grid;
  basis.order = order;
  basis.n_basis = n_basis;
  basis.knots.resize(n_basis + order);
  for (int i = 0; i < order; ++i) {
    basis.knots(i) = lo;
    basis.knots(n_basis + i) = hi;
  }
  for (int i = 1; i <= n_interior; ++i) {
    basis.knots(order - 1 + i) = lo + (hi - lo) * i / (n_interior + 1);
  }

  basis.eval_cache.setZero(n_basis, grid.size());
  const int degree = order - 1;
  std::vector<double> vals;
  for (int j = 0; j < grid.size(); ++j) {
    const double t = grid.points(j);
    const int span = find_span(basis.knots, n_basis, order, t);
    nonzero_basis(basis.knots, span, t, degree, vals);
    for (int r = 0; r <= degree; ++r) {
      basis.eval_cache(span - degree + r, j) = vals[static_cast<std::size_t>(r)];
    }
  }
  return basis;
}

Eigen::VectorXd basis_row(const BasisSystem& basis, double t) {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(basis.n_basis);
  const int degree = basis.order - 1;
  const int span = find_span(basis.knots, basis.n_basis, basis.order, t);
  std::vector<double> vals;
  nonzero_basis(basis.knots, span, t, degree, vals);
  for (int r = 0; r <= degree; ++r) {
    row(span - degree + r) = vals[static_cast<std::size_t>(r)];
  }
  return row;
}

}  // namespace frfx
