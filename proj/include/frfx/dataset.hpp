#pragma once

#include <vector>

#include <Eigen/Dense>

#include "frfx/grid.hpp"

namespace frfx {

/// Raw discrete observations: one row per curve, sampled on a shared grid.
/// Labels are optional (empty vector) and binary {0, 1} when present.
struct FunctionalDataset {
  TimeGrid grid;
  Eigen::MatrixXd values;  // N x T
  std::vector<int> labels;

  static FunctionalDataset make(TimeGrid grid, Eigen::MatrixXd values,
                                std::vector<int> labels = {});

  int n_curves() const { return static_cast<int>(values.rows()); }
  int n_points() const { return static_cast<int>(values.cols()); }
  bool has_labels() const { return !labels.empty(); }
};

}  // namespace frfx
