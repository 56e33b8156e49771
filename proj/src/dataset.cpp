#include "frfx/dataset.hpp"

namespace frfx {

FunctionalDataset FunctionalDataset::make(TimeGrid grid, Eigen::MatrixXd values,
                                          std::vector<int> labels) {
  if (values.cols() != grid.size()) {
    throw GridMismatch("value matrix has " + std::to_string(values.cols()) +
                       " columns but grid has " + std::to_string(grid.size()) +
                       " points");
  }
  if (values.rows() < 1) throw InvalidGrid("dataset needs at least one curve");
  if (!labels.empty()) {
    if (static_cast<Eigen::Index>(labels.size()) != values.rows()) {
      throw InvalidGrid("label count does not match curve count");
    }
    for (int y : labels) {
      if (y != 0 && y != 1) throw InvalidGrid("labels must be 0 or 1");
    }
  }
  FunctionalDataset d;
  d.grid = std::move(grid);
  d.values = std::move(values);
  d.labels = std::move(labels);
  return d;
}

}  // namespace frfx
