#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Dense>

#include "frfx/dataset.hpp"
#include "frfx/rng.hpp"

namespace frfx::testing {

inline std::filesystem::path data_dir() { return FRFX_DATA_DIR; }

inline std::filesystem::path train_fixture() {
  return data_dir() / "synth_ecg_TRAIN.txt";
}

inline std::filesystem::path test_fixture() {
  return data_dir() / "synth_ecg_TEST.txt";
}

/// Fresh scratch directory under the build tree's temp area.
inline std::filesystem::path scratch_dir(const std::string& tag) {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("frfx_" + tag + "_" + std::to_string(++counter));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Small separable score set: two Gaussian blobs split along feature 0.
inline std::pair<Eigen::MatrixXd, std::vector<int>> separable_scores(
    int n_per_class, int n_features, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd scores(2 * n_per_class, n_features);
  std::vector<int> labels;
  for (int i = 0; i < 2 * n_per_class; ++i) {
    const int y = i < n_per_class ? 0 : 1;
    labels.push_back(y);
    for (int k = 0; k < n_features; ++k) {
      scores(i, k) = 0.3 * rng.normal();
    }
    scores(i, 0) += y == 0 ? -2.0 : 2.0;
  }
  return {scores, labels};
}

}  // namespace frfx::testing
