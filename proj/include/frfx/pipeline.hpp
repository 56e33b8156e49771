#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "frfx/explain.hpp"
#include "frfx/model_io.hpp"

namespace frfx {

/// Full run configuration, mirrored by the CLI flags.
struct RunConfig {
  std::string train_path;
  std::string test_path;
  std::string out_dir;
  SmoothingSpec smoothing;
  int n_components = 15;
  ForestConfig forest;
  int pdp_grid = 50;        // G
  int heatmap_grid = 50;    // M_grid
  int permutation_repeats = 10;
  int n_windows = 4;
  PdpScale scale = PdpScale::probability;
  double prune_alpha = 0.01;  // for the illustrative single pruned tree
  std::string anova_set = "train";  // or "test"
  std::uint64_t seed = 0;

  void validate() const;
};

struct PipelineSummary {
  int n_train = 0;
  int n_test = 0;
  double test_accuracy = 0.0;
  double oob_error_rate = 0.0;
  Eigen::VectorXd explained_fractions;
  std::vector<std::filesystem::path> files;
};

/// Load -> smooth -> FPCA -> forest -> every explainability artifact,
/// exported as CSV + JSON + SVG into out_dir. Fully deterministic under a
/// fixed seed, independent of FRFX_THREADS.
PipelineSummary run_pipeline(const RunConfig& config);

/// Shared by the pipeline and the `train` subcommand.
TrainedModel train_model(const FunctionalDataset& train, const RunConfig& config);

}  // namespace frfx
