#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "frfx/forest.hpp"
#include "frfx/fpca.hpp"

namespace frfx {

struct SmoothingSpec {
  int n_basis = 20;
  int order = 4;
  double penalty = 0.0;
};

/// Everything needed to score and explain new curves: the smoothing recipe,
/// the FPCA decomposition (with training scores) and the trained forest.
struct TrainedModel {
  SmoothingSpec smoothing;
  FpcaModel fpca;
  FunctionalRandomForest forest;
  std::vector<int> train_labels;
};

inline constexpr int kModelSchemaVersion = 1;

/// Versioned JSON on disk. Numbers are written in shortest round-trip form,
/// so a loaded model predicts bit-identically to the saved one.
void save_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel load_model(const std::filesystem::path& path);

nlohmann::json forest_to_json(const FunctionalRandomForest& forest);
FunctionalRandomForest forest_from_json(const nlohmann::json& j);
nlohmann::json tree_to_json(const TreeNode& node);
TreeNode tree_from_json(const nlohmann::json& j);
nlohmann::json fpca_to_json(const FpcaModel& model);
FpcaModel fpca_from_json(const nlohmann::json& j);

}  // namespace frfx
