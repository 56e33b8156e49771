#pragma once

#include <cstdint>
#include <vector>

#include "frfx/rng.hpp"
#include "frfx/tree.hpp"

namespace frfx {

enum class ProbabilityMode {
  vote_fraction,  // fraction of trees voting class 1 (default)
  leaf_average,   // mean of per-leaf class-1 fractions
};

struct ForestConfig {
  int n_trees = 500;
  int mtry = 0;  // 0 = floor(sqrt(K))
  Criterion criterion = Criterion::gini;
  int min_node_size = 1;  // nodes at or below this size become leaves
  int max_depth = 0;      // 0 = unbounded
  bool bootstrap = true;
  std::uint64_t seed = 0;
  ProbabilityMode probability = ProbabilityMode::vote_fraction;
};

/// The conventional mtry heuristic, floor(sqrt(K)), never below 1.
int default_mtry(int n_features);

struct FunctionalRandomForest {
  ForestConfig config;
  int n_features = 0;
  std::vector<TreeNode> trees;
  /// Sampled row indices per tree, in draw order; empty when bootstrap off.
  std::vector<std::vector<int>> bootstrap_indices;
};

/// Out-of-bag evaluation summary.
struct OobReport {
  double oob_error_rate = 0.0;  // over covered observations
  /// Fraction of OOB trees voting class 1 per observation; NaN if uncovered.
  std::vector<double> vote_fraction;
  double coverage = 0.0;  // fraction of observations with >= 1 OOB vote
};

/// Recursive growth on the given sample; at every split attempt a fresh
/// candidate set of `mtry` features is drawn without replacement from the
/// stream. Identical (data, config, stream) input yields an identical tree.
TreeNode grow_tree(const Eigen::MatrixXd& scores, const std::vector<int>& labels,
                   const std::vector<int>& rows, const ForestConfig& config,
                   Rng& rng);

/// Growth on the full sample (rows 0..N-1).
TreeNode grow_tree(const Eigen::MatrixXd& scores, const std::vector<int>& labels,
                   const ForestConfig& config, Rng& rng);

/// M trees on bootstrap resamples (or the full sample when bootstrap is off).
/// Tree i consumes the stream derived from (seed, i), so training is
/// reproducible for any worker count; FRFX_THREADS caps the workers.
FunctionalRandomForest fit_forest(const Eigen::MatrixXd& scores,
                                  const std::vector<int>& labels,
                                  const ForestConfig& config);

/// Mode of the per-tree votes; a tie is class 0.
int predict_label(const FunctionalRandomForest& forest,
                  const Eigen::VectorXd& score_row);

/// Class-1 probability per the forest's probability mode. In the default
/// vote-fraction mode, predict_label(x) == 1 iff predict_proba(x) > 0.5.
double predict_proba(const FunctionalRandomForest& forest,
                     const Eigen::VectorXd& score_row);

std::vector<int> predict_labels(const FunctionalRandomForest& forest,
                                const Eigen::MatrixXd& scores);

/// Each observation is voted on only by trees whose bag misses it.
OobReport oob_evaluate(const FunctionalRandomForest& forest,
                       const Eigen::MatrixXd& scores,
                       const std::vector<int>& labels);

/// Worker cap shared by everything that parallelizes: min(FRFX_THREADS,
/// hardware concurrency), at least 1.
int worker_thread_count();

}  // namespace frfx
