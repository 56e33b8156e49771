#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "frfx/errors.hpp"

namespace frfx {

enum class Criterion { gini, entropy };

/// Binary rule on one FPC score: observations with score <= threshold go left.
struct SplitRule {
  int fpc_index = 0;  // 0-based
  double threshold = 0.0;
};

/// Node of a classification tree over score features. A node is internal
/// iff both children are set. Class counts are kept on every node so that
/// pruning and importance bookkeeping need no second pass over the data.
struct TreeNode {
  std::unique_ptr<TreeNode> left;
  std::unique_ptr<TreeNode> right;
  SplitRule rule{};        // meaningful for internal nodes
  double decrease = 0.0;   // node-local impurity decrease of the split
  std::array<std::int64_t, 2> class_counts{0, 0};

  bool is_leaf() const { return !left; }
  std::int64_t n() const { return class_counts[0] + class_counts[1]; }
  /// argmax of counts; ties go to class 0.
  int predicted_class() const {
    return class_counts[1] > class_counts[0] ? 1 : 0;
  }
  double class1_fraction() const {
    return static_cast<double>(class_counts[1]) / static_cast<double>(n());
  }
  TreeNode clone() const;
};

/// Gini (1 - sum p^2) or Shannon entropy (-sum p log2 p, 0 log 0 = 0).
double impurity(const std::array<std::int64_t, 2>& class_counts,
                Criterion criterion);

struct SplitCandidate {
  SplitRule rule;
  double decrease = 0.0;  // parent impurity minus weighted child impurity
};

/// Exhaustive scan over the candidate features and the midpoints between
/// consecutive distinct sorted score values of the node's rows. Ties break
/// toward the lowest feature index, then the lowest threshold. Returns
/// nullopt when no split reduces impurity.
std::optional<SplitCandidate> best_split(
    const Eigen::MatrixXd& scores, const std::vector<int>& labels,
    const std::vector<int>& rows, const std::vector<int>& candidate_fpcs,
    Criterion criterion);

/// Weakest-link cost-complexity pruning on a copy of the tree: repeatedly
/// collapses the internal node whose per-leaf decrease in weighted impurity
/// is smallest, while that value stays below alpha.
TreeNode prune_tree(const TreeNode& tree, double complexity_alpha,
                    Criterion criterion = Criterion::gini);

int tree_predict(const TreeNode& tree, const Eigen::VectorXd& score_row);
double tree_class1_fraction(const TreeNode& tree,
                            const Eigen::VectorXd& score_row);

int leaf_count(const TreeNode& tree);
int tree_depth(const TreeNode& tree);

/// Sum of recorded impurity decreases for splits on each feature; weighted
/// multiplies each split by its node sample fraction n_node / n_root.
std::vector<double> tree_split_decreases(const TreeNode& tree, int n_features,
                                         bool weighted);

}  // namespace frfx
