#include "frfx/tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace frfx {

namespace {

constexpr double kMinDecrease = 1e-12;  // guards against fp noise "improvements"

struct PruneInfo {
  double risk_as_leaf = 0.0;   // weighted impurity if collapsed
  double risk_subtree = 0.0;   // sum of weighted leaf impurities below
  int leaves = 1;
};

PruneInfo prune_info(const TreeNode& node, double n_root, Criterion criterion) {
  PruneInfo info;
  info.risk_as_leaf =
      impurity(node.class_counts, criterion) * static_cast<double>(node.n()) / n_root;
  if (node.is_leaf()) {
    info.risk_subtree = info.risk_as_leaf;
    return info;
  }
  const PruneInfo l = prune_info(*node.left, n_root, criterion);
  const PruneInfo r = prune_info(*node.right, n_root, criterion);
  info.risk_subtree = l.risk_subtree + r.risk_subtree;
  info.leaves = l.leaves + r.leaves;
  return info;
}

// Weakest link in preorder: first strictly smaller g wins on ties.
void find_weakest(TreeNode& node, double n_root, Criterion criterion,
                  TreeNode*& weakest, double& weakest_g) {
  if (node.is_leaf()) return;
  const PruneInfo info = prune_info(node, n_root, criterion);
  const double g = (info.risk_as_leaf - info.risk_subtree) /
                   static_cast<double>(info.leaves - 1);
  if (g < weakest_g) {
    weakest_g = g;
    weakest = &node;
  }
  find_weakest(*node.left, n_root, criterion, weakest, weakest_g);
  find_weakest(*node.right, n_root, criterion, weakest, weakest_g);
}

}  // namespace

TreeNode TreeNode::clone() const {
  TreeNode copy;
  copy.rule = rule;
  copy.decrease = decrease;
  copy.class_counts = class_counts;
  if (left) copy.left = std::make_unique<TreeNode>(left->clone());
  if (right) copy.right = std::make_unique<TreeNode>(right->clone());
  return copy;
}

double impurity(const std::array<std::int64_t, 2>& class_counts,
                Criterion criterion) {
  const std::int64_t total = class_counts[0] + class_counts[1];
  if (total <= 0) throw EmptyNode("impurity of an empty node is undefined");
  const double p0 = static_cast<double>(class_counts[0]) / total;
  const double p1 = static_cast<double>(class_counts[1]) / total;
  if (criterion == Criterion::gini) {
    return 1.0 - (p0 * p0 + p1 * p1);
  }
  double h = 0.0;
  if (p0 > 0.0) h -= p0 * std::log2(p0);
  if (p1 > 0.0) h -= p1 * std::log2(p1);
  return h;
}

std::optional<SplitCandidate> best_split(
    const Eigen::MatrixXd& scores, const std::vector<int>& labels,
    const std::vector<int>& rows, const std::vector<int>& candidate_fpcs,
    Criterion criterion) {
  const std::size_t n = rows.size();
  if (n < 2) return std::nullopt;

  std::array<std::int64_t, 2> parent_counts{0, 0};
  for (int r : rows) parent_counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(r)])]++;
  if (parent_counts[0] == 0 || parent_counts[1] == 0) return std::nullopt;
  const double parent_impurity = impurity(parent_counts, criterion);

  std::optional<SplitCandidate> best;
  std::vector<std::pair<double, int>> column(n);  // (score, label)

  std::vector<int> features = candidate_fpcs;
  std::sort(features.begin(), features.end());  // tie-break needs this order
  for (int k : features) {
    for (std::size_t i = 0; i < n; ++i) {
      const int r = rows[i];
      column[i] = {scores(r, k), labels[static_cast<std::size_t>(r)]};
    }
    std::sort(column.begin(), column.end());

    std::array<std::int64_t, 2> left_counts{0, 0};
    for (std::size_t i = 0; i + 1 < n; ++i) {
      left_counts[static_cast<std::size_t>(column[i].second)]++;
      if (column[i].first == column[i + 1].first) continue;  // no boundary
      const std::array<std::int64_t, 2> right_counts{
          parent_counts[0] - left_counts[0], parent_counts[1] - left_counts[1]};
      const auto n_left = static_cast<double>(i + 1);
      const auto n_right = static_cast<double>(n - i - 1);
      const double child_impurity =
          (n_left * impurity(left_counts, criterion) +
           n_right * impurity(right_counts, criterion)) /
          static_cast<double>(n);
      const double decrease = parent_impurity - child_impurity;
      if (decrease > kMinDecrease && (!best || decrease > best->decrease)) {
        // Scanning thresholds ascending within each k and features ascending
        // makes "first strictly better wins" implement the tie-break.
        best = SplitCandidate{
            {k, 0.5 * (column[i].first + column[i + 1].first)}, decrease};
      }
    }
  }
  return best;
}

TreeNode prune_tree(const TreeNode& tree, double complexity_alpha,
                    Criterion criterion) {
  TreeNode pruned = tree.clone();
  const auto n_root = static_cast<double>(pruned.n());
  while (!pruned.is_leaf()) {
    TreeNode* weakest = nullptr;
    double weakest_g = std::numeric_limits<double>::infinity();
    find_weakest(pruned, n_root, criterion, weakest, weakest_g);
    if (!weakest || !(weakest_g < complexity_alpha)) break;
    weakest->left.reset();
    weakest->right.reset();
    weakest->decrease = 0.0;
  }
  return pruned;
}

int tree_predict(const TreeNode& tree, const Eigen::VectorXd& score_row) {
  const TreeNode* node = &tree;
  while (!node->is_leaf()) {
    node = score_row(node->rule.fpc_index) <= node->rule.threshold
               ? node->left.get()
               : node->right.get();
  }
  return node->predicted_class();
}

double tree_class1_fraction(const TreeNode& tree,
                            const Eigen::VectorXd& score_row) {
  const TreeNode* node = &tree;
  while (!node->is_leaf()) {
    node = score_row(node->rule.fpc_index) <= node->rule.threshold
               ? node->left.get()
               : node->right.get();
  }
  return node->class1_fraction();
}

int leaf_count(const TreeNode& tree) {
  if (tree.is_leaf()) return 1;
  return leaf_count(*tree.left) + leaf_count(*tree.right);
}

int tree_depth(const TreeNode& tree) {
  if (tree.is_leaf()) return 0;
  return 1 + std::max(tree_depth(*tree.left), tree_depth(*tree.right));
}

namespace {
void accumulate_decreases(const TreeNode& node, double n_root, bool weighted,
                          std::vector<double>& out) {
  if (node.is_leaf()) return;
  const double scale = weighted ? static_cast<double>(node.n()) / n_root : 1.0;
  out[static_cast<std::size_t>(node.rule.fpc_index)] += scale * node.decrease;
  accumulate_decreases(*node.left, n_root, weighted, out);
  accumulate_decreases(*node.right, n_root, weighted, out);
}
}  // namespace

std::vector<double> tree_split_decreases(const TreeNode& tree, int n_features,
                                         bool weighted) {
  std::vector<double> out(static_cast<std::size_t>(n_features), 0.0);
  accumulate_decreases(tree, static_cast<double>(tree.n()), weighted, out);
  return out;
}

}  // namespace frfx
