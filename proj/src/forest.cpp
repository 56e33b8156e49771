#include "frfx/forest.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <thread>

namespace frfx {

namespace {

// Stream tags keep sub-streams of one seed disjoint across uses.
constexpr std::uint64_t kTreeStreamTag = 1;

struct GrowContext {
  const Eigen::MatrixXd& scores;
  const std::vector<int>& labels;
  const ForestConfig& config;
  int mtry;
  Rng& rng;
};

TreeNode grow_node(GrowContext& ctx, std::vector<int>& rows, int depth) {
  TreeNode node;
  for (int r : rows) {
    node.class_counts[static_cast<std::size_t>(
        ctx.labels[static_cast<std::size_t>(r)])]++;
  }

  const bool pure = node.class_counts[0] == 0 || node.class_counts[1] == 0;
  const bool too_small =
      rows.size() < 2 ||
      rows.size() <= static_cast<std::size_t>(ctx.config.min_node_size);
  const bool too_deep =
      ctx.config.max_depth > 0 && depth >= ctx.config.max_depth;
  if (pure || too_small || too_deep) return node;

  const int k = static_cast<int>(ctx.scores.cols());
  const std::vector<int> candidates =
      ctx.rng.sample_without_replacement(ctx.mtry, k);
  const auto split =
      best_split(ctx.scores, ctx.labels, rows, candidates, ctx.config.criterion);
  if (!split) return node;

  node.rule = split->rule;
  node.decrease = split->decrease;
  std::vector<int> left_rows;
  std::vector<int> right_rows;
  left_rows.reserve(rows.size());
  right_rows.reserve(rows.size());
  for (int r : rows) {
    if (ctx.scores(r, node.rule.fpc_index) <= node.rule.threshold) {
      left_rows.push_back(r);
    } else {
      right_rows.push_back(r);
    }
  }
  rows.clear();
  rows.shrink_to_fit();
  node.left = std::make_unique<TreeNode>(grow_node(ctx, left_rows, depth + 1));
  node.right = std::make_unique<TreeNode>(grow_node(ctx, right_rows, depth + 1));
  return node;
}

int resolve_mtry(const ForestConfig& config, int n_features) {
  const int m = config.mtry == 0 ? default_mtry(n_features) : config.mtry;
  if (m < 1 || m > n_features) {
    throw InvalidConfig("mtry=" + std::to_string(m) + " outside [1, K=" +
                        std::to_string(n_features) + "]");
  }
  return m;
}

}  // namespace

int default_mtry(int n_features) {
  return std::max(1, static_cast<int>(std::floor(std::sqrt(
                         static_cast<double>(n_features)))));
}

TreeNode grow_tree(const Eigen::MatrixXd& scores, const std::vector<int>& labels,
                   const std::vector<int>& rows, const ForestConfig& config,
                   Rng& rng) {
  const int k = static_cast<int>(scores.cols());
  GrowContext ctx{scores, labels, config, resolve_mtry(config, k), rng};
  std::vector<int> work = rows;
  return grow_node(ctx, work, 0);
}

TreeNode grow_tree(const Eigen::MatrixXd& scores, const std::vector<int>& labels,
                   const ForestConfig& config, Rng& rng) {
  std::vector<int> rows(static_cast<std::size_t>(scores.rows()));
  std::iota(rows.begin(), rows.end(), 0);
  return grow_tree(scores, labels, rows, config, rng);
}

FunctionalRandomForest fit_forest(const Eigen::MatrixXd& scores,
                                  const std::vector<int>& labels,
                                  const ForestConfig& config) {
  const int n = static_cast<int>(scores.rows());
  const int k = static_cast<int>(scores.cols());
  if (config.n_trees < 1) throw InvalidConfig("n_trees must be >= 1");
  if (n < 2) throw SingleClassData("need at least two observations");
  bool has0 = false;
  bool has1 = false;
  for (int y : labels) (y == 0 ? has0 : has1) = true;
  if (!has0 || !has1) {
    throw SingleClassData("training data contains a single class");
  }
  resolve_mtry(config, k);  // validate now, before spawning workers

  FunctionalRandomForest forest;
  forest.config = config;
  forest.n_features = k;
  forest.trees.resize(static_cast<std::size_t>(config.n_trees));
  forest.bootstrap_indices.resize(static_cast<std::size_t>(config.n_trees));

  const auto grow_one = [&](int i) {
    Rng rng = Rng::derive(config.seed, kTreeStreamTag, static_cast<std::uint64_t>(i));
    std::vector<int> rows;
    if (config.bootstrap) {
      rows.resize(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) {
        rows[static_cast<std::size_t>(j)] =
            static_cast<int>(rng.below(static_cast<std::size_t>(n)));
      }
      forest.bootstrap_indices[static_cast<std::size_t>(i)] = rows;
    } else {
      rows.resize(static_cast<std::size_t>(n));
      std::iota(rows.begin(), rows.end(), 0);
    }
    forest.trees[static_cast<std::size_t>(i)] =
        grow_tree(scores, labels, rows, config, rng);
  };

  const int workers = std::min(worker_thread_count(), config.n_trees);
  if (workers <= 1) {
    for (int i = 0; i < config.n_trees; ++i) grow_one(i);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next.fetch_add(1); i < config.n_trees;
             i = next.fetch_add(1)) {
          grow_one(i);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  return forest;
}

int predict_label(const FunctionalRandomForest& forest,
                  const Eigen::VectorXd& score_row) {
  if (score_row.size() != forest.n_features) {
    throw InvalidConfig("score row length does not match forest features");
  }
  int votes1 = 0;
  for (const TreeNode& tree : forest.trees) {
    votes1 += tree_predict(tree, score_row);
  }
  const int votes0 = static_cast<int>(forest.trees.size()) - votes1;
  return votes1 > votes0 ? 1 : 0;
}

double predict_proba(const FunctionalRandomForest& forest,
                     const Eigen::VectorXd& score_row) {
  if (score_row.size() != forest.n_features) {
    throw InvalidConfig("score row length does not match forest features");
  }
  double acc = 0.0;
  if (forest.config.probability == ProbabilityMode::vote_fraction) {
    for (const TreeNode& tree : forest.trees) {
      acc += tree_predict(tree, score_row);
    }
  } else {
    for (const TreeNode& tree : forest.trees) {
      acc += tree_class1_fraction(tree, score_row);
    }
  }
  return acc / static_cast<double>(forest.trees.size());
}

std::vector<int> predict_labels(const FunctionalRandomForest& forest,
                                const Eigen::MatrixXd& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()));
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    out[static_cast<std::size_t>(i)] =
        predict_label(forest, scores.row(i).transpose());
  }
  return out;
}

OobReport oob_evaluate(const FunctionalRandomForest& forest,
                       const Eigen::MatrixXd& scores,
                       const std::vector<int>& labels) {
  if (!forest.config.bootstrap) {
    throw NoBootstrapInfo("forest was trained without bootstrap");
  }
  const int n = static_cast<int>(scores.rows());
  const int m = static_cast<int>(forest.trees.size());

  std::vector<std::vector<char>> in_bag(
      static_cast<std::size_t>(m), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (int t = 0; t < m; ++t) {
    for (int r : forest.bootstrap_indices[static_cast<std::size_t>(t)]) {
      in_bag[static_cast<std::size_t>(t)][static_cast<std::size_t>(r)] = 1;
    }
  }

  OobReport report;
  report.vote_fraction.assign(static_cast<std::size_t>(n),
                              std::numeric_limits<double>::quiet_NaN());
  int covered = 0;
  int wrong = 0;
  for (int i = 0; i < n; ++i) {
    int votes1 = 0;
    int votes = 0;
    const Eigen::VectorXd row = scores.row(i).transpose();
    for (int t = 0; t < m; ++t) {
      if (in_bag[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)]) continue;
      votes1 += tree_predict(forest.trees[static_cast<std::size_t>(t)], row);
      ++votes;
    }
    if (votes == 0) continue;
    ++covered;
    report.vote_fraction[static_cast<std::size_t>(i)] =
        static_cast<double>(votes1) / votes;
    const int pred = 2 * votes1 > votes ? 1 : 0;
    if (pred != labels[static_cast<std::size_t>(i)]) ++wrong;
  }
  report.coverage = static_cast<double>(covered) / n;
  report.oob_error_rate =
      covered > 0 ? static_cast<double>(wrong) / covered : 0.0;
  return report;
}

int worker_thread_count() {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (cap < 1) cap = 1;
  if (const char* env = std::getenv("FRFX_THREADS")) {
    char* end = nullptr;
    const long parsed = std::strtol(env, &end, 10);
    if (end != env && parsed >= 1) {
      cap = std::min(cap, static_cast<int>(parsed));
    }
  }
  return cap;
}

}  // namespace frfx
