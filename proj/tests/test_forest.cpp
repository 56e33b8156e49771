#include <doctest.h>

#include "frfx/forest.hpp"
#include "frfx/model_io.hpp"
#include "helpers.hpp"

using namespace frfx;

namespace {

// hand-built forest whose trees are single leaves voting the given classes
FunctionalRandomForest leaf_forest(const std::vector<int>& votes) {
  FunctionalRandomForest forest;
  forest.n_features = 3;
  forest.config.n_trees = static_cast<int>(votes.size());
  forest.config.bootstrap = false;
  for (int v : votes) {
    TreeNode leaf;
    leaf.class_counts = {v == 0 ? 4 : 1, v == 0 ? 1 : 4};
    forest.trees.push_back(std::move(leaf));
  }
  return forest;
}

}  // namespace

TEST_CASE("default mtry heuristic") {
  CHECK(default_mtry(15) == 3);
  CHECK(default_mtry(16) == 4);
  CHECK(default_mtry(1) == 1);
  CHECK(default_mtry(2) == 1);
}

TEST_CASE("vote aggregation: mode with ties to class 0") {
  const Eigen::VectorXd row = Eigen::VectorXd::Zero(3);
  CHECK(predict_label(leaf_forest({1, 1, 0}), row) == 1);
  CHECK(predict_label(leaf_forest({0, 1}), row) == 0);
  CHECK(predict_label(leaf_forest({1}), row) == 1);
  CHECK(predict_proba(leaf_forest({1, 1, 0, 0, 1}), row) == doctest::Approx(0.6));
  CHECK(predict_proba(leaf_forest({0, 0, 0}), row) == 0.0);
}

TEST_CASE("leaf-average probability mode uses leaf fractions") {
  FunctionalRandomForest forest = leaf_forest({1, 0});
  forest.config.probability = ProbabilityMode::leaf_average;
  // leaves carry fractions 4/5 and 1/5
  CHECK(predict_proba(forest, Eigen::VectorXd::Zero(3)) == doctest::Approx(0.5));
}

TEST_CASE("a forest of identical trees predicts like the single tree") {
  const auto [scores, labels] = testing::separable_scores(10, 3, 40);
  ForestConfig config;
  config.mtry = 3;
  Rng rng(8);
  TreeNode tree = grow_tree(scores, labels, config, rng);

  FunctionalRandomForest forest;
  forest.n_features = 3;
  forest.config.bootstrap = false;
  for (int i = 0; i < 5; ++i) forest.trees.push_back(tree.clone());
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const Eigen::VectorXd row = scores.row(i).transpose();
    CHECK(predict_label(forest, row) == tree_predict(tree, row));
  }
}

TEST_CASE("degenerate ensemble: M=1, mtry=K, no bootstrap equals grow_tree") {
  const auto [scores, labels] = testing::separable_scores(15, 4, 123);
  ForestConfig config;
  config.n_trees = 1;
  config.mtry = 4;
  config.bootstrap = false;
  config.seed = 99;
  const FunctionalRandomForest forest = fit_forest(scores, labels, config);

  Rng stream = Rng::derive(99, 1, 0);  // tree 0's stream
  const TreeNode tree = grow_tree(scores, labels, config, stream);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    const Eigen::VectorXd row = scores.row(i).transpose();
    CHECK(predict_label(forest, row) == tree_predict(tree, row));
    CHECK(predict_proba(forest, row) ==
          static_cast<double>(tree_predict(tree, row)));
  }
}

TEST_CASE("unpruned full-feature tree reaches 100% training accuracy on separable data") {
  const auto [scores, labels] = testing::separable_scores(50, 6, 7);
  ForestConfig config;
  config.n_trees = 1;
  config.mtry = 6;
  config.bootstrap = false;
  const FunctionalRandomForest forest = fit_forest(scores, labels, config);
  const std::vector<int> predicted = predict_labels(forest, scores);
  CHECK(predicted == labels);
}

TEST_CASE("bagging boundary: with mtry = K the rng does not matter") {
  const auto [scores, labels] = testing::separable_scores(20, 4, 55);
  ForestConfig config;
  config.n_trees = 1;
  config.mtry = 4;
  config.bootstrap = false;

  config.seed = 1;
  const FunctionalRandomForest a = fit_forest(scores, labels, config);
  config.seed = 2;
  const FunctionalRandomForest b = fit_forest(scores, labels, config);
  CHECK(tree_to_json(a.trees[0]) == tree_to_json(b.trees[0]));

  // and the candidate sampler itself returns every feature
  Rng rng(0);
  CHECK(rng.sample_without_replacement(4, 4) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("forest training is deterministic in the seed") {
  const auto [scores, labels] = testing::separable_scores(25, 5, 71);
  ForestConfig config;
  config.n_trees = 20;
  config.mtry = 2;
  config.seed = 2024;

  const FunctionalRandomForest a = fit_forest(scores, labels, config);
  const FunctionalRandomForest b = fit_forest(scores, labels, config);
  CHECK(forest_to_json(a).dump() == forest_to_json(b).dump());

  config.seed = 2025;
  const FunctionalRandomForest c = fit_forest(scores, labels, config);
  CHECK(a.bootstrap_indices != c.bootstrap_indices);
}

TEST_CASE("forest training is independent of the worker count") {
  const auto [scores, labels] = testing::separable_scores(25, 5, 71);
  ForestConfig config;
  config.n_trees = 16;
  config.mtry = 2;
  config.seed = 11;

  setenv("FRFX_THREADS", "1", 1);
  const FunctionalRandomForest serial = fit_forest(scores, labels, config);
  setenv("FRFX_THREADS", "4", 1);
  const FunctionalRandomForest parallel = fit_forest(scores, labels, config);
  unsetenv("FRFX_THREADS");
  CHECK(forest_to_json(serial).dump() == forest_to_json(parallel).dump());
}

TEST_CASE("single-class training data is rejected") {
  Eigen::MatrixXd scores(4, 2);
  scores.setRandom();
  ForestConfig config;
  config.mtry = 1;
  CHECK_THROWS_AS(fit_forest(scores, {1, 1, 1, 1}, config), SingleClassData);
}

TEST_CASE("probability/label consistency on random rows") {
  const auto [scores, labels] = testing::separable_scores(20, 4, 31);
  ForestConfig config;
  config.n_trees = 33;  // odd, so votes cannot tie
  config.mtry = 2;
  config.seed = 5;
  const FunctionalRandomForest forest = fit_forest(scores, labels, config);

  Rng rng(88);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd row(4);
    for (int k = 0; k < 4; ++k) row(k) = 3.0 * rng.normal();
    const double p = predict_proba(forest, row);
    CHECK(predict_label(forest, row) == (p > 0.5 ? 1 : 0));
  }
}

TEST_CASE("out-of-bag evaluation") {
  const auto [scores, labels] = testing::separable_scores(30, 4, 15);
  ForestConfig config;
  config.n_trees = 200;
  config.mtry = 2;
  config.seed = 3;
  const FunctionalRandomForest forest = fit_forest(scores, labels, config);

  const OobReport report = oob_evaluate(forest, scores, labels);
  CHECK(report.coverage > 0.99);
  CHECK(report.oob_error_rate >= 0.0);
  CHECK(report.oob_error_rate <= 1.0);

  const OobReport again = oob_evaluate(forest, scores, labels);
  CHECK(report.oob_error_rate == again.oob_error_rate);
  CHECK(report.vote_fraction.size() == again.vote_fraction.size());

  ForestConfig no_bootstrap = config;
  no_bootstrap.bootstrap = false;
  const FunctionalRandomForest plain = fit_forest(scores, labels, no_bootstrap);
  CHECK_THROWS_AS(oob_evaluate(plain, scores, labels), NoBootstrapInfo);
}
