#include <doctest.h>

#include <numeric>

#include "frfx/explain.hpp"
#include "frfx/ucr.hpp"
#include "helpers.hpp"

using namespace frfx;

namespace {

// forest with a single stump splitting feature 0 at 0; left leaf votes 0
FunctionalRandomForest stump_forest(int n_features) {
  FunctionalRandomForest forest;
  forest.n_features = n_features;
  forest.config.bootstrap = false;
  TreeNode root;
  root.rule = {0, 0.0};
  root.decrease = 0.5;
  root.class_counts = {5, 5};
  root.left = std::make_unique<TreeNode>();
  root.left->class_counts = {5, 0};
  root.right = std::make_unique<TreeNode>();
  root.right->class_counts = {0, 5};
  forest.trees.push_back(std::move(root));
  return forest;
}

FunctionalRandomForest trained_forest(const Eigen::MatrixXd& scores,
                                      const std::vector<int>& labels,
                                      int n_trees, std::uint64_t seed) {
  ForestConfig config;
  config.n_trees = n_trees;
  config.seed = seed;
  return fit_forest(scores, labels, config);
}

}  // namespace

TEST_CASE("logit transform") {
  CHECK(logit_clamped(0.5) == 0.0);
  CHECK(logit_clamped(0.9) == doctest::Approx(std::log(9.0)).epsilon(1e-12));
  CHECK(logit_clamped(0.0) == doctest::Approx(std::log(1e-6 / (1.0 - 1e-6))));
  // near-symmetric: 1 - (1 - 1e-6) cancels, so only ~1e-10 agreement
  CHECK(logit_clamped(1.0) == doctest::Approx(-logit_clamped(0.0)).epsilon(1e-8));
}

TEST_CASE("partial dependence is flat in a feature the model ignores") {
  const FunctionalRandomForest forest = stump_forest(3);
  Eigen::MatrixXd scores(6, 3);
  scores.setRandom();
  const PdpCurve curve =
      compute_fpdp(forest, scores, 2, 10, PdpScale::probability);
  CHECK(curve.values.maxCoeff() - curve.values.minCoeff() < 1e-12);
}

TEST_CASE("partial dependence equals the brute-force double loop bitwise") {
  const auto [scores, labels] = testing::separable_scores(10, 4, 17);
  const FunctionalRandomForest forest = trained_forest(scores, labels, 25, 3);
  const int k = 1;
  const int g = 7;
  const PdpCurve curve = compute_fpdp(forest, scores, k, g, PdpScale::probability);

  REQUIRE(curve.score_grid.size() == g);
  for (int gi = 0; gi < g; ++gi) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < scores.rows(); ++i) {
      Eigen::VectorXd row = scores.row(i).transpose();
      row(k) = curve.score_grid(gi);
      acc += predict_proba(forest, row);
    }
    const double expected = acc / static_cast<double>(scores.rows());
    CHECK(curve.values(gi) == expected);  // bitwise
  }

  // grid endpoints are the observed extremes
  CHECK(curve.score_grid(0) == scores.col(k).minCoeff());
  CHECK(curve.score_grid(g - 1) == scores.col(k).maxCoeff());
}

TEST_CASE("partial dependence rejects empty data") {
  const FunctionalRandomForest forest = stump_forest(2);
  const Eigen::MatrixXd empty(0, 2);
  CHECK_THROWS_AS(compute_fpdp(forest, empty, 0, 5, PdpScale::probability),
                  EmptyData);
}

TEST_CASE("heatmap: constant model gives constant cells") {
  FunctionalRandomForest forest;
  forest.n_features = 2;
  TreeNode leaf;
  leaf.class_counts = {3, 7};
  forest.trees.push_back(std::move(leaf));

  Eigen::MatrixXd scores(5, 2);
  scores.setRandom();
  const HeatmapGrid grid = compute_fpcph(forest, scores, {0, 1}, 8);
  CHECK((grid.probabilities.array() == 1.0).all());  // one tree voting class 1
}

TEST_CASE("heatmap cells match direct re-evaluation at column means") {
  const auto [scores, labels] = testing::separable_scores(12, 3, 29);
  const FunctionalRandomForest forest = trained_forest(scores, labels, 15, 6);
  const HeatmapGrid grid = compute_fpcph(forest, scores, {0, 1, 2}, 9);

  const Eigen::VectorXd means = scores.colwise().mean();
  for (int j = 0; j < 3; ++j) {
    for (int g = 0; g < 9; ++g) {
      Eigen::VectorXd row = means;
      row(j) = grid.score_grids(j, g);
      CHECK(grid.probabilities(j, g) == predict_proba(forest, row));
      CHECK(grid.probabilities(j, g) >= 0.0);
      CHECK(grid.probabilities(j, g) <= 1.0);
    }
  }
}

TEST_CASE("band envelope degenerates to the mean for a [0,0] interval") {
  FpcaModel model;
  model.grid = TimeGrid::uniform(0.0, 1.0, 20);
  model.mean_curve = Eigen::VectorXd::LinSpaced(20, 0.0, 1.0);
  model.eigenfunctions = Eigen::MatrixXd::Random(2, 20);
  model.eigenvalues = Eigen::Vector2d(2.0, 1.0);
  const auto [lower, upper] = band_envelope(model, 0, 0.0, 0.0);
  CHECK(lower == model.mean_curve);
  CHECK(upper == model.mean_curve);
}

TEST_CASE("band envelopes are the pointwise extremes of the endpoint curves") {
  FpcaModel model;
  model.grid = TimeGrid::uniform(0.0, 1.0, 30);
  model.mean_curve = Eigen::VectorXd::Zero(30);
  Eigen::MatrixXd eigenfunctions(1, 30);
  for (int j = 0; j < 30; ++j) {
    eigenfunctions(0, j) = std::sin(6.28 * model.grid.points(j));  // both signs
  }
  model.eigenfunctions = eigenfunctions;
  model.eigenvalues = Eigen::VectorXd::Ones(1);

  const double a = -1.5, b = 2.0;
  const auto [lower, upper] = band_envelope(model, 0, a, b);
  const Eigen::VectorXd at_a = reconstruct_single(model, 0, a, true);
  const Eigen::VectorXd at_b = reconstruct_single(model, 0, b, true);
  CHECK(lower == at_a.cwiseMin(at_b));
  CHECK(upper == at_a.cwiseMax(at_b));
  // envelope brackets every interior reconstruction
  for (double v : {-1.0, 0.0, 1.3, 1.99}) {
    const Eigen::VectorXd mid = reconstruct_single(model, 0, v, true);
    CHECK(((mid - lower).array() >= -1e-12).all());
    CHECK(((upper - mid).array() >= -1e-12).all());
  }
}

TEST_CASE("reconstruction bands partition the observed range into windows") {
  FpcaModel model;
  model.grid = TimeGrid::uniform(0.0, 1.0, 15);
  model.mean_curve = Eigen::VectorXd::Zero(15);
  model.eigenfunctions = Eigen::MatrixXd::Ones(1, 15);
  model.eigenvalues = Eigen::VectorXd::Ones(1);

  Eigen::MatrixXd scores(4, 1);
  scores << -2.0, -1.0, 1.0, 6.0;
  const ReconstructionBands bands = reconstruction_bands(model, scores, 0, 4);
  REQUIRE(bands.windows.size() == 4);
  CHECK(bands.windows[0].lo == doctest::Approx(-2.0));
  CHECK(bands.windows[3].hi == doctest::Approx(6.0));
  for (int w = 1; w < 4; ++w) {
    CHECK(bands.windows[static_cast<std::size_t>(w)].lo ==
          doctest::Approx(bands.windows[static_cast<std::size_t>(w - 1)].hi));
  }

  Eigen::MatrixXd constant(3, 1);
  constant << 2.0, 2.0, 2.0;
  CHECK_THROWS_AS(reconstruction_bands(model, constant, 0, 4), DegenerateScores);
}

TEST_CASE("fixture FPC1 bands: the extreme-score window deviates most") {
  const FunctionalDataset train = load_ucr(testing::train_fixture());
  const BasisSystem basis = build_basis(train.grid, 20, 4);
  const FpcaModel fpca = fit_fpca(smooth(train, basis, 0.0), 15);
  const ReconstructionBands bands =
      reconstruction_bands(fpca, fpca.scores, 0, 4);

  const auto deviation = [&](const BandWindow& w) {
    return std::max((w.upper - fpca.mean_curve).cwiseAbs().maxCoeff(),
                    (w.lower - fpca.mean_curve).cwiseAbs().maxCoeff());
  };
  // the window holding the largest |score| brackets every other window's
  // deviation; reconstruction is linear in the score
  std::size_t extreme = 0;
  double largest = 0.0;
  for (std::size_t w = 0; w < bands.windows.size(); ++w) {
    const double endpoint = std::max(std::abs(bands.windows[w].lo),
                                     std::abs(bands.windows[w].hi));
    if (endpoint > largest) {
      largest = endpoint;
      extreme = w;
    }
  }
  for (std::size_t w = 0; w < bands.windows.size(); ++w) {
    CHECK(deviation(bands.windows[extreme]) >= deviation(bands.windows[w]));
  }
}

TEST_CASE("mean decrease in impurity bookkeeping") {
  SUBCASE("single-leaf forest is all zeros") {
    FunctionalRandomForest forest;
    forest.n_features = 4;
    TreeNode leaf;
    leaf.class_counts = {2, 2};
    forest.trees.push_back(std::move(leaf));
    const std::vector<double> mdg = mdg_importance(forest);
    for (double v : mdg) CHECK(v == 0.0);
  }

  SUBCASE("one split with decrease 0.5 lands on its feature") {
    const FunctionalRandomForest forest = stump_forest(3);
    const std::vector<double> mdg = mdg_importance(forest);
    CHECK(mdg[0] == 0.5);  // root split: weight n/n = 1
    CHECK(mdg[1] == 0.0);
    CHECK(mdg[2] == 0.0);
    const std::vector<double> unweighted = mdg_importance(forest, false);
    CHECK(unweighted[0] == 0.5);
  }

  SUBCASE("per-feature sums equal the total recorded decrease over M") {
    const auto [scores, labels] = testing::separable_scores(20, 5, 47);
    const FunctionalRandomForest forest = trained_forest(scores, labels, 30, 9);
    const std::vector<double> mdg = mdg_importance(forest);
    double total = 0.0;
    for (const TreeNode& tree : forest.trees) {
      const std::vector<double> per_tree = tree_split_decreases(tree, 5, true);
      total = std::accumulate(per_tree.begin(), per_tree.end(), total);
    }
    const double sum = std::accumulate(mdg.begin(), mdg.end(), 0.0);
    CHECK(sum == doctest::Approx(total / 30.0).epsilon(1e-12));
  }
}

TEST_CASE("permutation importance") {
  SUBCASE("a feature the model never splits on scores exactly zero") {
    const FunctionalRandomForest forest = stump_forest(3);
    Eigen::MatrixXd scores(8, 3);
    scores.setRandom();
    std::vector<int> labels;
    for (int i = 0; i < 8; ++i) labels.push_back(scores(i, 0) <= 0 ? 0 : 1);

    const Eigen::MatrixXd deltas =
        permutation_importance_detailed(forest, scores, labels, 12, 4);
    for (int r = 0; r < 12; ++r) {
      CHECK(deltas(1, r) == 0.0);
      CHECK(deltas(2, r) == 0.0);
    }
    const std::vector<double> pi = permutation_importance(forest, scores, labels, 12, 4);
    CHECK(pi[1] == 0.0);
    CHECK(pi[2] == 0.0);
  }

  SUBCASE("three observations: sampled permutations match exhaustive enumeration") {
    const FunctionalRandomForest forest = stump_forest(1);
    Eigen::MatrixXd scores(3, 1);
    scores << -1.0, 0.5, 2.0;
    const std::vector<int> labels{0, 1, 1};

    // oracle: all 6 permutations of the column
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    double baseline = 0.0;
    for (int i = 0; i < 3; ++i) {
      baseline += predict_label(forest, scores.row(i).transpose()) !=
                  labels[static_cast<std::size_t>(i)];
    }
    baseline /= 3.0;
    double exhaustive = 0.0;
    std::vector<double> possible;
    for (const auto& perm : perms) {
      Eigen::MatrixXd permuted = scores;
      for (int i = 0; i < 3; ++i) permuted(i, 0) = scores(perm[i], 0);
      double err = 0.0;
      for (int i = 0; i < 3; ++i) {
        err += predict_label(forest, permuted.row(i).transpose()) !=
               labels[static_cast<std::size_t>(i)];
      }
      err /= 3.0;
      possible.push_back(err - baseline);
      exhaustive += (err - baseline) / 6.0;
    }

    // every sampled delta must be one of the six enumerated values, and with
    // many fixed-seed repeats the mean approaches the exhaustive average
    const Eigen::MatrixXd deltas =
        permutation_importance_detailed(forest, scores, labels, 600, 123);
    for (int r = 0; r < 600; ++r) {
      bool found = false;
      for (double p : possible) {
        if (deltas(0, r) == doctest::Approx(p)) found = true;
      }
      CHECK(found);
    }
    CHECK(deltas.row(0).mean() == doctest::Approx(exhaustive).epsilon(0.15));
  }

  SUBCASE("repeated call with the same seed is identical") {
    const auto [scores, labels] = testing::separable_scores(15, 3, 41);
    const FunctionalRandomForest forest = trained_forest(scores, labels, 20, 8);
    const std::vector<double> a =
        permutation_importance(forest, scores, labels, 5, 77);
    const std::vector<double> b =
        permutation_importance(forest, scores, labels, 5, 77);
    CHECK(a == b);
  }

  SUBCASE("oob mode needs bootstrap info") {
    const FunctionalRandomForest forest = stump_forest(2);  // bootstrap off
    Eigen::MatrixXd scores(4, 2);
    scores.setRandom();
    CHECK_THROWS_AS(permutation_importance(forest, scores, {0, 1, 0, 1}, 2, 1,
                                           PermutationErrorMode::oob),
                    NoBootstrapInfo);
  }
}

TEST_CASE("class-conditional score distributions") {
  Eigen::MatrixXd scores(5, 2);
  scores << 1.0, 5.0,
            2.0, 5.0,
            3.0, 5.0,
            4.0, 7.0,
            9.0, 7.0;
  const std::vector<int> labels{0, 0, 0, 1, 1};
  const ClassConditionalScores by_class = scores_by_class(scores, labels);
  REQUIRE(by_class.per_fpc.size() == 2);

  const ScoreDistribution& d00 = by_class.per_fpc[0][0];
  CHECK(d00.sample == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(d00.q1 <= d00.median);
  CHECK(d00.median <= d00.q3);
  CHECK(d00.median == doctest::Approx(2.0));

  // single-value class: quartiles collapse, density peaks at the value
  Eigen::MatrixXd one(3, 1);
  one << 4.0, 4.0, 7.0;
  const ClassConditionalScores single = scores_by_class(one, {0, 0, 1});
  const ScoreDistribution& d = single.per_fpc[0][1];
  CHECK(d.q1 == 7.0);
  CHECK(d.median == 7.0);
  CHECK(d.q3 == 7.0);
  Eigen::Index arg = 0;
  d.density.maxCoeff(&arg);
  CHECK(d.density_grid(arg) == doctest::Approx(7.0).epsilon(0.02));

  // densities integrate to ~1
  for (const auto& pair : by_class.per_fpc) {
    for (const ScoreDistribution& dist : pair) {
      double integral = 0.0;
      for (Eigen::Index i = 0; i + 1 < dist.density_grid.size(); ++i) {
        integral += 0.5 * (dist.density(i) + dist.density(i + 1)) *
                    (dist.density_grid(i + 1) - dist.density_grid(i));
      }
      CHECK(integral == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("bubble data quadrants") {
  ImportanceTable table;
  // four components, one per quadrant by construction
  table.mdg = {10.0, 9.0, 1.0, 2.0};               // internal
  table.permutation_importance = {0, 0, 0, 0};
  table.f_statistic = {5.0, 1.0, 6.0, 2.0};
  table.eta_squared = {0.8, 0.1, 0.9, 0.2};        // external
  table.p_value = {0.0, 0.0, 0.0, 0.0};
  table.explained_variance_fraction = {0.4, 0.3, 0.2, 0.1};

  const BubblePlotData data = bubble_data(table);
  CHECK(data.median_internal == doctest::Approx((9.0 + 2.0) / 2.0));
  CHECK(data.median_external == doctest::Approx(0.5));
  CHECK(data.points[0].quadrant == Quadrant::critical);
  CHECK(data.points[1].quadrant == Quadrant::model_specific);
  CHECK(data.points[2].quadrant == Quadrant::externally_relevant);
  CHECK(data.points[3].quadrant == Quadrant::minor);

  SUBCASE("identical metrics all land on the high/high side") {
    ImportanceTable flat = table;
    flat.mdg = {3, 3, 3, 3};
    flat.eta_squared = {0.5, 0.5, 0.5, 0.5};
    const BubblePlotData tied = bubble_data(flat);
    for (const BubblePoint& p : tied.points) {
      CHECK(p.quadrant == Quadrant::critical);
    }
  }

  SUBCASE("quadrants are invariant under a monotone transform of one axis") {
    ImportanceTable warped = table;
    for (double& v : warped.mdg) v = std::exp(v);
    const BubblePlotData transformed = bubble_data(warped);
    for (std::size_t i = 0; i < data.points.size(); ++i) {
      CHECK(transformed.points[i].quadrant == data.points[i].quadrant);
    }
  }

  SUBCASE("alternative metric choices") {
    ImportanceTable alt = table;
    alt.permutation_importance = {0.5, 0.1, 0.4, 0.2};
    const BubblePlotData by_perm =
        bubble_data(alt, InternalMetric::permutation, ExternalMetric::f_statistic);
    CHECK(by_perm.median_internal == doctest::Approx(0.3));
    CHECK(by_perm.median_external == doctest::Approx(3.5));
  }
}
