#include "frfx/explain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace frfx {

namespace {

constexpr std::uint64_t kPermutationStreamTag = 2;

Eigen::VectorXd linspace(double lo, double hi, int n) {
  Eigen::VectorXd v(n);
  for (int g = 0; g < n; ++g) {
    v(g) = lo + (hi - lo) * static_cast<double>(g) / (n - 1);
  }
  v(n - 1) = hi;  // endpoints are the observed extremes, exactly
  return v;
}

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Predictor wrap(const FunctionalRandomForest& forest) {
  return [&forest](const Eigen::VectorXd& row) {
    return predict_proba(forest, row);
  };
}

// Misclassification rate; in oob mode each row is voted on only by trees
// whose bag misses it and uncovered rows are skipped.
double misclassification_rate(const FunctionalRandomForest& forest,
                              const Eigen::MatrixXd& scores,
                              const std::vector<int>& labels,
                              PermutationErrorMode mode,
                              const std::vector<std::vector<char>>* in_bag) {
  const int n = static_cast<int>(scores.rows());
  int wrong = 0;
  int used = 0;
  for (int i = 0; i < n; ++i) {
    const Eigen::VectorXd row = scores.row(i).transpose();
    int pred;
    if (mode == PermutationErrorMode::plain) {
      pred = predict_label(forest, row);
    } else {
      int votes1 = 0;
      int votes = 0;
      for (std::size_t t = 0; t < forest.trees.size(); ++t) {
        if ((*in_bag)[t][static_cast<std::size_t>(i)]) continue;
        votes1 += tree_predict(forest.trees[t], row);
        ++votes;
      }
      if (votes == 0) continue;
      pred = 2 * votes1 > votes ? 1 : 0;
    }
    ++used;
    if (pred != labels[static_cast<std::size_t>(i)]) ++wrong;
  }
  return used > 0 ? static_cast<double>(wrong) / used : 0.0;
}

}  // namespace

double logit_clamped(double p) {
  const double clamped = std::clamp(p, 1e-6, 1.0 - 1e-6);
  return std::log(clamped / (1.0 - clamped));
}

PdpCurve compute_fpdp(const Predictor& predictor, const Eigen::MatrixXd& scores,
                      int k, int grid_size, PdpScale scale) {
  const int n = static_cast<int>(scores.rows());
  if (n == 0) throw EmptyData("partial dependence needs observations");
  if (grid_size < 2) throw InvalidConfig("grid_size must be >= 2");
  if (k < 0 || k >= scores.cols()) throw InvalidConfig("fpc index out of range");

  PdpCurve curve;
  curve.fpc_index = k;
  curve.scale = scale;
  curve.score_grid = linspace(scores.col(k).minCoeff(), scores.col(k).maxCoeff(),
                              grid_size);
  curve.values.resize(grid_size);
  Eigen::VectorXd row;
  for (int g = 0; g < grid_size; ++g) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      row = scores.row(i).transpose();
      row(k) = curve.score_grid(g);
      acc += predictor(row);
    }
    double value = acc / static_cast<double>(n);
    if (scale == PdpScale::logit) value = logit_clamped(value);
    curve.values(g) = value;
  }
  return curve;
}

PdpCurve compute_fpdp(const FunctionalRandomForest& forest,
                      const Eigen::MatrixXd& scores, int k, int grid_size,
                      PdpScale scale) {
  return compute_fpdp(wrap(forest), scores, k, grid_size, scale);
}

HeatmapGrid compute_fpcph(const Predictor& predictor,
                          const Eigen::MatrixXd& scores,
                          const std::vector<int>& fpc_indices, int m_grid) {
  if (scores.rows() == 0) throw EmptyData("heatmap needs observations");
  if (m_grid < 2) throw InvalidConfig("heatmap grid must have >= 2 points");

  const Eigen::VectorXd means = scores.colwise().mean();
  HeatmapGrid grid;
  grid.fpc_indices = fpc_indices;
  const int f = static_cast<int>(fpc_indices.size());
  grid.score_grids.resize(f, m_grid);
  grid.probabilities.resize(f, m_grid);
  Eigen::VectorXd row;
  for (int j = 0; j < f; ++j) {
    const int k = fpc_indices[static_cast<std::size_t>(j)];
    if (k < 0 || k >= scores.cols()) {
      throw InvalidConfig("fpc index out of range");
    }
    grid.score_grids.row(j) =
        linspace(scores.col(k).minCoeff(), scores.col(k).maxCoeff(), m_grid)
            .transpose();
    for (int g = 0; g < m_grid; ++g) {
      row = means;
      row(k) = grid.score_grids(j, g);
      grid.probabilities(j, g) = predictor(row);
    }
  }
  return grid;
}

HeatmapGrid compute_fpcph(const FunctionalRandomForest& forest,
                          const Eigen::MatrixXd& scores,
                          const std::vector<int>& fpc_indices, int m_grid) {
  return compute_fpcph(wrap(forest), scores, fpc_indices, m_grid);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> band_envelope(const FpcaModel& fpca,
                                                          int k, double lo,
                                                          double hi) {
  const Eigen::VectorXd at_lo = reconstruct_single(fpca, k, lo, true);
  const Eigen::VectorXd at_hi = reconstruct_single(fpca, k, hi, true);
  return {at_lo.cwiseMin(at_hi), at_lo.cwiseMax(at_hi)};
}

ReconstructionBands reconstruction_bands(const FpcaModel& fpca,
                                         const Eigen::MatrixXd& scores, int k,
                                         int n_windows) {
  if (n_windows < 2) throw InvalidConfig("need at least 2 score windows");
  if (k < 0 || k >= scores.cols()) throw InvalidConfig("fpc index out of range");
  const double lo = scores.col(k).minCoeff();
  const double hi = scores.col(k).maxCoeff();
  if (!(hi > lo)) {
    throw DegenerateScores("score range of the component is zero");
  }

  ReconstructionBands bands;
  bands.fpc_index = k;
  bands.mean_curve = fpca.mean_curve;
  const double width = (hi - lo) / n_windows;
  for (int w = 0; w < n_windows; ++w) {
    BandWindow window;
    window.lo = lo + w * width;
    window.hi = w + 1 == n_windows ? hi : lo + (w + 1) * width;
    std::tie(window.lower, window.upper) =
        band_envelope(fpca, k, window.lo, window.hi);
    bands.windows.push_back(std::move(window));
  }
  return bands;
}

std::vector<double> mdg_importance(const FunctionalRandomForest& forest,
                                   bool weighted) {
  std::vector<double> total(static_cast<std::size_t>(forest.n_features), 0.0);
  for (const TreeNode& tree : forest.trees) {
    const std::vector<double> per_tree =
        tree_split_decreases(tree, forest.n_features, weighted);
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += per_tree[k];
  }
  const auto m = static_cast<double>(forest.trees.size());
  for (double& v : total) v /= m;
  return total;
}

Eigen::MatrixXd permutation_importance_detailed(
    const FunctionalRandomForest& forest, const Eigen::MatrixXd& scores,
    const std::vector<int>& labels, int repeats, std::uint64_t seed,
    PermutationErrorMode mode) {
  if (repeats < 1) throw InvalidConfig("repeats must be >= 1");
  const int n = static_cast<int>(scores.rows());
  const int k = static_cast<int>(scores.cols());

  std::vector<std::vector<char>> in_bag;
  if (mode == PermutationErrorMode::oob) {
    if (!forest.config.bootstrap) {
      throw NoBootstrapInfo("oob permutation importance needs a bootstrapped forest");
    }
    in_bag.assign(forest.trees.size(),
                  std::vector<char>(static_cast<std::size_t>(n), 0));
    for (std::size_t t = 0; t < forest.trees.size(); ++t) {
      for (int r : forest.bootstrap_indices[t]) {
        in_bag[t][static_cast<std::size_t>(r)] = 1;
      }
    }
  }
  const auto* bag = in_bag.empty() ? nullptr : &in_bag;
  const double baseline =
      misclassification_rate(forest, scores, labels, mode, bag);

  Eigen::MatrixXd deltas(k, repeats);
  Eigen::MatrixXd permuted = scores;
  for (int feature = 0; feature < k; ++feature) {
    for (int rep = 0; rep < repeats; ++rep) {
      Rng rng = Rng::derive(seed, kPermutationStreamTag,
                            static_cast<std::uint64_t>(feature),
                            static_cast<std::uint64_t>(rep));
      std::vector<int> order(static_cast<std::size_t>(n));
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
      for (int i = 0; i < n; ++i) {
        permuted(i, feature) = scores(order[static_cast<std::size_t>(i)], feature);
      }
      deltas(feature, rep) =
          misclassification_rate(forest, permuted, labels, mode, bag) - baseline;
    }
    permuted.col(feature) = scores.col(feature);
  }
  return deltas;
}

std::vector<double> permutation_importance(const FunctionalRandomForest& forest,
                                           const Eigen::MatrixXd& scores,
                                           const std::vector<int>& labels,
                                           int repeats, std::uint64_t seed,
                                           PermutationErrorMode mode) {
  const Eigen::MatrixXd deltas = permutation_importance_detailed(
      forest, scores, labels, repeats, seed, mode);
  std::vector<double> out(static_cast<std::size_t>(deltas.rows()));
  for (Eigen::Index k = 0; k < deltas.rows(); ++k) {
    out[static_cast<std::size_t>(k)] = deltas.row(k).mean();
  }
  return out;
}

ClassConditionalScores scores_by_class(const Eigen::MatrixXd& scores,
                                       const std::vector<int>& labels) {
  ClassConditionalScores out;
  out.per_fpc.resize(static_cast<std::size_t>(scores.cols()));
  for (Eigen::Index k = 0; k < scores.cols(); ++k) {
    for (int y = 0; y < 2; ++y) {
      ScoreDistribution& dist = out.per_fpc[static_cast<std::size_t>(k)][y];
      for (Eigen::Index i = 0; i < scores.rows(); ++i) {
        if (labels[static_cast<std::size_t>(i)] == y) {
          dist.sample.push_back(scores(i, k));
        }
      }
      if (dist.sample.empty()) continue;
      dist.q1 = quantile_linear(dist.sample, 0.25);
      dist.median = quantile_linear(dist.sample, 0.5);
      dist.q3 = quantile_linear(dist.sample, 0.75);
      const KernelDensity kde = gaussian_kde(dist.sample);
      dist.density_grid = kde.grid;
      dist.density = kde.density;
    }
  }
  return out;
}

std::string quadrant_name(Quadrant q) {
  switch (q) {
    case Quadrant::critical: return "critical";
    case Quadrant::model_specific: return "model-specific";
    case Quadrant::externally_relevant: return "externally-relevant";
    case Quadrant::minor: return "minor";
  }
  return "minor";
}

BubblePlotData bubble_data(const ImportanceTable& table, InternalMetric internal,
                           ExternalMetric external) {
  const std::vector<double>& internal_values =
      internal == InternalMetric::mdg ? table.mdg : table.permutation_importance;
  const std::vector<double>& external_values =
      external == ExternalMetric::eta_squared ? table.eta_squared
                                              : table.f_statistic;

  BubblePlotData data;
  data.median_internal = median_of(internal_values);
  data.median_external = median_of(external_values);
  for (int k = 0; k < table.size(); ++k) {
    BubblePoint p;
    p.fpc_index = k;
    p.internal = internal_values[static_cast<std::size_t>(k)];
    p.external = external_values[static_cast<std::size_t>(k)];
    p.size = table.explained_variance_fraction[static_cast<std::size_t>(k)];
    const bool high_internal = p.internal >= data.median_internal;
    const bool high_external = p.external >= data.median_external;
    p.quadrant = high_internal
                     ? (high_external ? Quadrant::critical
                                      : Quadrant::model_specific)
                     : (high_external ? Quadrant::externally_relevant
                                      : Quadrant::minor);
    data.points.push_back(p);
  }
  return data;
}

ImportanceTable build_importance_table(const FunctionalRandomForest& forest,
                                       const Eigen::MatrixXd& scores,
                                       const std::vector<int>& labels,
                                       const Eigen::VectorXd& explained_fractions,
                                       int permutation_repeats,
                                       std::uint64_t seed,
                                       PermutationErrorMode mode,
                                       bool weighted_mdg) {
  ImportanceTable table;
  table.mdg = mdg_importance(forest, weighted_mdg);
  table.permutation_importance = permutation_importance(
      forest, scores, labels, permutation_repeats, seed, mode);
  const std::vector<AnovaResult> anova = anova_fpc(scores, labels);
  for (const AnovaResult& r : anova) {
    table.f_statistic.push_back(r.f);
    table.p_value.push_back(r.p_value);
    table.eta_squared.push_back(r.eta_squared);
  }
  table.explained_variance_fraction.assign(
      explained_fractions.data(),
      explained_fractions.data() + explained_fractions.size());
  return table;
}

}  // namespace frfx
