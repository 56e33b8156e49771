#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frfx/forest.hpp"
#include "frfx/fpca.hpp"
#include "frfx/stats.hpp"

namespace frfx {

using Predictor = std::function<double(const Eigen::VectorXd&)>;

enum class PdpScale { probability, logit };

/// Partial dependence of the prediction on one FPC score: for each grid
/// value the other coordinates keep their observed per-row values and the
/// predictions are averaged over rows.
struct PdpCurve {
  int fpc_index = 0;  // 0-based
  Eigen::VectorXd score_grid;
  Eigen::VectorXd values;
  PdpScale scale = PdpScale::probability;
};

/// One row per FPC: class-1 probability over that FPC's observed score
/// range with every other coordinate pinned at its column mean. One model
/// evaluation per cell, no averaging (this is what separates it from the
/// partial dependence curve).
struct HeatmapGrid {
  std::vector<int> fpc_indices;
  Eigen::MatrixXd score_grids;    // F x M, per-FPC grids
  Eigen::MatrixXd probabilities;  // F x M
};

struct ImportanceTable {
  std::vector<double> mdg;
  std::vector<double> permutation_importance;
  std::vector<double> f_statistic;
  std::vector<double> p_value;
  std::vector<double> eta_squared;
  std::vector<double> explained_variance_fraction;

  int size() const { return static_cast<int>(mdg.size()); }
};

struct ScoreDistribution {
  std::vector<double> sample;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  Eigen::VectorXd density_grid;
  Eigen::VectorXd density;
};

/// Per-FPC score distributions conditioned on the class label.
struct ClassConditionalScores {
  std::vector<std::array<ScoreDistribution, 2>> per_fpc;  // [k][class]
};

enum class Quadrant { critical, model_specific, externally_relevant, minor };

std::string quadrant_name(Quadrant q);

struct BubblePoint {
  int fpc_index = 0;
  double external = 0.0;
  double internal = 0.0;
  double size = 0.0;  // explained variance fraction
  Quadrant quadrant = Quadrant::minor;
};

/// Quadrant layout of internal vs external importance; values at or above
/// the median count as "high".
struct BubblePlotData {
  std::vector<BubblePoint> points;
  double median_internal = 0.0;
  double median_external = 0.0;
};

struct BandWindow {
  double lo = 0.0;
  double hi = 0.0;
  Eigen::VectorXd lower;  // envelope on the grid
  Eigen::VectorXd upper;
};

/// Envelopes of mu + v * xi_k for v ranging over equal-width windows of the
/// observed score range of FPC k.
struct ReconstructionBands {
  int fpc_index = 0;
  std::vector<BandWindow> windows;
  Eigen::VectorXd mean_curve;
};

PdpCurve compute_fpdp(const Predictor& predictor, const Eigen::MatrixXd& scores,
                      int k, int grid_size, PdpScale scale);
PdpCurve compute_fpdp(const FunctionalRandomForest& forest,
                      const Eigen::MatrixXd& scores, int k, int grid_size,
                      PdpScale scale);

double logit_clamped(double p);  // ln(p/(1-p)), p clamped to [1e-6, 1-1e-6]

HeatmapGrid compute_fpcph(const Predictor& predictor,
                          const Eigen::MatrixXd& scores,
                          const std::vector<int>& fpc_indices, int m_grid);
HeatmapGrid compute_fpcph(const FunctionalRandomForest& forest,
                          const Eigen::MatrixXd& scores,
                          const std::vector<int>& fpc_indices, int m_grid);

/// Envelope of {mu + v xi_k : v in [lo, hi]}; pointwise extremes sit at the
/// interval endpoints because the reconstruction is linear in v.
std::pair<Eigen::VectorXd, Eigen::VectorXd> band_envelope(const FpcaModel& fpca,
                                                          int k, double lo,
                                                          double hi);

ReconstructionBands reconstruction_bands(const FpcaModel& fpca,
                                         const Eigen::MatrixXd& scores, int k,
                                         int n_windows = 4);

/// Mean decrease in impurity: per-feature recorded split decreases summed
/// per tree and averaged over trees. `weighted` scales every split by its
/// node sample fraction; features never split on are exactly zero.
std::vector<double> mdg_importance(const FunctionalRandomForest& forest,
                                   bool weighted = true);

enum class PermutationErrorMode {
  plain,  // full-forest predictions on the supplied set
  oob,    // per-row votes restricted to trees where the row is out of bag
};

/// Mean increase of the misclassification rate over `repeats` random
/// permutations of each score column. Each (feature, repeat) pair uses the
/// sub-stream (seed, feature, repeat), so results do not depend on order of
/// evaluation.
std::vector<double> permutation_importance(
    const FunctionalRandomForest& forest, const Eigen::MatrixXd& scores,
    const std::vector<int>& labels, int repeats, std::uint64_t seed,
    PermutationErrorMode mode = PermutationErrorMode::plain);

/// Per-repeat deltas (K x repeats), for callers that need the spread.
Eigen::MatrixXd permutation_importance_detailed(
    const FunctionalRandomForest& forest, const Eigen::MatrixXd& scores,
    const std::vector<int>& labels, int repeats, std::uint64_t seed,
    PermutationErrorMode mode = PermutationErrorMode::plain);

ClassConditionalScores scores_by_class(const Eigen::MatrixXd& scores,
                                       const std::vector<int>& labels);

enum class InternalMetric { mdg, permutation };
enum class ExternalMetric { eta_squared, f_statistic };

BubblePlotData bubble_data(const ImportanceTable& table,
                           InternalMetric internal = InternalMetric::mdg,
                           ExternalMetric external = ExternalMetric::eta_squared);

/// Convenience assembly of every importance metric for one trained forest.
ImportanceTable build_importance_table(
    const FunctionalRandomForest& forest, const Eigen::MatrixXd& scores,
    const std::vector<int>& labels, const Eigen::VectorXd& explained_fractions,
    int permutation_repeats, std::uint64_t seed,
    PermutationErrorMode mode = PermutationErrorMode::plain,
    bool weighted_mdg = true);

}  // namespace frfx
