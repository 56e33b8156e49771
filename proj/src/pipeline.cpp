#include "frfx/pipeline.hpp"

#include <fstream>
#include <numeric>

#include "frfx/artifact_io.hpp"
#include "frfx/svg.hpp"
#include "frfx/ucr.hpp"
#include "frfx/util.hpp"

namespace frfx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::uint64_t kPermutationSeedTag = 101;
constexpr std::uint64_t kSingleTreeSeedTag = 102;

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_scores_csv(const Eigen::MatrixXd& scores,
                      const std::vector<int>& labels, const fs::path& path) {
  auto out = open_out(path);
  out << "row,label";
  for (Eigen::Index k = 0; k < scores.cols(); ++k) out << ",fpc" << (k + 1);
  out << '\n';
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    out << i << ',' << labels[static_cast<std::size_t>(i)];
    for (Eigen::Index k = 0; k < scores.cols(); ++k) {
      out << ',' << format_full(scores(i, k));
    }
    out << '\n';
  }
}

}  // namespace

void RunConfig::validate() const {
  if (n_components < 1) throw InvalidConfig("--k must be >= 1");
  if (smoothing.n_basis < smoothing.order) {
    throw InvalidConfig("--n-basis must be >= --order");
  }
  if (smoothing.order < 2) throw InvalidConfig("--order must be >= 2");
  if (smoothing.penalty < 0) throw InvalidConfig("--penalty must be >= 0");
  if (pdp_grid < 2) throw InvalidConfig("--grid must be >= 2");
  if (heatmap_grid < 2) throw InvalidConfig("--heatmap-grid must be >= 2");
  if (permutation_repeats < 1) throw InvalidConfig("--repeats must be >= 1");
  if (n_windows < 2) throw InvalidConfig("--windows must be >= 2");
  if (forest.n_trees < 1) throw InvalidConfig("--trees must be >= 1");
  if (anova_set != "train" && anova_set != "test") {
    throw InvalidConfig("--anova-set must be train or test");
  }
}

TrainedModel train_model(const FunctionalDataset& train, const RunConfig& config) {
  const BasisSystem basis =
      build_basis(train.grid, config.smoothing.n_basis, config.smoothing.order);
  const SmoothedCurves smoothed = smooth(train, basis, config.smoothing.penalty);

  TrainedModel model;
  model.smoothing = config.smoothing;
  model.fpca = fit_fpca(smoothed, config.n_components);
  ForestConfig forest_config = config.forest;
  forest_config.seed = config.seed;
  model.forest = fit_forest(model.fpca.scores, train.labels, forest_config);
  model.train_labels = train.labels;
  return model;
}

PipelineSummary run_pipeline(const RunConfig& config) {
  config.validate();
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);

  PipelineSummary summary;
  const auto add = [&](const fs::path& p) {
    summary.files.push_back(p);
    return p;
  };

  // train
  const FunctionalDataset train = load_ucr(config.train_path);
  if (!train.has_labels()) throw SingleClassData("training data has no labels");
  const TrainedModel model = train_model(train, config);
  summary.n_train = train.n_curves();
  summary.explained_fractions = explained_variance(model.fpca);
  const int k = config.n_components;

  save_model(model, add(out_dir / "model.json"));

  {
    auto out = open_out(add(out_dir / "explained_variance.csv"));
    out << "fpc,eigenvalue,fraction,fraction_of_total,cumulative_fraction_of_total\n";
    double cumulative = 0.0;
    for (int i = 0; i < k; ++i) {
      const double of_total = model.fpca.eigenvalues(i) / model.fpca.total_variance;
      cumulative += of_total;
      out << (i + 1) << ',' << format_full(model.fpca.eigenvalues(i)) << ','
          << format_full(summary.explained_fractions(i)) << ','
          << format_full(of_total) << ',' << format_full(cumulative) << '\n';
    }
  }
  write_scores_csv(model.fpca.scores, model.train_labels,
                   add(out_dir / "scores_train.csv"));

  // test
  const FunctionalDataset test = load_ucr(config.test_path);
  const BasisSystem basis =
      build_basis(test.grid, config.smoothing.n_basis, config.smoothing.order);
  const Eigen::MatrixXd test_scores =
      project(model.fpca, smooth(test, basis, config.smoothing.penalty));
  summary.n_test = test.n_curves();
  {
    auto out = open_out(add(out_dir / "predictions_test.csv"));
    out << "row,label_true,label_pred,proba1\n";
    int correct = 0;
    for (int i = 0; i < test.n_curves(); ++i) {
      const Eigen::VectorXd row = test_scores.row(i).transpose();
      const int pred = predict_label(model.forest, row);
      const double proba = predict_proba(model.forest, row);
      const int truth = test.has_labels() ? test.labels[static_cast<std::size_t>(i)] : -1;
      if (pred == truth) ++correct;
      out << i << ',' << truth << ',' << pred << ',' << format_full(proba) << '\n';
    }
    summary.test_accuracy =
        test.has_labels() ? static_cast<double>(correct) / test.n_curves() : 0.0;
  }
  if (test.has_labels()) {
    write_scores_csv(test_scores, test.labels, add(out_dir / "scores_test.csv"));
  }

  // out-of-bag report
  if (model.forest.config.bootstrap) {
    const OobReport oob = oob_evaluate(model.forest, model.fpca.scores,
                                       model.train_labels);
    summary.oob_error_rate = oob.oob_error_rate;
    auto out = open_out(add(out_dir / "oob.csv"));
    out << "row,oob_vote_fraction,covered\n";
    for (std::size_t i = 0; i < oob.vote_fraction.size(); ++i) {
      const bool covered = !std::isnan(oob.vote_fraction[i]);
      out << i << ',' << (covered ? format_full(oob.vote_fraction[i]) : "")
          << ',' << (covered ? 1 : 0) << '\n';
    }
  }

  // partial dependence, one curve per component
  std::vector<PdpCurve> pdps;
  for (int j = 0; j < k; ++j) {
    pdps.push_back(compute_fpdp(model.forest, model.fpca.scores, j,
                                config.pdp_grid, config.scale));
  }
  export_artifact(pdps, ExportFormat::csv, add(out_dir / "fpdp.csv"));
  export_artifact(pdps, ExportFormat::json, add(out_dir / "fpdp.json"));
  {
    PlotSpec spec;
    spec.kind = PlotKind::line_grid;
    spec.pdps = &pdps;
    spec.title = "Functional partial dependence";
    render_svg(spec, add(out_dir / "fpdp.svg"));
  }

  // probability heatmap
  std::vector<int> all_fpcs(static_cast<std::size_t>(k));
  std::iota(all_fpcs.begin(), all_fpcs.end(), 0);
  const HeatmapGrid heatmap = compute_fpcph(model.forest, model.fpca.scores,
                                            all_fpcs, config.heatmap_grid);
  export_artifact(heatmap, ExportFormat::csv, add(out_dir / "heatmap.csv"));
  export_artifact(heatmap, ExportFormat::json, add(out_dir / "heatmap.json"));
  {
    PlotSpec spec;
    spec.kind = PlotKind::heatmap;
    spec.heatmap = &heatmap;
    render_svg(spec, add(out_dir / "heatmap.svg"));
  }

  // importance metrics; external metrics on train scores unless asked not to
  const bool anova_on_test = config.anova_set == "test" && test.has_labels();
  const Eigen::MatrixXd& anova_scores =
      anova_on_test ? test_scores : model.fpca.scores;
  const std::vector<int>& anova_labels =
      anova_on_test ? test.labels : model.train_labels;

  ImportanceTable table = build_importance_table(
      model.forest, model.fpca.scores, model.train_labels,
      summary.explained_fractions, config.permutation_repeats,
      Rng::derive(config.seed, kPermutationSeedTag, 0).next(),
      model.forest.config.bootstrap ? PermutationErrorMode::oob
                                    : PermutationErrorMode::plain);
  if (anova_on_test) {
    const std::vector<AnovaResult> anova = anova_fpc(anova_scores, anova_labels);
    for (std::size_t i = 0; i < anova.size(); ++i) {
      table.f_statistic[i] = anova[i].f;
      table.p_value[i] = anova[i].p_value;
      table.eta_squared[i] = anova[i].eta_squared;
    }
  }
  export_artifact(table, ExportFormat::csv, add(out_dir / "importance.csv"));
  export_artifact(table, ExportFormat::json, add(out_dir / "importance.json"));
  {
    PlotSpec spec;
    spec.kind = PlotKind::bar;
    spec.importance = &table;
    spec.title = "FPC importance";
    render_svg(spec, add(out_dir / "importance.svg"));
  }

  // class-conditional distributions
  const ClassConditionalScores violins =
      scores_by_class(anova_scores, anova_labels);
  export_artifact(violins, ExportFormat::csv, add(out_dir / "violin.csv"));
  export_artifact(violins, ExportFormat::json, add(out_dir / "violin.json"));
  {
    PlotSpec spec;
    spec.kind = PlotKind::violin;
    spec.violins = &violins;
    spec.violin_pvalues = table.p_value;
    spec.title = "FPC scores by class";
    render_svg(spec, add(out_dir / "violin.svg"));
  }

  // bubble plot
  const BubblePlotData bubble = bubble_data(table);
  export_artifact(bubble, ExportFormat::csv, add(out_dir / "bubble.csv"));
  export_artifact(bubble, ExportFormat::json, add(out_dir / "bubble.json"));
  {
    PlotSpec spec;
    spec.kind = PlotKind::bubble;
    spec.bubble = &bubble;
    spec.x_label = "eta squared";
    spec.y_label = "mean decrease in Gini";
    render_svg(spec, add(out_dir / "bubble.svg"));
  }

  // score-interval reconstruction bands, one file per component + SVG for
  // the first three
  {
    auto out = open_out(add(out_dir / "bands.csv"));
    out << "fpc,window,window_lo,window_hi,t,lower,upper,mean\n";
    for (int j = 0; j < k; ++j) {
      const ReconstructionBands bands = reconstruction_bands(
          model.fpca, model.fpca.scores, j, config.n_windows);
      for (std::size_t w = 0; w < bands.windows.size(); ++w) {
        const BandWindow& window = bands.windows[w];
        for (Eigen::Index t = 0; t < window.lower.size(); ++t) {
          out << (j + 1) << ',' << w << ',' << format_full(window.lo) << ','
              << format_full(window.hi) << ',' << t << ','
              << format_full(window.lower(t)) << ','
              << format_full(window.upper(t)) << ','
              << format_full(bands.mean_curve(t)) << '\n';
        }
      }
      if (j < 3) {
        PlotSpec spec;
        spec.kind = PlotKind::band;
        spec.bands = &bands;
        render_svg(spec, add(out_dir / ("bands_fpc" + std::to_string(j + 1) + ".svg")));
      }
    }
  }

  // illustrative single pruned tree: full sample, all features at each split
  {
    ForestConfig single = model.forest.config;
    single.mtry = k;
    single.bootstrap = false;
    Rng rng = Rng::derive(config.seed, kSingleTreeSeedTag, 0);
    const TreeNode tree =
        grow_tree(model.fpca.scores, model.train_labels, single, rng);
    const TreeNode pruned = prune_tree(tree, config.prune_alpha, single.criterion);
    json j;
    j["prune_alpha"] = config.prune_alpha;
    j["leaves_before"] = leaf_count(tree);
    j["leaves_after"] = leaf_count(pruned);
    j["tree"] = tree_to_json(pruned);
    auto out = open_out(add(out_dir / "fct_pruned.json"));
    out << j.dump(1) << '\n';
  }

  // run provenance
  {
    json j;
    j["train"] = config.train_path;
    j["test"] = config.test_path;
    j["seed"] = config.seed;
    j["n_basis"] = config.smoothing.n_basis;
    j["order"] = config.smoothing.order;
    j["penalty"] = config.smoothing.penalty;
    j["k"] = config.n_components;
    j["trees"] = config.forest.n_trees;
    j["mtry"] = config.forest.mtry == 0 ? default_mtry(config.n_components)
                                        : config.forest.mtry;
    j["criterion"] = config.forest.criterion == Criterion::gini ? "gini" : "entropy";
    j["grid"] = config.pdp_grid;
    j["heatmap_grid"] = config.heatmap_grid;
    j["repeats"] = config.permutation_repeats;
    j["windows"] = config.n_windows;
    j["scale"] = config.scale == PdpScale::probability ? "prob" : "logit";
    j["anova_set"] = config.anova_set;
    j["n_train"] = summary.n_train;
    j["n_test"] = summary.n_test;
    j["test_accuracy"] = summary.test_accuracy;
    j["oob_error_rate"] = summary.oob_error_rate;
    auto out = open_out(add(out_dir / "summary.json"));
    out << j.dump(1) << '\n';
  }

  return summary;
}

}  // namespace frfx
