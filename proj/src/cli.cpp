#include "frfx/cli.hpp"

#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>

#include "frfx/artifact_io.hpp"
#include "frfx/pipeline.hpp"
#include "frfx/svg.hpp"
#include "frfx/ucr.hpp"
#include "frfx/util.hpp"

namespace frfx {

namespace fs = std::filesystem;

namespace {

void add_smoothing_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--n-basis", config.smoothing.n_basis, "number of B-spline basis functions");
  cmd->add_option("--order", config.smoothing.order, "B-spline order (degree + 1)");
  cmd->add_option("--penalty", config.smoothing.penalty, "second-difference roughness penalty");
}

void add_model_flags(CLI::App* cmd, RunConfig& config) {
  add_smoothing_flags(cmd, config);
  cmd->add_option("--k", config.n_components, "number of FPCs");
  cmd->add_option("--trees", config.forest.n_trees, "number of trees");
  cmd->add_option("--mtry", config.forest.mtry, "features per split (0 = floor(sqrt(K)))");
  cmd->add_option("--criterion", [&config](const std::vector<std::string>& v) {
        if (v[0] == "gini") {
          config.forest.criterion = Criterion::gini;
        } else if (v[0] == "entropy") {
          config.forest.criterion = Criterion::entropy;
        } else {
          return false;
        }
        return true;
      }, "split criterion: gini or entropy");
  cmd->add_option("--min-node", config.forest.min_node_size, "nodes this small become leaves");
  cmd->add_option("--max-depth", config.forest.max_depth, "tree depth cap (0 = unbounded)");
  cmd->add_flag("--no-bootstrap", [&config](std::int64_t) { config.forest.bootstrap = false; },
                "train each tree on the full sample");
}

void add_explain_flags(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--grid", config.pdp_grid, "partial dependence grid size");
  cmd->add_option("--heatmap-grid", config.heatmap_grid, "heatmap grid size");
  cmd->add_option("--repeats", config.permutation_repeats, "permutation importance repeats");
  cmd->add_option("--windows", config.n_windows, "score windows for reconstruction bands");
  cmd->add_option("--scale", [&config](const std::vector<std::string>& v) {
        if (v[0] == "prob") {
          config.scale = PdpScale::probability;
        } else if (v[0] == "logit") {
          config.scale = PdpScale::logit;
        } else {
          return false;
        }
        return true;
      }, "partial dependence scale: prob or logit");
  cmd->add_option("--anova-set", config.anova_set, "scores for external metrics: train or test");
  cmd->add_option("--prune-alpha", config.prune_alpha, "cost-complexity alpha for the single pruned tree");
}

Eigen::MatrixXd scores_for(const TrainedModel& model,
                           const FunctionalDataset& data) {
  const BasisSystem basis =
      build_basis(data.grid, model.smoothing.n_basis, model.smoothing.order);
  return project(model.fpca, smooth(data, basis, model.smoothing.penalty));
}

int cmd_smooth(const RunConfig& config) {
  const FunctionalDataset data = load_ucr(config.train_path);
  const BasisSystem basis =
      build_basis(data.grid, config.smoothing.n_basis, config.smoothing.order);
  const SmoothedCurves smoothed = smooth(data, basis, config.smoothing.penalty);
  fs::create_directories(config.out_dir);

  std::ofstream coef(fs::path(config.out_dir) / "coefficients.csv");
  coef << "row";
  for (int s = 0; s < basis.n_basis; ++s) coef << ",c" << (s + 1);
  coef << '\n';
  for (int i = 0; i < smoothed.n_curves(); ++i) {
    coef << i;
    for (int s = 0; s < basis.n_basis; ++s) {
      coef << ',' << format_full(smoothed.coefficients(i, s));
    }
    coef << '\n';
  }

  const Eigen::MatrixXd fitted = smoothed.evaluate();
  std::ofstream curves(fs::path(config.out_dir) / "smoothed.csv");
  curves << "row,t,value\n";
  for (Eigen::Index i = 0; i < fitted.rows(); ++i) {
    for (Eigen::Index j = 0; j < fitted.cols(); ++j) {
      curves << i << ',' << format_full(data.grid.points(j)) << ','
             << format_full(fitted(i, j)) << '\n';
    }
  }
  std::cout << "smoothed " << smoothed.n_curves() << " curves with "
            << basis.n_basis << " basis functions\n";
  return 0;
}

int cmd_fpca(const RunConfig& config) {
  const FunctionalDataset data = load_ucr(config.train_path);
  const BasisSystem basis =
      build_basis(data.grid, config.smoothing.n_basis, config.smoothing.order);
  const FpcaModel model =
      fit_fpca(smooth(data, basis, config.smoothing.penalty), config.n_components);
  fs::create_directories(config.out_dir);

  const Eigen::VectorXd fractions = explained_variance(model);
  std::ofstream out(fs::path(config.out_dir) / "explained_variance.csv");
  out << "fpc,eigenvalue,fraction,fraction_of_total\n";
  for (int i = 0; i < config.n_components; ++i) {
    out << (i + 1) << ',' << format_full(model.eigenvalues(i)) << ','
        << format_full(fractions(i)) << ','
        << format_full(model.eigenvalues(i) / model.total_variance) << '\n';
  }

  std::ofstream eig(fs::path(config.out_dir) / "eigenfunctions.csv");
  eig << "fpc,t,value\n";
  for (int k = 0; k < config.n_components; ++k) {
    for (int j = 0; j < model.grid.size(); ++j) {
      eig << (k + 1) << ',' << format_full(model.grid.points(j)) << ','
          << format_full(model.eigenfunctions(k, j)) << '\n';
    }
  }
  std::cout << "first FPC explains " << format_full(fractions(0) * 100.0)
            << "% of kept variance\n";
  return 0;
}

int cmd_train(const RunConfig& config) {
  const FunctionalDataset train = load_ucr(config.train_path);
  const TrainedModel model = train_model(train, config);
  fs::create_directories(config.out_dir);
  save_model(model, fs::path(config.out_dir) / "model.json");
  if (model.forest.config.bootstrap) {
    const OobReport oob =
        oob_evaluate(model.forest, model.fpca.scores, model.train_labels);
    std::cout << "oob error rate " << format_full(oob.oob_error_rate)
              << " (coverage " << format_full(oob.coverage) << ")\n";
  }
  std::cout << "model written to "
            << (fs::path(config.out_dir) / "model.json").string() << '\n';
  return 0;
}

int cmd_predict(const std::string& model_path, const RunConfig& config) {
  const TrainedModel model = load_model(model_path);
  const FunctionalDataset test = load_ucr(config.test_path);
  const Eigen::MatrixXd scores = scores_for(model, test);
  fs::create_directories(config.out_dir);

  std::ofstream out(fs::path(config.out_dir) / "predictions.csv");
  out << "row,label_true,label_pred,proba1\n";
  int correct = 0;
  for (int i = 0; i < test.n_curves(); ++i) {
    const Eigen::VectorXd row = scores.row(i).transpose();
    const int pred = predict_label(model.forest, row);
    const int truth = test.has_labels() ? test.labels[static_cast<std::size_t>(i)] : -1;
    if (pred == truth) ++correct;
    out << i << ',' << truth << ',' << pred << ','
        << format_full(predict_proba(model.forest, row)) << '\n';
  }
  if (test.has_labels()) {
    std::cout << "accuracy "
              << format_full(static_cast<double>(correct) / test.n_curves())
              << " on " << test.n_curves() << " rows\n";
  }
  return 0;
}

int cmd_explain(const std::string& what, const std::string& model_path,
                const RunConfig& config) {
  const TrainedModel model = load_model(model_path);
  const fs::path out_dir(config.out_dir);
  fs::create_directories(out_dir);
  const Eigen::MatrixXd& scores = model.fpca.scores;
  const std::vector<int>& labels = model.train_labels;
  const int k = model.fpca.n_components();

  if (what == "pdp") {
    std::vector<PdpCurve> pdps;
    for (int j = 0; j < k; ++j) {
      pdps.push_back(compute_fpdp(model.forest, scores, j, config.pdp_grid,
                                  config.scale));
    }
    export_artifact(pdps, ExportFormat::csv, out_dir / "fpdp.csv");
    export_artifact(pdps, ExportFormat::json, out_dir / "fpdp.json");
    PlotSpec spec;
    spec.kind = PlotKind::line_grid;
    spec.pdps = &pdps;
    render_svg(spec, out_dir / "fpdp.svg");
  } else if (what == "heatmap") {
    std::vector<int> all(static_cast<std::size_t>(k));
    std::iota(all.begin(), all.end(), 0);
    const HeatmapGrid heatmap =
        compute_fpcph(model.forest, scores, all, config.heatmap_grid);
    export_artifact(heatmap, ExportFormat::csv, out_dir / "heatmap.csv");
    export_artifact(heatmap, ExportFormat::json, out_dir / "heatmap.json");
    PlotSpec spec;
    spec.kind = PlotKind::heatmap;
    spec.heatmap = &heatmap;
    render_svg(spec, out_dir / "heatmap.svg");
  } else if (what == "importance" || what == "bubble") {
    const ImportanceTable table = build_importance_table(
        model.forest, scores, labels, explained_variance(model.fpca),
        config.permutation_repeats,
        Rng::derive(config.seed, 101, 0).next(),
        model.forest.config.bootstrap ? PermutationErrorMode::oob
                                      : PermutationErrorMode::plain);
    if (what == "importance") {
      export_artifact(table, ExportFormat::csv, out_dir / "importance.csv");
      export_artifact(table, ExportFormat::json, out_dir / "importance.json");
      PlotSpec spec;
      spec.kind = PlotKind::bar;
      spec.importance = &table;
      render_svg(spec, out_dir / "importance.svg");
    } else {
      const BubblePlotData bubble = bubble_data(table);
      export_artifact(bubble, ExportFormat::csv, out_dir / "bubble.csv");
      export_artifact(bubble, ExportFormat::json, out_dir / "bubble.json");
      PlotSpec spec;
      spec.kind = PlotKind::bubble;
      spec.bubble = &bubble;
      render_svg(spec, out_dir / "bubble.svg");
    }
  } else if (what == "violin") {
    const ClassConditionalScores violins = scores_by_class(scores, labels);
    export_artifact(violins, ExportFormat::csv, out_dir / "violin.csv");
    export_artifact(violins, ExportFormat::json, out_dir / "violin.json");
    const std::vector<AnovaResult> anova = anova_fpc(scores, labels);
    PlotSpec spec;
    spec.kind = PlotKind::violin;
    spec.violins = &violins;
    for (const AnovaResult& r : anova) spec.violin_pvalues.push_back(r.p_value);
    render_svg(spec, out_dir / "violin.svg");
  } else if (what == "bands") {
    for (int j = 0; j < k; ++j) {
      const ReconstructionBands bands =
          reconstruction_bands(model.fpca, scores, j, config.n_windows);
      const std::string stem = "bands_fpc" + std::to_string(j + 1);
      export_artifact(bands, ExportFormat::csv, out_dir / (stem + ".csv"));
      export_artifact(bands, ExportFormat::json, out_dir / (stem + ".json"));
      PlotSpec spec;
      spec.kind = PlotKind::band;
      spec.bands = &bands;
      render_svg(spec, out_dir / (stem + ".svg"));
    }
  }
  std::cout << "explain " << what << " artifacts written to " << out_dir.string()
            << '\n';
  return 0;
}

int cmd_render(const std::string& artifact_path, const std::string& kind,
               const std::string& out_path) {
  const nlohmann::json j = read_json_file(artifact_path);
  PlotSpec spec;
  std::vector<PdpCurve> pdps;
  ReconstructionBands bands;
  HeatmapGrid heatmap;
  BubblePlotData bubble;
  ClassConditionalScores violins;
  ImportanceTable importance;

  if (kind == "pdp") {
    if (j.is_array()) {
      for (const auto& item : j) pdps.push_back(pdp_from_json(item));
    } else {
      pdps.push_back(pdp_from_json(j));
    }
    spec.kind = PlotKind::line_grid;
    spec.pdps = &pdps;
  } else if (kind == "bands") {
    bands = bands_from_json(j);
    spec.kind = PlotKind::band;
    spec.bands = &bands;
  } else if (kind == "heatmap") {
    heatmap = heatmap_from_json(j);
    spec.kind = PlotKind::heatmap;
    spec.heatmap = &heatmap;
  } else if (kind == "bubble") {
    bubble = bubble_from_json(j);
    spec.kind = PlotKind::bubble;
    spec.bubble = &bubble;
  } else if (kind == "violin") {
    violins = violins_from_json(j);
    spec.kind = PlotKind::violin;
    spec.violins = &violins;
  } else if (kind == "importance") {
    importance = importance_from_json(j);
    spec.kind = PlotKind::bar;
    spec.importance = &importance;
  } else {
    throw InvalidSpec("unknown render kind '" + kind + "'");
  }
  render_svg(spec, out_path);
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"functional random forest training and explainability"};
  app.require_subcommand(1);
  app.fallthrough();  // lets --seed appear after the subcommand as well

  RunConfig config;
  std::string model_path;
  std::string artifact_path;
  std::string render_kind;
  std::string render_out;

  app.add_option("--seed", config.seed, "seed for all randomness")
      ->capture_default_str();

  auto* pipeline = app.add_subcommand(
      "pipeline", "train on a UCR file and export every explainability artifact");
  pipeline->add_option("--train", config.train_path, "training UCR file")->required();
  pipeline->add_option("--test", config.test_path, "test UCR file")->required();
  pipeline->add_option("--out", config.out_dir, "output directory")->required();
  add_model_flags(pipeline, config);
  add_explain_flags(pipeline, config);

  auto* smooth_cmd = app.add_subcommand("smooth", "fit basis coefficients");
  smooth_cmd->add_option("--train", config.train_path, "input UCR file")->required();
  smooth_cmd->add_option("--out", config.out_dir, "output directory")->required();
  add_smoothing_flags(smooth_cmd, config);

  auto* fpca_cmd = app.add_subcommand("fpca", "functional PCA of a UCR file");
  fpca_cmd->add_option("--train", config.train_path, "input UCR file")->required();
  fpca_cmd->add_option("--out", config.out_dir, "output directory")->required();
  add_smoothing_flags(fpca_cmd, config);
  fpca_cmd->add_option("--k", config.n_components, "number of FPCs");

  auto* train_cmd = app.add_subcommand("train", "train and save a model");
  train_cmd->add_option("--train", config.train_path, "training UCR file")->required();
  train_cmd->add_option("--out", config.out_dir, "output directory")->required();
  add_model_flags(train_cmd, config);

  auto* predict_cmd = app.add_subcommand("predict", "predict with a saved model");
  predict_cmd->add_option("--model", model_path, "model.json path")->required();
  predict_cmd->add_option("--test", config.test_path, "UCR file to score")->required();
  predict_cmd->add_option("--out", config.out_dir, "output directory")->required();

  auto* explain_cmd = app.add_subcommand("explain", "explainability artifacts from a saved model");
  explain_cmd->require_subcommand(1);
  std::string explain_what;
  for (const char* what : {"pdp", "heatmap", "importance", "violin", "bubble", "bands"}) {
    auto* sub = explain_cmd->add_subcommand(what);
    sub->add_option("--model", model_path, "model.json path")->required();
    sub->add_option("--out", config.out_dir, "output directory")->required();
    add_explain_flags(sub, config);
    sub->callback([&explain_what, what] { explain_what = what; });
  }

  auto* render_cmd = app.add_subcommand("render", "re-render an exported artifact JSON");
  render_cmd->add_option("--artifact", artifact_path, "artifact JSON path")->required();
  render_cmd
      ->add_option("--kind", render_kind,
                   "pdp, heatmap, importance, violin, bubble or bands")
      ->required();
  render_cmd->add_option("--out", render_out, "output SVG path")->required();

  std::vector<const char*> argv;
  argv.push_back("frfx");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (pipeline->parsed()) {
      const PipelineSummary summary = run_pipeline(config);
      std::cout << "pipeline done: " << summary.files.size()
                << " artifact files in " << config.out_dir << ", test accuracy "
                << format_full(summary.test_accuracy) << '\n';
      return 0;
    }
    if (smooth_cmd->parsed()) return cmd_smooth(config);
    if (fpca_cmd->parsed()) return cmd_fpca(config);
    if (train_cmd->parsed()) return cmd_train(config);
    if (predict_cmd->parsed()) return cmd_predict(model_path, config);
    if (explain_cmd->parsed()) return cmd_explain(explain_what, model_path, config);
    if (render_cmd->parsed()) return cmd_render(artifact_path, render_kind, render_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace frfx
