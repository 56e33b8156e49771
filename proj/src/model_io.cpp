#include "frfx/model_io.hpp"

#include <fstream>

namespace frfx {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vector_from_json(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows.push_back(vector_to_json(m.row(i).transpose()));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& rows) {
  if (rows.empty()) return {};
  Eigen::MatrixXd m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i][j].get<double>();
    }
  }
  return m;
}

std::string criterion_name(Criterion c) {
  return c == Criterion::gini ? "gini" : "entropy";
}

Criterion criterion_from_name(const std::string& name) {
  if (name == "gini") return Criterion::gini;
  if (name == "entropy") return Criterion::entropy;
  throw CorruptModel("unknown criterion '" + name + "'");
}

}  // namespace

json tree_to_json(const TreeNode& node) {
  json j;
  j["counts"] = {node.class_counts[0], node.class_counts[1]};
  if (node.is_leaf()) {
    j["class"] = node.predicted_class();
    j["p1"] = node.class1_fraction();
  } else {
    j["split"] = {{"fpc", node.rule.fpc_index},
                  {"threshold", node.rule.threshold}};
    j["decrease"] = node.decrease;
    j["left"] = tree_to_json(*node.left);
    j["right"] = tree_to_json(*node.right);
  }
  return j;
}

TreeNode tree_from_json(const json& j) {
  TreeNode node;
  node.class_counts = {j.at("counts")[0].get<std::int64_t>(),
                       j.at("counts")[1].get<std::int64_t>()};
  if (j.contains("split")) {
    node.rule.fpc_index = j.at("split").at("fpc").get<int>();
    node.rule.threshold = j.at("split").at("threshold").get<double>();
    node.decrease = j.at("decrease").get<double>();
    node.left = std::make_unique<TreeNode>(tree_from_json(j.at("left")));
    node.right = std::make_unique<TreeNode>(tree_from_json(j.at("right")));
  }
  return node;
}

json forest_to_json(const FunctionalRandomForest& forest) {
  json j;
  j["config"] = {
      {"n_trees", forest.config.n_trees},
      {"mtry", forest.config.mtry},
      {"criterion", criterion_name(forest.config.criterion)},
      {"min_node_size", forest.config.min_node_size},
      {"max_depth", forest.config.max_depth},
      {"bootstrap", forest.config.bootstrap},
      {"seed", forest.config.seed},
      {"probability", forest.config.probability == ProbabilityMode::vote_fraction
                          ? "vote_fraction"
                          : "leaf_average"},
  };
  j["n_features"] = forest.n_features;
  json trees = json::array();
  for (const TreeNode& tree : forest.trees) trees.push_back(tree_to_json(tree));
  j["trees"] = std::move(trees);
  j["bootstrap_indices"] = forest.bootstrap_indices;
  return j;
}

FunctionalRandomForest forest_from_json(const json& j) {
  FunctionalRandomForest forest;
  const json& cfg = j.at("config");
  forest.config.n_trees = cfg.at("n_trees").get<int>();
  forest.config.mtry = cfg.at("mtry").get<int>();
  forest.config.criterion = criterion_from_name(cfg.at("criterion").get<std::string>());
  forest.config.min_node_size = cfg.at("min_node_size").get<int>();
  forest.config.max_depth = cfg.at("max_depth").get<int>();
  forest.config.bootstrap = cfg.at("bootstrap").get<bool>();
  forest.config.seed = cfg.at("seed").get<std::uint64_t>();
  forest.config.probability =
      cfg.at("probability").get<std::string>() == "vote_fraction"
          ? ProbabilityMode::vote_fraction
          : ProbabilityMode::leaf_average;
  forest.n_features = j.at("n_features").get<int>();
  for (const json& tree : j.at("trees")) {
    forest.trees.push_back(tree_from_json(tree));
  }
  forest.bootstrap_indices =
      j.at("bootstrap_indices").get<std::vector<std::vector<int>>>();
  return forest;
}

json fpca_to_json(const FpcaModel& model) {
  json j;
  j["grid_points"] = vector_to_json(model.grid.points);
  j["mean_curve"] = vector_to_json(model.mean_curve);
  j["eigenfunctions"] = matrix_to_json(model.eigenfunctions);
  j["eigenvalues"] = vector_to_json(model.eigenvalues);
  j["scores"] = matrix_to_json(model.scores);
  j["total_variance"] = model.total_variance;
  j["reconstruction_residual_norm"] =
      vector_to_json(model.reconstruction_residual_norm);
  return j;
}

FpcaModel fpca_from_json(const json& j) {
  FpcaModel model;
  model.grid = TimeGrid::from_points(vector_from_json(j.at("grid_points")));
  model.mean_curve = vector_from_json(j.at("mean_curve"));
  model.eigenfunctions = matrix_from_json(j.at("eigenfunctions"));
  model.eigenvalues = vector_from_json(j.at("eigenvalues"));
  model.scores = matrix_from_json(j.at("scores"));
  model.total_variance = j.at("total_variance").get<double>();
  model.reconstruction_residual_norm =
      vector_from_json(j.at("reconstruction_residual_norm"));
  return model;
}

void save_model(const TrainedModel& model, const std::filesystem::path& path) {
  json j;
  j["schema_version"] = kModelSchemaVersion;
  j["kind"] = "frfx-model";
  j["smoothing"] = {{"n_basis", model.smoothing.n_basis},
                    {"order", model.smoothing.order},
                    {"penalty", model.smoothing.penalty}};
  j["fpca"] = fpca_to_json(model.fpca);
  j["forest"] = forest_to_json(model.forest);
  j["train_labels"] = model.train_labels;

  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write to " + path.string() + " failed");
}

TrainedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw CorruptModel("cannot parse " + path.string() + ": " + e.what());
  }
  if (!j.contains("schema_version")) {
    throw CorruptModel("missing schema_version in " + path.string());
  }
  const int version = j.at("schema_version").get<int>();
  if (version != kModelSchemaVersion) {
    throw SchemaVersionMismatch("model schema version " +
                                std::to_string(version) + ", expected " +
                                std::to_string(kModelSchemaVersion));
  }
  try {
    TrainedModel model;
    model.smoothing.n_basis = j.at("smoothing").at("n_basis").get<int>();
    model.smoothing.order = j.at("smoothing").at("order").get<int>();
    model.smoothing.penalty = j.at("smoothing").at("penalty").get<double>();
    model.fpca = fpca_from_json(j.at("fpca"));
    model.forest = forest_from_json(j.at("forest"));
    model.train_labels = j.at("train_labels").get<std::vector<int>>();
    return model;
  } catch (const json::exception& e) {
    throw CorruptModel("malformed model " + path.string() + ": " + e.what());
  }
}

}  // namespace frfx
