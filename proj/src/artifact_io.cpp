#include "frfx/artifact_io.hpp"

#include <fstream>

#include "frfx/util.hpp"

namespace frfx {

using nlohmann::json;

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_json(const json& j, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << j.dump(1) << '\n';
  if (!out) throw IoError("write to " + path.string() + " failed");
}

json vec_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vec_from(const json& arr) {
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  }
  return v;
}

Quadrant quadrant_from_name(const std::string& name) {
  if (name == "critical") return Quadrant::critical;
  if (name == "model-specific") return Quadrant::model_specific;
  if (name == "externally-relevant") return Quadrant::externally_relevant;
  if (name == "minor") return Quadrant::minor;
  throw IoError("unknown quadrant '" + name + "'");
}

const char* scale_name(PdpScale scale) {
  return scale == PdpScale::probability ? "probability" : "logit";
}

void write_pdp_rows(std::ofstream& out, const PdpCurve& curve) {
  for (Eigen::Index g = 0; g < curve.score_grid.size(); ++g) {
    out << (curve.fpc_index + 1) << ',' << format_full(curve.score_grid(g))
        << ',' << format_full(curve.values(g)) << ',' << scale_name(curve.scale)
        << '\n';
  }
}

}  // namespace

void export_artifact(const PdpCurve& curve, ExportFormat format,
                     const std::filesystem::path& path) {
  if (format == ExportFormat::json) {
    write_json(to_json(curve), path);
    return;
  }
  auto out = open_out(path);
  out << "fpc,score,value,scale\n";
  write_pdp_rows(out, curve);
}

void export_artifact(const std::vector<PdpCurve>& curves, ExportFormat format,
                     const std::filesystem::path& path) {
  if (format == ExportFormat::json) {
    json arr = json::array();
    for (const PdpCurve& c : curves) arr.push_back(to_json(c));
    write_json(arr, path);
    return;
  }
  auto out = open_out(path);
  out << "fpc,score,value,scale\n";
  for (const PdpCurve& c : curves) write_pdp_rows(out, c);
}

void export_artifact(const HeatmapGrid& grid, ExportFormat format,
                     const std::filesystem::path& path) {
  if (format == ExportFormat::json) {
    write_json(to_json(grid), path);
    return;
  }
  auto out = open_out(path);
  out << "fpc,grid_index,score,probability\n";
  for (std::size_t j = 0; j < grid.fpc_indices.size(); ++j) {
    for (Eigen::Index g = 0; g < grid.score_grids.cols(); ++g) {
      out << (grid.fpc_indices[j] + 1) << ',' << g << ','
          << format_full(grid.score_grids(static_cast<Eigen::Index>(j), g)) << ','
          << format_full(grid.probabilities(static_cast<Eigen::Index>(j), g))
          << '\n';
    }
  }
}

void export_artifact(const ImportanceTable& table, ExportFormat format,
                     const std::filesystem::path& path) {
  if (format == ExportFormat::json) {
    write_json(to_json(table), path);
    return;
  }
  auto out = open_out(path);
  out << "fpc,mdg,permutation_importance,f_statistic,p_value,eta_squared,"
         "explained_variance_fraction\n";
  for (int k = 0; k < table.size(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    out << (k + 1) << ',' << format_full(table.mdg[i]) << ','
        << format_full(table.permutation_importance[i]) << ','
        << format_full(table.f_statistic[i]) << ','
        << format_full(table.p_value[i]) << ','
        << format_full(table.eta_squared[i]) << ','
        << format_full(table.explained_variance_fraction[i]) << '\n';
  }
}

void export_artifact(const ClassConditionalScores& scores, ExportFormat format,
                     const std::filesystem::path& path) {
  if (format == ExportFormat::json) {
    write_json(to_json(scores), path);
    return;
  }
  auto out = open_out(path);
  out << "fpc,class,kind,index,value\n";
  for (std::size_t k = 0; k < scores.per_fpc.size(); ++k) {
    for (int y = 0; y < 2; ++y) {
      const ScoreDistribution& d = scores.per_fpc[k][static_cast<std::size_t>(y)];
      out << (k + 1) << ',' << y << ",q1,0," << format_full(d.q1) << '\n';
      out << (k + 1) << ',' << y << ",median,0," << format_full(d.median) << '\n';
      out << (k + 1) << ',' << y << ",q3,0," << format_full(d.q3) << '\n';
      for (std::size_t i = 0; i < d.sample.size(); ++i) {
        out << (k + 1) << ',' << y << ",sample," << i << ','
            << format_full(d.sample[i]) << '\n';
      }
      for (Eigen::Index i = 0; i < d.density_grid.size(); ++i) {
        out << (k + 1) << ',' << y << ",grid," << i << ','
            << format_full(d.density_grid(i)) << '\n';
        out << (k + 1) << ',' << y << ",density," << i << ','
            << format_full(d.density(i)) << '\n';
      }
    }
  }
}

void export_artifact(const BubblePlotData& data, ExportFormat format,
                     const std::filesystem::path& path) {
  if (format == ExportFormat::json) {
    write_json(to_json(data), path);
    return;
  }
  auto out = open_out(path);
  out << "fpc,external,internal,explained_variance_fraction,quadrant,"
         "median_external,median_internal\n";
  for (const BubblePoint& p : data.points) {
    out << (p.fpc_index + 1) << ',' << format_full(p.external) << ','
        << format_full(p.internal) << ',' << format_full(p.size) << ','
        << quadrant_name(p.quadrant) << ',' << format_full(data.median_external)
        << ',' << format_full(data.median_internal) << '\n';
  }
}

void export_artifact(const ReconstructionBands& bands, ExportFormat format,
                     const std::filesystem::path& path) {
  if (format == ExportFormat::json) {
    write_json(to_json(bands), path);
    return;
  }
  auto out = open_out(path);
  out << "fpc,window,window_lo,window_hi,t,lower,upper,mean\n";
  for (std::size_t w = 0; w < bands.windows.size(); ++w) {
    const BandWindow& window = bands.windows[w];
    for (Eigen::Index t = 0; t < window.lower.size(); ++t) {
      out << (bands.fpc_index + 1) << ',' << w << ','
          << format_full(window.lo) << ',' << format_full(window.hi) << ','
          << t << ',' << format_full(window.lower(t)) << ','
          << format_full(window.upper(t)) << ','
          << format_full(bands.mean_curve(t)) << '\n';
    }
  }
}

json to_json(const PdpCurve& curve) {
  return {{"kind", "fpdp"},
          {"fpc", curve.fpc_index + 1},
          {"scale", scale_name(curve.scale)},
          {"score_grid", vec_json(curve.score_grid)},
          {"values", vec_json(curve.values)}};
}

json to_json(const HeatmapGrid& grid) {
  json per_fpc = json::array();
  for (std::size_t j = 0; j < grid.fpc_indices.size(); ++j) {
    per_fpc.push_back(
        {{"fpc", grid.fpc_indices[j] + 1},
         {"score_grid", vec_json(grid.score_grids.row(static_cast<Eigen::Index>(j)).transpose())},
         {"probabilities",
          vec_json(grid.probabilities.row(static_cast<Eigen::Index>(j)).transpose())}});
  }
  return {{"kind", "fpcph"}, {"per_fpc", std::move(per_fpc)}};
}

json to_json(const ImportanceTable& table) {
  return {{"kind", "importance"},
          {"mdg", table.mdg},
          {"permutation_importance", table.permutation_importance},
          {"f_statistic", table.f_statistic},
          {"p_value", table.p_value},
          {"eta_squared", table.eta_squared},
          {"explained_variance_fraction", table.explained_variance_fraction}};
}

json to_json(const ClassConditionalScores& scores) {
  json per_fpc = json::array();
  for (const auto& pair : scores.per_fpc) {
    json classes = json::array();
    for (int y = 0; y < 2; ++y) {
      const ScoreDistribution& d = pair[static_cast<std::size_t>(y)];
      classes.push_back({{"class", y},
                         {"sample", d.sample},
                         {"q1", d.q1},
                         {"median", d.median},
                         {"q3", d.q3},
                         {"density_grid", vec_json(d.density_grid)},
                         {"density", vec_json(d.density)}});
    }
    per_fpc.push_back(std::move(classes));
  }
  return {{"kind", "violin"}, {"per_fpc", std::move(per_fpc)}};
}

json to_json(const BubblePlotData& data) {
  json points = json::array();
  for (const BubblePoint& p : data.points) {
    points.push_back({{"fpc", p.fpc_index + 1},
                      {"external", p.external},
                      {"internal", p.internal},
                      {"size", p.size},
                      {"quadrant", quadrant_name(p.quadrant)}});
  }
  return {{"kind", "bubble"},
          {"points", std::move(points)},
          {"median_internal", data.median_internal},
          {"median_external", data.median_external}};
}

json to_json(const ReconstructionBands& bands) {
  json windows = json::array();
  for (const BandWindow& w : bands.windows) {
    windows.push_back({{"lo", w.lo},
                       {"hi", w.hi},
                       {"lower", vec_json(w.lower)},
                       {"upper", vec_json(w.upper)}});
  }
  return {{"kind", "bands"},
          {"fpc", bands.fpc_index + 1},
          {"windows", std::move(windows)},
          {"mean_curve", vec_json(bands.mean_curve)}};
}

PdpCurve pdp_from_json(const json& j) {
  PdpCurve curve;
  curve.fpc_index = j.at("fpc").get<int>() - 1;
  curve.scale = j.at("scale").get<std::string>() == "probability"
                    ? PdpScale::probability
                    : PdpScale::logit;
  curve.score_grid = vec_from(j.at("score_grid"));
  curve.values = vec_from(j.at("values"));
  return curve;
}

HeatmapGrid heatmap_from_json(const json& j) {
  HeatmapGrid grid;
  const json& per_fpc = j.at("per_fpc");
  if (per_fpc.empty()) return grid;
  const auto m = static_cast<Eigen::Index>(per_fpc[0].at("score_grid").size());
  grid.score_grids.resize(static_cast<Eigen::Index>(per_fpc.size()), m);
  grid.probabilities.resize(static_cast<Eigen::Index>(per_fpc.size()), m);
  for (std::size_t i = 0; i < per_fpc.size(); ++i) {
    grid.fpc_indices.push_back(per_fpc[i].at("fpc").get<int>() - 1);
    grid.score_grids.row(static_cast<Eigen::Index>(i)) =
        vec_from(per_fpc[i].at("score_grid")).transpose();
    grid.probabilities.row(static_cast<Eigen::Index>(i)) =
        vec_from(per_fpc[i].at("probabilities")).transpose();
  }
  return grid;
}

ImportanceTable importance_from_json(const json& j) {
  ImportanceTable table;
  table.mdg = j.at("mdg").get<std::vector<double>>();
  table.permutation_importance =
      j.at("permutation_importance").get<std::vector<double>>();
  table.f_statistic = j.at("f_statistic").get<std::vector<double>>();
  table.p_value = j.at("p_value").get<std::vector<double>>();
  table.eta_squared = j.at("eta_squared").get<std::vector<double>>();
  table.explained_variance_fraction =
      j.at("explained_variance_fraction").get<std::vector<double>>();
  return table;
}

ClassConditionalScores violins_from_json(const json& j) {
  ClassConditionalScores scores;
  for (const json& classes : j.at("per_fpc")) {
    std::array<ScoreDistribution, 2> pair;
    for (const json& c : classes) {
      ScoreDistribution d;
      d.sample = c.at("sample").get<std::vector<double>>();
      d.q1 = c.at("q1").get<double>();
      d.median = c.at("median").get<double>();
      d.q3 = c.at("q3").get<double>();
      d.density_grid = vec_from(c.at("density_grid"));
      d.density = vec_from(c.at("density"));
      pair[c.at("class").get<std::size_t>()] = std::move(d);
    }
    scores.per_fpc.push_back(std::move(pair));
  }
  return scores;
}

BubblePlotData bubble_from_json(const json& j) {
  BubblePlotData data;
  data.median_internal = j.at("median_internal").get<double>();
  data.median_external = j.at("median_external").get<double>();
  for (const json& p : j.at("points")) {
    BubblePoint point;
    point.fpc_index = p.at("fpc").get<int>() - 1;
    point.external = p.at("external").get<double>();
    point.internal = p.at("internal").get<double>();
    point.size = p.at("size").get<double>();
    point.quadrant = quadrant_from_name(p.at("quadrant").get<std::string>());
    data.points.push_back(point);
  }
  return data;
}

ReconstructionBands bands_from_json(const json& j) {
  ReconstructionBands bands;
  bands.fpc_index = j.at("fpc").get<int>() - 1;
  bands.mean_curve = vec_from(j.at("mean_curve"));
  for (const json& w : j.at("windows")) {
    BandWindow window;
    window.lo = w.at("lo").get<double>();
    window.hi = w.at("hi").get<double>();
    window.lower = vec_from(w.at("lower"));
    window.upper = vec_from(w.at("upper"));
    bands.windows.push_back(std::move(window));
  }
  return bands;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("cannot parse " + path.string() + ": " + e.what());
  }
  return j;
}

}  // namespace frfx
