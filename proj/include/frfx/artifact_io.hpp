#pragma once

#include <filesystem>

#include <json.hpp>

#include "frfx/explain.hpp"

namespace frfx {

enum class ExportFormat { csv, json };

// Lossless export of every explainability artifact. CSV schemas (one header
// row, full-precision numbers):
//   PdpCurve:              fpc,score,value,scale
//   HeatmapGrid:           fpc,grid_index,score,probability
//   ImportanceTable:       fpc,mdg,permutation_importance,f_statistic,
//                          p_value,eta_squared,explained_variance_fraction
//   ClassConditionalScores fpc,class,kind,index,value   (kind: sample,
//                          grid, density, q1, median, q3)
//   BubblePlotData:        fpc,external,internal,explained_variance_fraction,
//                          quadrant,median_external,median_internal
//   ReconstructionBands:   fpc,window,window_lo,window_hi,t,lower,upper,mean
// `fpc` columns are 1-based to match how components are usually numbered.
void export_artifact(const PdpCurve& curve, ExportFormat format,
                     const std::filesystem::path& path);
void export_artifact(const std::vector<PdpCurve>& curves, ExportFormat format,
                     const std::filesystem::path& path);
void export_artifact(const HeatmapGrid& grid, ExportFormat format,
                     const std::filesystem::path& path);
void export_artifact(const ImportanceTable& table, ExportFormat format,
                     const std::filesystem::path& path);
void export_artifact(const ClassConditionalScores& scores, ExportFormat format,
                     const std::filesystem::path& path);
void export_artifact(const BubblePlotData& data, ExportFormat format,
                     const std::filesystem::path& path);
void export_artifact(const ReconstructionBands& bands, ExportFormat format,
                     const std::filesystem::path& path);

nlohmann::json to_json(const PdpCurve& curve);
nlohmann::json to_json(const HeatmapGrid& grid);
nlohmann::json to_json(const ImportanceTable& table);
nlohmann::json to_json(const ClassConditionalScores& scores);
nlohmann::json to_json(const BubblePlotData& data);
nlohmann::json to_json(const ReconstructionBands& bands);

PdpCurve pdp_from_json(const nlohmann::json& j);
HeatmapGrid heatmap_from_json(const nlohmann::json& j);
ImportanceTable importance_from_json(const nlohmann::json& j);
ClassConditionalScores violins_from_json(const nlohmann::json& j);
BubblePlotData bubble_from_json(const nlohmann::json& j);
ReconstructionBands bands_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace frfx
