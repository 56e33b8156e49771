#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "frfx/explain.hpp"

namespace frfx {

enum class PlotKind { line_grid, band, heatmap, bubble, violin, bar };

/// A render request: one kind, the matching data reference, labels and pixel
/// dimensions. Exactly one data pointer must be set and must match the kind
/// (line_grid: pdps, band: bands, heatmap: heatmap, bubble: bubble,
/// violin: violins, bar: importance).
struct PlotSpec {
  PlotKind kind = PlotKind::line_grid;
  int width = 960;
  int height = 640;
  std::string title;
  std::string x_label;
  std::string y_label;

  const std::vector<PdpCurve>* pdps = nullptr;
  const ReconstructionBands* bands = nullptr;
  const HeatmapGrid* heatmap = nullptr;
  const BubblePlotData* bubble = nullptr;
  const ClassConditionalScores* violins = nullptr;
  const ImportanceTable* importance = nullptr;

  std::vector<double> violin_pvalues;  // optional panel annotations
};

/// Diverging green -> red scale centered at probability 0.5 (green = more
/// likely class 0, red = more likely class 1).
std::string heatmap_color(double probability);

std::string render_svg_string(const PlotSpec& spec);
void render_svg(const PlotSpec& spec, const std::filesystem::path& path);

}  // namespace frfx
