#include "frfx/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace frfx {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// Categorical palette for per-FPC colors.
std::string fpc_color(int k) {
  static const char* kPalette[] = {
      "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
      "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  return kPalette[static_cast<std::size_t>(k) % 10];
}

// Window colors for reconstruction bands, low scores blue, high scores red.
std::string band_color(int w, int n_windows) {
  static const char* kFour[] = {"#2166ac", "#92c5de", "#f4a582", "#b2182b"};
  if (n_windows == 4) return kFour[w];
  const double t = n_windows > 1 ? static_cast<double>(w) / (n_windows - 1) : 0.0;
  const int r = static_cast<int>(33 + t * (178 - 33));
  const int g = static_cast<int>(102 + t * (24 - 102));
  const int b = static_cast<int>(172 + t * (43 - 172));
  std::ostringstream out;
  out << "rgb(" << r << ',' << g << ',' << b << ')';
  return out.str();
}

struct Canvas {
  std::ostringstream out;
  int width = 0;
  int height = 0;

  void open(int w, int h) {
    width = w;
    height = h;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
        << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
        << "\">\n<rect width=\"" << w << "\" height=\"" << h
        << "\" fill=\"white\"/>\n";
  }
  std::string close() {
    out << "</svg>\n";
    return out.str();
  }
  void line(double x1, double y1, double x2, double y2,
            const std::string& stroke, double width_px = 1.0,
            bool dashed = false) {
    out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\""
        << num(x2) << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke
        << "\" stroke-width=\"" << num(width_px) << '"';
    if (dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill,
            const std::string& extra = "") {
    out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\""
        << num(w) << "\" height=\"" << num(h) << "\" fill=\"" << fill << '"'
        << extra << "/>\n";
  }
  void circle(double cx, double cy, double r, const std::string& fill,
              double opacity = 1.0) {
    out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\""
        << num(r) << "\" fill=\"" << fill << "\" fill-opacity=\""
        << num(opacity) << "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
  }
  void text(double x, double y, const std::string& s, int size = 12,
            const std::string& anchor = "start",
            const std::string& fill = "#222222") {
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\""
        << size << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor
        << "\" fill=\"" << fill << "\">" << s << "</text>\n";
  }
  void path(const std::string& d, const std::string& fill,
            const std::string& stroke, double opacity = 1.0,
            bool dashed = false) {
    out << "<path d=\"" << d << "\" fill=\"" << fill << "\" stroke=\"" << stroke
        << "\" fill-opacity=\"" << num(opacity) << '"';
    if (dashed) out << " stroke-dasharray=\"6 4\"";
    out << "/>\n";
  }
};

// Maps data coordinates to a pixel rectangle and draws simple axes.
struct Frame {
  double px = 0, py = 0, pw = 0, ph = 0;  // pixel rect
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;  // data range

  double x(double v) const { return px + (v - x0) / (x1 - x0) * pw; }
  double y(double v) const { return py + ph - (v - y0) / (y1 - y0) * ph; }

  void pad_y(double frac = 0.05) {
    if (y1 == y0) {
      y0 -= 0.5;
      y1 += 0.5;
      return;
    }
    const double pad = (y1 - y0) * frac;
    y0 -= pad;
    y1 += pad;
  }

  void axes(Canvas& canvas, int ticks = 4, int font = 10) const {
    canvas.line(px, py + ph, px + pw, py + ph, "#444444");
    canvas.line(px, py, px, py + ph, "#444444");
    for (int i = 0; i <= ticks; ++i) {
      const double fx = x0 + (x1 - x0) * i / ticks;
      const double fy = y0 + (y1 - y0) * i / ticks;
      canvas.line(x(fx), py + ph, x(fx), py + ph + 3, "#444444");
      canvas.text(x(fx), py + ph + 4 + font, short_num(fx), font, "middle");
      canvas.line(px - 3, y(fy), px, y(fy), "#444444");
      canvas.text(px - 5, y(fy) + font / 2.0 - 1, short_num(fy), font, "end");
    }
  }
};

std::string polyline_path(const Frame& frame, const Eigen::VectorXd& xs,
                          const Eigen::VectorXd& ys) {
  std::ostringstream d;
  for (Eigen::Index i = 0; i < xs.size(); ++i) {
    d << (i == 0 ? 'M' : 'L') << num(frame.x(xs(i))) << ' '
      << num(frame.y(ys(i)));
  }
  return d.str();
}

struct PanelLayout {
  int cols = 1;
  int rows = 1;
  double cell_w = 0;
  double cell_h = 0;
};

PanelLayout layout_panels(int n, int width, int height, double top_margin) {
  PanelLayout layout;
  layout.cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  layout.rows = (n + layout.cols - 1) / layout.cols;
  layout.cell_w = static_cast<double>(width) / layout.cols;
  layout.cell_h = (static_cast<double>(height) - top_margin) / layout.rows;
  return layout;
}

void render_line_grid(const PlotSpec& spec, Canvas& canvas) {
  const auto& curves = *spec.pdps;
  const PanelLayout panels =
      layout_panels(static_cast<int>(curves.size()), spec.width, spec.height, 28);
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const PdpCurve& curve = curves[i];
    const int col = static_cast<int>(i) % panels.cols;
    const int row = static_cast<int>(i) / panels.cols;
    Frame frame;
    frame.px = col * panels.cell_w + 42;
    frame.py = 28 + row * panels.cell_h + 20;
    frame.pw = panels.cell_w - 54;
    frame.ph = panels.cell_h - 44;
    frame.x0 = curve.score_grid.minCoeff();
    frame.x1 = curve.score_grid.maxCoeff();
    frame.y0 = curve.values.minCoeff();
    frame.y1 = curve.values.maxCoeff();
    frame.pad_y();
    frame.axes(canvas, 2, 9);
    canvas.path(polyline_path(frame, curve.score_grid, curve.values), "none",
                fpc_color(curve.fpc_index), 1.0);
    canvas.text(frame.px + frame.pw / 2, frame.py - 5,
                "FPC" + std::to_string(curve.fpc_index + 1), 11, "middle");
  }
}

void render_band(const PlotSpec& spec, Canvas& canvas) {
  const ReconstructionBands& bands = *spec.bands;
  Frame frame;
  frame.px = 60;
  frame.py = 50;
  frame.pw = spec.width - 90.0;
  frame.ph = spec.height - 100.0;
  frame.x0 = 0;
  frame.x1 = static_cast<double>(bands.mean_curve.size() - 1);
  frame.y0 = bands.mean_curve.minCoeff();
  frame.y1 = bands.mean_curve.maxCoeff();
  for (const BandWindow& w : bands.windows) {
    frame.y0 = std::min(frame.y0, w.lower.minCoeff());
    frame.y1 = std::max(frame.y1, w.upper.maxCoeff());
  }
  frame.pad_y();
  frame.axes(canvas);

  const int n_windows = static_cast<int>(bands.windows.size());
  Eigen::VectorXd ts(bands.mean_curve.size());
  for (Eigen::Index t = 0; t < ts.size(); ++t) ts(t) = static_cast<double>(t);
  for (int w = 0; w < n_windows; ++w) {
    const BandWindow& window = bands.windows[static_cast<std::size_t>(w)];
    std::ostringstream d;
    for (Eigen::Index t = 0; t < ts.size(); ++t) {
      d << (t == 0 ? 'M' : 'L') << num(frame.x(ts(t))) << ' '
        << num(frame.y(window.upper(t)));
    }
    for (Eigen::Index t = ts.size() - 1; t >= 0; --t) {
      d << 'L' << num(frame.x(ts(t))) << ' ' << num(frame.y(window.lower(t)));
    }
    d << 'Z';
    canvas.path(d.str(), band_color(w, n_windows), "none", 0.45);
    canvas.rect(frame.px + frame.pw - 150, frame.py + 16.0 * w, 12, 12,
                band_color(w, n_windows));
    canvas.text(frame.px + frame.pw - 132, frame.py + 16.0 * w + 10,
                "[" + short_num(window.lo) + ", " + short_num(window.hi) + "]",
                10);
  }
  canvas.path(polyline_path(frame, ts, bands.mean_curve), "none", "#000000",
              1.0, true);
  canvas.text(spec.width / 2.0, 24,
              spec.title.empty()
                  ? "FPC" + std::to_string(bands.fpc_index + 1) +
                        " score-interval reconstruction bands"
                  : spec.title,
              14, "middle");
}

void render_heatmap(const PlotSpec& spec, Canvas& canvas) {
  const HeatmapGrid& grid = *spec.heatmap;
  const double px = 70, py = 50;
  const double pw = spec.width - 170.0, ph = spec.height - 110.0;
  const int f = static_cast<int>(grid.fpc_indices.size());
  const int m = static_cast<int>(grid.probabilities.cols());
  const double cw = pw / f;
  const double ch = ph / m;
  for (int j = 0; j < f; ++j) {
    for (int g = 0; g < m; ++g) {
      // row 0 of the grid = lowest score, drawn at the bottom
      canvas.rect(px + j * cw, py + ph - (g + 1) * ch, cw + 0.5, ch + 0.5,
                  heatmap_color(grid.probabilities(j, g)));
    }
    canvas.text(px + (j + 0.5) * cw, py + ph + 16,
                "FPC" + std::to_string(grid.fpc_indices[static_cast<std::size_t>(j)] + 1),
                10, "middle");
  }
  canvas.text(px - 10, py + ph, "min", 10, "end");
  canvas.text(px - 10, py + 10, "max", 10, "end");
  canvas.text(px - 40, py + ph / 2, "score", 11, "middle");
  // color legend
  const double lx = px + pw + 24;
  for (int i = 0; i < 64; ++i) {
    canvas.rect(lx, py + ph - (i + 1) * ph / 64, 16, ph / 64 + 0.5,
                heatmap_color(i / 63.0));
  }
  canvas.text(lx + 20, py + ph, "0", 10);
  canvas.text(lx + 20, py + ph / 2, "0.5", 10);
  canvas.text(lx + 20, py + 10, "1", 10);
  canvas.text(spec.width / 2.0, 24,
              spec.title.empty() ? "Class-1 probability per FPC score range"
                                 : spec.title,
              14, "middle");
}

void render_bubble(const PlotSpec& spec, Canvas& canvas) {
  const BubblePlotData& data = *spec.bubble;
  Frame frame;
  frame.px = 70;
  frame.py = 50;
  frame.pw = spec.width - 110.0;
  frame.ph = spec.height - 120.0;
  frame.x0 = frame.x1 = data.points[0].external;
  frame.y0 = frame.y1 = data.points[0].internal;
  for (const BubblePoint& p : data.points) {
    frame.x0 = std::min(frame.x0, p.external);
    frame.x1 = std::max(frame.x1, p.external);
    frame.y0 = std::min(frame.y0, p.internal);
    frame.y1 = std::max(frame.y1, p.internal);
  }
  if (frame.x1 == frame.x0) frame.x1 = frame.x0 + 1;
  if (frame.y1 == frame.y0) frame.y1 = frame.y0 + 1;
  const double pad_x = (frame.x1 - frame.x0) * 0.12;
  const double pad_y = (frame.y1 - frame.y0) * 0.12;
  frame.x0 -= pad_x;
  frame.x1 += pad_x;
  frame.y0 -= pad_y;
  frame.y1 += pad_y;
  frame.axes(canvas);

  canvas.line(frame.x(data.median_external), frame.py,
              frame.x(data.median_external), frame.py + frame.ph, "#555555",
              1.0, true);
  canvas.line(frame.px, frame.y(data.median_internal), frame.px + frame.pw,
              frame.y(data.median_internal), "#555555", 1.0, true);

  double max_size = 0.0;
  for (const BubblePoint& p : data.points) max_size = std::max(max_size, p.size);
  for (const BubblePoint& p : data.points) {
    const double r =
        5.0 + (max_size > 0 ? 22.0 * std::sqrt(p.size / max_size) : 0.0);
    canvas.circle(frame.x(p.external), frame.y(p.internal), r,
                  fpc_color(p.fpc_index), 0.65);
    canvas.text(frame.x(p.external), frame.y(p.internal) - r - 3,
                "FPC" + std::to_string(p.fpc_index + 1), 10, "middle");
  }
  canvas.text(frame.px + frame.pw, frame.py + 12, "critical", 10, "end",
              "#777777");
  canvas.text(frame.px + 4, frame.py + 12, "model-specific", 10, "start",
              "#777777");
  canvas.text(frame.px + frame.pw, frame.py + frame.ph - 6,
              "externally-relevant", 10, "end", "#777777");
  canvas.text(frame.px + 4, frame.py + frame.ph - 6, "minor", 10, "start",
              "#777777");
  canvas.text(spec.width / 2.0, 24,
              spec.title.empty()
                  ? "Internal vs external importance (bubble = explained variance)"
                  : spec.title,
              14, "middle");
  canvas.text(frame.px + frame.pw / 2, frame.py + frame.ph + 34,
              spec.x_label.empty() ? "external importance" : spec.x_label, 11,
              "middle");
  canvas.text(18, frame.py + frame.ph / 2,
              spec.y_label.empty() ? "internal importance" : spec.y_label, 11,
              "middle");
}

void render_violin(const PlotSpec& spec, Canvas& canvas) {
  const ClassConditionalScores& scores = *spec.violins;
  const int n = static_cast<int>(scores.per_fpc.size());
  const PanelLayout panels = layout_panels(n, spec.width, spec.height, 28);
  static const char* kClassColor[2] = {"#3b7dd8", "#e07b39"};
  for (int k = 0; k < n; ++k) {
    const int col = k % panels.cols;
    const int row = k / panels.cols;
    Frame frame;
    frame.px = col * panels.cell_w + 40;
    frame.py = 28 + row * panels.cell_h + 20;
    frame.pw = panels.cell_w - 52;
    frame.ph = panels.cell_h - 42;

    double lo = 0, hi = 0, max_density = 0;
    bool first = true;
    for (int y = 0; y < 2; ++y) {
      const ScoreDistribution& d = scores.per_fpc[static_cast<std::size_t>(k)][static_cast<std::size_t>(y)];
      if (d.density_grid.size() == 0) continue;
      if (first) {
        lo = d.density_grid.minCoeff();
        hi = d.density_grid.maxCoeff();
        first = false;
      } else {
        lo = std::min(lo, d.density_grid.minCoeff());
        hi = std::max(hi, d.density_grid.maxCoeff());
      }
      max_density = std::max(max_density, d.density.maxCoeff());
    }
    if (first || max_density <= 0) continue;
    frame.y0 = lo;
    frame.y1 = hi;
    frame.x0 = 0;
    frame.x1 = 2;
    frame.pad_y();
    frame.axes(canvas, 2, 9);

    for (int y = 0; y < 2; ++y) {
      const ScoreDistribution& d = scores.per_fpc[static_cast<std::size_t>(k)][static_cast<std::size_t>(y)];
      if (d.density_grid.size() == 0) continue;
      const double center = frame.x(0.5 + y);
      const double half_w = frame.pw * 0.2;
      std::ostringstream path;
      for (Eigen::Index i = 0; i < d.density_grid.size(); ++i) {
        const double offset = half_w * d.density(i) / max_density;
        path << (i == 0 ? 'M' : 'L') << num(center - offset) << ' '
             << num(frame.y(d.density_grid(i)));
      }
      for (Eigen::Index i = d.density_grid.size() - 1; i >= 0; --i) {
        const double offset = half_w * d.density(i) / max_density;
        path << 'L' << num(center + offset) << ' '
             << num(frame.y(d.density_grid(i)));
      }
      path << 'Z';
      canvas.path(path.str(), kClassColor[y], "#333333", 0.55);
      canvas.line(center - 4, frame.y(d.q1), center + 4, frame.y(d.q1),
                  "#111111");
      canvas.line(center - 6, frame.y(d.median), center + 6, frame.y(d.median),
                  "#111111", 1.6);
      canvas.line(center - 4, frame.y(d.q3), center + 4, frame.y(d.q3),
                  "#111111");
    }
    std::string title = "FPC" + std::to_string(k + 1);
    if (static_cast<std::size_t>(k) < spec.violin_pvalues.size()) {
      title += " (p=" + short_num(spec.violin_pvalues[static_cast<std::size_t>(k)]) + ")";
    }
    canvas.text(frame.px + frame.pw / 2, frame.py - 5, title, 10, "middle");
  }
}

void render_bar(const PlotSpec& spec, Canvas& canvas) {
  const ImportanceTable& table = *spec.importance;
  struct Panel {
    const char* title;
    const std::vector<double>* values;
  };
  const Panel panels[4] = {
      {"Mean decrease in Gini", &table.mdg},
      {"Permutation importance", &table.permutation_importance},
      {"F statistic", &table.f_statistic},
      {"Eta squared", &table.eta_squared},
  };
  const double cell_w = spec.width / 2.0;
  const double cell_h = (spec.height - 28.0) / 2.0;
  for (int p = 0; p < 4; ++p) {
    const int col = p % 2;
    const int row = p / 2;
    Frame frame;
    frame.px = col * cell_w + 52;
    frame.py = 28 + row * cell_h + 24;
    frame.pw = cell_w - 70;
    frame.ph = cell_h - 56;
    const std::vector<double>& values = *panels[p].values;
    frame.x0 = 0;
    frame.x1 = static_cast<double>(values.size());
    frame.y0 = 0;
    frame.y1 = *std::max_element(values.begin(), values.end());
    for (double v : values) frame.y0 = std::min(frame.y0, v);
    if (frame.y1 <= frame.y0) frame.y1 = frame.y0 + 1;
    frame.axes(canvas, 2, 9);
    const double bar_w = frame.pw / values.size() * 0.8;
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double x = frame.x(static_cast<double>(k) + 0.1);
      const double y_top = frame.y(std::max(0.0, values[k]));
      const double y_bot = frame.y(std::min(0.0, values[k]));
      canvas.rect(x, y_top, bar_w, std::max(0.5, y_bot - y_top),
                  fpc_color(static_cast<int>(k)));
      if (values.size() <= 20) {
        canvas.text(x + bar_w / 2, frame.py + frame.ph + 12,
                    std::to_string(k + 1), 8, "middle");
      }
    }
    canvas.text(frame.px + frame.pw / 2, frame.py - 8, panels[p].title, 12,
                "middle");
  }
}

}  // namespace

std::string heatmap_color(double probability) {
  const double p = std::clamp(probability, 0.0, 1.0);
  // green (26,150,65) -> neutral (255,255,191) -> red (215,25,28)
  double r, g, b;
  if (p <= 0.5) {
    const double t = p / 0.5;
    r = 26 + t * (255 - 26);
    g = 150 + t * (255 - 150);
    b = 65 + t * (191 - 65);
  } else {
    const double t = (p - 0.5) / 0.5;
    r = 255 + t * (215 - 255);
    g = 255 + t * (25 - 255);
    b = 191 + t * (28 - 191);
  }
  std::ostringstream out;
  out << "rgb(" << static_cast<int>(std::lround(r)) << ','
      << static_cast<int>(std::lround(g)) << ','
      << static_cast<int>(std::lround(b)) << ')';
  return out.str();
}

std::string render_svg_string(const PlotSpec& spec) {
  if (spec.width <= 0 || spec.height <= 0) {
    throw InvalidSpec("plot dimensions must be positive");
  }
  const int refs = (spec.pdps != nullptr) + (spec.bands != nullptr) +
                   (spec.heatmap != nullptr) + (spec.bubble != nullptr) +
                   (spec.violins != nullptr) + (spec.importance != nullptr);
  if (refs != 1) throw InvalidSpec("exactly one data reference must be set");

  Canvas canvas;
  canvas.open(spec.width, spec.height);
  if (!spec.title.empty() && spec.kind != PlotKind::band &&
      spec.kind != PlotKind::heatmap && spec.kind != PlotKind::bubble) {
    canvas.text(spec.width / 2.0, 18, spec.title, 14, "middle");
  }
  switch (spec.kind) {
    case PlotKind::line_grid:
      if (!spec.pdps || spec.pdps->empty()) {
        throw InvalidSpec("line_grid needs a nonempty pdp list");
      }
      render_line_grid(spec, canvas);
      break;
    case PlotKind::band:
      if (!spec.bands || spec.bands->windows.empty()) {
        throw InvalidSpec("band plot needs reconstruction bands");
      }
      render_band(spec, canvas);
      break;
    case PlotKind::heatmap:
      if (!spec.heatmap || spec.heatmap->fpc_indices.empty()) {
        throw InvalidSpec("heatmap plot needs a heatmap grid");
      }
      render_heatmap(spec, canvas);
      break;
    case PlotKind::bubble:
      if (!spec.bubble || spec.bubble->points.empty()) {
        throw InvalidSpec("bubble plot needs bubble data");
      }
      render_bubble(spec, canvas);
      break;
    case PlotKind::violin:
      if (!spec.violins || spec.violins->per_fpc.empty()) {
        throw InvalidSpec("violin plot needs class-conditional scores");
      }
      render_violin(spec, canvas);
      break;
    case PlotKind::bar:
      if (!spec.importance || spec.importance->size() == 0) {
        throw InvalidSpec("bar plot needs an importance table");
      }
      render_bar(spec, canvas);
      break;
  }
  return canvas.close();
}

void render_svg(const PlotSpec& spec, const std::filesystem::path& path) {
  const std::string svg = render_svg_string(spec);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << svg;
  if (!out) throw IoError("write to " + path.string() + " failed");
}

}  // namespace frfx
