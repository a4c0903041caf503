#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "conleygp/dataio.hpp"
#include "conleygp/enclosure.hpp"
#include "conleygp/gp.hpp"
#include "conleygp/report.hpp"

namespace conleygp {

struct SvgOptions {
  double width = 800.0;
  double height = 640.0;
  /// Above this many G cells, each source edge is drawn as one column
  /// rectangle covering its whole (contiguous) image instead.
  std::size_t max_cell_rects = 200000;
};

struct SvgRect {
  double x = 0.0, y = 0.0, w = 0.0, h = 0.0;
  std::string fill;
  double opacity = 1.0;
  std::string css_class;
};

struct SvgText {
  double x = 0.0, y = 0.0;
  std::string text;
  double size = 12.0;
  std::string anchor = "start";
};

struct SvgLine {
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
  std::string stroke = "black";
  double width = 1.0;
};

struct SvgCircle {
  double cx = 0.0, cy = 0.0, r = 3.0;
  std::string fill;
};

/// Layers in drawing order. Coordinates are canvas pixels.
struct SvgScene {
  double width = 0.0;
  double height = 0.0;
  std::vector<SvgLine> axes;
  std::vector<SvgText> labels;
  std::vector<SvgRect> cells;
  std::vector<std::pair<double, double>> mean_curve;
  std::vector<SvgCircle> data_points;
  std::vector<SvgRect> morse_bars;
  std::vector<SvgRect> inset_boxes;
  std::vector<SvgText> inset_text;
  /// True when cells were drawn one per (source edge, target edge).
  bool per_cell = true;

  std::string to_svg() const;
};

SvgScene build_scene(const Report& report, const Enclosure& enclosure, const TrainingData& data,
                     const GpModel& model, const SvgOptions& options = {});

std::string render_svg(const Report& report, const Enclosure& enclosure, const TrainingData& data,
                       const GpModel& model, const SvgOptions& options = {});

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace conleygp
