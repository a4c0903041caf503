#include "conleygp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "conleygp/error.hpp"

namespace conleygp {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 30.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 90.0;

const char* const kPalette[] = {"#e6550d", "#31a354", "#756bb1", "#636363", "#d6616b",
                                "#3182bd", "#8c6d31", "#e7ba52", "#17becf", "#843c39"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  std::string s(buf);
  if (s == "-0.000") s = "0.000";
  return s;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string rect_element(const SvgRect& r) {
  std::string s = "<rect";
  if (!r.css_class.empty()) s += " class=\"" + r.css_class + "\"";
  s += " x=\"" + fmt(r.x) + "\" y=\"" + fmt(r.y) + "\" width=\"" + fmt(r.w) + "\" height=\"" + fmt(r.h) + "\"";
  if (!r.fill.empty()) s += " fill=\"" + r.fill + "\"";
  if (r.opacity < 1.0) s += " fill-opacity=\"" + fmt(r.opacity) + "\"";
  return s + "/>\n";
}

std::string text_element(const SvgText& t) {
  return "<text x=\"" + fmt(t.x) + "\" y=\"" + fmt(t.y) + "\" font-size=\"" + fmt(t.size) +
         "\" text-anchor=\"" + t.anchor + "\" font-family=\"sans-serif\">" + escape(t.text) + "</text>\n";
}

}  // namespace

std::string SvgScene::to_svg() const {
  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fmt(width) + "\" height=\"" +
       fmt(height) + "\" viewBox=\"0 0 " + fmt(width) + " " + fmt(height) + "\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"" + fmt(width) + "\" height=\"" + fmt(height) + "\" fill=\"white\"/>\n";

  s += "<g id=\"g-cells\" data-mode=\"" + std::string(per_cell ? "cell" : "column") + "\">\n";
  for (const auto& r : cells) s += rect_element(r);
  s += "</g>\n";

  s += "<g id=\"axes\">\n";
  for (const auto& l : axes) {
    s += "<line x1=\"" + fmt(l.x1) + "\" y1=\"" + fmt(l.y1) + "\" x2=\"" + fmt(l.x2) + "\" y2=\"" + fmt(l.y2) +
         "\" stroke=\"" + l.stroke + "\" stroke-width=\"" + fmt(l.width) + "\"/>\n";
  }
  for (const auto& t : labels) s += text_element(t);
  s += "</g>\n";

  s += "<g id=\"mean\">\n<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < mean_curve.size(); ++i) {
    if (i) s += ' ';
    s += fmt(mean_curve[i].first) + "," + fmt(mean_curve[i].second);
  }
  s += "\"/>\n</g>\n";

  s += "<g id=\"data\">\n";
  for (const auto& c : data_points) {
    s += "<circle cx=\"" + fmt(c.cx) + "\" cy=\"" + fmt(c.cy) + "\" r=\"" + fmt(c.r) + "\" fill=\"" + c.fill + "\"/>\n";
  }
  s += "</g>\n";

  s += "<g id=\"morse-bars\">\n";
  for (const auto& r : morse_bars) s += rect_element(r);
  s += "</g>\n";

  s += "<g id=\"inset\">\n";
  for (const auto& r : inset_boxes) s += rect_element(r);
  for (const auto& t : inset_text) s += text_element(t);
  s += "</g>\n</svg>\n";
  return s;
}

SvgScene build_scene(const Report& report, const Enclosure& enclosure, const TrainingData& data,
                     const GpModel& model, const SvgOptions& options) {
  const auto& cx = enclosure.complex();
  const Domain& dom = cx.domain();
  SvgScene sc;
  sc.width = options.width;
  sc.height = options.height;

  const std::size_t samples = 4 * cx.edge_count() + 1;
  std::vector<double> mx(samples), my(samples);
  double ylo = dom.lower, yhi = dom.upper;
  for (std::size_t i = 0; i < samples; ++i) {
    mx[i] = dom.lower + dom.length() * static_cast<double>(i) / static_cast<double>(samples - 1);
    my[i] = model.mean(mx[i]);
    ylo = std::min(ylo, my[i]);
    yhi = std::max(yhi, my[i]);
  }
  for (const auto& p : data.points()) {
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }

  const double pw = sc.width - kLeft - kRight;
  const double ph = sc.height - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - dom.lower) / dom.length() * pw; };
  auto py = [&](double y) { return kTop + (yhi - y) / (yhi - ylo) * ph; };

  const auto& fibers = enclosure.fibers();
  std::size_t total = 0;
  for (const auto& img : fibers.image) total += img.size();
  sc.per_cell = total <= options.max_cell_rects;
  for (std::size_t e = 0; e < fibers.size(); ++e) {
    const Interval src = cx.edge_support(e);
    const EdgeRange& img = fibers.image[e];
    auto add = [&](double ylow, double yhigh, const char* cls) {
      sc.cells.push_back({px(src.lo), py(yhigh), px(src.hi) - px(src.lo), py(ylow) - py(yhigh), "blue", 0.25, cls});
    };
    if (sc.per_cell) {
      for (std::size_t t = img.first; t <= img.last; ++t) {
        const Interval tgt = cx.edge_support(t);
        add(tgt.lo, tgt.hi, "g-cell");
      }
    } else {
      add(cx.edge_support(img.first).lo, cx.edge_support(img.last).hi, "g-column");
    }
  }

  for (std::size_t i = 0; i < samples; ++i) sc.mean_curve.emplace_back(px(mx[i]), py(my[i]));
  for (const auto& p : data.points()) sc.data_points.push_back({px(p.x), py(p.y), 3.5, "red"});

  const double x0 = kLeft, x1 = kLeft + pw, y0 = kTop + ph;
  sc.axes.push_back({x0, y0, x1, y0});
  sc.axes.push_back({x0, kTop, x0, y0});
  for (int k = 0; k <= 4; ++k) {
    const double fx = dom.lower + dom.length() * k / 4.0;
    sc.axes.push_back({px(fx), y0, px(fx), y0 + 5});
    sc.labels.push_back({px(fx), y0 + 18, fmt(fx), 11.0, "middle"});
    const double fy = ylo + (yhi - ylo) * k / 4.0;
    sc.axes.push_back({x0 - 5, py(fy), x0, py(fy)});
    sc.labels.push_back({x0 - 8, py(fy) + 4, fmt(fy), 11.0, "end"});
  }
  sc.labels.push_back({x0 + pw / 2, sc.height - 10, "x", 12.0, "middle"});

  const double bar_y = y0 + 30;
  for (std::size_t i = 0; i < report.nodes.size(); ++i) {
    const char* colour = kPalette[i % std::size(kPalette)];
    for (const auto& iv : report.nodes[i].intervals) {
      sc.morse_bars.push_back({px(iv.lo), bar_y, std::max(px(iv.hi) - px(iv.lo), 1.0), 10.0, colour, 1.0, "morse-bar"});
    }
  }

  if (!report.nodes.empty()) {
    const double line = 14.0;
    const double box_h = line * static_cast<double>(report.nodes.size()) + 10.0;
    sc.inset_boxes.push_back({x0 + 10, kTop + 10, 300.0, box_h, "white", 0.85, "inset"});
    for (std::size_t i = 0; i < report.nodes.size(); ++i) {
      const double ty = kTop + 22 + line * static_cast<double>(i);
      sc.inset_boxes.push_back({x0 + 16, ty - 8, 8.0, 8.0, kPalette[i % std::size(kPalette)], 1.0, "swatch"});
      std::string text = report.nodes[i].label;
      if (const auto* idx = report.index(report.nodes[i].label)) {
        text += "  " + idx->index_string() + "  " + idx->classification;
      }
      sc.inset_text.push_back({x0 + 30, ty, text, 11.0, "start"});
    }
  }
  return sc;
}

std::string render_svg(const Report& report, const Enclosure& enclosure, const TrainingData& data,
                       const GpModel& model, const SvgOptions& options) {
  return build_scene(report, enclosure, data, model, options).to_svg();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw Error("failed writing " + path.string());
}

}  // namespace conleygp
