// Copyright 2026 The Stylo Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stylo/svg.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace stylo::svg {
namespace {

constexpr double kLeft = 64.0;
constexpr double kRight = 24.0;
constexpr double kTop = 36.0;
constexpr double kBottom = 48.0;
constexpr int kTicks = 5;

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!std::isfinite(lo)) {
      lo = 0.0;
      hi = 1.0;
    } else if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double map(double v, double a, double b) const {
    return a + (v - lo) / (hi - lo) * (b - a);
  }
};

Frame inner(const Frame& f) {
  return {f.x + kLeft, f.y + kTop, f.width - kLeft - kRight,
          f.height - kTop - kBottom};
}

std::string text(double x, double y, std::string_view body,
                 std::string_view anchor = "middle", double size = 12.0,
                 std::string_view extra = "") {
  std::string out = "<text x=\"" + num(x) + "\" y=\"" + num(y) +
                    "\" font-size=\"" + num(size, 0) + "\" text-anchor=\"" +
                    std::string(anchor) + "\"";
  if (!extra.empty()) out += " " + std::string(extra);
  return out + ">" + escape(body) + "</text>";
}

std::string line(double x1, double y1, double x2, double y2,
                 std::string_view stroke = "#333") {
  return "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
         "\" y2=\"" + num(y2) + "\" stroke=\"" + std::string(stroke) + "\"/>";
}

void draw_labels(Document& doc, const Frame& frame, const Frame& area,
                 const std::string& title, const std::string& x_label,
                 const std::string& y_label) {
  doc.add(text(frame.x + frame.width / 2, frame.y + 22, title, "middle", 14));
  doc.add(text(area.x + area.width / 2, frame.y + frame.height - 8, x_label));
  const double cx = frame.x + 14;
  const double cy = area.y + area.height / 2;
  doc.add(text(cx, cy, y_label, "middle", 12,
               "transform=\"rotate(-90 " + num(cx) + " " + num(cy) + ")\""));
}

void draw_axes(Document& doc, const Frame& area, const Range& xr,
               const Range& yr) {
  const double bottom = area.y + area.height;
  doc.add(line(area.x, bottom, area.x + area.width, bottom));
  doc.add(line(area.x, area.y, area.x, bottom));
  for (int t = 0; t <= kTicks; ++t) {
    const double f = static_cast<double>(t) / kTicks;
    const double xv = xr.lo + f * (xr.hi - xr.lo);
    const double px = area.x + f * area.width;
    doc.add(line(px, bottom, px, bottom + 4));
    doc.add(text(px, bottom + 16, num(xv, 1), "middle", 10));
    const double yv = yr.lo + f * (yr.hi - yr.lo);
    const double py = bottom - f * area.height;
    doc.add(line(area.x - 4, py, area.x, py));
    doc.add(text(area.x - 6, py + 3, num(yv, 2), "end", 10));
  }
}

std::string polyline(const std::vector<double>& xs, const std::vector<double>& ys,
                     const Range& xr, const Range& yr, const Frame& area) {
  std::string pts;
  const size_t n = std::min(xs.size(), ys.size());
  for (size_t i = 0; i < n; ++i) {
    if (!std::isfinite(ys[i])) continue;
    if (!pts.empty()) pts += ' ';
    pts += num(xr.map(xs[i], area.x, area.x + area.width)) + "," +
           num(yr.map(ys[i], area.y + area.height, area.y));
  }
  return pts;
}


}  // namespace

std::string num(double v, int decimals) {
  if (!std::isfinite(v)) return "0";
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                           std::chars_format::fixed, decimals);
  std::string s(buf.data(), res.ptr);
  if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos) {
    s.erase(0, s[0] == '-' ? 1 : 0);
  }
  return s;
}

std::string escape(std::string_view body) {
  std::string out;
  for (char c : body) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string ramp_color(double t) {
  static constexpr std::array<std::array<double, 3>, 3> kStops = {{
      {{0x08, 0x1d, 0x58}},
      {{0x1d, 0x91, 0xc0}},
      {{0xff, 0xe6, 0x4d}},
  }};
  t = std::clamp(std::isfinite(t) ? t : 0.0, 0.0, 1.0);
  const size_t seg = t < 0.5 ? 0 : 1;
  const double f = t < 0.5 ? t * 2.0 : (t - 0.5) * 2.0;
  std::string out = "#";
  static constexpr char kHex[] = "0123456789abcdef";
  for (size_t c = 0; c < 3; ++c) {
    const auto v = static_cast<int>(std::lround(
        kStops[seg][c] + f * (kStops[seg + 1][c] - kStops[seg][c])));
    out += kHex[v >> 4];
    out += kHex[v & 15];
  }
  return out;
}

std::string Document::str() const {
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                    num(width_, 0) + "\" height=\"" + num(height_, 0) +
                    "\" viewBox=\"0 0 " + num(width_, 0) + " " +
                    num(height_, 0) + "\" font-family=\"sans-serif\">\n";
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const auto& e : elements_) out += e + "\n";
  return out + "</svg>\n";
}

void draw_line_chart(Document& doc, const Frame& frame, const LineChart& chart) {
  const Frame area = inner(frame);
  Range xr, yr;
  for (const auto& s : chart.series) {
    for (double v : s.x) xr.include(v);
    for (double v : s.y) yr.include(v);
  }
  if (chart.band) {
    for (double v : chart.band->x) xr.include(v);
    for (double v : chart.band->lo) yr.include(v);
    for (double v : chart.band->hi) yr.include(v);
  }
  xr.finish();
  yr.finish();
  draw_labels(doc, frame, area, chart.title, chart.x_label, chart.y_label);
  draw_axes(doc, area, xr, yr);
  if (chart.band && !chart.band->x.empty()) {
    const Band& b = *chart.band;
    std::vector<double> xs = b.x;
    std::vector<double> ys = b.hi;
    xs.insert(xs.end(), b.x.rbegin(), b.x.rend());
    ys.insert(ys.end(), b.lo.rbegin(), b.lo.rend());
    doc.add("<polygon points=\"" + polyline(xs, ys, xr, yr, area) +
            "\" fill=\"" + b.color + "\" fill-opacity=\"0.2\" stroke=\"none\"/>");
  }
  double legend_y = area.y + 12;
  for (const auto& s : chart.series) {
    std::string el = "<polyline points=\"" + polyline(s.x, s.y, xr, yr, area) +
                     "\" fill=\"none\" stroke=\"" + s.color +
                     "\" stroke-width=\"1.5\"";
    if (s.dashed) el += " stroke-dasharray=\"6 4\"";
    doc.add(el + "/>");
    if (!s.label.empty()) {
      doc.add(text(area.x + area.width - 4, legend_y, s.label, "end", 11,
                   "fill=\"" + s.color + "\""));
      legend_y += 14;
    }
  }
}

void draw_bar_chart(Document& doc, const Frame& frame, const BarChart& chart) {
  const Frame area = inner(frame);
  Range yr;
  yr.include(0.0);
  for (double v : chart.values) yr.include(v);
  yr.finish();
  draw_labels(doc, frame, area, chart.title, chart.x_label, chart.y_label);
  const double bottom = area.y + area.height;
  doc.add(line(area.x, bottom, area.x + area.width, bottom));
  doc.add(line(area.x, area.y, area.x, bottom));
  for (int t = 0; t <= kTicks; ++t) {
    const double f = static_cast<double>(t) / kTicks;
    const double py = bottom - f * area.height;
    doc.add(line(area.x - 4, py, area.x, py));
    doc.add(text(area.x - 6, py + 3, num(yr.lo + f * (yr.hi - yr.lo), 0), "end", 10));
  }
  const size_t n = chart.values.size();
  if (n == 0) return;
  const double slot = area.width / static_cast<double>(n);
  const size_t label_every = std::max<size_t>(1, n / 15);
  for (size_t i = 0; i < n; ++i) {
    const double top = yr.map(chart.values[i], bottom, area.y);
    const double x = area.x + slot * static_cast<double>(i);
    doc.add("<rect x=\"" + num(x + slot * 0.1) + "\" y=\"" + num(top) +
            "\" width=\"" + num(slot * 0.8) + "\" height=\"" +
            num(bottom - top) + "\" fill=\"#4c72b0\"/>");
    if (i < chart.labels.size() && i % label_every == 0) {
      doc.add(text(x + slot / 2, bottom + 16, chart.labels[i], "middle", 10));
    }
  }
}

void draw_heatmap(Document& doc, const Frame& frame, const HeatGrid& grid) {
  Frame area = inner(frame);
  area.width -= 48;  // Room for the color legend.
  draw_labels(doc, frame, area, grid.title, grid.x_label, grid.y_label);
  Range vr;
  for (const auto& c : grid.cells) {
    if (c) vr.include(*c);
  }
  vr.finish();
  if (grid.rows == 0 || grid.cols == 0) return;
  const double cw = area.width / static_cast<double>(grid.cols);
  const double ch = area.height / static_cast<double>(grid.rows);
  const size_t label_every = std::max<size_t>(1, grid.cols / 10);
  for (size_t r = 0; r < grid.rows; ++r) {
    for (size_t c = 0; c < grid.cols; ++c) {
      const auto& v = grid.cells[r * grid.cols + c];
      const std::string fill = v ? ramp_color((*v - vr.lo) / (vr.hi - vr.lo)) : "#dddddd";
      // Row 0 at the bottom.
      const double y = area.y + area.height - ch * static_cast<double>(r + 1);
      doc.add("<rect x=\"" + num(area.x + cw * static_cast<double>(c)) +
              "\" y=\"" + num(y) + "\" width=\"" + num(cw) + "\" height=\"" +
              num(ch) + "\" fill=\"" + fill + "\"/>");
    }
  }
  for (size_t i = 0; i < std::max(grid.rows, grid.cols); i += label_every) {
    const std::string label = std::to_string(grid.first_label + static_cast<int>(i));
    if (i < grid.cols) {
      doc.add(text(area.x + cw * (static_cast<double>(i) + 0.5),
                   area.y + area.height + 16, label, "middle", 10));
    }
    if (i < grid.rows) {
      doc.add(text(area.x - 6, area.y + area.height - ch * (static_cast<double>(i) + 0.5) + 3,
                   label, "end", 10));
    }
  }
  const double lx = area.x + area.width + 16;
  constexpr int kSteps = 20;
  const double sh = area.height / kSteps;
  for (int s = 0; s < kSteps; ++s) {
    const double t = (static_cast<double>(s) + 0.5) / kSteps;
    doc.add("<rect x=\"" + num(lx) + "\" y=\"" +
            num(area.y + area.height - sh * (s + 1)) + "\" width=\"14\" height=\"" +
            num(sh) + "\" fill=\"" + ramp_color(t) + "\"/>");
  }
  doc.add(text(lx + 7, area.y - 4, num(vr.hi, 3), "middle", 10));
  doc.add(text(lx + 7, area.y + area.height + 12, num(vr.lo, 3), "middle", 10));
}

std::string line_chart(const LineChart& chart) {
  Document doc(640, 400);
  draw_line_chart(doc, Frame{}, chart);
  return doc.str();
}

std::string bar_chart(const BarChart& chart) {
  Document doc(640, 400);
  draw_bar_chart(doc, Frame{}, chart);
  return doc.str();
}

std::string heatmap(const HeatGrid& grid) {
  Document doc(640, 560);
  draw_heatmap(doc, Frame{0, 0, 640, 560}, grid);
  return doc.str();
}

}  // namespace stylo::svg
