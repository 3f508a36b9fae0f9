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

// Minimal SVG emitters for the report plots.

#ifndef STYLO_SVG_H_
#define STYLO_SVG_H_

#include <optional>
#include <string>
#include <vector>

namespace stylo::svg {

// Plot area in document coordinates.
struct Frame {
  double x = 0.0;
  double y = 0.0;
  double width = 640.0;
  double height = 400.0;
};

class Document {
 public:
  Document(double width, double height) : width_(width), height_(height) {}

  void add(std::string element) { elements_.push_back(std::move(element)); }
  std::string str() const;

 private:
  double width_;
  double height_;
  std::vector<std::string> elements_;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

// Filled area between lo and hi.
struct Band {
  std::vector<double> x;
  std::vector<double> lo;
  std::vector<double> hi;
  std::string color = "#1f77b4";
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::optional<Band> band;
};

struct BarChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> labels;
  std::vector<double> values;
};

// Row-major rows x cols cells; absent cells are drawn grey.
struct HeatGrid {
  std::string title;
  std::string x_label;
  std::string y_label;
  size_t rows = 0;
  size_t cols = 0;
  std::vector<std::optional<double>> cells;
  // First row/column label; later ones count up by one.
  int first_label = 1;
};

// Fixed-point text with the given number of decimals.
std::string num(double v, int decimals = 2);
std::string escape(std::string_view text);

// Sequential ramp on t in [0, 1]: dark blue (0), teal, yellow (1), linear
// in RGB between the three stops. t outside [0, 1] is clamped.
std::string ramp_color(double t);

void draw_line_chart(Document& doc, const Frame& frame, const LineChart& chart);
void draw_bar_chart(Document& doc, const Frame& frame, const BarChart& chart);
void draw_heatmap(Document& doc, const Frame& frame, const HeatGrid& grid);

// Single-chart documents with default margins.
std::string line_chart(const LineChart& chart);
std::string bar_chart(const BarChart& chart);
std::string heatmap(const HeatGrid& grid);

}  // namespace stylo::svg

#endif  // STYLO_SVG_H_
