// Copyright 2026 The corecut Authors
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

#ifndef CORECUT_CHARTS_HPP
#define CORECUT_CHARTS_HPP

// Minimal native SVG: line charts for per-iteration telemetry and sorted
// utility curves.  No plotting dependency; output is deterministic.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "corecut/errors.hpp"
#include "corecut/linear_program.hpp"

namespace corecut::charts {

struct Series {
  std::string name;
  Vec values;
};

namespace detail {

inline constexpr int kWidth = 800;
inline constexpr int kHeight = 400;
inline constexpr int kMargin = 60;
inline const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace detail

inline std::string line_chart_svg(const std::string& title, const std::vector<Series>& series,
                                  const std::string& x_label = "iteration") {
  using namespace detail;
  std::size_t points = 0;
  double lo = 0.0, hi = 1.0;
  bool first = true;
  for (const auto& s : series) {
    points = std::max(points, s.values.size());
    for (double v : s.values) {
      if (first) {
        lo = hi = v;
        first = false;
      }
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (points == 0) throw Error("chart needs at least one point");
  if (hi - lo < 1e-12) {
    hi += 1.0;
    lo -= 1.0;
  }
  const double plot_w = kWidth - 2 * kMargin, plot_h = kHeight - 2 * kMargin;
  const auto sx = [&](std::size_t i) {
    return kMargin + (points == 1 ? plot_w / 2 : plot_w * static_cast<double>(i) / static_cast<double>(points - 1));
  };
  const auto sy = [&](double v) { return kHeight - kMargin - plot_h * (v - lo) / (hi - lo); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
         "\" height=\"" + std::to_string(kHeight) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
         title + "</text>\n";
  // Axes.
  svg += "<line x1=\"" + std::to_string(kMargin) + "\" y1=\"" + num(kHeight - kMargin) + "\" x2=\"" +
         std::to_string(kWidth - kMargin) + "\" y2=\"" + num(kHeight - kMargin) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + std::to_string(kMargin) + "\" y1=\"" + num(kMargin) + "\" x2=\"" +
         std::to_string(kMargin) + "\" y2=\"" + num(kHeight - kMargin) + "\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + std::to_string(kWidth / 2) + "\" y=\"" + std::to_string(kHeight - 16) +
         "\" text-anchor=\"middle\" font-size=\"12\">" + x_label + "</text>\n";
  svg += "<text x=\"8\" y=\"" + num(sy(hi)) + "\" font-size=\"11\">" + num(hi) + "</text>\n";
  svg += "<text x=\"8\" y=\"" + num(sy(lo)) + "\" font-size=\"11\">" + num(lo) + "</text>\n";

  int color = 0;
  for (const auto& s : series) {
    if (s.values.empty()) continue;
    std::string path = "<polyline fill=\"none\" stroke=\"";
    path += kPalette[color % 4];
    path += "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i) path += ' ';
      path += num(sx(i)) + "," + num(sy(s.values[i]));
    }
    path += "\"/>\n";
    svg += path;
    svg += "<text x=\"" + std::to_string(kWidth - kMargin + 4) + "\" y=\"" +
           num(sy(s.values.back())) + "\" font-size=\"11\" fill=\"" + kPalette[color % 4] + "\">" +
           s.name + "</text>\n";
    ++color;
  }
  svg += "</svg>\n";
  return svg;
}

/// Sorted-utility curves: player quantiles on the x-axis.
inline std::string quantile_chart_svg(const std::string& title, Vec initial, Vec final_values) {
  std::sort(initial.begin(), initial.end());
  std::sort(final_values.begin(), final_values.end());
  std::vector<Series> series;
  if (!initial.empty()) series.push_back(Series{"initial", std::move(initial)});
  if (!final_values.empty()) series.push_back(Series{"final", std::move(final_values)});
  return line_chart_svg(title, series, "utility quantile");
}

}  // namespace corecut::charts

#endif  // CORECUT_CHARTS_HPP
