// Copyright 2026 the scenvar authors
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

#pragma once

#include <string>
#include <vector>

#include "scenvar/evaluation.hpp"
#include "scenvar/strings.hpp"

namespace scenvar {

inline constexpr std::array<const char*, 8> kSpiderAxisLabels = {
    "long. accel", "long. decel",    "lat. accel",   "long. jerk",
    "lat. jerk",   "distance target", "lane keeping", "oscillation"};

/// Radar chart of the per-template mean KPI scores. Eight axes in fixed
/// order, one polygon per template, linear radial scale from 0 (center)
/// to 1 (outer ring).
inline std::string spider_svg(const std::vector<TemplateAggregate>& aggregates) {
  const double width = 640.0;
  const double height = 560.0;
  const double cx = 320.0;
  const double cy = 300.0;
  const double radius = 210.0;
  const std::array<const char*, 6> colors = {"#1f77b4", "#ff7f0e", "#2ca02c",
                                             "#d62728", "#9467bd", "#8c564b"};
  const auto axis_point = [&](size_t axis, double value) {
    const double angle = 0.5 * kPi - 2.0 * kPi * static_cast<double>(axis) / 8.0;
    return Vec2{cx + value * radius * std::cos(angle), cy - value * radius * std::sin(angle)};
  };
  const auto fmt_pt = [](Vec2 p) { return fmt_g(p.x, 6) + "," + fmt_g(p.y, 6); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_g(width, 6) + "\" height=\"" +
         fmt_g(height, 6) + "\" viewBox=\"0 0 " + fmt_g(width, 6) + " " + fmt_g(height, 6) +
         "\">\n";
  svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (const double ring : {0.25, 0.5, 0.75, 1.0}) {
    svg += "  <polygon class=\"ring\" points=\"";
    for (size_t a = 0; a < 8; ++a) {
      svg += fmt_pt(axis_point(a, ring));
      if (a + 1 < 8) svg.push_back(' ');
    }
    svg += "\" fill=\"none\" stroke=\"#cccccc\" stroke-width=\"1\"/>\n";
  }
  for (size_t a = 0; a < 8; ++a) {
    const Vec2 tip = axis_point(a, 1.0);
    svg += "  <line x1=\"" + fmt_g(cx, 6) + "\" y1=\"" + fmt_g(cy, 6) + "\" x2=\"" +
           fmt_pt(tip).substr(0, fmt_pt(tip).find(',')) + "\" y2=\"" +
           fmt_pt(tip).substr(fmt_pt(tip).find(',') + 1) +
           "\" stroke=\"#999999\" stroke-width=\"1\"/>\n";
    const Vec2 label = axis_point(a, 1.12);
    svg += "  <text x=\"" + fmt_g(label.x, 6) + "\" y=\"" + fmt_g(label.y, 6) +
           "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">" +
           kSpiderAxisLabels[a] + "</text>\n";
  }
  size_t color_idx = 0;
  double legend_y = 24.0;
  for (const auto& agg : aggregates) {
    if (!agg.mean) {
      continue;
    }
    const char* color = colors[color_idx % colors.size()];
    ++color_idx;
    const auto scores = agg.mean->scores();
    svg += "  <polygon class=\"template\" data-template=\"" + agg.template_family +
           "\" points=\"";
    for (size_t a = 0; a < 8; ++a) {
      svg += fmt_pt(axis_point(a, scores[a]));
      if (a + 1 < 8) svg.push_back(' ');
    }
    svg += "\" fill=\"";
    svg += color;
    svg += "\" fill-opacity=\"0.15\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "  <rect x=\"16\" y=\"" + fmt_g(legend_y - 11.0, 6) +
           "\" width=\"12\" height=\"12\" fill=\"";
    svg += color;
    svg += "\"/>\n  <text x=\"34\" y=\"" + fmt_g(legend_y, 6) +
           "\" font-family=\"sans-serif\" font-size=\"13\">" + agg.template_family +
           " (n=" + std::to_string(agg.scenario_count) + ")</text>\n";
    legend_y += 20.0;
  }
  svg += "</svg>\n";
  return svg;
}

/// Plain-text summary table, one row per template.
inline std::string report_table(const std::vector<TemplateAggregate>& aggregates) {
  std::string out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %6s %8s %8s %8s %8s %8s %8s %8s %8s %8s %6s\n",
                "template", "count", "success", "accel", "decel", "lat.acc", "l.jerk", "lat.jrk",
                "dist", "lane", "oscill", "mean");
  out += line;
  for (const auto& agg : aggregates) {
    if (agg.mean) {
      const auto s = agg.mean->scores();
      double total = 0.0;
      for (const double v : s) total += v;
      std::snprintf(line, sizeof(line),
                    "%-12s %6d %7.1f%% %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f %8.3f %6.3f\n",
                    agg.template_family.c_str(), agg.scenario_count, 100.0 * agg.success_rate,
                    s[0], s[1], s[2], s[3], s[4], s[5], s[6], s[7], total / 8.0);
    } else {
      std::snprintf(line, sizeof(line), "%-12s %6d %7.1f%%  (no successful runs)\n",
                    agg.template_family.c_str(), agg.scenario_count, 100.0 * agg.success_rate);
    }
    out += line;
  }
  return out;
}

}  // namespace scenvar
