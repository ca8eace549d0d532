// Copyright 2026 The uiqa Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "uiqa/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace uiqa::plots {

namespace {

constexpr double kWidth = 480, kHeight = 360, kMargin = 50;

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

void frame(std::ostringstream& svg, const std::string& title, const std::string& x_label,
           const std::string& y_label, double x0, double x1, double y0, double y1) {
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"13\">" << escape(title)
      << "</text>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kWidth - kMargin / 2
      << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kMargin << "\" y1=\"" << kMargin / 2 << "\" x2=\"" << kMargin << "\" y2=\""
      << kHeight - kMargin << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\">"
      << escape(x_label) << "</text>\n"
      << "<text x=\"14\" y=\"" << kHeight / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << kHeight / 2 << ")\">" << escape(y_label) << "</text>\n"
      << "<text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 14 << "\">" << num(x0) << "</text>\n"
      << "<text x=\"" << kWidth - kMargin / 2 << "\" y=\"" << kHeight - kMargin + 14
      << "\" text-anchor=\"end\">" << num(x1) << "</text>\n"
      << "<text x=\"" << kMargin - 4 << "\" y=\"" << kHeight - kMargin << "\" text-anchor=\"end\">" << num(y0)
      << "</text>\n"
      << "<text x=\"" << kMargin - 4 << "\" y=\"" << kMargin / 2 + 8 << "\" text-anchor=\"end\">" << num(y1)
      << "</text>\n";
}

}  // namespace

std::string scatter_svg(const std::vector<Point>& points, const std::string& title,
                        const std::string& x_label, const std::string& y_label) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  if (!std::isfinite(x0)) x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  if (x1 == x0) x1 = x0 + 1;
  if (y1 == y0) y1 = y0 + 1;
  std::ostringstream svg;
  frame(svg, title, x_label, y_label, x0, x1, y0, y1);
  const double pw = kWidth - 1.5 * kMargin;
  const double ph = kHeight - 1.5 * kMargin;
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) continue;
    const double sx = kMargin + (p.x - x0) / (x1 - x0) * pw;
    const double sy = kHeight - kMargin - (p.y - y0) / (y1 - y0) * ph;
    svg << "<circle cx=\"" << num(sx) << "\" cy=\"" << num(sy) << "\" r=\"2.5\" fill=\"#1f77b4\" "
        << "fill-opacity=\"0.6\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string histogram_svg(const std::vector<std::size_t>& counts, double lo, double hi,
                          const std::string& title, const std::string& x_label) {
  std::size_t peak = 1;
  for (auto c : counts) peak = std::max(peak, c);
  std::ostringstream svg;
  frame(svg, title, x_label, "count", lo, hi, 0, static_cast<double>(peak));
  const double pw = kWidth - 1.5 * kMargin;
  const double ph = kHeight - 1.5 * kMargin;
  const double bw = counts.empty() ? pw : pw / static_cast<double>(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double bh = static_cast<double>(counts[i]) / static_cast<double>(peak) * ph;
    svg << "<rect x=\"" << num(kMargin + i * bw + 1) << "\" y=\"" << num(kHeight - kMargin - bh)
        << "\" width=\"" << num(bw - 2) << "\" height=\"" << num(bh) << "\" fill=\"#4c72b0\"/>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace uiqa::plots
