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

// Tiny SVG renderers for the report subcommand. The CSV files written next
// to them are the machine-readable output; these are for eyeballing.

#pragma once

#include <string>
#include <vector>

namespace uiqa::plots {

struct Point {
  double x;
  double y;
};

std::string scatter_svg(const std::vector<Point>& points, const std::string& title,
                        const std::string& x_label, const std::string& y_label);

// Bars over [lo, hi) split into counts.size() equal bins.
std::string histogram_svg(const std::vector<std::size_t>& counts, double lo, double hi,
                          const std::string& title, const std::string& x_label);

}  // namespace uiqa::plots
