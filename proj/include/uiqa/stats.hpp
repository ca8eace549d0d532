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

// Correlation statistics, the standard normal cdf, percentiles and the
// 4-parameter logistic mapping used for mapped PLCC.

#pragma once

#include <array>
#include <span>
#include <vector>

namespace uiqa {

// Linear interpolation between order statistics at rank p * (n - 1).
double percentile_inclusive(std::vector<double> values, double p);

// Average ranks (1-based), ties share the mean of their positions.
std::vector<double> midranks(std::span<const double> values);

// All three throw on length mismatch, fewer than 3 samples, or a constant
// input.
double pearson(std::span<const double> pred, std::span<const double> mos);
double spearman(std::span<const double> pred, std::span<const double> mos);
double kendall(std::span<const double> pred, std::span<const double> mos);  // tau-b, O(n log n)

// Phi(z) via erfc.
double normal_cdf(double z);

// f(q) = b1 * (0.5 - 1 / (1 + exp(b2 * (q - b3)))) + b4
struct LogisticFit {
  std::array<double, 4> beta{};
  std::vector<double> mapped;
  bool converged = false;
  int iterations = 0;

  double operator()(double q) const;
};

// Least-squares fit: Levenberg-Marquardt from several starts (each seeded
// by solving b1, b4 exactly), Nelder-Mead on (b2, b3) when no start
// converges, and a near-linear member of the family as the floor.
// Throws on fewer than 5 samples or constant inputs.
LogisticFit fit_logistic(std::span<const double> pred, std::span<const double> mos);

}  // namespace uiqa
