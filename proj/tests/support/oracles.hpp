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

// Slow, obviously-correct reference implementations used only by tests.

#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace uiqa::oracle {

// Twice the midrank of every element, by counting.
inline std::vector<long long> doubled_midranks(std::span<const double> v) {
  std::vector<long long> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    long long less = 0, equal = 0;
    for (double w : v) {
      less += w < v[i];
      equal += w == v[i];
    }
    // ranks less+1 .. less+equal, average doubled
    out[i] = 2 * less + equal + 1;
  }
  return out;
}

// Pearson of the midranks with the pairwise-difference form of the sums.
inline double spearman(std::span<const double> x, std::span<const double> y) {
  const auto rx = doubled_midranks(x);
  const auto ry = doubled_midranks(y);
  __int128 num = 0, dx = 0, dy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    for (std::size_t j = i + 1; j < rx.size(); ++j) {
      const long long a = rx[i] - rx[j];
      const long long b = ry[i] - ry[j];
      num += static_cast<__int128>(a) * b;
      dx += static_cast<__int128>(a) * a;
      dy += static_cast<__int128>(b) * b;
    }
  }
  return static_cast<double>(num) / std::sqrt(static_cast<double>(dx) * static_cast<double>(dy));
}

// Tau-b from explicit concordant/discordant counting.
inline double kendall(std::span<const double> x, std::span<const double> y) {
  long long concordant = 0, discordant = 0, untied_x = 0, untied_y = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const int sx = (x[i] > x[j]) - (x[i] < x[j]);
      const int sy = (y[i] > y[j]) - (y[i] < y[j]);
      untied_x += sx != 0;
      untied_y += sy != 0;
      if (sx * sy > 0) ++concordant;
      if (sx * sy < 0) ++discordant;
    }
  }
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
inline void gauss_legendre(int n, std::vector<long double>& nodes, std::vector<long double>& weights) {
  nodes.assign(n, 0);
  weights.assign(n, 0);
  const long double pi = 3.141592653589793238462643383279502884L;
  for (int i = 0; i < n; ++i) {
    long double x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    long double dp = 0;
    for (int it = 0; it < 100; ++it) {
      long double p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1);
      const long double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-19L) break;
    }
    nodes[i] = x;
    weights[i] = 2 / ((1 - x * x) * dp * dp);
  }
}

// Phi(z) = 1/2 + integral of the density over [0, z], composite 16-point rule.
class NormalCdf {
 public:
  NormalCdf() { gauss_legendre(16, nodes_, weights_); }

  double operator()(double z) const {
    const long double a = std::fabs(static_cast<long double>(z));
    const int panels = 64;
    const long double h = a / panels;
    long double sum = 0;
    for (int p = 0; p < panels; ++p) {
      const long double mid = (p + 0.5L) * h;
      for (std::size_t k = 0; k < nodes_.size(); ++k) {
        const long double t = mid + 0.5L * h * nodes_[k];
        sum += weights_[k] * std::exp(-t * t / 2);
      }
    }
    const long double half_area = sum * 0.5L * h / std::sqrt(2 * 3.141592653589793238462643383279502884L);
    return static_cast<double>(z >= 0 ? 0.5L + half_area : 0.5L - half_area);
  }

  // Density integral over [a, b], one 16-point panel; exact for short spans.
  long double segment(long double a, long double b) const {
    const long double mid = (a + b) / 2, half = (b - a) / 2;
    long double sum = 0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      const long double t = mid + half * nodes_[k];
      sum += weights_[k] * std::exp(-t * t / 2);
    }
    return sum * half / std::sqrt(2 * 3.141592653589793238462643383279502884L);
  }

 private:
  std::vector<long double> nodes_, weights_;
};

struct MosCell {
  double mos;
  double variance;
  int n;
};

// Walks every unordered pair, applies the significance rule directly and
// counts how often the scores order the pair like the MOS. Ties count wrong.
inline double c0_walk(const std::map<std::string, MosCell>& table, const std::map<std::string, double>& scores,
                      bool higher_is_better, std::size_t* n_pairs = nullptr) {
  const NormalCdf phi;
  std::vector<std::string> ids;
  for (const auto& [id, cell] : table) ids.push_back(id);
  std::size_t total = 0, correct = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const MosCell& a = table.at(ids[i]);
      const MosCell& b = table.at(ids[j]);
      if (a.mos == b.mos) continue;
      const double se = std::sqrt(a.variance / a.n + b.variance / b.n);
      const double z = se == 0.0 ? INFINITY : std::fabs(a.mos - b.mos) / se;
      if (!(std::isinf(z) || phi(z) > 0.95)) continue;
      ++total;
      double d = scores.at(ids[i]) - scores.at(ids[j]);
      if (!higher_is_better) d = -d;
      if ((a.mos > b.mos && d > 0) || (a.mos < b.mos && d < 0)) ++correct;
    }
  }
  if (n_pairs) *n_pairs = total;
  return total ? static_cast<double>(correct) / total : NAN;
}

}  // namespace uiqa::oracle
