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

#include "uiqa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "uiqa/error.hpp"

namespace uiqa {

namespace {

using i128 = __int128;

void check_pair(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) throw Error(std::string(what) + ": vectors differ in length");
  if (a.size() < 3) throw Error(std::string(what) + ": need at least 3 samples");
}

// Merge sort counting strict inversions.
std::uint64_t count_inversions(std::vector<double>& v, std::vector<double>& tmp, std::size_t lo,
                               std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t swaps = count_inversions(v, tmp, lo, mid) + count_inversions(v, tmp, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      tmp[k++] = v[j++];
    } else {
      tmp[k++] = v[i++];
    }
  }
  while (i < mid) tmp[k++] = v[i++];
  while (j < hi) tmp[k++] = v[j++];
  std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo), tmp.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

// Sum over runs of equal values of t (t - 1) / 2; `sorted` must be sorted.
template <typename Eq>
std::uint64_t tied_pairs(std::size_t n, Eq equal) {
  std::uint64_t total = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i < n && equal(i - 1, i)) {
      ++run;
    } else {
      total += static_cast<std::uint64_t>(run) * (run - 1) / 2;
      run = 1;
    }
  }
  return total;
}

// Model in normalized units: b1 * 0.5 tanh(a (t - c) / 2) + b4.
struct Shape {
  double a;
  double c;
};

double logistic_core(double a, double c, double t) { return 0.5 * std::tanh(0.5 * a * (t - c)); }

// Solves b1, b4 by ordinary least squares for a fixed shape; returns SSE.
double solve_linear(const Shape& s, std::span<const double> t, std::span<const double> y, double& b1,
                    double& b4) {
  const double n = static_cast<double>(t.size());
  double mh = 0.0, my = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    mh += logistic_core(s.a, s.c, t[i]);
    my += y[i];
  }
  mh /= n;
  my /= n;
  double shh = 0.0, shy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double h = logistic_core(s.a, s.c, t[i]) - mh;
    shh += h * h;
    shy += h * (y[i] - my);
  }
  if (!(shh > 0.0)) {
    b1 = 0.0;
    b4 = my;
  } else {
    b1 = shy / shh;
    b4 = my - b1 * mh;
  }
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - (b1 * logistic_core(s.a, s.c, t[i]) + b4);
    sse += r * r;
  }
  return std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
}

double sse_of(const std::array<double, 4>& p, std::span<const double> t, std::span<const double> y) {
  double sse = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - (p[0] * logistic_core(p[1], p[2], t[i]) + p[3]);
    sse += r * r;
  }
  return std::isfinite(sse) ? sse : std::numeric_limits<double>::infinity();
}

// Gaussian elimination with partial pivoting on a 4x4 system.
bool solve4(std::array<std::array<double, 4>, 4> m, std::array<double, 4> rhs, std::array<double, 4>& x) {
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    }
    if (!(std::abs(m[pivot][col]) > 0.0)) return false;
    std::swap(m[pivot], m[col]);
    std::swap(rhs[pivot], rhs[col]);
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int k = col; k < 4; ++k) m[r][k] -= f * m[col][k];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = 3; r >= 0; --r) {
    double acc = rhs[r];
    for (int k = r + 1; k < 4; ++k) acc -= m[r][k] * x[k];
    x[r] = acc / m[r][r];
  }
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

struct LmResult {
  std::array<double, 4> p;
  double sse;
  bool converged;
  int iterations;
};

LmResult levenberg_marquardt(std::array<double, 4> p, std::span<const double> t, std::span<const double> y) {
  constexpr int kMaxIterations = 500;
  double sse = sse_of(p, t, y);
  double lambda = 1e-3;
  for (int it = 1; it <= kMaxIterations; ++it) {
    std::array<std::array<double, 4>, 4> jtj{};
    std::array<double, 4> jtr{};
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double u = 0.5 * p[1] * (t[i] - p[2]);
      const double th = std::tanh(u);
      const double h = 0.5 * th;
      const double dh = 0.25 * (1.0 - th * th);  // d h / d(a (t - c))
      const std::array<double, 4> g = {h, p[0] * dh * (t[i] - p[2]), -p[0] * dh * p[1], 1.0};
      const double r = y[i] - (p[0] * h + p[3]);
      for (int a = 0; a < 4; ++a) {
        jtr[a] += g[a] * r;
        for (int b = 0; b < 4; ++b) jtj[a][b] += g[a] * g[b];
      }
    }
    for (;;) {
      auto m = jtj;
      for (int d = 0; d < 4; ++d) m[d][d] += lambda * std::max(jtj[d][d], 1e-12);
      std::array<double, 4> step{};
      if (solve4(m, jtr, step)) {
        std::array<double, 4> trial = p;
        for (int d = 0; d < 4; ++d) trial[d] += step[d];
        const double trial_sse = sse_of(trial, t, y);
        if (trial_sse <= sse) {
          const double gain = sse - trial_sse;
          p = trial;
          sse = trial_sse;
          lambda = std::max(lambda / 10.0, 1e-12);
          if (gain <= 1e-14 * (sse + 1e-300)) return {p, sse, true, it};
          break;
        }
      }
      lambda *= 10.0;
      if (lambda > 1e16) return {p, sse, true, it};  // no descent direction left
    }
  }
  return {p, sse, false, kMaxIterations};
}

// Nelder-Mead over (a, c) with b1, b4 solved exactly at each vertex.
LmResult nelder_mead(Shape start, std::span<const double> t, std::span<const double> y) {
  constexpr int kMaxIterations = 2000;
  auto cost = [&](const std::array<double, 2>& v) {
    double b1, b4;
    return solve_linear({v[0], v[1]}, t, y, b1, b4);
  };
  std::array<std::array<double, 2>, 3> simplex = {{{start.a, start.c},
                                                    {start.a * 1.5 + 0.1, start.c},
                                                    {start.a, start.c + 0.5}}};
  std::array<double, 3> f = {cost(simplex[0]), cost(simplex[1]), cost(simplex[2])};
  bool converged = false;
  int it = 0;
  for (; it < kMaxIterations; ++it) {
    std::array<int, 3> order = {0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return f[a] < f[b]; });
    const auto best = simplex[order[0]], mid = simplex[order[1]], worst = simplex[order[2]];
    const double fb = f[order[0]], fm = f[order[1]], fw = f[order[2]];
    if (std::abs(fw - fb) <= 1e-14 * (std::abs(fb) + 1e-300)) {
      converged = true;
      break;
    }
    const std::array<double, 2> centroid = {(best[0] + mid[0]) / 2, (best[1] + mid[1]) / 2};
    auto along = [&](double k) {
      return std::array<double, 2>{centroid[0] + k * (worst[0] - centroid[0]),
                                   centroid[1] + k * (worst[1] - centroid[1])};
    };
    const auto reflected = along(-1.0);
    const double fr = cost(reflected);
    if (fr < fb) {
      const auto expanded = along(-2.0);
      const double fe = cost(expanded);
      simplex[order[2]] = fe < fr ? expanded : reflected;
      f[order[2]] = std::min(fe, fr);
    } else if (fr < fm) {
      simplex[order[2]] = reflected;
      f[order[2]] = fr;
    } else {
      const auto contracted = along(0.5);
      const double fc = cost(contracted);
      if (fc < fw) {
        simplex[order[2]] = contracted;
        f[order[2]] = fc;
      } else {
        for (int k : {order[1], order[2]}) {
          simplex[k] = {(simplex[k][0] + best[0]) / 2, (simplex[k][1] + best[1]) / 2};
          f[k] = cost(simplex[k]);
        }
      }
    }
  }
  const int b = static_cast<int>(std::min_element(f.begin(), f.end()) - f.begin());
  double b1, b4;
  const double sse = solve_linear({simplex[b][0], simplex[b][1]}, t, y, b1, b4);
  return {{b1, simplex[b][0], simplex[b][1], b4}, sse, converged, it};
}

}  // namespace

double percentile_inclusive(std::vector<double> values, double p) {
  if (values.empty()) throw Error("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<double> midranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

double pearson(std::span<const double> pred, std::span<const double> mos) {
  check_pair(pred, mos, "pearson");
  const double n = static_cast<double>(pred.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    mx += pred[i];
    my += mos[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double dx = pred[i] - mx;
    const double dy = mos[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error("pearson: constant input vector");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double spearman(std::span<const double> pred, std::span<const double> mos) {
  check_pair(pred, mos, "spearman");
  // Doubled midranks are integers, so the closed-form Pearson sums are exact.
  const auto rx = midranks(pred);
  const auto ry = midranks(mos);
  i128 sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const auto x = static_cast<long long>(2.0 * rx[i]);
    const auto y = static_cast<long long>(2.0 * ry[i]);
    sx += x;
    sy += y;
    sxx += static_cast<i128>(x) * x;
    syy += static_cast<i128>(y) * y;
    sxy += static_cast<i128>(x) * y;
  }
  const auto n = static_cast<i128>(rx.size());
  const i128 num = n * sxy - sx * sy;
  const i128 dx = n * sxx - sx * sx;
  const i128 dy = n * syy - sy * sy;
  if (dx == 0 || dy == 0) throw Error("spearman: constant input vector");
  return static_cast<double>(num) / std::sqrt(static_cast<double>(dx) * static_cast<double>(dy));
}

double kendall(std::span<const double> pred, std::span<const double> mos) {
  check_pair(pred, mos, "kendall");
  const std::size_t n = pred.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pred[a] < pred[b] || (pred[a] == pred[b] && mos[a] < mos[b]);
  });
  const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
  const std::uint64_t n1 = tied_pairs(n, [&](std::size_t i, std::size_t j) { return pred[order[i]] == pred[order[j]]; });
  const std::uint64_t n3 = tied_pairs(n, [&](std::size_t i, std::size_t j) {
    return pred[order[i]] == pred[order[j]] && mos[order[i]] == mos[order[j]];
  });
  std::vector<double> ys(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = mos[order[i]];
  std::vector<double> tmp(n);
  const std::uint64_t swaps = count_inversions(ys, tmp, 0, n);  // ys ends up sorted
  const std::uint64_t n2 = tied_pairs(n, [&](std::size_t i, std::size_t j) { return ys[i] == ys[j]; });
  const auto s = static_cast<long long>(n0) - static_cast<long long>(n1) - static_cast<long long>(n2) +
                 static_cast<long long>(n3) - 2 * static_cast<long long>(swaps);
  const std::uint64_t tx = n0 - n1;
  const std::uint64_t ty = n0 - n2;
  if (tx == 0 || ty == 0) throw Error("kendall: constant input vector");
  return static_cast<double>(s) / std::sqrt(static_cast<double>(tx) * static_cast<double>(ty));
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double LogisticFit::operator()(double q) const {
  return beta[0] * (0.5 * std::tanh(0.5 * beta[1] * (q - beta[2]))) + beta[3];
}

LogisticFit fit_logistic(std::span<const double> pred, std::span<const double> mos) {
  if (pred.size() != mos.size()) throw Error("fit_logistic: vectors differ in length");
  if (pred.size() < 5) throw Error("fit_logistic: need at least 5 samples");
  const double n = static_cast<double>(pred.size());
  double center = 0.0;
  for (double q : pred) center += q;
  center /= n;
  double spread = 0.0;
  for (double q : pred) spread += (q - center) * (q - center);
  spread = std::sqrt(spread / n);
  double my = 0.0;
  for (double v : mos) my += v;
  my /= n;
  double syy = 0.0;
  for (double v : mos) syy += (v - my) * (v - my);
  if (!(spread > 0.0) || !(syy > 0.0)) throw Error("fit_logistic: constant input vector");

  std::vector<double> t(pred.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (pred[i] - center) / spread;

  // Near-linear member: slope small enough that the curvature is negligible.
  LmResult best;
  double linear_sse = 0.0;
  {
    double b1, b4;
    const Shape flat{1e-5, 0.0};
    linear_sse = solve_linear(flat, t, mos, b1, b4);
    best = {{b1, flat.a, flat.c, b4}, linear_sse, true, 0};
  }
  bool any_converged = false;
  int iterations = 0;
  for (double a0 : {0.5, 1.0, 2.0, 4.0}) {
    for (double c0 : {-0.5, 0.0, 0.5}) {
      double b1, b4;
      solve_linear({a0, c0}, t, mos, b1, b4);
      const LmResult r = levenberg_marquardt({b1, a0, c0, b4}, t, mos);
      iterations += r.iterations;
      any_converged = any_converged || r.converged;
      if (r.sse < best.sse) best = r;
    }
  }
  if (!any_converged) {
    const LmResult r = nelder_mead({1.0, 0.0}, t, mos);
    iterations += r.iterations;
    any_converged = r.converged;
    if (r.sse < best.sse) best = r;
  }
  // Re-solve the linear pair exactly for the chosen shape.
  {
    double b1, b4;
    const double sse = solve_linear({best.p[1], best.p[2]}, t, mos, b1, b4);
    if (sse <= best.sse) best.p = {b1, best.p[1], best.p[2], b4};
  }

  LogisticFit fit;
  fit.beta = {best.p[0], best.p[1] / spread, best.p[2] * spread + center, best.p[3]};
  // When no curved member beats the linear limit, that closed-form limit is the answer.
  fit.converged = any_converged || best.sse >= linear_sse * (1.0 - 1e-9) - 1e-12 * syy;
  fit.iterations = iterations;
  fit.mapped.resize(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    fit.mapped[i] = best.p[0] * logistic_core(best.p[1], best.p[2], t[i]) + best.p[3];
  }
  return fit;
}

}  // namespace uiqa
