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

#include "uiqa/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <mutex>
#include <optional>

#include "uiqa/csv.hpp"
#include "uiqa/error.hpp"
#include "uiqa/metric_constants.hpp"
#include "uiqa/parallel.hpp"
#include "uiqa/stats.hpp"

namespace uiqa {

namespace mc = metric_constants;

namespace {

void require_same_shape(const ImageBuffer& a, const ImageBuffer& b, const char* what) {
  if (a.width() != b.width() || a.height() != b.height() || a.channels() != b.channels()) {
    throw Error(std::string(what) + ": image dimensions differ");
  }
}

// Separable valid-region filtering with a symmetric 1-D kernel.
std::vector<double> filter_valid(const std::vector<double>& plane, int width, int height,
                                 const std::vector<double>& taps) {
  const int k = static_cast<int>(taps.size());
  const int ow = width - k + 1;
  const int oh = height - k + 1;
  std::vector<double> rows(static_cast<std::size_t>(ow) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += taps[i] * plane[static_cast<std::size_t>(y) * width + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int y = 0; y < oh; ++y) {
    for (int x = 0; x < ow; ++x) {
      double acc = 0.0;
      for (int i = 0; i < k; ++i) acc += taps[i] * rows[static_cast<std::size_t>(y + i) * ow + x];
      out[static_cast<std::size_t>(y) * ow + x] = acc;
    }
  }
  return out;
}

std::vector<double> gaussian_taps() {
  std::vector<double> taps(mc::kSsimWindow);
  const double center = (mc::kSsimWindow - 1) / 2.0;
  double total = 0.0;
  for (int i = 0; i < mc::kSsimWindow; ++i) {
    const double d = i - center;
    taps[i] = std::exp(-d * d / (2.0 * mc::kSsimSigma * mc::kSsimSigma));
    total += taps[i];
  }
  for (double& t : taps) t /= total;
  return taps;
}

double trimmed_mean(std::vector<double> values, double trim) {
  std::sort(values.begin(), values.end());
  const auto k = static_cast<double>(values.size());
  const auto low = static_cast<std::size_t>(std::ceil(trim * k));
  const auto high = static_cast<std::size_t>(std::floor(trim * k));
  if (low + high >= values.size()) throw Error("uiqm: too few pixels for trimming");
  double sum = 0.0;
  for (std::size_t i = low; i < values.size() - high; ++i) sum += values[i];
  return sum / static_cast<double>(values.size() - low - high);
}

double spread_about(const std::vector<double>& values, double center) {
  double sum = 0.0;
  for (double v : values) sum += (v - center) * (v - center);
  return sum / static_cast<double>(values.size());
}

// Enhancement measure: 2 / (k1 k2) * sum over blocks of ln(max / min),
// blocks with a zero extremum contribute nothing.
double block_eme(const std::vector<double>& plane, int width, int height) {
  const int bs = mc::kUiqmBlock;
  const int k1 = width / bs;
  const int k2 = height / bs;
  double acc = 0.0;
  for (int by = 0; by < k2; ++by) {
    for (int bx = 0; bx < k1; ++bx) {
      double lo = std::numeric_limits<double>::infinity();
      double hi = -lo;
      for (int y = by * bs; y < (by + 1) * bs; ++y) {
        for (int x = bx * bs; x < (bx + 1) * bs; ++x) {
          const double v = plane[static_cast<std::size_t>(y) * width + x];
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      }
      if (lo > 0.0 && hi > 0.0) acc += std::log(hi / lo);
    }
  }
  return 2.0 / (static_cast<double>(k1) * k2) * acc;
}

// Sobel gradient magnitude (clamped borders), rescaled to a peak of 255.
std::vector<double> sobel_magnitude(const std::vector<double>& plane, int width, int height) {
  auto px = [&](int x, int y) {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return plane[static_cast<std::size_t>(y) * width + x];
  };
  std::vector<double> mag(plane.size());
  double peak = 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double gx = (px(x + 1, y - 1) + 2 * px(x + 1, y) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x - 1, y) + px(x - 1, y + 1));
      const double gy = (px(x - 1, y + 1) + 2 * px(x, y + 1) + px(x + 1, y + 1)) -
                        (px(x - 1, y - 1) + 2 * px(x, y - 1) + px(x + 1, y - 1));
      const double m = std::hypot(gx, gy);
      mag[static_cast<std::size_t>(y) * width + x] = m;
      peak = std::max(peak, m);
    }
  }
  if (peak > 0.0) {
    for (double& m : mag) m *= 255.0 / peak;
  }
  return mag;
}

double uicm(const ImageBuffer& img) {
  const auto d = img.data();
  const std::size_t n = img.pixel_count();
  std::vector<double> rg(n), yb(n);
  for (std::size_t p = 0; p < n; ++p) {
    const double r = d[3 * p], g = d[3 * p + 1], b = d[3 * p + 2];
    rg[p] = r - g;
    yb[p] = (r + g) / 2.0 - b;
  }
  const double mu_rg = trimmed_mean(rg, mc::kUicmTrim);
  const double mu_yb = trimmed_mean(yb, mc::kUicmTrim);
  const double s_rg = spread_about(rg, mu_rg);
  const double s_yb = spread_about(yb, mu_yb);
  return mc::kUicmMeanWeight * std::sqrt(mu_rg * mu_rg + mu_yb * mu_yb) +
         mc::kUicmSpreadWeight * std::sqrt(s_rg + s_yb);
}

double uism(const ImageBuffer& img) {
  const auto d = img.data();
  const std::size_t n = img.pixel_count();
  double total = 0.0;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> plane(n);
    for (std::size_t p = 0; p < n; ++p) plane[p] = d[3 * p + c];
    std::vector<double> edges = sobel_magnitude(plane, img.width(), img.height());
    for (std::size_t p = 0; p < n; ++p) edges[p] *= plane[p];
    total += mc::kUismChannelWeights[c] * block_eme(edges, img.width(), img.height());
  }
  return total;
}

// -1 / (k1 k2) * sum over blocks of r ln r, r = (max - min) / (max + min)
// across all channels of the block.
double uiconm(const ImageBuffer& img) {
  const auto d = img.data();
  const int bs = mc::kUiqmBlock;
  const int k1 = img.width() / bs;
  const int k2 = img.height() / bs;
  double acc = 0.0;
  for (int by = 0; by < k2; ++by) {
    for (int bx = 0; bx < k1; ++bx) {
      double lo = 255.0, hi = 0.0;
      for (int y = by * bs; y < (by + 1) * bs; ++y) {
        for (int x = bx * bs; x < (bx + 1) * bs; ++x) {
          for (int c = 0; c < 3; ++c) {
            const double v = d[(static_cast<std::size_t>(y) * img.width() + x) * 3 + c];
            lo = std::min(lo, v);
            hi = std::max(hi, v);
          }
        }
      }
      const double top = hi - lo;
      const double bot = hi + lo;
      if (top == 0.0 || bot == 0.0) continue;
      const double r = top / bot;
      acc += r * std::log(r);
    }
  }
  return -acc / (static_cast<double>(k1) * k2);
}

double score_one(std::string_view metric, const ImageBuffer& img, const ImageBuffer* ref) {
  if (metric == "psnr") return psnr(*ref, img);
  if (metric == "ssim") return ssim(*ref, img);
  if (metric == "uciqe") return uciqe(img);
  return uiqm(img);
}

}  // namespace

double psnr(const ImageBuffer& ref, const ImageBuffer& test) {
  require_same_shape(ref, test, "psnr");
  const auto a = ref.data();
  const auto b = test.data();
  double sse = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double e = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sse += e * e;
  }
  if (sse == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sse / static_cast<double>(a.size());
  return 10.0 * std::log10(mc::kPeak * mc::kPeak / mse);
}

double ssim(const ImageBuffer& ref, const ImageBuffer& test) {
  require_same_shape(ref, test, "ssim");
  if (ref.width() < mc::kSsimWindow || ref.height() < mc::kSsimWindow) {
    throw Error("ssim: image smaller than the 11x11 window");
  }
  const ImageBuffer ga = to_grayscale(ref);
  const ImageBuffer gb = to_grayscale(test);
  const int w = ga.width();
  const int h = ga.height();
  const std::size_t n = ga.pixel_count();
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  for (std::size_t p = 0; p < n; ++p) {
    x[p] = ga.data()[p];
    y[p] = gb.data()[p];
    xx[p] = x[p] * x[p];
    yy[p] = y[p] * y[p];
    xy[p] = x[p] * y[p];
  }
  const auto taps = gaussian_taps();
  const auto mx = filter_valid(x, w, h, taps);
  const auto my = filter_valid(y, w, h, taps);
  const auto exx = filter_valid(xx, w, h, taps);
  const auto eyy = filter_valid(yy, w, h, taps);
  const auto exy = filter_valid(xy, w, h, taps);
  const double c1 = (mc::kSsimK1 * mc::kPeak) * (mc::kSsimK1 * mc::kPeak);
  const double c2 = (mc::kSsimK2 * mc::kPeak) * (mc::kSsimK2 * mc::kPeak);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double mxy = mx[i] * my[i];
    const double sx = exx[i] - mx[i] * mx[i];
    const double sy = eyy[i] - my[i] * my[i];
    const double sxy = exy[i] - mxy;
    const double num = (2.0 * mxy + c1) * (2.0 * sxy + c2);
    const double den = (mx[i] * mx[i] + my[i] * my[i] + c1) * (sx + sy + c2);
    total += num / den;
  }
  return total / static_cast<double>(mx.size());
}

UciqeTerms uciqe_terms(const ImageBuffer& img) {
  if (img.channels() != 3) throw Error("uciqe: expected a 3-channel image");
  const LabPlanes lab = rgb_to_cielab(img);
  const std::size_t n = img.pixel_count();
  std::vector<double> chroma(n), lum(n);
  for (std::size_t p = 0; p < n; ++p) {
    chroma[p] = std::hypot(lab.a[p], lab.b[p]) / 100.0;
    lum[p] = lab.L[p] / 100.0;
  }
  // shifted by the first sample so a flat image gives exactly zero
  double shifted_sum = 0.0;
  for (double c : chroma) shifted_sum += c - chroma[0];
  const double shifted_mean = shifted_sum / static_cast<double>(n);
  double chroma_ss = 0.0;
  for (double c : chroma) chroma_ss += (c - chroma[0] - shifted_mean) * (c - chroma[0] - shifted_mean);

  double sat_sum = 0.0;
  const auto d = img.data();
  for (std::size_t p = 0; p < n; ++p) {
    const double hi = std::max({d[3 * p], d[3 * p + 1], d[3 * p + 2]});
    const double lo = std::min({d[3 * p], d[3 * p + 1], d[3 * p + 2]});
    if (hi > 0.0) sat_sum += (hi - lo) / hi;
  }

  UciqeTerms t;
  t.chroma_std = std::sqrt(chroma_ss / static_cast<double>(n));
  t.luminance_contrast = percentile_inclusive(lum, 1.0 - mc::kUciqeContrastQuantile) -
                         percentile_inclusive(lum, mc::kUciqeContrastQuantile);
  t.saturation_mean = sat_sum / static_cast<double>(n);
  t.value = mc::kUciqeWeights[0] * t.chroma_std + mc::kUciqeWeights[1] * t.luminance_contrast +
            mc::kUciqeWeights[2] * t.saturation_mean;
  return t;
}

UiqmTerms uiqm_terms(const ImageBuffer& img) {
  if (img.channels() != 3) throw Error("uiqm: expected a 3-channel image");
  if (img.width() < mc::kUiqmMinSide || img.height() < mc::kUiqmMinSide) {
    throw Error("uiqm: image must be at least 32x32 for 8x8 blocking");
  }
  UiqmTerms t;
  t.uicm = uicm(img);
  t.uism = uism(img);
  t.uiconm = uiconm(img);
  t.value = mc::kUiqmWeights[0] * t.uicm + mc::kUiqmWeights[1] * t.uism + mc::kUiqmWeights[2] * t.uiconm;
  return t;
}

bool is_full_reference(std::string_view metric) { return metric == "psnr" || metric == "ssim"; }

BatchScores score_batch(const DatasetManifest& manifest, const std::filesystem::path& manifest_dir,
                        std::span<const std::string> metrics, bool include_references) {
  if (metrics.empty()) throw Error("score_batch: no metrics requested");
  bool need_reference = false;
  for (const auto& m : metrics) {
    if (std::find(kMetricNames.begin(), kMetricNames.end(), m) == kMetricNames.end()) {
      throw Error("unknown metric '" + m + "' (known: psnr, ssim, uciqe, uiqm)");
    }
    need_reference = need_reference || is_full_reference(m);
  }

  std::vector<const ManifestEntry*> entries;
  for (const auto& e : manifest.entries) {
    if (!e.is_reference || include_references) entries.push_back(&e);
  }
  if (need_reference) {
    for (const ManifestEntry* e : entries) {
      if (!e->is_reference && (!e->reference_id || !manifest.find(*e->reference_id))) {
        throw Error("score_batch: '" + e->image_id + "' has no reference for a full-reference metric");
      }
    }
  }

  // results[entry][metric], elapsed[entry][metric] in ms
  std::vector<std::vector<double>> results(entries.size(), std::vector<double>(metrics.size()));
  std::vector<std::vector<double>> elapsed(entries.size(), std::vector<double>(metrics.size()));
  parallel_for(entries.size(), [&](std::size_t i) {
    const ManifestEntry& e = *entries[i];
    const ImageBuffer img = load_image(resolve_image_path(manifest_dir, e));
    std::optional<ImageBuffer> ref;
    if (need_reference && !e.is_reference) {
      ref = load_image(resolve_image_path(manifest_dir, *manifest.find(*e.reference_id)));
    }
    const ImageBuffer& against = ref ? *ref : img;
    for (std::size_t m = 0; m < metrics.size(); ++m) {
      const auto start = std::chrono::steady_clock::now();
      try {
        results[i][m] = score_one(metrics[m], img, &against);
      } catch (const Error& ex) {
        throw Error("'" + e.image_id + "' (" + metrics[m] + "): " + ex.what());
      }
      elapsed[i][m] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
  });

  BatchScores out;
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    ScoreTable table{metrics[m], {}, true};
    double total_ms = 0.0;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      table.scores.emplace(entries[i]->image_id, results[i][m]);
      total_ms += elapsed[i][m];
    }
    out.mean_ms_per_image[metrics[m]] = entries.empty() ? 0.0 : total_ms / static_cast<double>(entries.size());
    out.tables.push_back(std::move(table));
  }
  return out;
}

std::vector<ScoreTable> load_scores(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t cm = t.column("model");
  const std::size_t ci = t.column("image_id");
  const std::size_t cs = t.column("score");
  std::vector<ScoreTable> tables;
  for (const auto& row : t.rows) {
    const std::string& model = row.fields[cm];
    auto it = std::find_if(tables.begin(), tables.end(),
                           [&](const ScoreTable& s) { return s.model_name == model; });
    if (it == tables.end()) {
      tables.push_back(ScoreTable{model, {}, true});
      it = std::prev(tables.end());
    }
    const double score = csv::to_double(t, row, cs);
    if (std::isnan(score)) throw Error(with_location(t.source, row.line, "score is NaN"));
    if (!it->scores.emplace(row.fields[ci], score).second) {
      throw Error(with_location(t.source, row.line,
                                "duplicate score for '" + row.fields[ci] + "' in model '" + model + "'"));
    }
  }
  if (tables.empty()) throw Error(with_location(t.source, 0, "no scores"));
  return tables;
}

void save_scores(std::span<const ScoreTable> tables, const std::filesystem::path& path) {
  csv::Writer w({"model", "image_id", "score"});
  for (const auto& t : tables) {
    for (const auto& [image, score] : t.scores) w.add({t.model_name, image, csv::format_double(score)});
  }
  w.save(path);
}

void save_timing(const std::map<std::string, double>& mean_ms, const std::filesystem::path& path) {
  csv::Writer w({"model", "mean_ms_per_image"});
  for (const auto& [model, ms] : mean_ms) w.add({model, csv::format_double(ms)});
  w.save(path);
}

}  // namespace uiqa
