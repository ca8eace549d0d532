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

#include "uiqa/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "uiqa/error.hpp"
#include "uiqa/random.hpp"

namespace uiqa {

namespace {

struct UnitImage {
  int width;
  int height;
  std::vector<double> v;  // interleaved RGB in [0, 1]

  double& at(int x, int y, int c) { return v[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
  double at(int x, int y, int c) const {
    return v[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
};

UnitImage unit_of(const ImageBuffer& img) { return {img.width(), img.height(), to_unit(img)}; }

ImageBuffer quantize(const UnitImage& u) { return from_unit(u.width, u.height, 3, u.v); }

// Blur with clamp-to-edge borders.
UnitImage convolve(const UnitImage& in, const LineKernel& k) {
  UnitImage out{in.width, in.height, std::vector<double>(in.v.size(), 0.0)};
  const int side = 2 * k.radius + 1;
  for (int ky = 0; ky < side; ++ky) {
    for (int kx = 0; kx < side; ++kx) {
      const double w = k.weights[static_cast<std::size_t>(ky) * side + kx];
      if (w == 0.0) continue;
      const int dy = ky - k.radius;
      const int dx = kx - k.radius;
      for (int y = 0; y < in.height; ++y) {
        const int sy = std::clamp(y + dy, 0, in.height - 1);
        for (int x = 0; x < in.width; ++x) {
          const int sx = std::clamp(x + dx, 0, in.width - 1);
          for (int c = 0; c < 3; ++c) out.at(x, y, c) += w * in.at(sx, sy, c);
        }
      }
    }
  }
  return out;
}

// out = mean + factor * (in - mean), mean weighted by `weights` when given.
void scale_contrast(UnitImage& img, double factor, const std::vector<double>* weights) {
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    double total = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      const double w = weights ? (*weights)[p] : 1.0;
      sum += w * img.v[3 * p + c];
      total += w;
    }
    if (total <= 0.0) continue;
    const double mean = sum / total;
    for (std::size_t p = 0; p < n; ++p) {
      img.v[3 * p + c] = mean + factor * (img.v[3 * p + c] - mean);
    }
  }
}

double seeded_angle(std::uint64_t seed) { return Rng(seed).uniform() * std::numbers::pi; }

ImageBuffer apply_region(const ImageBuffer& img, const DistortionSpec& spec,
                         const DistortionLevels& levels) {
  const RegionMask& mask = *spec.region;
  const RegionLevel& lv = levels.region_levels[spec.level - 1];
  const std::size_t n = img.pixel_count();
  std::vector<double> select(n);
  for (std::size_t p = 0; p < n; ++p) {
    select[p] = lv.foreground ? mask.weights[p] : 1.0 - mask.weights[p];
  }

  const UnitImage src = unit_of(img);
  const double length = std::max(1.0, std::round(levels.region_blur_length * lv.strength));
  UnitImage degraded = convolve(src, motion_kernel(length, seeded_angle(spec.seed)));
  const double factor = std::max(0.0, 1.0 - lv.strength * (1.0 - levels.region_contrast));
  scale_contrast(degraded, factor, &select);

  std::vector<std::uint8_t> out(img.data().begin(), img.data().end());
  for (std::size_t p = 0; p < n; ++p) {
    const double w = select[p];
    if (w == 0.0) continue;
    for (int c = 0; c < 3; ++c) {
      out[3 * p + c] = quantize_unit(w * degraded.v[3 * p + c] + (1.0 - w) * src.v[3 * p + c]);
    }
  }
  return ImageBuffer(img.width(), img.height(), 3, std::move(out));
}

ImageBuffer apply_snow(const ImageBuffer& img, const DistortionSpec& spec,
                       const DistortionLevels& levels) {
  const double density = levels.snow_per_megapixel[spec.level - 1];
  const int w = img.width();
  const int h = img.height();
  const auto count = static_cast<long>(std::llround(density * w * h / 1e6));
  Rng rng(spec.seed);
  std::vector<bool> lit(img.pixel_count(), false);
  for (long i = 0; i < count; ++i) {
    const double cx = rng.uniform(0.0, w);
    const double cy = rng.uniform(0.0, h);
    const double r = rng.uniform(levels.snow_min_radius, levels.snow_max_radius);
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
    const int x1 = std::min(w - 1, static_cast<int>(std::ceil(cx + r)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
    const int y1 = std::min(h - 1, static_cast<int>(std::ceil(cy + r)));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const double dx = x + 0.5 - cx;
        const double dy = y + 0.5 - cy;
        if (dx * dx + dy * dy <= r * r) lit[static_cast<std::size_t>(y) * w + x] = true;
      }
    }
  }
  UnitImage u = unit_of(img);
  for (std::size_t p = 0; p < lit.size(); ++p) {
    if (!lit[p]) continue;
    for (int c = 0; c < 3; ++c) u.v[3 * p + c] = std::min(1.0, u.v[3 * p + c] + levels.snow_lift);
  }
  return quantize(u);
}

}  // namespace

std::string_view kind_name(DistortionKind kind) {
  switch (kind) {
    case DistortionKind::kChannel: return "channel";
    case DistortionKind::kContrast: return "contrast";
    case DistortionKind::kIllumination: return "illumination";
    case DistortionKind::kMotionBlur: return "motion_blur";
    case DistortionKind::kRegion: return "foreground_background";
    case DistortionKind::kOceanSnow: return "ocean_snow";
  }
  throw Error("unknown distortion kind");
}

DistortionKind kind_from_int(int value) {
  if (value < 1 || value > 6) throw Error("distortion kind must be 1..6, got " + std::to_string(value));
  return static_cast<DistortionKind>(value);
}

DistortionKind kind_from_name(std::string_view name) {
  for (DistortionKind k : kAllDistortionKinds) {
    if (name == kind_name(k) || name == std::to_string(static_cast<int>(k))) return k;
  }
  throw Error("unknown distortion kind '" + std::string(name) + "'");
}

RegionMask region_mask_from_boxes(std::span<const PixelBox> boxes, int width, int height,
                                  double feather) {
  if (width < 1 || height < 1) throw Error("region mask: dimensions must be >= 1");
  if (!(feather >= 0.0)) throw Error("region mask: feather must be >= 0");
  for (const PixelBox& b : boxes) {
    if (b.width < 1 || b.height < 1 || b.x < 0 || b.y < 0 || b.x + b.width > width ||
        b.y + b.height > height) {
      throw Error("region mask: box (" + std::to_string(b.x) + "," + std::to_string(b.y) + "," +
                  std::to_string(b.width) + "," + std::to_string(b.height) +
                  ") lies outside the " + std::to_string(width) + "x" + std::to_string(height) +
                  " image");
    }
  }
  RegionMask mask{width, height, std::vector<double>(static_cast<std::size_t>(width) * height, 0.0)};
  for (const PixelBox& b : boxes) {
    const int reach = static_cast<int>(std::floor(feather));
    const int x0 = std::max(0, b.x - reach);
    const int x1 = std::min(width - 1, b.x + b.width - 1 + reach);
    const int y0 = std::max(0, b.y - reach);
    const int y1 = std::min(height - 1, b.y + b.height - 1 + reach);
    for (int y = y0; y <= y1; ++y) {
      const int dy = std::max({b.y - y, 0, y - (b.y + b.height - 1)});
      for (int x = x0; x <= x1; ++x) {
        const int dx = std::max({b.x - x, 0, x - (b.x + b.width - 1)});
        const double d = std::hypot(dx, dy);
        double w = 0.0;
        if (d == 0.0) {
          w = 1.0;
        } else if (d <= feather) {
          w = 1.0 - d / (feather + 1.0);
        }
        double& slot = mask.weights[static_cast<std::size_t>(y) * width + x];
        slot = std::max(slot, w);
      }
    }
  }
  return mask;
}

const DistortionLevels& DistortionLevels::defaults() {
  static const DistortionLevels table = [] {
    DistortionLevels t;
    t.channel_gains = {{0.85, 0.95, 1.0}, {0.65, 0.9, 1.0}, {0.45, 0.85, 1.0}, {0.25, 0.8, 1.0}};
    t.contrast_factors = {0.8, 0.6, 0.4, 0.2};
    // Ordered by severity: gain 0.5 removes more signal than 1.7 once the
    // bright end clips.
    t.illumination_gains = {0.75, 1.35, 1.7, 0.5};
    t.blur_lengths = {5, 9, 13, 17};
    t.region_levels = {{true, 1.0}, {true, 1.6}, {false, 1.0}, {false, 1.6}};
    t.snow_per_megapixel = {150.0, 400.0};
    return t;
  }();
  return table;
}

int DistortionLevels::level_count(DistortionKind kind) const {
  switch (kind) {
    case DistortionKind::kChannel: return static_cast<int>(channel_gains.size());
    case DistortionKind::kContrast: return static_cast<int>(contrast_factors.size());
    case DistortionKind::kIllumination: return static_cast<int>(illumination_gains.size());
    case DistortionKind::kMotionBlur: return static_cast<int>(blur_lengths.size());
    case DistortionKind::kRegion: return static_cast<int>(region_levels.size());
    case DistortionKind::kOceanSnow: return static_cast<int>(snow_per_megapixel.size());
  }
  return 0;
}

std::vector<double> DistortionLevels::params(DistortionKind kind, int level) const {
  if (level < 1 || level > level_count(kind)) {
    throw Error("distortion level " + std::to_string(level) + " out of range for " +
                std::string(kind_name(kind)) + " (1.." + std::to_string(level_count(kind)) + ")");
  }
  const auto i = static_cast<std::size_t>(level - 1);
  switch (kind) {
    case DistortionKind::kChannel:
      return {channel_gains[i][0], channel_gains[i][1], channel_gains[i][2]};
    case DistortionKind::kContrast: return {contrast_factors[i]};
    case DistortionKind::kIllumination: return {illumination_gains[i]};
    case DistortionKind::kMotionBlur: return {static_cast<double>(blur_lengths[i])};
    case DistortionKind::kRegion:
      return {region_levels[i].foreground ? 1.0 : 0.0, region_levels[i].strength,
              static_cast<double>(region_blur_length), region_contrast};
    case DistortionKind::kOceanSnow:
      return {snow_per_megapixel[i], snow_min_radius, snow_max_radius, snow_lift};
  }
  return {};
}

LineKernel motion_kernel(double length, double angle) {
  if (!(length >= 1.0)) throw Error("motion kernel: length must be >= 1");
  const double half = (length - 1.0) / 2.0;
  LineKernel k;
  k.radius = static_cast<int>(std::ceil(half)) + 1;
  const int side = 2 * k.radius + 1;
  k.weights.assign(static_cast<std::size_t>(side) * side, 0.0);
  const int samples = static_cast<int>(std::round(length));
  const double cs = std::cos(angle);
  const double sn = std::sin(angle);
  for (int s = 0; s < samples; ++s) {
    const double t = samples == 1 ? 0.0 : -half + (2.0 * half) * s / (samples - 1);
    const double px = t * cs + k.radius;
    const double py = t * sn + k.radius;
    const int ix = static_cast<int>(std::floor(px));
    const int iy = static_cast<int>(std::floor(py));
    const double fx = px - ix;
    const double fy = py - iy;
    const double corner[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
    const int ox[4] = {0, 1, 0, 1};
    const int oy[4] = {0, 0, 1, 1};
    for (int q = 0; q < 4; ++q) {
      if (corner[q] == 0.0) continue;
      k.weights[static_cast<std::size_t>(iy + oy[q]) * side + (ix + ox[q])] += corner[q];
    }
  }
  double total = 0.0;
  for (double w : k.weights) total += w;
  for (double& w : k.weights) w /= total;
  return k;
}

std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view image_id,
                          DistortionKind kind, int level) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ fnv1a64(image_id));
  h = splitmix64(h ^ static_cast<std::uint64_t>(kind));
  return splitmix64(h ^ static_cast<std::uint64_t>(level));
}

ImageBuffer apply_distortion(const ImageBuffer& img, const DistortionSpec& spec,
                             const DistortionLevels& levels) {
  if (img.channels() != 3) throw Error("apply_distortion: expected a 3-channel image");
  const std::vector<double> p = levels.params(spec.kind, spec.level);  // validates the level
  if (spec.kind == DistortionKind::kRegion) {
    if (!spec.region) throw Error("apply_distortion: foreground/background distortion needs a region mask");
    if (spec.region->width != img.width() || spec.region->height != img.height() ||
        spec.region->weights.size() != img.pixel_count()) {
      throw Error("apply_distortion: region mask dimensions do not match the image");
    }
    for (double w : spec.region->weights) {
      if (!(w >= 0.0 && w <= 1.0)) throw Error("apply_distortion: region weights must lie in [0,1]");
    }
  } else if (spec.region) {
    throw Error("apply_distortion: a region mask is only valid for the foreground/background kind");
  }

  switch (spec.kind) {
    case DistortionKind::kChannel: {
      UnitImage u = unit_of(img);
      for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] *= p[i % 3];
      return quantize(u);
    }
    case DistortionKind::kContrast: {
      UnitImage u = unit_of(img);
      scale_contrast(u, p[0], nullptr);
      return quantize(u);
    }
    case DistortionKind::kIllumination: {
      UnitImage u = unit_of(img);
      for (double& v : u.v) v *= p[0];
      return quantize(u);
    }
    case DistortionKind::kMotionBlur:
      return quantize(convolve(unit_of(img), motion_kernel(p[0], seeded_angle(spec.seed))));
    case DistortionKind::kRegion: return apply_region(img, spec, levels);
    case DistortionKind::kOceanSnow: return apply_snow(img, spec, levels);
  }
  throw Error("apply_distortion: unknown kind");
}

}  // namespace uiqa
