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

// The six synthetic underwater distortion types and their level tables.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uiqa/image.hpp"

namespace uiqa {

enum class DistortionKind : int {
  kChannel = 1,       // wavelength-dependent color attenuation
  kContrast = 2,      // contrast scaling toward the channel mean
  kIllumination = 3,  // global brightness gain
  kMotionBlur = 4,    // seeded-angle line blur
  kRegion = 5,        // blur + contrast loss restricted to fg or bg
  kOceanSnow = 6,     // bright particulate speckle
};

inline constexpr std::array<DistortionKind, 6> kAllDistortionKinds = {
    DistortionKind::kChannel,   DistortionKind::kContrast, DistortionKind::kIllumination,
    DistortionKind::kMotionBlur, DistortionKind::kRegion,  DistortionKind::kOceanSnow};

std::string_view kind_name(DistortionKind kind);
DistortionKind kind_from_int(int value);
DistortionKind kind_from_name(std::string_view name);  // accepts "4" or "motion_blur"

// Axis-aligned pixel rectangle: columns [x, x + width), rows [y, y + height).
struct PixelBox {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
  bool operator==(const PixelBox&) const = default;
};

// Per-pixel foreground weight in [0, 1].
struct RegionMask {
  int width = 0;
  int height = 0;
  std::vector<double> weights;
};

// Weight 1 on the box union, linear ramp 1 - d / (feather + 1) for pixels at
// Euclidean pixel distance 0 < d <= feather, 0 beyond.
RegionMask region_mask_from_boxes(std::span<const PixelBox> boxes, int width, int height,
                                  double feather);

struct DistortionSpec {
  DistortionKind kind = DistortionKind::kChannel;
  int level = 1;
  std::uint64_t seed = 0;
  std::optional<RegionMask> region;  // required iff kind == kRegion
};

struct RegionLevel {
  bool foreground = true;
  double strength = 1.0;
};

// Parameter tables indexed by level - 1.
struct DistortionLevels {
  std::vector<std::array<double, 3>> channel_gains;
  std::vector<double> contrast_factors;
  std::vector<double> illumination_gains;
  std::vector<int> blur_lengths;
  std::vector<RegionLevel> region_levels;
  int region_blur_length = 9;
  double region_contrast = 0.5;
  std::vector<double> snow_per_megapixel;
  double snow_min_radius = 1.0;
  double snow_max_radius = 3.0;
  double snow_lift = 0.4;

  static const DistortionLevels& defaults();

  int level_count(DistortionKind kind) const;

  // Resolved numeric parameters of one level, recorded in manifests.
  std::vector<double> params(DistortionKind kind, int level) const;
};

// Deterministic in (img, spec, levels). Throws on a gray input, a level
// outside the table, or a region spec without a matching mask.
ImageBuffer apply_distortion(const ImageBuffer& img, const DistortionSpec& spec,
                             const DistortionLevels& levels = DistortionLevels::defaults());

// Normalized line kernel of the given length and angle (radians), splatted
// bilinearly onto a square grid of side 2 * radius + 1.
struct LineKernel {
  int radius = 0;
  std::vector<double> weights;
};
LineKernel motion_kernel(double length, double angle);

// Per-entry seed: splitmix64 chain over (master, fnv1a64(image_id), kind, level).
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view image_id,
                          DistortionKind kind, int level);

}  // namespace uiqa
