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

#include "uiqa/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "uiqa/error.hpp"
#include "uiqa/random.hpp"

namespace uiqa::synthetic {

namespace {

std::string numbered(const char* prefix, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03d", prefix, i);
  return buf;
}

// Severity on the 1..5 scale, indexed [kind - 1][level - 1].
constexpr std::array<std::array<double, 4>, 6> kSeverity = {{
    {0.3, 0.7, 1.1, 1.6},  // channel
    {0.4, 0.9, 1.5, 2.2},  // contrast
    {0.3, 0.6, 1.2, 1.8},  // illumination
    {0.6, 1.2, 1.9, 2.6},  // motion blur
    {1.3, 2.0, 0.2, 0.4},  // foreground x2, background x2
    {0.5, 1.1, 0.0, 0.0},  // ocean snow
}};

}  // namespace

Scene make_scene(std::uint64_t seed, bool with_target, const SceneOptions& options) {
  const int w = options.width;
  const int h = options.height;
  if (w < 16 || h < 16) throw Error("make_scene: scenes must be at least 16x16");
  Rng rng(seed);
  // Water: vertical blue-green gradient, brighter near the surface.
  const double hue_shift = rng.uniform(-0.08, 0.08);
  const double depth = rng.uniform(0.6, 1.0);
  std::vector<double> px(static_cast<std::size_t>(w) * h * 3);
  for (int y = 0; y < h; ++y) {
    const double v = 1.0 - 0.55 * y / (h - 1);
    for (int x = 0; x < w; ++x) {
      const double grain = rng.uniform(-0.03, 0.03);
      const std::size_t p = (static_cast<std::size_t>(y) * w + x) * 3;
      px[p + 0] = (0.10 + hue_shift) * v * depth + grain;
      px[p + 1] = (0.45 + hue_shift) * v * depth + grain;
      px[p + 2] = 0.62 * v * depth + grain;
    }
  }
  // Seabed rocks.
  const int rocks = 2 + static_cast<int>(rng.below(3));
  for (int r = 0; r < rocks; ++r) {
    const double cx = rng.uniform(0, w);
    const double cy = h - rng.uniform(0, h / 5.0);
    const double rad = rng.uniform(w / 14.0, w / 7.0);
    const double tone = rng.uniform(0.15, 0.3);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) * 2.0 <= rad * rad) {
          const std::size_t p = (static_cast<std::size_t>(y) * w + x) * 3;
          px[p] = tone * 0.9;
          px[p + 1] = tone;
          px[p + 2] = tone * 0.8;
        }
      }
    }
  }
  Scene scene{ImageBuffer::filled(1, 1, 3, 0), {}};
  if (with_target) {
    // Fish: orange ellipse body, tail triangle, dark stripes and an eye.
    const double len = rng.uniform(0.35, 0.5) * w;
    const double ht = len * rng.uniform(0.35, 0.45);
    const double cx = rng.uniform(len * 0.6, w - len * 0.6);
    const double cy = rng.uniform(ht, h - ht * 1.5);
    const bool facing_right = rng.uniform() < 0.5;
    const double dir = facing_right ? 1.0 : -1.0;
    int x0 = w, y0 = h, x1 = -1, y1 = -1;
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        const double u = (x + 0.5 - cx) / (len / 2);
        const double v = (y + 0.5 - cy) / (ht / 2);
        const bool body = u * u + v * v <= 1.0;
        const double tu = -dir * u;  // tail extends behind the body
        const bool tail = tu > 0.8 && tu < 1.35 && std::abs(v) < (tu - 0.8) * 1.4;
        if (!body && !tail) continue;
        const std::size_t p = (static_cast<std::size_t>(y) * w + x) * 3;
        const bool stripe = body && std::fmod(std::abs(u) * 4.0 + 10.0, 1.0) < 0.2;
        const double shade = 0.85 + 0.15 * (1.0 - std::abs(v));
        px[p] = (stripe ? 0.25 : 0.95) * shade;
        px[p + 1] = (stripe ? 0.12 : 0.55) * shade;
        px[p + 2] = (stripe ? 0.08 : 0.15) * shade;
        const double eu = u - dir * 0.6;
        if (eu * eu + (v + 0.2) * (v + 0.2) < 0.012) px[p] = px[p + 1] = px[p + 2] = 0.02;
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
    }
    if (x1 >= x0) scene.targets.push_back({x0, y0, x1 - x0 + 1, y1 - y0 + 1});
  }
  scene.image = from_unit(w, h, 3, px);
  return scene;
}

DatasetManifest make_reference_set(const std::filesystem::path& out_dir, int n_targets,
                                   int n_nontargets, std::uint64_t seed, const SceneOptions& options) {
  if (n_targets < 0 || n_nontargets < 0) throw Error("make_reference_set: counts must be >= 0");
  std::filesystem::create_directories(out_dir / "images");
  DatasetManifest manifest;
  BoxTable boxes;
  auto add = [&](const std::string& id, bool target) {
    const Scene scene = make_scene(splitmix64(seed ^ fnv1a64(id)), target, options);
    ManifestEntry e;
    e.image_id = id;
    e.file_path = "images/" + id + ".png";
    e.content_group_id = id;
    e.is_reference = true;
    e.is_target = target;
    save_image(scene.image, out_dir / e.file_path);
    if (target) boxes[id] = scene.targets;
    manifest.entries.push_back(std::move(e));
  };
  for (int i = 0; i < n_targets; ++i) add(numbered("ref", i), true);
  for (int i = 0; i < n_nontargets; ++i) add(numbered("bg", i), false);
  save_manifest(manifest, out_dir / "refs.json");
  save_boxes(boxes, out_dir / "boxes.json");
  return manifest;
}

double latent_utility(const ManifestEntry& entry) {
  if (!entry.is_target) return 1.3;
  // Per-content offset: some scenes are easier than others.
  const double content = (static_cast<double>(fnv1a64(entry.content_group_id) % 1000) / 1000.0 - 0.5) * 0.4;
  double u = 4.6 + content;
  if (entry.distortion) {
    const auto& d = *entry.distortion;
    const int k = static_cast<int>(d.kind) - 1;
    const int l = std::clamp(d.level, 1, 4) - 1;
    u -= kSeverity[k][l];
  }
  return std::clamp(u, 1.0, 5.0);
}

RatingTable simulate_ratings(const DatasetManifest& manifest, const RaterOptions& options,
                             std::uint64_t seed) {
  if (options.subjects < 1) throw Error("simulate_ratings: need at least one subject");
  if (manifest.entries.empty()) throw Error("simulate_ratings: empty manifest");
  Rng rng(seed);
  std::vector<std::size_t> verify;
  {
    std::vector<std::size_t> order(manifest.entries.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    const auto n = std::min<std::size_t>(static_cast<std::size_t>(std::max(options.verification_size, 0)),
                                         order.size());
    verify.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
    std::sort(verify.begin(), verify.end());
  }
  RatingTable table;
  auto draw = [&](double latent, double bias) {
    const double v = std::round(latent + bias + options.noise_sd * rng.normal());
    return static_cast<int>(std::clamp(v, 1.0, 5.0));
  };
  for (int s = 0; s < options.subjects; ++s) {
    const std::string subject = numbered("s", s);
    const double bias = options.bias_sd * rng.normal();
    for (const auto& e : manifest.entries) {
      table.ratings.push_back({subject, e.image_id, e.image_id, draw(latent_utility(e), bias)});
    }
    for (std::size_t i : verify) {
      const auto& e = manifest.entries[i];
      table.ratings.push_back({subject, e.image_id, e.image_id + "#repeat", draw(latent_utility(e), bias)});
    }
  }
  return table;
}

}  // namespace uiqa::synthetic
