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

// Procedural stand-ins for the unreleased image and rating data: simple
// underwater-like scenes with a fish-shaped target, and simulated raters
// whose latent opinion follows the distortion severity.

#pragma once

#include <cstdint>
#include <filesystem>

#include "uiqa/image.hpp"
#include "uiqa/manifest.hpp"
#include "uiqa/subjective.hpp"

namespace uiqa::synthetic {

struct SceneOptions {
  int width = 96;
  int height = 96;
};

struct Scene {
  ImageBuffer image;
  std::vector<PixelBox> targets;  // empty for a non-target scene
};

Scene make_scene(std::uint64_t seed, bool with_target, const SceneOptions& options = {});

// Writes out_dir/images/<id>.png, out_dir/refs.json and out_dir/boxes.json.
// Targets are named ref000.., non-targets bg000.. (each its own group).
DatasetManifest make_reference_set(const std::filesystem::path& out_dir, int n_targets,
                                   int n_nontargets, std::uint64_t seed,
                                   const SceneOptions& options = {});

// Latent opinion on the 1..5 scale before rater noise.
double latent_utility(const ManifestEntry& entry);

struct RaterOptions {
  int subjects = 21;
  double noise_sd = 0.45;
  double bias_sd = 0.2;
  int verification_size = 5;
};

// Every subject rates every manifest entry once, plus repeated
// presentations "<image_id>#repeat" of verification_size images.
RatingTable simulate_ratings(const DatasetManifest& manifest, const RaterOptions& options,
                             std::uint64_t seed);

}  // namespace uiqa::synthetic
