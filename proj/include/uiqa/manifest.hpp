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

// Dataset inventory with reference/distortion lineage, serialized as
// {"version": 1, "entries": [...]}.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "uiqa/distortion.hpp"

namespace uiqa {

struct DistortionRecord {
  DistortionKind kind = DistortionKind::kChannel;
  int level = 1;
  std::uint64_t seed = 0;
  std::vector<double> params;    // resolved level parameters, for provenance
  std::vector<PixelBox> boxes;   // foreground boxes (region kind only)
  double feather = 0.0;
};

struct ManifestEntry {
  std::string image_id;
  std::string file_path;  // relative paths resolve against the manifest's directory
  std::string content_group_id;
  bool is_reference = true;
  bool is_target = true;
  std::optional<DistortionRecord> distortion;
  std::optional<std::string> reference_id;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  // Unique ids; references carry no distortion; every other entry names an
  // existing reference of the same content group.
  void validate() const;

  const ManifestEntry* find(const std::string& image_id) const;
};

// Image id -> foreground boxes, the Type5 sidecar.
using BoxTable = std::map<std::string, std::vector<PixelBox>>;

DatasetManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);
std::string manifest_to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const std::string& text, const std::string& source = "<memory>");

BoxTable load_boxes(const std::filesystem::path& path);
void save_boxes(const BoxTable& boxes, const std::filesystem::path& path);

std::filesystem::path resolve_image_path(const std::filesystem::path& manifest_dir,
                                         const ManifestEntry& entry);

struct GenerationConfig {
  DistortionLevels levels = DistortionLevels::defaults();
  // Levels generated per kind; a missing kind uses the full table, 0 disables it.
  std::map<DistortionKind, int> level_counts;
  BoxTable boxes;
  double feather = 0.0;

  int levels_for(DistortionKind kind) const;
};

// Copies every reference into out_dir/images, emits one distorted image per
// enabled (kind, level) for each target reference, writes
// out_dir/manifest.json and returns the enlarged manifest. Non-target
// references are copied but not distorted. Output bytes depend only on the
// inputs and master_seed.
DatasetManifest generate_distorted_set(const DatasetManifest& refs,
                                       const std::filesystem::path& refs_dir,
                                       const GenerationConfig& config, std::uint64_t master_seed,
                                       const std::filesystem::path& out_dir);

std::string distorted_image_id(const std::string& reference_id, DistortionKind kind, int level);

}  // namespace uiqa
