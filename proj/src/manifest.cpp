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

#include "uiqa/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "uiqa/error.hpp"
#include "uiqa/parallel.hpp"

namespace uiqa {

using nlohmann::json;

namespace {

json box_to_json(const PixelBox& b) { return json::array({b.x, b.y, b.width, b.height}); }

PixelBox box_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error("box must be [x, y, w, h]");
  return PixelBox{j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

json distortion_to_json(const DistortionRecord& d) {
  json j = {{"kind", static_cast<int>(d.kind)},
            {"kind_name", std::string(kind_name(d.kind))},
            {"level", d.level},
            {"seed", d.seed},
            {"params", d.params}};
  if (d.kind == DistortionKind::kRegion) {
    json boxes = json::array();
    for (const auto& b : d.boxes) boxes.push_back(box_to_json(b));
    j["region"] = {{"boxes", boxes}, {"feather", d.feather}};
  }
  return j;
}

DistortionRecord distortion_from_json(const json& j) {
  DistortionRecord d;
  d.kind = kind_from_int(j.at("kind").get<int>());
  d.level = j.at("level").get<int>();
  d.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("params")) d.params = j.at("params").get<std::vector<double>>();
  if (j.contains("region")) {
    for (const auto& b : j.at("region").at("boxes")) d.boxes.push_back(box_from_json(b));
    d.feather = j.at("region").value("feather", 0.0);
  }
  return d;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(with_location(path.string(), 0, "cannot open file"));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(with_location(path.string(), 0, "cannot write file"));
  out << text;
  if (!out) throw Error(with_location(path.string(), 0, "write failed"));
}

}  // namespace

void DatasetManifest::validate() const {
  std::map<std::string, const ManifestEntry*> by_id;
  for (const auto& e : entries) {
    if (e.image_id.empty()) throw Error("manifest: empty image_id");
    if (!by_id.emplace(e.image_id, &e).second) {
      throw Error("manifest: duplicate image_id '" + e.image_id + "'");
    }
  }
  for (const auto& e : entries) {
    if (e.is_reference) {
      if (e.distortion) throw Error("manifest: reference '" + e.image_id + "' carries a distortion");
      continue;
    }
    if (!e.reference_id) throw Error("manifest: '" + e.image_id + "' has no reference_id");
    auto it = by_id.find(*e.reference_id);
    if (it == by_id.end() || !it->second->is_reference) {
      throw Error("manifest: '" + e.image_id + "' names unknown reference '" + *e.reference_id + "'");
    }
    if (it->second->content_group_id != e.content_group_id) {
      throw Error("manifest: '" + e.image_id + "' is in a different content group than its reference");
    }
  }
}

const ManifestEntry* DatasetManifest::find(const std::string& image_id) const {
  for (const auto& e : entries) {
    if (e.image_id == image_id) return &e;
  }
  return nullptr;
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  json entries = json::array();
  for (const auto& e : manifest.entries) {
    json j = {{"image_id", e.image_id},
              {"file_path", e.file_path},
              {"content_group_id", e.content_group_id},
              {"is_reference", e.is_reference},
              {"is_target", e.is_target},
              {"distortion", e.distortion ? distortion_to_json(*e.distortion) : json(nullptr)},
              {"reference_id", e.reference_id ? json(*e.reference_id) : json(nullptr)}};
    entries.push_back(std::move(j));
  }
  return json{{"version", 1}, {"entries", entries}}.dump(2) + "\n";
}

DatasetManifest manifest_from_json(const std::string& text, const std::string& source) {
  DatasetManifest m;
  try {
    const json root = json::parse(text);
    if (root.value("version", 0) != 1) throw Error("unsupported manifest version");
    for (const auto& j : root.at("entries")) {
      ManifestEntry e;
      e.image_id = j.at("image_id").get<std::string>();
      e.file_path = j.at("file_path").get<std::string>();
      const json& group = j.at("content_group_id");
      e.content_group_id = group.is_string() ? group.get<std::string>() : group.dump();
      e.is_reference = j.at("is_reference").get<bool>();
      e.is_target = j.value("is_target", true);
      if (j.contains("distortion") && !j.at("distortion").is_null()) {
        e.distortion = distortion_from_json(j.at("distortion"));
      }
      if (j.contains("reference_id") && !j.at("reference_id").is_null()) {
        e.reference_id = j.at("reference_id").get<std::string>();
      }
      m.entries.push_back(std::move(e));
    }
    m.validate();
  } catch (const json::exception& ex) {
    throw Error(with_location(source, 0, std::string("invalid manifest: ") + ex.what()));
  } catch (const Error& ex) {
    throw Error(with_location(source, 0, ex.what()));
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_text(path), path.string());
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  manifest.validate();
  write_text(path, manifest_to_json(manifest));
}

BoxTable load_boxes(const std::filesystem::path& path) {
  BoxTable table;
  try {
    const json root = json::parse(read_text(path));
    for (const auto& [id, list] : root.items()) {
      auto& boxes = table[id];
      for (const auto& b : list) boxes.push_back(box_from_json(b));
    }
  } catch (const json::exception& ex) {
    throw Error(with_location(path.string(), 0, std::string("invalid box sidecar: ") + ex.what()));
  } catch (const Error& ex) {
    throw Error(with_location(path.string(), 0, ex.what()));
  }
  return table;
}

void save_boxes(const BoxTable& boxes, const std::filesystem::path& path) {
  json root = json::object();
  for (const auto& [id, list] : boxes) {
    json arr = json::array();
    for (const auto& b : list) arr.push_back(box_to_json(b));
    root[id] = arr;
  }
  write_text(path, root.dump(2) + "\n");
}

std::filesystem::path resolve_image_path(const std::filesystem::path& manifest_dir,
                                         const ManifestEntry& entry) {
  std::filesystem::path p(entry.file_path);
  return p.is_absolute() ? p : manifest_dir / p;
}

int GenerationConfig::levels_for(DistortionKind kind) const {
  auto it = level_counts.find(kind);
  const int available = levels.level_count(kind);
  if (it == level_counts.end()) return available;
  if (it->second < 0 || it->second > available) {
    throw Error("level count " + std::to_string(it->second) + " for " + std::string(kind_name(kind)) +
                " exceeds the level table (" + std::to_string(available) + ")");
  }
  return it->second;
}

std::string distorted_image_id(const std::string& reference_id, DistortionKind kind, int level) {
  return reference_id + "_t" + std::to_string(static_cast<int>(kind)) + "_l" + std::to_string(level);
}

DatasetManifest generate_distorted_set(const DatasetManifest& refs,
                                       const std::filesystem::path& refs_dir,
                                       const GenerationConfig& config, std::uint64_t master_seed,
                                       const std::filesystem::path& out_dir) {
  refs.validate();
  for (const auto& e : refs.entries) {
    if (!e.is_reference) {
      throw Error("generate_distorted_set: '" + e.image_id + "' is not a reference entry");
    }
  }
  for (DistortionKind kind : kAllDistortionKinds) (void)config.levels_for(kind);
  if (config.levels_for(DistortionKind::kRegion) > 0) {
    for (const auto& e : refs.entries) {
      if (e.is_target && !config.boxes.contains(e.image_id)) {
        throw Error("generate_distorted_set: foreground/background distortion requested but no boxes "
                    "were given for '" + e.image_id + "'");
      }
    }
  }

  struct Job {
    const ManifestEntry* ref;
    ManifestEntry entry;
  };
  std::vector<Job> jobs;
  for (const auto& ref : refs.entries) {
    ManifestEntry copy = ref;
    copy.file_path = "images/" + ref.image_id + ".png";
    jobs.push_back({&ref, copy});
    if (!ref.is_target) continue;
    for (DistortionKind kind : kAllDistortionKinds) {
      for (int level = 1; level <= config.levels_for(kind); ++level) {
        ManifestEntry e;
        e.image_id = distorted_image_id(ref.image_id, kind, level);
        e.file_path = "images/" + e.image_id + ".png";
        e.content_group_id = ref.content_group_id;
        e.is_reference = false;
        e.is_target = ref.is_target;
        e.reference_id = ref.image_id;
        DistortionRecord d;
        d.kind = kind;
        d.level = level;
        d.seed = derive_seed(master_seed, ref.image_id, kind, level);
        d.params = config.levels.params(kind, level);
        if (kind == DistortionKind::kRegion) {
          d.boxes = config.boxes.at(ref.image_id);
          d.feather = config.feather;
        }
        e.distortion = d;
        jobs.push_back({&ref, std::move(e)});
      }
    }
  }

  DatasetManifest out;
  for (const auto& job : jobs) out.entries.push_back(job.entry);
  out.validate();

  std::filesystem::create_directories(out_dir / "images");
  parallel_for(jobs.size(), [&](std::size_t i) {
    const Job& job = jobs[i];
    const ImageBuffer source = load_image(resolve_image_path(refs_dir, *job.ref));
    const auto target = out_dir / job.entry.file_path;
    if (!job.entry.distortion) {
      save_image(source, target);
      return;
    }
    const DistortionRecord& d = *job.entry.distortion;
    DistortionSpec spec{d.kind, d.level, d.seed, std::nullopt};
    if (d.kind == DistortionKind::kRegion) {
      spec.region = region_mask_from_boxes(d.boxes, source.width(), source.height(), d.feather);
    }
    save_image(apply_distortion(source, spec, config.levels), target);
  });

  save_manifest(out, out_dir / "manifest.json");
  return out;
}

}  // namespace uiqa
