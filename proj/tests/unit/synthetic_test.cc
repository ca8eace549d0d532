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

#include <cmath>

#include "gtest/gtest.h"
#include "test_support.hpp"
#include "uiqa/distortion.hpp"
#include "uiqa/error.hpp"
#include "uiqa/stats.hpp"

namespace uiqa::synthetic {

namespace {

using uiqa::testing::TempDir;

TEST(Scene, DeterministicAndSized) {
  const Scene a = make_scene(5, true, {64, 48});
  const Scene b = make_scene(5, true, {64, 48});
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.image.width(), 64);
  EXPECT_EQ(a.image.height(), 48);
  EXPECT_EQ(a.image.channels(), 3);
  EXPECT_NE(make_scene(6, true, {64, 48}).image, a.image);
  EXPECT_THROW(make_scene(1, true, {8, 64}), Error);
}

TEST(Scene, TargetBoxesInsideImage) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const Scene scene = make_scene(s, true);
    ASSERT_EQ(scene.targets.size(), 1);
    const PixelBox& b = scene.targets[0];
    EXPECT_GE(b.x, 0);
    EXPECT_GE(b.y, 0);
    EXPECT_GT(b.width, 4);
    EXPECT_GT(b.height, 4);
    EXPECT_LE(b.x + b.width, 96);
    EXPECT_LE(b.y + b.height, 96);
    EXPECT_TRUE(make_scene(s, false).targets.empty());
  }
}

TEST(ReferenceSet, WritesImagesAndSidecar) {
  TempDir dir;
  const DatasetManifest m = make_reference_set(dir.path(), 3, 2, 11, {32, 32});
  ASSERT_EQ(m.entries.size(), 5);
  m.validate();
  int targets = 0;
  for (const auto& e : m.entries) {
    EXPECT_TRUE(e.is_reference);
    EXPECT_EQ(e.content_group_id, e.image_id);
    EXPECT_TRUE(std::filesystem::exists(dir.path() / e.file_path));
    targets += e.is_target;
  }
  EXPECT_EQ(targets, 3);
  const BoxTable boxes = load_boxes(dir / "boxes.json");
  EXPECT_EQ(boxes.size(), 3);
  EXPECT_TRUE(boxes.contains("ref000"));
  EXPECT_FALSE(boxes.contains("bg000"));
  const DatasetManifest back = load_manifest(dir / "refs.json");
  EXPECT_EQ(back.entries.size(), 5);
  EXPECT_THROW(make_reference_set(dir.path(), -1, 0, 1), Error);
}

TEST(Ratings, ShapeAndDeterminism) {
  TempDir dir;
  const DatasetManifest m = make_reference_set(dir.path(), 4, 1, 3, {32, 32});
  const RatingTable a = simulate_ratings(m, {7, 0.45, 0.2, 2}, 9);
  a.validate();
  EXPECT_EQ(a.ratings.size(), 7 * (5 + 2));
  EXPECT_EQ(a.subjects().size(), 7);
  EXPECT_EQ(a.verification_pairs().size(), 2);
  const RatingTable b = simulate_ratings(m, {7, 0.45, 0.2, 2}, 9);
  ASSERT_EQ(a.ratings.size(), b.ratings.size());
  for (std::size_t i = 0; i < a.ratings.size(); ++i) EXPECT_EQ(a.ratings[i].score, b.ratings[i].score);
  EXPECT_THROW(simulate_ratings(m, {0, 0.45, 0.2, 2}, 9), Error);
  EXPECT_THROW(simulate_ratings(DatasetManifest{}, {}, 9), Error);
}

TEST(Ratings, MosTracksLatentUtility) {
  TempDir dir;
  DatasetManifest m = make_reference_set(dir.path(), 10, 3, 4, {32, 32});
  const std::size_t n_refs = m.entries.size();
  for (std::size_t i = 0; i < n_refs; ++i) {
    if (!m.entries[i].is_target) continue;
    for (int level = 1; level <= 4; ++level) {
      ManifestEntry d = m.entries[i];
      d.image_id += "_blur" + std::to_string(level);
      d.is_reference = false;
      d.reference_id = m.entries[i].image_id;
      d.distortion = DistortionRecord{DistortionKind::kMotionBlur, level};
      m.entries.push_back(d);
    }
  }
  const MosTable mos = compute_mos(simulate_ratings(m, {25, 0.45, 0.2, 5}, 2));
  std::vector<double> latent, observed;
  for (const auto& e : m.entries) {
    latent.push_back(latent_utility(e));
    observed.push_back(mos.at(e.image_id).mos);
    if (!e.is_target) EXPECT_LT(mos.at(e.image_id).mos, 40.0);
  }
  EXPECT_GT(spearman(latent, observed), 0.9);
}

TEST(Latent, SeverityOrdering) {
  ManifestEntry e;
  e.image_id = e.content_group_id = "ref000";
  double prev = latent_utility(e);
  for (int level = 1; level <= 4; ++level) {
    e.distortion = DistortionRecord{DistortionKind::kContrast, level};
    const double u = latent_utility(e);
    EXPECT_LT(u, prev);
    EXPECT_GE(u, 1.0);
    prev = u;
  }
  e.is_target = false;
  EXPECT_LT(latent_utility(e), 2.0);
}

}  // namespace

}  // namespace uiqa::synthetic
