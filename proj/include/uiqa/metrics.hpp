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

// Classical comparison metrics (PSNR, SSIM, UCIQE, UIQM) and batch scoring.

#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "uiqa/image.hpp"
#include "uiqa/manifest.hpp"

namespace uiqa {

// 10 log10(255^2 / MSE) over all channels; +infinity for identical images.
double psnr(const ImageBuffer& ref, const ImageBuffer& test);

// Mean SSIM over the valid (unpadded) region of the luma planes, 11x11
// Gaussian window with sigma 1.5.
double ssim(const ImageBuffer& ref, const ImageBuffer& test);

struct UciqeTerms {
  double chroma_std = 0.0;
  double luminance_contrast = 0.0;
  double saturation_mean = 0.0;
  double value = 0.0;
};
UciqeTerms uciqe_terms(const ImageBuffer& img);
inline double uciqe(const ImageBuffer& img) { return uciqe_terms(img).value; }

struct UiqmTerms {
  double uicm = 0.0;
  double uism = 0.0;
  double uiconm = 0.0;
  double value = 0.0;
};
UiqmTerms uiqm_terms(const ImageBuffer& img);
inline double uiqm(const ImageBuffer& img) { return uiqm_terms(img).value; }

// Per-model objective scores keyed by image id.
struct ScoreTable {
  std::string model_name;
  std::map<std::string, double> scores;
  bool higher_is_better = true;
};

struct BatchScores {
  std::vector<ScoreTable> tables;                    // one per metric, in request order
  std::map<std::string, double> mean_ms_per_image;   // wall clock, metric computation only
};

inline constexpr std::array<std::string_view, 4> kMetricNames = {"psnr", "ssim", "uciqe", "uiqm"};
bool is_full_reference(std::string_view metric);

// Scores every non-reference entry (and reference entries too when
// include_references is set; full-reference metrics then compare a
// reference with itself).
BatchScores score_batch(const DatasetManifest& manifest, const std::filesystem::path& manifest_dir,
                        std::span<const std::string> metrics, bool include_references = false);

// ScoreTable CSV: model,image_id,score. One file may hold several models.
std::vector<ScoreTable> load_scores(const std::filesystem::path& path);
void save_scores(std::span<const ScoreTable> tables, const std::filesystem::path& path);
void save_timing(const std::map<std::string, double>& mean_ms, const std::filesystem::path& path);

}  // namespace uiqa
