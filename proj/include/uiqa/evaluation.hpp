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

// Evaluation protocol: significant-pair construction, C0, the pairwise
// significance matrix, content-disjoint splits, the non-target report and
// the per-fold correlation report.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "uiqa/manifest.hpp"
#include "uiqa/metrics.hpp"
#include "uiqa/subjective.hpp"

namespace uiqa {

// |mos_a - mos_b| / sqrt(var_a / n_a + var_b / n_b); +inf when the standard
// error vanishes and the means differ, 0 when both vanish.
double pair_z(double mos_a, double var_a, int n_a, double mos_b, double var_b, int n_b);

struct SignificantPair {
  std::string first;   // first < second lexicographically
  std::string second;
  bool first_better = false;
  double z = 0.0;
  double p_value = 0.0;  // Phi(z)
};

struct SignificantPairSet {
  std::vector<SignificantPair> pairs;
};

inline constexpr double kSignificanceLevel = 0.95;

// All unordered pairs of `images` with Phi(z) > 0.95. z is computed on the
// raw rating scale (raw_mean with the raw-score variance).
SignificantPairSet significant_pairs(const MosTable& mos, std::span<const std::string> images);

enum class C0Mode {
  kSign,           // correct iff the score difference points at the better image
  kThreshold  // correct iff the min-max normalized difference exceeds theta
};

struct C0Options {
  C0Mode mode = C0Mode::kSign;
  double threshold = 0.95;
};

// Per-pair correctness; a zero (or undefined) difference counts as wrong.
std::vector<bool> c0_outcomes(const ScoreTable& scores, const SignificantPairSet& pairs,
                              const C0Options& options = {});
double c0(const ScoreTable& scores, const SignificantPairSet& pairs, const C0Options& options = {});

struct ModelOutcomes {
  std::string model;
  std::vector<bool> correct;  // aligned to one shared pair list
};

// cells[i][j]: +1 when model i is significantly better than model j, -1
// when worse, 0 when similar (paired two-proportion z-test, two-sided).
struct SignificanceMatrix {
  std::vector<std::string> models;
  std::vector<std::vector<int>> cells;
};
SignificanceMatrix significance_matrix(std::span<const ModelOutcomes> outcomes, double alpha = 0.05);

enum class SplitScheme { kHoldout, kKFold };

struct SplitOptions {
  SplitScheme scheme = SplitScheme::kKFold;
  double train_ratio = 0.8;
  int folds = 10;
  std::uint64_t seed = 0;
};

struct Fold {
  std::vector<std::string> train;
  std::vector<std::string> test;
};

struct SplitPlan {
  SplitScheme scheme = SplitScheme::kKFold;
  std::uint64_t seed = 0;
  std::vector<Fold> folds;
  std::map<std::string, std::string> content_groups;  // image id -> group
};

// Partitions content groups, never images: holdout trains on
// floor(ratio * G) shuffled groups, k-fold deals shuffled groups round-robin.
SplitPlan make_splits(const DatasetManifest& manifest, const SplitOptions& options);

std::string splits_to_json(const SplitPlan& plan);
SplitPlan splits_from_json(const std::string& text, const std::string& source = "<memory>");
SplitPlan load_splits(const std::filesystem::path& path);
void save_splits(const SplitPlan& plan, const std::filesystem::path& path);

struct NontargetReport {
  double threshold = 40.0;
  std::size_t n_nontarget = 0;
  double fraction_below = 0.0;
  std::vector<std::pair<std::string, double>> below;       // low-utility verdicts
  std::vector<std::pair<std::string, double>> violators;   // scored at or above threshold
};

NontargetReport nontarget_report(const ScoreTable& scores, const DatasetManifest& manifest,
                                 double threshold = 40.0);

struct FoldMetrics {
  std::string fold;  // index as text, or "mean"
  std::size_t n_images = 0;
  std::size_t n_pairs = 0;
  std::optional<double> plcc_raw;
  std::optional<double> plcc_mapped;
  std::optional<double> srcc;
  std::optional<double> krcc;
  std::optional<double> c0;
  std::optional<std::array<double, 4>> logistic;
  bool logistic_converged = true;
};

struct ModelReport {
  std::string model;
  bool higher_is_better = true;
  std::vector<FoldMetrics> folds;
  FoldMetrics mean;
};

struct EvalReport {
  std::vector<ModelReport> models;
  SignificanceMatrix significance;  // pooled C0 outcomes over all folds
  std::vector<std::string> warnings;
};

// Up to per_type images of each distortion kind, references being one more
// stratum; deterministic given seed.
std::set<std::string> c0_subset(const DatasetManifest& manifest, int per_type, std::uint64_t seed);

struct EvalOptions {
  C0Options c0;
  std::optional<std::set<std::string>> c0_images;  // C0 pairs only among these; all test images when unset
};

// Throws when a score table or the MOS table misses a test image.
EvalReport evaluate(std::span<const ScoreTable> scores, const MosTable& mos, const SplitPlan& plan,
                    const EvalOptions& options = {});

std::string report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);  // model,fold,plcc_raw,plcc_mapped,srcc,krcc,c0
std::string significance_to_csv(const SignificanceMatrix& matrix);

}  // namespace uiqa
