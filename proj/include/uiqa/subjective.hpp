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

// Subjective rating analysis: MOS labels, outlier coefficient, rater
// agreement and verification-set screening.
//
// A rating's presentation_id equals its image_id for the primary
// presentation. Any other presentation_id marks a repeated (verification)
// presentation of that image; repeats feed screening only, never the MOS.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace uiqa {

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 5;

struct Rating {
  std::string subject_id;
  std::string image_id;
  std::string presentation_id;
  int score = 0;
};

struct VerificationPair {
  std::string image_id;
  std::string presentation_id;
  auto operator<=>(const VerificationPair&) const = default;
};

struct RatingTable {
  std::vector<Rating> ratings;

  // Scores in 1..5; each (subject, presentation) rated at most once.
  void validate() const;

  std::vector<std::string> subjects() const;  // sorted, unique
  std::vector<VerificationPair> verification_pairs() const;  // sorted, unique
};

struct MosRecord {
  double mos = 0.0;       // 0..100
  double raw_mean = 0.0;  // 1..5
  double variance = 0.0;  // sample variance of raw scores, 0 when n_raters == 1
  int n_raters = 0;
  double iqr = 0.0;       // raw-scale 75th minus 25th percentile
};

using MosTable = std::map<std::string, MosRecord>;

// Affine map of the 1..5 rating scale onto 0..100.
constexpr double mos_from_raw(double raw_mean) { return (raw_mean - 1.0) / 4.0 * 100.0; }

MosTable compute_mos(const RatingTable& ratings);

// Fraction of images whose IQR exceeds 1 (strictly).
double outlier_coefficient(const MosTable& table);

struct PairAgreement {
  std::string subject_a;
  std::string subject_b;
  std::size_t n_common = 0;
  double ncc = 0.0;
  double eud = 0.0;
};

struct AgreementReport {
  double oc = 0.0;
  double mean_ncc = 0.0;
  double mean_eud = 0.0;
  std::vector<PairAgreement> pairs;
  std::map<std::string, int> fluctuations;  // empty without verification repeats
};

// NCC = <u,v> / (|u||v|) and EUD = |u - v| / (4 sqrt(n)) over the primary
// ratings two subjects share.
AgreementReport rater_agreement(const RatingTable& ratings);

struct ScreeningResult {
  std::string subject_id;
  int fluctuations = 0;
  int verification_size = 0;
  bool keep = true;
};

// A verification image fluctuates when |primary - repeat| > 2. A subject is
// discarded when fluctuations exceed max_fluctuations, or by default when
// they exceed half of the verification set.
std::vector<ScreeningResult> screen_subjects(const RatingTable& ratings,
                                             std::optional<int> max_fluctuations = std::nullopt);

RatingTable load_ratings(const std::filesystem::path& path);
void save_ratings(const RatingTable& ratings, const std::filesystem::path& path);
MosTable load_mos(const std::filesystem::path& path);
void save_mos(const MosTable& table, const std::filesystem::path& path);

}  // namespace uiqa
