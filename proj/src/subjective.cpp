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

#include "uiqa/subjective.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "uiqa/csv.hpp"
#include "uiqa/error.hpp"
#include "uiqa/stats.hpp"

namespace uiqa {

namespace {

bool is_primary(const Rating& r) { return r.presentation_id == r.image_id; }

// subject -> image -> primary score
std::map<std::string, std::map<std::string, int>> primary_scores(const RatingTable& ratings) {
  std::map<std::string, std::map<std::string, int>> out;
  for (const auto& r : ratings.ratings) {
    if (is_primary(r)) out[r.subject_id][r.image_id] = r.score;
  }
  return out;
}

}  // namespace

void RatingTable::validate() const {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : ratings) {
    if (r.score < kMinScore || r.score > kMaxScore) {
      throw Error("rating of '" + r.image_id + "' by '" + r.subject_id + "' is " +
                  std::to_string(r.score) + ", outside 1..5");
    }
    if (!seen.emplace(r.subject_id, r.presentation_id).second) {
      throw Error("subject '" + r.subject_id + "' rated presentation '" + r.presentation_id +
                  "' more than once");
    }
  }
}

std::vector<std::string> RatingTable::subjects() const {
  std::set<std::string> s;
  for (const auto& r : ratings) s.insert(r.subject_id);
  return {s.begin(), s.end()};
}

std::vector<VerificationPair> RatingTable::verification_pairs() const {
  std::set<VerificationPair> s;
  for (const auto& r : ratings) {
    if (!is_primary(r)) s.insert({r.image_id, r.presentation_id});
  }
  return {s.begin(), s.end()};
}

MosTable compute_mos(const RatingTable& ratings) {
  ratings.validate();
  std::map<std::string, std::vector<double>> by_image;
  for (const auto& r : ratings.ratings) {
    auto& v = by_image[r.image_id];
    if (is_primary(r)) v.push_back(r.score);
  }
  MosTable table;
  for (const auto& [image, scores] : by_image) {
    if (scores.empty()) throw Error("image '" + image + "' has no primary ratings");
    // Sorting first makes the sums independent of rater order.
    std::vector<double> sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    double sum = 0.0;
    for (double s : sorted) sum += s;
    const double mean = sum / n;
    double ss = 0.0;
    for (double s : sorted) ss += (s - mean) * (s - mean);
    MosRecord rec;
    rec.raw_mean = mean;
    rec.mos = mos_from_raw(mean);
    rec.variance = sorted.size() > 1 ? ss / (n - 1.0) : 0.0;
    rec.n_raters = static_cast<int>(sorted.size());
    rec.iqr = percentile_inclusive(sorted, 0.75) - percentile_inclusive(sorted, 0.25);
    table.emplace(image, rec);
  }
  return table;
}

double outlier_coefficient(const MosTable& table) {
  if (table.empty()) throw Error("outlier coefficient of an empty MOS table");
  std::size_t outliers = 0;
  for (const auto& [image, rec] : table) {
    if (rec.iqr > 1.0) ++outliers;
  }
  return static_cast<double>(outliers) / static_cast<double>(table.size());
}

AgreementReport rater_agreement(const RatingTable& ratings) {
  ratings.validate();
  const auto scores = primary_scores(ratings);
  if (scores.size() < 2) throw Error("rater agreement needs at least two subjects");

  AgreementReport report;
  report.oc = outlier_coefficient(compute_mos(ratings));
  for (auto a = scores.begin(); a != scores.end(); ++a) {
    for (auto b = std::next(a); b != scores.end(); ++b) {
      double dot = 0.0, na = 0.0, nb = 0.0, dist = 0.0;
      std::size_t n = 0;
      for (const auto& [image, sa] : a->second) {
        auto it = b->second.find(image);
        if (it == b->second.end()) continue;
        const double u = sa;
        const double v = it->second;
        dot += u * v;
        na += u * u;
        nb += v * v;
        dist += (u - v) * (u - v);
        ++n;
      }
      if (n < 2) {
        throw Error("subjects '" + a->first + "' and '" + b->first + "' share fewer than 2 images");
      }
      PairAgreement pa;
      pa.subject_a = a->first;
      pa.subject_b = b->first;
      pa.n_common = n;
      pa.ncc = dot / (std::sqrt(na) * std::sqrt(nb));
      pa.eud = std::sqrt(dist) / (4.0 * std::sqrt(static_cast<double>(n)));
      report.pairs.push_back(pa);
    }
  }
  for (const auto& p : report.pairs) {
    report.mean_ncc += p.ncc;
    report.mean_eud += p.eud;
  }
  report.mean_ncc /= static_cast<double>(report.pairs.size());
  report.mean_eud /= static_cast<double>(report.pairs.size());

  if (!ratings.verification_pairs().empty()) {
    for (const auto& s : screen_subjects(ratings)) report.fluctuations[s.subject_id] = s.fluctuations;
  }
  return report;
}

std::vector<ScreeningResult> screen_subjects(const RatingTable& ratings,
                                             std::optional<int> max_fluctuations) {
  ratings.validate();
  const auto pairs = ratings.verification_pairs();
  if (pairs.empty()) throw Error("screening needs verification repeats (presentation_id != image_id)");

  std::map<std::pair<std::string, std::string>, int> by_presentation;  // (subject, presentation)
  for (const auto& r : ratings.ratings) by_presentation[{r.subject_id, r.presentation_id}] = r.score;

  std::vector<ScreeningResult> out;
  for (const auto& subject : ratings.subjects()) {
    ScreeningResult res;
    res.subject_id = subject;
    res.verification_size = static_cast<int>(pairs.size());
    for (const auto& vp : pairs) {
      auto first = by_presentation.find({subject, vp.image_id});
      auto repeat = by_presentation.find({subject, vp.presentation_id});
      if (first == by_presentation.end() || repeat == by_presentation.end()) {
        throw Error("subject '" + subject + "' is missing the verification presentation '" +
                    vp.presentation_id + "' of image '" + vp.image_id + "'");
      }
      if (std::abs(first->second - repeat->second) > 2) ++res.fluctuations;
    }
    res.keep = max_fluctuations ? res.fluctuations <= *max_fluctuations
                                : 2 * res.fluctuations <= res.verification_size;
    out.push_back(res);
  }
  return out;
}

RatingTable load_ratings(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t cs = t.column("subject_id");
  const std::size_t ci = t.column("image_id");
  const std::size_t cp = t.column("presentation_id");
  const std::size_t cv = t.column("score");
  RatingTable table;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& row : t.rows) {
    Rating r{row.fields[cs], row.fields[ci], row.fields[cp], static_cast<int>(csv::to_int(t, row, cv))};
    if (r.score < kMinScore || r.score > kMaxScore) {
      throw Error(with_location(t.source, row.line, "score " + std::to_string(r.score) + " outside 1..5"));
    }
    if (!seen.emplace(r.subject_id, r.presentation_id).second) {
      throw Error(with_location(t.source, row.line, "duplicate rating of presentation '" +
                                                        r.presentation_id + "' by '" + r.subject_id + "'"));
    }
    table.ratings.push_back(std::move(r));
  }
  return table;
}

void save_ratings(const RatingTable& ratings, const std::filesystem::path& path) {
  csv::Writer w({"subject_id", "image_id", "presentation_id", "score"});
  for (const auto& r : ratings.ratings) {
    w.add({r.subject_id, r.image_id, r.presentation_id, std::to_string(r.score)});
  }
  w.save(path);
}

MosTable load_mos(const std::filesystem::path& path) {
  const csv::Table t = csv::read(path);
  const std::size_t ci = t.column("image_id");
  const std::size_t cm = t.column("mos");
  const std::size_t cr = t.column("raw_mean");
  const std::size_t cv = t.column("variance");
  const std::size_t cn = t.column("n_raters");
  const std::size_t cq = t.column("iqr");
  MosTable table;
  for (const auto& row : t.rows) {
    MosRecord rec;
    rec.mos = csv::to_double(t, row, cm);
    rec.raw_mean = csv::to_double(t, row, cr);
    rec.variance = csv::to_double(t, row, cv);
    rec.n_raters = static_cast<int>(csv::to_int(t, row, cn));
    rec.iqr = csv::to_double(t, row, cq);
    if (rec.n_raters < 1 || rec.variance < 0.0) {
      throw Error(with_location(t.source, row.line, "n_raters must be >= 1 and variance >= 0"));
    }
    if (!table.emplace(row.fields[ci], rec).second) {
      throw Error(with_location(t.source, row.line, "duplicate image_id '" + row.fields[ci] + "'"));
    }
  }
  return table;
}

void save_mos(const MosTable& table, const std::filesystem::path& path) {
  csv::Writer w({"image_id", "mos", "raw_mean", "variance", "n_raters", "iqr"});
  for (const auto& [image, rec] : table) {
    w.add({image, csv::format_double(rec.mos), csv::format_double(rec.raw_mean),
           csv::format_double(rec.variance), std::to_string(rec.n_raters), csv::format_double(rec.iqr)});
  }
  w.save(path);
}

}  // namespace uiqa
