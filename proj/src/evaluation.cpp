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

#include "uiqa/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "uiqa/csv.hpp"
#include "uiqa/error.hpp"
#include "uiqa/random.hpp"
#include "uiqa/stats.hpp"

namespace uiqa {

using nlohmann::json;

namespace {

constexpr double kTwoSidedCritical05 = 1.959963984540054;

double z_critical(double alpha) {
  if (alpha == 0.05) return kTwoSidedCritical05;
  // Bisection on Phi for other levels.
  double lo = 0.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (1.0 - normal_cdf(mid) > alpha / 2 ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

// Score oriented so that larger always means better.
double oriented(const ScoreTable& t, const std::string& image) {
  auto it = t.scores.find(image);
  if (it == t.scores.end()) {
    throw Error("model '" + t.model_name + "' has no score for '" + image + "'");
  }
  return t.higher_is_better ? it->second : -it->second;
}

// Replaces infinite sentinels by finite stand-ins beyond the finite range so
// that ordering is kept for product-moment statistics.
std::optional<std::vector<double>> finite_surrogate(std::vector<double> v) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double x : v) {
    if (std::isfinite(x)) {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
  if (!std::isfinite(lo)) return std::nullopt;
  const double pad = std::max(hi - lo, 1.0);
  for (double& x : v) {
    if (x == std::numeric_limits<double>::infinity()) x = hi + pad;
    if (x == -std::numeric_limits<double>::infinity()) x = lo - pad;
  }
  return v;
}

std::optional<double> mean_of(const std::vector<FoldMetrics>& folds, std::optional<double> FoldMetrics::*field) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& f : folds) {
    if (f.*field) {
      sum += *(f.*field);
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string opt_csv(const std::optional<double>& v) { return v ? csv::format_double(*v) : ""; }

std::string scheme_name(SplitScheme s) { return s == SplitScheme::kHoldout ? "holdout" : "kfold"; }

}  // namespace

double pair_z(double mos_a, double var_a, int n_a, double mos_b, double var_b, int n_b) {
  if (n_a < 1 || n_b < 1 || var_a < 0.0 || var_b < 0.0) {
    throw Error("pair_z: rater counts must be >= 1 and variances >= 0");
  }
  const double diff = std::abs(mos_a - mos_b);
  const double se = std::sqrt(var_a / n_a + var_b / n_b);
  if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return diff / se;
}

SignificantPairSet significant_pairs(const MosTable& mos, std::span<const std::string> images) {
  std::vector<std::string> ids(images.begin(), images.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<const MosRecord*> recs;
  for (const auto& id : ids) {
    auto it = mos.find(id);
    if (it == mos.end()) throw Error("significant_pairs: no MOS/variance/N for '" + id + "'");
    recs.push_back(&it->second);
  }
  SignificantPairSet out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      const MosRecord& a = *recs[i];
      const MosRecord& b = *recs[j];
      const double z = pair_z(a.raw_mean, a.variance, a.n_raters, b.raw_mean, b.variance, b.n_raters);
      const double p = normal_cdf(z);
      if (p > kSignificanceLevel) {
        out.pairs.push_back({ids[i], ids[j], a.raw_mean > b.raw_mean, z, p});
      }
    }
  }
  return out;
}

std::vector<bool> c0_outcomes(const ScoreTable& scores, const SignificantPairSet& pairs,
                              const C0Options& options) {
  std::vector<bool> out;
  out.reserve(pairs.pairs.size());
  if (options.mode == C0Mode::kSign) {
    for (const auto& p : pairs.pairs) {
      const double a = oriented(scores, p.first);
      const double b = oriented(scores, p.second);
      const double delta = p.first_better ? a - b : b - a;
      out.push_back(delta > 0.0);
    }
    return out;
  }
  // Min-max normalization over the finite scores of the images in the set.
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : pairs.pairs) {
    for (const auto* id : {&p.first, &p.second}) {
      const double v = oriented(scores, *id);
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  auto norm = [&](double v) {
    if (v == std::numeric_limits<double>::infinity()) return 1.0;
    if (v == -std::numeric_limits<double>::infinity()) return 0.0;
    return hi > lo ? (v - lo) / (hi - lo) : 0.0;
  };
  for (const auto& p : pairs.pairs) {
    const double a = norm(oriented(scores, p.first));
    const double b = norm(oriented(scores, p.second));
    const double delta = p.first_better ? a - b : b - a;
    out.push_back(delta > options.threshold);
  }
  return out;
}

double c0(const ScoreTable& scores, const SignificantPairSet& pairs, const C0Options& options) {
  if (pairs.pairs.empty()) throw Error("c0: empty significant-pair set");
  const auto outcomes = c0_outcomes(scores, pairs, options);
  const auto correct = std::count(outcomes.begin(), outcomes.end(), true);
  return static_cast<double>(correct) / static_cast<double>(outcomes.size());
}

SignificanceMatrix significance_matrix(std::span<const ModelOutcomes> outcomes, double alpha) {
  SignificanceMatrix m;
  const std::size_t k = outcomes.size();
  for (const auto& o : outcomes) {
    if (o.correct.size() != outcomes.front().correct.size()) {
      throw Error("significance_matrix: models were evaluated on different pair sets");
    }
    m.models.push_back(o.model);
  }
  const double crit = z_critical(alpha);
  m.cells.assign(k, std::vector<int>(k, 0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      // Discordant counts of the paired outcomes.
      long only_i = 0, only_j = 0;
      for (std::size_t p = 0; p < outcomes[i].correct.size(); ++p) {
        const bool a = outcomes[i].correct[p];
        const bool b = outcomes[j].correct[p];
        if (a && !b) ++only_i;
        if (b && !a) ++only_j;
      }
      if (only_i + only_j == 0) continue;
      const double z = static_cast<double>(only_i - only_j) / std::sqrt(static_cast<double>(only_i + only_j));
      const int verdict = z > crit ? 1 : (z < -crit ? -1 : 0);
      m.cells[i][j] = verdict;
      m.cells[j][i] = -verdict;
    }
  }
  return m;
}

SplitPlan make_splits(const DatasetManifest& manifest, const SplitOptions& options) {
  std::map<std::string, std::vector<std::string>> members;
  SplitPlan plan;
  plan.scheme = options.scheme;
  plan.seed = options.seed;
  for (const auto& e : manifest.entries) {
    if (e.content_group_id.empty()) throw Error("make_splits: '" + e.image_id + "' has no content group");
    members[e.content_group_id].push_back(e.image_id);
    plan.content_groups[e.image_id] = e.content_group_id;
  }
  std::vector<std::string> groups;
  for (const auto& [g, ids] : members) groups.push_back(g);
  Rng rng(options.seed);
  for (std::size_t i = groups.size(); i > 1; --i) {
    std::swap(groups[i - 1], groups[rng.below(i)]);
  }

  auto gather = [&](const std::set<std::string>& chosen, bool inside) {
    std::vector<std::string> ids;
    for (const auto& e : manifest.entries) {
      if (chosen.contains(e.content_group_id) == inside) ids.push_back(e.image_id);
    }
    return ids;
  };

  const std::size_t g = groups.size();
  if (options.scheme == SplitScheme::kHoldout) {
    if (!(options.train_ratio > 0.0 && options.train_ratio < 1.0)) {
      throw Error("make_splits: holdout ratio must lie in (0, 1)");
    }
    const auto n_train = static_cast<std::size_t>(std::floor(options.train_ratio * g + 1e-9));
    if (n_train < 1 || n_train >= g) {
      throw Error("make_splits: " + std::to_string(g) + " content groups cannot be split " +
                  "into non-empty train and test sides");
    }
    const std::set<std::string> train(groups.begin(), groups.begin() + static_cast<std::ptrdiff_t>(n_train));
    plan.folds.push_back({gather(train, true), gather(train, false)});
  } else {
    if (options.folds < 2) throw Error("make_splits: k-fold needs at least 2 folds");
    const auto k = static_cast<std::size_t>(options.folds);
    if (g < k) {
      throw Error("make_splits: " + std::to_string(g) + " content groups are fewer than " +
                  std::to_string(k) + " folds");
    }
    for (std::size_t f = 0; f < k; ++f) {
      std::set<std::string> test;
      for (std::size_t i = f; i < g; i += k) test.insert(groups[i]);
      plan.folds.push_back({gather(test, false), gather(test, true)});
    }
  }
  return plan;
}

std::string splits_to_json(const SplitPlan& plan) {
  json folds = json::array();
  for (const auto& f : plan.folds) folds.push_back({{"train", f.train}, {"test", f.test}});
  return json{{"version", 1},
              {"scheme", scheme_name(plan.scheme)},
              {"seed", plan.seed},
              {"folds", folds},
              {"content_groups", plan.content_groups}}
             .dump(2) +
         "\n";
}

SplitPlan splits_from_json(const std::string& text, const std::string& source) {
  SplitPlan plan;
  try {
    const json root = json::parse(text);
    plan.scheme = root.value("scheme", "kfold") == "holdout" ? SplitScheme::kHoldout : SplitScheme::kKFold;
    plan.seed = root.value("seed", std::uint64_t{0});
    for (const auto& f : root.at("folds")) {
      plan.folds.push_back({f.at("train").get<std::vector<std::string>>(),
                            f.at("test").get<std::vector<std::string>>()});
    }
    if (root.contains("content_groups")) {
      plan.content_groups = root.at("content_groups").get<std::map<std::string, std::string>>();
    }
  } catch (const json::exception& ex) {
    throw Error(with_location(source, 0, std::string("invalid split plan: ") + ex.what()));
  }
  if (plan.folds.empty()) throw Error(with_location(source, 0, "split plan has no folds"));
  return plan;
}

SplitPlan load_splits(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(with_location(path.string(), 0, "cannot open file"));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return splits_from_json(buffer.str(), path.string());
}

void save_splits(const SplitPlan& plan, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(with_location(path.string(), 0, "cannot write file"));
  out << splits_to_json(plan);
}

NontargetReport nontarget_report(const ScoreTable& scores, const DatasetManifest& manifest,
                                 double threshold) {
  NontargetReport r;
  r.threshold = threshold;
  for (const auto& e : manifest.entries) {
    if (e.is_target) continue;
    auto it = scores.scores.find(e.image_id);
    if (it == scores.scores.end()) {
      throw Error("nontarget_report: model '" + scores.model_name + "' has no score for non-target '" +
                  e.image_id + "'");
    }
    ++r.n_nontarget;
    (it->second < threshold ? r.below : r.violators).emplace_back(e.image_id, it->second);
  }
  if (r.n_nontarget == 0) throw Error("nontarget_report: manifest has no non-target entries");
  r.fraction_below = static_cast<double>(r.below.size()) / static_cast<double>(r.n_nontarget);
  return r;
}

std::set<std::string> c0_subset(const DatasetManifest& manifest, int per_type, std::uint64_t seed) {
  if (per_type < 1) throw Error("c0_subset: per-type count must be >= 1");
  std::map<int, std::vector<std::string>> strata;  // 0 holds references
  for (const auto& e : manifest.entries) {
    strata[e.distortion ? static_cast<int>(e.distortion->kind) : 0].push_back(e.image_id);
  }
  Rng rng(seed);
  std::set<std::string> out;
  for (auto& [kind, ids] : strata) {
    std::sort(ids.begin(), ids.end());
    for (std::size_t i = ids.size(); i > 1; --i) std::swap(ids[i - 1], ids[rng.below(i)]);
    const std::size_t n = std::min(ids.size(), static_cast<std::size_t>(per_type));
    out.insert(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n));
  }
  return out;
}

EvalReport evaluate(std::span<const ScoreTable> scores, const MosTable& mos, const SplitPlan& plan,
                    const EvalOptions& options) {
  if (scores.empty()) throw Error("evaluate: no score tables");
  if (plan.folds.empty()) throw Error("evaluate: split plan has no folds");
  EvalReport report;
  std::vector<ModelOutcomes> pooled;
  for (const auto& t : scores) {
    report.models.push_back({t.model_name, t.higher_is_better, {}, {}});
    pooled.push_back({t.model_name, {}});
  }

  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const auto& test = plan.folds[f].test;
    if (test.empty()) throw Error("evaluate: fold " + std::to_string(f) + " has no test images");
    std::vector<double> truth;
    for (const auto& id : test) {
      auto it = mos.find(id);
      if (it == mos.end()) throw Error("evaluate: MOS table has no entry for test image '" + id + "'");
      truth.push_back(it->second.mos);
    }
    for (const auto& t : scores) {
      for (const auto& id : test) {
        if (!t.scores.contains(id)) {
          throw Error("evaluate: model '" + t.model_name + "' has no score for test image '" + id +
                      "' (fold " + std::to_string(f) + ")");
        }
      }
    }
    std::vector<std::string> c0_test;
    for (const auto& id : test) {
      if (!options.c0_images || options.c0_images->contains(id)) c0_test.push_back(id);
    }
    const SignificantPairSet pairs = significant_pairs(mos, c0_test);

    for (std::size_t m = 0; m < scores.size(); ++m) {
      const ScoreTable& t = scores[m];
      FoldMetrics fm;
      fm.fold = std::to_string(f);
      fm.n_images = test.size();
      fm.n_pairs = pairs.pairs.size();
      std::vector<double> pred;
      for (const auto& id : test) pred.push_back(t.scores.at(id));
      const std::string where = "model '" + t.model_name + "' fold " + std::to_string(f) + ": ";

      try {
        fm.srcc = spearman(pred, truth);
        fm.krcc = kendall(pred, truth);
      } catch (const Error& ex) {
        report.warnings.push_back(where + ex.what());
      }
      if (auto finite = finite_surrogate(pred)) {
        try {
          fm.plcc_raw = pearson(*finite, truth);
          const LogisticFit fit = fit_logistic(*finite, truth);
          fm.logistic = fit.beta;
          fm.logistic_converged = fit.converged;
          if (fit.converged) {
            fm.plcc_mapped = pearson(fit.mapped, truth);
          } else {
            fm.plcc_mapped = fm.plcc_raw;
            report.warnings.push_back(where + "logistic fit did not converge; mapped PLCC is the raw PLCC");
          }
        } catch (const Error& ex) {
          report.warnings.push_back(where + ex.what());
        }
      } else {
        report.warnings.push_back(where + "no finite scores for PLCC");
      }
      if (!pairs.pairs.empty()) {
        const auto outcomes = c0_outcomes(t, pairs, options.c0);
        fm.c0 = static_cast<double>(std::count(outcomes.begin(), outcomes.end(), true)) /
                static_cast<double>(outcomes.size());
        pooled[m].correct.insert(pooled[m].correct.end(), outcomes.begin(), outcomes.end());
      } else if (m == 0) {
        report.warnings.push_back("fold " + std::to_string(f) + ": no significant pairs, C0 undefined");
      }
      report.models[m].folds.push_back(std::move(fm));
    }
  }

  for (auto& mr : report.models) {
    FoldMetrics& mean = mr.mean;
    mean.fold = "mean";
    for (const auto& f : mr.folds) {
      mean.n_images += f.n_images;
      mean.n_pairs += f.n_pairs;
    }
    mean.plcc_raw = mean_of(mr.folds, &FoldMetrics::plcc_raw);
    mean.plcc_mapped = mean_of(mr.folds, &FoldMetrics::plcc_mapped);
    mean.srcc = mean_of(mr.folds, &FoldMetrics::srcc);
    mean.krcc = mean_of(mr.folds, &FoldMetrics::krcc);
    mean.c0 = mean_of(mr.folds, &FoldMetrics::c0);
    mean.logistic_converged = std::all_of(mr.folds.begin(), mr.folds.end(),
                                          [](const FoldMetrics& f) { return f.logistic_converged; });
  }
  report.significance = significance_matrix(pooled);
  return report;
}

std::string report_to_json(const EvalReport& report) {
  auto fold_json = [](const FoldMetrics& f) {
    json j = {{"fold", f.fold},
              {"n_images", f.n_images},
              {"n_pairs", f.n_pairs},
              {"plcc_raw", opt(f.plcc_raw)},
              {"plcc_mapped", opt(f.plcc_mapped)},
              {"srcc", opt(f.srcc)},
              {"krcc", opt(f.krcc)},
              {"c0", opt(f.c0)}};
    if (f.logistic) {
      j["logistic"] = {{"beta", *f.logistic}, {"converged", f.logistic_converged}};
    }
    return j;
  };
  json models = json::array();
  for (const auto& m : report.models) {
    json folds = json::array();
    for (const auto& f : m.folds) folds.push_back(fold_json(f));
    models.push_back({{"model", m.model},
                      {"higher_is_better", m.higher_is_better},
                      {"folds", folds},
                      {"mean", fold_json(m.mean)}});
  }
  return json{{"version", 1},
              {"models", models},
              {"significance", {{"models", report.significance.models}, {"cells", report.significance.cells}}},
              {"warnings", report.warnings}}
             .dump(2) +
         "\n";
}

std::string report_to_csv(const EvalReport& report) {
  csv::Writer w({"model", "fold", "plcc_raw", "plcc_mapped", "srcc", "krcc", "c0"});
  for (const auto& m : report.models) {
    for (const FoldMetrics* f : [&] {
           std::vector<const FoldMetrics*> all;
           for (const auto& x : m.folds) all.push_back(&x);
           all.push_back(&m.mean);
           return all;
         }()) {
      w.add({m.model, f->fold, opt_csv(f->plcc_raw), opt_csv(f->plcc_mapped), opt_csv(f->srcc),
             opt_csv(f->krcc), opt_csv(f->c0)});
    }
  }
  return w.str();
}

std::string significance_to_csv(const SignificanceMatrix& matrix) {
  std::vector<std::string> header = {"model"};
  header.insert(header.end(), matrix.models.begin(), matrix.models.end());
  csv::Writer w(header);
  for (std::size_t i = 0; i < matrix.models.size(); ++i) {
    std::vector<std::string> row = {matrix.models[i]};
    for (int v : matrix.cells[i]) row.push_back(std::to_string(v));
    w.add(row);
  }
  return w.str();
}

}  // namespace uiqa
