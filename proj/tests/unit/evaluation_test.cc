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
#include <random>
#include <set>
#include <tuple>

#include "gtest/gtest.h"
#include "json.hpp"
#include "oracles.hpp"
#include "uiqa/error.hpp"
#include "uiqa/stats.hpp"

namespace uiqa {

namespace {

MosRecord record(double raw, double variance, int n) {
  MosRecord r;
  r.raw_mean = raw;
  r.mos = mos_from_raw(raw);
  r.variance = variance;
  r.n_raters = n;
  return r;
}

std::vector<std::string> ids_of(const MosTable& m) {
  std::vector<std::string> ids;
  for (const auto& [id, r] : m) ids.push_back(id);
  return ids;
}

MosTable random_table(std::mt19937& gen, int n) {
  std::uniform_real_distribution<double> raw(1.0, 5.0), var(0.0, 2.0);
  std::uniform_int_distribution<int> raters(1, 30);
  MosTable m;
  for (int i = 0; i < n; ++i) {
    // coarse means so that equal-MOS pairs show up
    const double r = std::round(raw(gen) * 4) / 4;
    m["i" + std::to_string(i)] = record(r, i % 7 == 0 ? 0.0 : var(gen), raters(gen));
  }
  return m;
}

std::map<std::string, oracle::MosCell> cells(const MosTable& m) {
  std::map<std::string, oracle::MosCell> out;
  for (const auto& [id, r] : m) out[id] = {r.raw_mean, r.variance, r.n_raters};
  return out;
}

ScoreTable scores_from(const MosTable& m, const std::function<double(double)>& f, bool higher = true) {
  ScoreTable t{"model", {}, higher};
  for (const auto& [id, r] : m) t.scores[id] = f(r.mos);
  return t;
}

TEST(PairZ, WorkedExample) {
  EXPECT_NEAR(pair_z(80, 4, 20, 40, 4, 20), 40.0 / std::sqrt(0.4), 1e-12);
  EXPECT_NEAR(pair_z(80, 4, 20, 40, 4, 20), 63.2, 0.05);
  EXPECT_GT(normal_cdf(pair_z(80, 4, 20, 40, 4, 20)), 0.95);
  EXPECT_EQ(pair_z(3, 1, 5, 3, 2, 9), 0.0);
  EXPECT_TRUE(std::isinf(pair_z(3, 0, 5, 4, 0, 9)));
  EXPECT_EQ(pair_z(3, 0, 5, 3, 0, 9), 0.0);
  EXPECT_THROW(pair_z(3, 1, 0, 4, 1, 1), Error);
  EXPECT_THROW(pair_z(3, -1, 2, 4, 1, 1), Error);
}

// Six images with significance worked out by hand:
//   A 4.50 var .25 N 20 | B 4.25 var .25 N 20 | C 3.00 var 1 N 20
//   D 2.45 var .5 N 10  | E 1.50 var 0 N 20   | F 1.50 var 0 N 5
// A-B z = .25 / sqrt(.025) = 1.58 (dropped), C-D z = .55 / sqrt(.1) = 1.74
// (kept), E-F equal means (dropped); every other pair has z > 4.
TEST(SignificantPairs, HandBuiltTable) {
  const std::map<char, std::string> id = {{'A', "c"}, {'B', "a"}, {'C', "f"}, {'D', "b"}, {'E', "e"}, {'F', "d"}};
  MosTable m;
  m[id.at('A')] = record(4.50, 0.25, 20);
  m[id.at('B')] = record(4.25, 0.25, 20);
  m[id.at('C')] = record(3.00, 1.0, 20);
  m[id.at('D')] = record(2.45, 0.5, 10);
  m[id.at('E')] = record(1.50, 0.0, 20);
  m[id.at('F')] = record(1.50, 0.0, 5);
  const auto ids = ids_of(m);
  const SignificantPairSet s = significant_pairs(m, ids);

  std::set<std::tuple<std::string, std::string, bool>> got;
  for (const auto& p : s.pairs) {
    EXPECT_LT(p.first, p.second);
    EXPECT_GT(p.p_value, 0.95);
    got.insert({p.first, p.second, p.first_better});
  }
  const std::set<std::tuple<std::string, std::string, bool>> expected = {
      {"c", "f", true},  {"b", "c", false}, {"c", "e", true}, {"c", "d", true}, {"a", "f", true},
      {"a", "b", true},  {"a", "e", true},  {"a", "d", true}, {"b", "f", false}, {"e", "f", false},
      {"d", "f", false}, {"b", "e", true},  {"b", "d", true}};
  EXPECT_EQ(got, expected);
}

TEST(SignificantPairs, MissingImage) {
  MosTable m;
  m["a"] = record(3, 1, 3);
  const std::vector<std::string> ids = {"a", "zz"};
  EXPECT_THROW(significant_pairs(m, ids), Error);
}

TEST(SignificantPairs, ZSymmetryOverRandomTables) {
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> raw(1.0, 5.0), var(0.0, 3.0);
  std::uniform_int_distribution<int> raters(1, 40);
  for (int t = 0; t < 1000; ++t) {
    const double ma = raw(gen), mb = raw(gen), va = var(gen), vb = var(gen);
    const int na = raters(gen), nb = raters(gen);
    EXPECT_EQ(pair_z(ma, va, na, mb, vb, nb), pair_z(mb, vb, nb, ma, va, na));
  }
}

TEST(SignificantPairs, VarianceMonotonicity) {
  std::mt19937 gen(32);
  std::uniform_real_distribution<double> lambda(1.0001, 4.0);
  for (int t = 0; t < 1000; ++t) {
    MosTable m = random_table(gen, 6 + t % 10);
    const auto ids = ids_of(m);
    const SignificantPairSet before = significant_pairs(m, ids);
    const double l = lambda(gen);
    for (auto& [id, r] : m) r.variance *= l;
    const SignificantPairSet after = significant_pairs(m, ids);
    std::set<std::pair<std::string, std::string>> kept;
    for (const auto& p : before.pairs) kept.insert({p.first, p.second});
    ASSERT_LE(after.pairs.size(), before.pairs.size());
    for (const auto& p : after.pairs) ASSERT_TRUE(kept.contains({p.first, p.second}));
  }
}

TEST(C0, Endpoints) {
  std::mt19937 gen(33);
  const MosTable m = random_table(gen, 25);
  const auto ids = ids_of(m);
  const SignificantPairSet s = significant_pairs(m, ids);
  ASSERT_FALSE(s.pairs.empty());
  EXPECT_EQ(c0(scores_from(m, [](double v) { return v; }), s), 1.0);
  EXPECT_EQ(c0(scores_from(m, [](double v) { return -v; }), s), 0.0);
  EXPECT_EQ(c0(scores_from(m, [](double v) { return -v; }, false), s), 1.0);
  EXPECT_EQ(c0(scores_from(m, [](double) { return 1.0; }), s), 0.0);  // ties are wrong
  EXPECT_THROW(c0(scores_from(m, [](double v) { return v; }), SignificantPairSet{}), Error);
}

TEST(C0, RandomModelIsACoinFlip) {
  MosTable m;
  for (int i = 0; i < 60; ++i) m["i" + std::to_string(i)] = record(1.0 + 4.0 * i / 59.0, 0.01, 20);
  const auto ids = ids_of(m);
  const SignificantPairSet s = significant_pairs(m, ids);
  ASSERT_GE(s.pairs.size(), 1000);
  std::mt19937 gen(34);
  std::uniform_real_distribution<double> u(0, 1);
  const double value = c0(scores_from(m, [&](double) { return u(gen); }), s);
  EXPECT_NEAR(value, 0.5, 0.05);
}

TEST(C0, MatchesBruteForceWalker) {
  std::mt19937 gen(35);
  std::normal_distribution<double> noise(0, 15);
  for (int t = 0; t < 200; ++t) {
    const MosTable m = random_table(gen, 2 + t % 29);
    const auto ids = ids_of(m);
    const SignificantPairSet s = significant_pairs(m, ids);
    const bool higher = t % 2 == 0;
    ScoreTable scores = scores_from(m, [&](double v) { return std::round((higher ? v : -v) + noise(gen)); }, higher);
    std::size_t n_pairs = 0;
    const double walked = oracle::c0_walk(cells(m), scores.scores, higher, &n_pairs);
    ASSERT_EQ(s.pairs.size(), n_pairs) << t;
    if (n_pairs == 0) continue;
    ASSERT_EQ(c0(scores, s), walked) << t;
  }
}

TEST(C0, SignModeInvariantUnderIncreasingTransforms) {
  std::mt19937 gen(36);
  std::normal_distribution<double> noise(0, 20);
  for (int t = 0; t < 200; ++t) {
    const MosTable m = random_table(gen, 20);
    const auto ids = ids_of(m);
    const SignificantPairSet s = significant_pairs(m, ids);
    if (s.pairs.empty()) continue;
    const ScoreTable base = scores_from(m, [&](double v) { return v + noise(gen); });
    ScoreTable warped = base;
    for (auto& [id, v] : warped.scores) v = std::atan(v / 50.0) * 3 + 11;
    EXPECT_EQ(c0_outcomes(base, s), c0_outcomes(warped, s));
  }
}

TEST(C0, ThresholdMode) {
  MosTable m;
  m["a"] = record(5.0, 0.0, 10);
  m["b"] = record(1.0, 0.0, 10);
  m["c"] = record(3.0, 0.0, 10);
  const auto ids = ids_of(m);
  const SignificantPairSet s = significant_pairs(m, ids);
  ASSERT_EQ(s.pairs.size(), 3);
  ScoreTable t{"m", {{"a", 100.0}, {"b", 0.0}, {"c", 60.0}}, true};
  const C0Options opt{C0Mode::kThreshold, 0.95};
  // normalized: a 1, b 0, c .6; only a-b clears 0.95
  EXPECT_DOUBLE_EQ(c0(t, s, opt), 1.0 / 3.0);
  EXPECT_EQ(c0(t, s), 1.0);
  const C0Options loose{C0Mode::kThreshold, 0.3};
  EXPECT_EQ(c0(t, s, loose), 1.0);
  t.scores["a"] = INFINITY;  // sentinel maps to 1, c becomes the finite max
  EXPECT_DOUBLE_EQ(c0(t, s, opt), 2.0 / 3.0);
}

TEST(SignificanceMatrix, SelfRandomAndAntisymmetry) {
  std::mt19937 gen(37);
  std::bernoulli_distribution coin(0.5);
  ModelOutcomes perfect{"perfect", std::vector<bool>(1000, true)};
  ModelOutcomes random{"random", {}};
  for (int i = 0; i < 1000; ++i) random.correct.push_back(coin(gen));
  ModelOutcomes copy = random;
  copy.model = "copy";
  const std::vector<ModelOutcomes> all = {perfect, random, copy};
  const SignificanceMatrix sm = significance_matrix(all);
  EXPECT_EQ(sm.cells[0][0], 0);
  EXPECT_EQ(sm.cells[0][1], 1);
  EXPECT_EQ(sm.cells[1][0], -1);
  EXPECT_EQ(sm.cells[1][2], 0);

  for (int t = 0; t < 100; ++t) {
    std::vector<ModelOutcomes> models;
    std::uniform_real_distribution<double> rate(0.3, 0.9);
    for (int k = 0; k < 4; ++k) {
      std::bernoulli_distribution b(rate(gen));
      ModelOutcomes o{"m" + std::to_string(k), {}};
      for (int i = 0; i < 200; ++i) o.correct.push_back(b(gen));
      models.push_back(o);
    }
    const SignificanceMatrix r = significance_matrix(models);
    for (int i = 0; i < 4; ++i) {
      EXPECT_EQ(r.cells[i][i], 0);
      for (int j = 0; j < 4; ++j) EXPECT_EQ(r.cells[i][j], -r.cells[j][i]);
    }
  }
  const std::vector<ModelOutcomes> mismatched = {{"a", {true}}, {"b", {true, false}}};
  EXPECT_THROW(significance_matrix(mismatched), Error);
}

TEST(SignificanceMatrix, McNemarBoundary) {
  // 12 vs 3 discordant: z = 9 / sqrt(15) = 2.32 > 1.96; 10 vs 4: 6 / sqrt(14) = 1.60
  auto make = [](int only_a, int only_b) {
    ModelOutcomes a{"a", {}}, b{"b", {}};
    for (int i = 0; i < only_a; ++i) a.correct.push_back(true), b.correct.push_back(false);
    for (int i = 0; i < only_b; ++i) a.correct.push_back(false), b.correct.push_back(true);
    for (int i = 0; i < 50; ++i) a.correct.push_back(true), b.correct.push_back(true);
    return std::vector<ModelOutcomes>{a, b};
  };
  EXPECT_EQ(significance_matrix(make(12, 3)).cells[0][1], 1);
  EXPECT_EQ(significance_matrix(make(10, 4)).cells[0][1], 0);
  EXPECT_EQ(significance_matrix(make(3, 12)).cells[0][1], -1);
}

DatasetManifest grouped_manifest(int groups, int per_group) {
  DatasetManifest m;
  for (int g = 0; g < groups; ++g) {
    const std::string ref = "g" + std::to_string(g);
    ManifestEntry r;
    r.image_id = ref;
    r.file_path = ref + ".png";
    r.content_group_id = "content_" + ref;
    m.entries.push_back(r);
    for (int k = 1; k < per_group; ++k) {
      ManifestEntry d = r;
      d.image_id = ref + "_d" + std::to_string(k);
      d.is_reference = false;
      d.reference_id = ref;
      d.distortion = DistortionRecord{};
      m.entries.push_back(d);
    }
  }
  return m;
}

void expect_disjoint(const SplitPlan& plan, const DatasetManifest& m) {
  for (const auto& f : plan.folds) {
    std::set<std::string> train_groups, test_groups;
    for (const auto& id : f.train) train_groups.insert(m.find(id)->content_group_id);
    for (const auto& id : f.test) test_groups.insert(m.find(id)->content_group_id);
    for (const auto& g : test_groups) ASSERT_FALSE(train_groups.contains(g));
    ASSERT_EQ(f.train.size() + f.test.size(), m.entries.size());
  }
}

TEST(Splits, TenGroupsTenFolds) {
  const DatasetManifest m = grouped_manifest(10, 3);
  const SplitPlan plan = make_splits(m, {SplitScheme::kKFold, 0.8, 10, 5});
  ASSERT_EQ(plan.folds.size(), 10);
  std::map<std::string, int> tested;
  for (const auto& f : plan.folds) {
    std::set<std::string> groups;
    for (const auto& id : f.test) groups.insert(m.find(id)->content_group_id);
    EXPECT_EQ(groups.size(), 1);
    EXPECT_EQ(f.test.size(), 3);
    for (const auto& g : groups) ++tested[g];
  }
  EXPECT_EQ(tested.size(), 10);
  expect_disjoint(plan, m);
}

TEST(Splits, HoldoutFloorRule) {
  const DatasetManifest m = grouped_manifest(145, 2);
  const SplitPlan a = make_splits(m, {SplitScheme::kHoldout, 0.8, 10, 99});
  ASSERT_EQ(a.folds.size(), 1);
  std::set<std::string> train_groups, test_groups;
  for (const auto& id : a.folds[0].train) train_groups.insert(m.find(id)->content_group_id);
  for (const auto& id : a.folds[0].test) test_groups.insert(m.find(id)->content_group_id);
  EXPECT_EQ(train_groups.size(), 116);
  EXPECT_EQ(test_groups.size(), 29);
  expect_disjoint(a, m);
  EXPECT_EQ(splits_to_json(a), splits_to_json(make_splits(m, {SplitScheme::kHoldout, 0.8, 10, 99})));
  EXPECT_NE(splits_to_json(a), splits_to_json(make_splits(m, {SplitScheme::kHoldout, 0.8, 10, 100})));
  for (int g = 2; g < 40; ++g) {
    const DatasetManifest small = grouped_manifest(g, 1);
    for (double ratio : {0.5, 0.7, 0.8, 0.9}) {
      const auto expected = static_cast<std::size_t>(std::floor(ratio * g + 1e-9));
      if (expected < 1 || expected >= static_cast<std::size_t>(g)) {
        EXPECT_THROW(make_splits(small, {SplitScheme::kHoldout, ratio, 10, 1}), Error);
      } else {
        EXPECT_EQ(make_splits(small, {SplitScheme::kHoldout, ratio, 10, 1}).folds[0].train.size(), expected);
      }
    }
  }
}

TEST(Splits, RandomManifestsStayGroupDisjoint) {
  std::mt19937 gen(38);
  std::uniform_int_distribution<int> groups(10, 60), per(1, 6), folds(2, 10);
  for (int t = 0; t < 100; ++t) {
    const DatasetManifest m = grouped_manifest(groups(gen), per(gen));
    const int k = folds(gen);
    const SplitPlan plan = make_splits(m, {SplitScheme::kKFold, 0.8, k, static_cast<std::uint64_t>(t)});
    expect_disjoint(plan, m);
    std::map<std::string, int> seen;
    for (const auto& f : plan.folds) {
      for (const auto& id : f.test) ++seen[id];
    }
    EXPECT_EQ(seen.size(), m.entries.size());
    for (const auto& [id, n] : seen) EXPECT_EQ(n, 1);
    expect_disjoint(make_splits(m, {SplitScheme::kHoldout, 0.8, 10, static_cast<std::uint64_t>(t)}), m);
  }
}

TEST(Splits, ErrorsAndJson) {
  EXPECT_THROW(make_splits(grouped_manifest(9, 2), {SplitScheme::kKFold, 0.8, 10, 1}), Error);
  EXPECT_THROW(make_splits(grouped_manifest(9, 2), {SplitScheme::kKFold, 0.8, 1, 1}), Error);
  EXPECT_THROW(make_splits(grouped_manifest(9, 2), {SplitScheme::kHoldout, 1.0, 10, 1}), Error);
  const SplitPlan plan = make_splits(grouped_manifest(12, 2), {SplitScheme::kKFold, 0.8, 4, 3});
  const std::string text = splits_to_json(plan);
  const SplitPlan back = splits_from_json(text);
  EXPECT_EQ(splits_to_json(back), text);
  EXPECT_EQ(back.content_groups.size(), 24);
  EXPECT_THROW(splits_from_json("{\"folds\": []}"), Error);
  EXPECT_THROW(splits_from_json("[1, 2"), Error);
}

TEST(Nontarget, Examples) {
  DatasetManifest m = grouped_manifest(5, 1);
  for (int i = 0; i < 3; ++i) m.entries[i].is_target = false;
  ScoreTable t{"m", {{"g0", 10}, {"g1", 10}, {"g2", 10}, {"g3", 5}, {"g4", 99}}, true};
  EXPECT_EQ(nontarget_report(t, m).fraction_below, 1.0);
  for (auto* id : {"g0", "g1", "g2"}) t.scores[id] = 90;
  EXPECT_EQ(nontarget_report(t, m).fraction_below, 0.0);
  t.scores = {{"g0", 30}, {"g1", 35}, {"g2", 50}};
  const NontargetReport r = nontarget_report(t, m);
  EXPECT_DOUBLE_EQ(r.fraction_below, 2.0 / 3.0);
  EXPECT_EQ(r.n_nontarget, 3);
  ASSERT_EQ(r.violators.size(), 1);
  EXPECT_EQ(r.violators[0].first, "g2");
  t.scores["g2"] = 40;  // threshold itself is not below
  EXPECT_EQ(nontarget_report(t, m).violators.size(), 1);
  EXPECT_THROW(nontarget_report(t, grouped_manifest(2, 1)), Error);
  t.scores.erase("g1");
  EXPECT_THROW(nontarget_report(t, m), Error);
}

TEST(C0Subset, PerTypeSampling) {
  DatasetManifest m = grouped_manifest(20, 1);
  for (int g = 0; g < 20; ++g) {
    for (DistortionKind k : {DistortionKind::kContrast, DistortionKind::kOceanSnow}) {
      for (int level = 1; level <= 2; ++level) {
        ManifestEntry d = m.entries[g];
        d.image_id += "_" + std::to_string(static_cast<int>(k)) + std::to_string(level);
        d.is_reference = false;
        d.reference_id = m.entries[g].image_id;
        d.distortion = DistortionRecord{k, level};
        m.entries.push_back(d);
      }
    }
  }
  const std::set<std::string> s = c0_subset(m, 7, 3);
  std::map<int, int> per_kind;
  for (const auto& id : s) {
    const ManifestEntry* e = m.find(id);
    ++per_kind[e->distortion ? static_cast<int>(e->distortion->kind) : 0];
  }
  EXPECT_EQ(per_kind, (std::map<int, int>{{0, 7}, {2, 7}, {6, 7}}));
  EXPECT_EQ(s, c0_subset(m, 7, 3));
  EXPECT_NE(s, c0_subset(m, 7, 4));
  EXPECT_EQ(c0_subset(m, 1000, 3).size(), m.entries.size());
  EXPECT_THROW(c0_subset(m, 0, 3), Error);
}

class EvaluateTest : public ::testing::Test {
 protected:
  void SetUp() override {
    manifest_ = grouped_manifest(40, 4);
    std::mt19937 gen(39);
    std::uniform_real_distribution<double> raw(1.0, 5.0), var(0.1, 1.0);
    for (const auto& e : manifest_.entries) mos_[e.image_id] = record(raw(gen), var(gen), 21);
    plan_ = make_splits(manifest_, {SplitScheme::kKFold, 0.8, 5, 7});
  }

  DatasetManifest manifest_;
  MosTable mos_;
  SplitPlan plan_;
};

TEST_F(EvaluateTest, PerfectModel) {
  const std::vector<ScoreTable> tables = {scores_from(mos_, [](double v) { return v; })};
  const EvalReport r = evaluate(tables, mos_, plan_);
  EXPECT_TRUE(r.warnings.empty()) << r.warnings.front();
  ASSERT_EQ(r.models[0].folds.size(), 5);
  for (const auto& f : r.models[0].folds) {
    EXPECT_DOUBLE_EQ(*f.srcc, 1.0);
    EXPECT_DOUBLE_EQ(*f.krcc, 1.0);
    EXPECT_DOUBLE_EQ(*f.plcc_raw, 1.0);
    EXPECT_NEAR(*f.plcc_mapped, 1.0, 1e-9);
    EXPECT_EQ(*f.c0, 1.0);
    EXPECT_GT(f.n_pairs, 0);
  }
}

TEST_F(EvaluateTest, IndependentModelNearZero) {
  std::mt19937 gen(40);
  std::uniform_real_distribution<double> u(0, 1);
  MosTable big;
  DatasetManifest m = grouped_manifest(1000, 5);
  std::uniform_real_distribution<double> raw(1.0, 5.0);
  for (const auto& e : m.entries) big[e.image_id] = record(raw(gen), 0.5, 21);
  const SplitPlan plan = make_splits(m, {SplitScheme::kKFold, 0.8, 4, 1});
  const std::vector<ScoreTable> tables = {scores_from(big, [&](double) { return u(gen); })};
  const EvalReport r = evaluate(tables, big, plan);
  EXPECT_NEAR(*r.models[0].mean.srcc, 0.0, 0.05);
  EXPECT_NEAR(*r.models[0].mean.krcc, 0.0, 0.05);
  EXPECT_NEAR(*r.models[0].mean.plcc_raw, 0.0, 0.05);
  EXPECT_NEAR(*r.models[0].mean.c0, 0.5, 0.05);
}

TEST_F(EvaluateTest, MeansAreFoldAverages) {
  std::mt19937 gen(41);
  std::normal_distribution<double> noise(0, 20);
  const std::vector<ScoreTable> tables = {scores_from(mos_, [&](double v) { return v + noise(gen); }),
                                          scores_from(mos_, [&](double v) { return -v + noise(gen); }, false)};
  const EvalReport r = evaluate(tables, mos_, plan_);
  for (const auto& mr : r.models) {
    for (auto field : {&FoldMetrics::plcc_raw, &FoldMetrics::plcc_mapped, &FoldMetrics::srcc, &FoldMetrics::krcc,
                       &FoldMetrics::c0}) {
      double sum = 0;
      for (const auto& f : mr.folds) sum += *(f.*field);
      EXPECT_NEAR(*(mr.mean.*field), sum / mr.folds.size(), 1e-12);
    }
    for (const auto& f : mr.folds) {
      for (auto field : {&FoldMetrics::plcc_raw, &FoldMetrics::plcc_mapped, &FoldMetrics::srcc, &FoldMetrics::krcc}) {
        EXPECT_GE(*(f.*field), -1.0);
        EXPECT_LE(*(f.*field), 1.0);
      }
      EXPECT_GE(*f.c0, 0.0);
      EXPECT_LE(*f.c0, 1.0);
    }
  }
  ASSERT_EQ(r.significance.models.size(), 2);
}

TEST_F(EvaluateTest, InfiniteSentinelKeepsOrdering) {
  ScoreTable t = scores_from(mos_, [](double v) { return v; });
  const auto best = std::max_element(mos_.begin(), mos_.end(),
                                     [](const auto& a, const auto& b) { return a.second.mos < b.second.mos; });
  t.scores[best->first] = INFINITY;
  const std::vector<ScoreTable> tables = {t};
  const EvalReport r = evaluate(tables, mos_, plan_);
  EXPECT_DOUBLE_EQ(*r.models[0].mean.srcc, 1.0);
  EXPECT_EQ(*r.models[0].mean.c0, 1.0);
  EXPECT_TRUE(r.models[0].mean.plcc_raw.has_value());
}

TEST_F(EvaluateTest, CoverageGapsAndWarnings) {
  ScoreTable t = scores_from(mos_, [](double v) { return v; });
  t.scores.erase("g3");
  std::vector<ScoreTable> tables = {t};
  EXPECT_THROW(evaluate(tables, mos_, plan_), Error);
  MosTable partial = mos_;
  partial.erase("g3");
  tables = {scores_from(mos_, [](double v) { return v; })};
  EXPECT_THROW(evaluate(tables, partial, plan_), Error);

  tables = {scores_from(mos_, [](double) { return 7.0; })};
  const EvalReport r = evaluate(tables, mos_, plan_);
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_FALSE(r.models[0].mean.srcc.has_value());
  EXPECT_EQ(*r.models[0].mean.c0, 0.0);
}

TEST_F(EvaluateTest, C0RestrictedToSubset) {
  const std::vector<ScoreTable> tables = {scores_from(mos_, [](double v) { return v; })};
  EvalOptions o;
  o.c0_images = c0_subset(manifest_, 10, 1);
  const EvalReport all = evaluate(tables, mos_, plan_);
  const EvalReport sub = evaluate(tables, mos_, plan_, o);
  EXPECT_LT(sub.models[0].mean.n_pairs, all.models[0].mean.n_pairs);
  EXPECT_EQ(sub.models[0].mean.n_images, all.models[0].mean.n_images);
  EXPECT_EQ(*sub.models[0].mean.srcc, *all.models[0].mean.srcc);
  for (std::size_t f = 0; f < plan_.folds.size(); ++f) {
    std::vector<std::string> kept;
    for (const auto& id : plan_.folds[f].test) {
      if (o.c0_images->contains(id)) kept.push_back(id);
    }
    EXPECT_EQ(sub.models[0].folds[f].n_pairs, significant_pairs(mos_, kept).pairs.size());
  }
}

TEST_F(EvaluateTest, ReportSchemas) {
  const std::vector<ScoreTable> tables = {scores_from(mos_, [](double v) { return v * v; })};
  const EvalReport r = evaluate(tables, mos_, plan_);
  const auto j = nlohmann::json::parse(report_to_json(r));
  EXPECT_EQ(j["version"], 1);
  ASSERT_EQ(j["models"].size(), 1);
  EXPECT_EQ(j["models"][0]["model"], "model");
  EXPECT_EQ(j["models"][0]["folds"].size(), 5);
  for (const char* key : {"plcc_raw", "plcc_mapped", "srcc", "krcc", "c0"}) {
    EXPECT_TRUE(j["models"][0]["mean"][key].is_number()) << key;
  }
  EXPECT_EQ(j["models"][0]["folds"][0]["logistic"]["beta"].size(), 4);
  const std::string csv = report_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "model,fold,plcc_raw,plcc_mapped,srcc,krcc,c0");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 5 + 1);
  EXPECT_EQ(significance_to_csv(r.significance), "model,model\nmodel,0\n");
}

}  // namespace

}  // namespace uiqa
