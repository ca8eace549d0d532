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

#include "uiqa/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "uiqa/csv.hpp"
#include "uiqa/error.hpp"
#include "uiqa/evaluation.hpp"
#include "uiqa/manifest.hpp"
#include "uiqa/metrics.hpp"
#include "uiqa/plots.hpp"
#include "uiqa/subjective.hpp"
#include "uiqa/synthetic.hpp"

namespace uiqa {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(with_location(path.string(), 0, "cannot write file"));
  out << text;
  if (!out) throw Error(with_location(path.string(), 0, "write failed"));
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  return out;
}

std::string toml_value(const std::string& v) {
  // plain decimal numbers and booleans stay bare
  if (v == "true" || v == "false") return v;
  static const std::regex number(R"(-?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][-+]?[0-9]+)?)");
  if (std::regex_match(v, number)) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

// Fully resolved options of the subcommand as a TOML section, minus --out
// and --config so output trees do not depend on where they were written.
std::string resolved_config(const CLI::App& sub) {
  std::ostringstream os;
  os << "[" << sub.get_name() << "]\n";
  for (const CLI::Option* opt : sub.get_options()) {
    const auto& names = opt->get_lnames();
    if (names.empty()) continue;
    const std::string& name = names.front();
    if (name == "help" || name == "out" || name == "config") continue;
    std::vector<std::string> values = opt->results();
    if (values.empty() && !opt->get_default_str().empty()) values = {opt->get_default_str()};
    if (opt->get_expected_max() > 1 || opt->get_expected_max() == CLI::detail::expected_max_vector_size) {
      if (values.empty()) continue;
      os << name << " = [";
      for (std::size_t i = 0; i < values.size(); ++i) os << (i ? ", " : "") << toml_value(values[i]);
      os << "]\n";
    } else if (opt->get_type_size() == 0) {
      os << name << " = " << (opt->count() > 0 ? "true" : "false") << "\n";
    } else if (!values.empty()) {
      os << name << " = " << toml_value(values.front()) << "\n";
    }
  }
  return os.str();
}

struct Context {
  CLI::App* sub = nullptr;
  std::ostream* out = nullptr;
  fs::path out_dir;

  void prepare() const {
    fs::create_directories(out_dir);
    write_file(out_dir / "config.toml", resolved_config(*sub));
  }
};

std::map<DistortionKind, int> parse_level_counts(const std::vector<std::string>& types,
                                                 const std::vector<std::string>& levels) {
  std::map<DistortionKind, int> counts;
  const auto wanted = split_list(types);
  if (!wanted.empty()) {
    for (DistortionKind k : kAllDistortionKinds) counts[k] = 0;
    for (const auto& t : wanted) counts.erase(kind_from_name(t));
  }
  for (const auto& spec : split_list(levels)) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--levels", "expected kind=count, got '" + spec + "'");
    const DistortionKind k = kind_from_name(spec.substr(0, eq));
    int n = 0;
    try {
      n = std::stoi(spec.substr(eq + 1));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--levels", "bad count in '" + spec + "'");
    }
    counts[k] = n;
  }
  return counts;
}

std::vector<ScoreTable> load_all_scores(const std::vector<std::string>& files,
                                        const std::vector<std::string>& lower_is_better) {
  std::vector<ScoreTable> tables;
  std::set<std::string> seen;
  const auto lower = split_list(lower_is_better);
  for (const auto& f : split_list(files)) {
    for (auto& t : load_scores(f)) {
      if (!seen.insert(t.model_name).second) throw Error("model '" + t.model_name + "' appears in two score files");
      t.higher_is_better = std::find(lower.begin(), lower.end(), t.model_name) == lower.end();
      tables.push_back(std::move(t));
    }
  }
  return tables;
}

std::string safe_name(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Utility-oriented image quality benchmark toolkit"};
  app.name("uiqa");
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1);

  std::function<void()> action;
  Context ctx;
  ctx.out = &out;
  auto add = [&](const std::string& name, const std::string& help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--out", ctx.out_dir, "Output directory")->required();
    return sub;
  };

  // synth
  int n_targets = 20, n_nontargets = 0, scene_width = 96, scene_height = 96;
  std::uint64_t synth_seed = 1;
  {
    CLI::App* s = add("synth", "Write a synthetic reference set (refs.json, boxes.json, images/)");
    s->add_option("--targets", n_targets, "Scenes with a target")->capture_default_str();
    s->add_option("--nontargets", n_nontargets, "Scenes without a target")->capture_default_str();
    s->add_option("--width", scene_width, "Scene width")->capture_default_str();
    s->add_option("--height", scene_height, "Scene height")->capture_default_str();
    s->add_option("--seed", synth_seed, "Seed")->capture_default_str();
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        ctx.prepare();
        const auto m = synthetic::make_reference_set(ctx.out_dir, n_targets, n_nontargets, synth_seed,
                                                     {scene_width, scene_height});
        out << "wrote " << m.entries.size() << " references to " << ctx.out_dir.string() << "\n";
      };
    });
  }

  // distort
  std::string refs_path, boxes_path;
  std::uint64_t distort_seed = 0;
  std::vector<std::string> types, levels;
  double feather = 0.0;
  {
    CLI::App* s = add("distort", "Generate the distorted dataset from a reference manifest");
    s->add_option("--refs", refs_path, "Reference manifest JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--seed", distort_seed, "Master seed")->capture_default_str();
    s->add_option("--boxes", boxes_path, "Foreground boxes sidecar JSON for type 5 (default: boxes.json next to --refs)");
    s->add_option("--types", types, "Distortion kinds to generate (1..6 or names); default all");
    s->add_option("--levels", levels, "Per-kind level counts, e.g. 6=2,4=3");
    s->add_option("--feather", feather, "Feather width of type-5 masks in pixels")->capture_default_str();
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        GenerationConfig config;
        config.level_counts = parse_level_counts(types, levels);
        config.feather = feather;
        if (!boxes_path.empty()) {
          config.boxes = load_boxes(boxes_path);
        } else if (const auto sidecar = fs::path(refs_path).parent_path() / "boxes.json"; fs::exists(sidecar)) {
          config.boxes = load_boxes(sidecar);
        }
        const DatasetManifest refs = load_manifest(refs_path);
        ctx.prepare();
        const auto m = generate_distorted_set(refs, fs::path(refs_path).parent_path(), config, distort_seed,
                                              ctx.out_dir);
        out << "wrote " << m.entries.size() << " entries to " << (ctx.out_dir / "manifest.json").string() << "\n";
      };
    });
  }

  // simulate-ratings
  std::string manifest_path;
  int subjects = 21, verification = 5;
  double noise = 0.45;
  std::uint64_t rater_seed = 0;
  {
    CLI::App* s = add("simulate-ratings", "Simulate subject ratings for a manifest");
    s->add_option("--manifest", manifest_path, "Dataset manifest JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--subjects", subjects, "Number of subjects")->capture_default_str();
    s->add_option("--verification", verification, "Verification-set size")->capture_default_str();
    s->add_option("--noise", noise, "Rater noise (rating-scale sd)")->capture_default_str();
    s->add_option("--seed", rater_seed, "Seed")->capture_default_str();
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        const auto m = load_manifest(manifest_path);
        ctx.prepare();
        synthetic::RaterOptions opts;
        opts.subjects = subjects;
        opts.verification_size = verification;
        opts.noise_sd = noise;
        save_ratings(synthetic::simulate_ratings(m, opts, rater_seed), ctx.out_dir / "ratings.csv");
      };
    });
  }

  // mos / agreement / screen
  std::string ratings_path;
  {
    CLI::App* s = add("mos", "Compute MOS labels from a ratings CSV");
    s->add_option("--ratings", ratings_path, "Ratings CSV")->required()->check(CLI::ExistingFile);
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        const auto ratings = load_ratings(ratings_path);
        ctx.prepare();
        const MosTable table = compute_mos(ratings);
        save_mos(table, ctx.out_dir / "mos.csv");
        out << "images: " << table.size() << "  OC: " << outlier_coefficient(table) << "\n";
      };
    });
  }
  {
    CLI::App* s = add("agreement", "Outlier coefficient and NCC/EUD rater agreement");
    s->add_option("--ratings", ratings_path, "Ratings CSV")->required()->check(CLI::ExistingFile);
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        const auto ratings = load_ratings(ratings_path);
        ctx.prepare();
        const AgreementReport r = rater_agreement(ratings);
        json pairs = json::array();
        csv::Writer w({"subject_a", "subject_b", "n_common", "ncc", "eud"});
        for (const auto& p : r.pairs) {
          w.add({p.subject_a, p.subject_b, std::to_string(p.n_common), csv::format_double(p.ncc),
                 csv::format_double(p.eud)});
        }
        w.save(ctx.out_dir / "agreement_pairs.csv");
        json j = {{"version", 1},
                  {"oc", r.oc},
                  {"mean_ncc", r.mean_ncc},
                  {"mean_eud", r.mean_eud},
                  {"n_pairs", r.pairs.size()},
                  {"fluctuations", r.fluctuations}};
        write_file(ctx.out_dir / "agreement.json", j.dump(2) + "\n");
        out << "OC " << r.oc << "  NCC " << r.mean_ncc << "  EUD " << r.mean_eud << "\n";
      };
    });
  }
  int max_fluct = -1;
  {
    CLI::App* s = add("screen", "Verification-set subject screening");
    s->add_option("--ratings", ratings_path, "Ratings CSV")->required()->check(CLI::ExistingFile);
    s->add_option("--max-fluctuations", max_fluct,
                  "Discard subjects with more fluctuation images than this (default: half the set)");
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        const auto ratings = load_ratings(ratings_path);
        ctx.prepare();
        const auto results =
            screen_subjects(ratings, max_fluct >= 0 ? std::optional<int>(max_fluct) : std::nullopt);
        csv::Writer w({"subject_id", "fluctuations", "verification_size", "keep"});
        std::size_t kept = 0;
        for (const auto& r : results) {
          w.add({r.subject_id, std::to_string(r.fluctuations), std::to_string(r.verification_size),
                 r.keep ? "1" : "0"});
          kept += r.keep;
        }
        w.save(ctx.out_dir / "screening.csv");
        out << "kept " << kept << " of " << results.size() << " subjects\n";
      };
    });
  }

  // score
  std::vector<std::string> metrics;
  bool include_refs = false;
  {
    CLI::App* s = add("score", "Score a manifest with the classical metrics");
    s->add_option("--manifest", manifest_path, "Dataset manifest JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--metrics", metrics, "psnr,ssim,uciqe,uiqm")->required();
    s->add_flag("--include-references", include_refs, "Also score reference entries");
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        const auto m = load_manifest(manifest_path);
        const auto names = split_list(metrics);
        for (const auto& n : names) {
          if (std::find(kMetricNames.begin(), kMetricNames.end(), n) == kMetricNames.end()) {
            throw CLI::ValidationError("--metrics", "unknown metric '" + n + "'");
          }
        }
        ctx.prepare();
        const BatchScores b = score_batch(m, fs::path(manifest_path).parent_path(), names, include_refs);
        for (const auto& t : b.tables) save_scores(std::span(&t, 1), ctx.out_dir / (t.model_name + ".csv"));
        save_timing(b.mean_ms_per_image, ctx.out_dir / "timing.csv");
        out << "scored " << (b.tables.empty() ? 0 : b.tables.front().scores.size()) << " images with "
            << b.tables.size() << " metrics\n";
      };
    });
  }

  // split
  std::string scheme = "kfold";
  int folds = 10;
  double ratio = 0.8;
  std::uint64_t split_seed = 0;
  {
    CLI::App* s = add("split", "Content-disjoint train/test splits");
    s->add_option("--manifest", manifest_path, "Dataset manifest JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--scheme", scheme, "kfold or holdout")
        ->check(CLI::IsMember({"kfold", "holdout"}))
        ->capture_default_str();
    s->add_option("--folds", folds, "Number of folds (kfold)")->capture_default_str();
    s->add_option("--ratio", ratio, "Train fraction of content groups (holdout)")->capture_default_str();
    s->add_option("--seed", split_seed, "Seed")->capture_default_str();
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        const auto m = load_manifest(manifest_path);
        ctx.prepare();
        SplitOptions o;
        o.scheme = scheme == "holdout" ? SplitScheme::kHoldout : SplitScheme::kKFold;
        o.folds = folds;
        o.train_ratio = ratio;
        o.seed = split_seed;
        const SplitPlan plan = make_splits(m, o);
        save_splits(plan, ctx.out_dir / "splits.json");
        out << "wrote " << plan.folds.size() << " folds\n";
      };
    });
  }

  // evaluate
  std::vector<std::string> score_files, lower_better;
  std::string mos_path, splits_path, c0_mode = "sign", eval_manifest;
  double c0_threshold = 0.95;
  int c0_per_type = 0;
  std::uint64_t c0_seed = 0;
  {
    CLI::App* s = add("evaluate", "PLCC/SRCC/KRCC/C0 per fold and the significance matrix");
    s->add_option("--scores", score_files, "ScoreTable CSV file(s)")->required();
    s->add_option("--mos", mos_path, "MOS CSV")->required()->check(CLI::ExistingFile);
    s->add_option("--splits", splits_path, "Split plan JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--c0-mode", c0_mode, "sign or threshold")
        ->check(CLI::IsMember({"sign", "threshold"}))
        ->capture_default_str();
    s->add_option("--c0-threshold", c0_threshold, "Threshold on normalized differences")->capture_default_str();
    s->add_option("--lower-is-better", lower_better, "Models whose lower scores mean better quality");
    s->add_option("--c0-per-type", c0_per_type, "Sample this many images per distortion type for C0 (0: all)")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    s->add_option("--c0-seed", c0_seed, "Seed of the C0 sample")->capture_default_str();
    s->add_option("--manifest", eval_manifest, "Dataset manifest JSON, needed by --c0-per-type")
        ->check(CLI::ExistingFile);
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        if (c0_per_type > 0 && eval_manifest.empty()) {
          throw CLI::ValidationError("--c0-per-type", "needs --manifest");
        }
        const auto tables = load_all_scores(score_files, lower_better);
        const auto mos = load_mos(mos_path);
        const auto plan = load_splits(splits_path);
        ctx.prepare();
        EvalOptions o;
        o.c0.mode = c0_mode == "threshold" ? C0Mode::kThreshold : C0Mode::kSign;
        o.c0.threshold = c0_threshold;
        if (c0_per_type > 0) o.c0_images = c0_subset(load_manifest(eval_manifest), c0_per_type, c0_seed);
        const EvalReport r = evaluate(tables, mos, plan, o);
        write_file(ctx.out_dir / "report.json", report_to_json(r));
        write_file(ctx.out_dir / "report.csv", report_to_csv(r));
        write_file(ctx.out_dir / "significance.csv", significance_to_csv(r.significance));
        for (const auto& w : r.warnings) out << "warning: " << w << "\n";
        for (const auto& m : r.models) {
          auto show = [](const std::optional<double>& v) { return v ? csv::format_double(*v) : "n/a"; };
          out << m.model << ": SRCC " << show(m.mean.srcc) << "  PLCC " << show(m.mean.plcc_mapped) << "  KRCC "
              << show(m.mean.krcc) << "  C0 " << show(m.mean.c0) << "\n";
        }
      };
    });
  }

  // nontarget
  double threshold = 40.0;
  std::string model_name;
  {
    CLI::App* s = add("nontarget", "Fraction of non-target images scored below a threshold");
    s->add_option("--scores", score_files, "ScoreTable CSV")->required();
    s->add_option("--manifest", manifest_path, "Dataset manifest JSON")->required()->check(CLI::ExistingFile);
    s->add_option("--threshold", threshold, "Low-utility threshold on the 0..100 scale")->capture_default_str();
    s->add_option("--model", model_name, "Model to report when the CSV holds several");
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        const auto tables = load_all_scores(score_files, {});
        const auto m = load_manifest(manifest_path);
        const ScoreTable* chosen = nullptr;
        for (const auto& t : tables) {
          if (model_name.empty() ? tables.size() == 1 : t.model_name == model_name) chosen = &t;
        }
        if (!chosen) throw CLI::ValidationError("--model", "choose one model present in the score file(s)");
        ctx.prepare();
        const NontargetReport r = nontarget_report(*chosen, m, threshold);
        csv::Writer w({"image_id", "score", "below_threshold"});
        for (const auto& [id, v] : r.below) w.add({id, csv::format_double(v), "1"});
        for (const auto& [id, v] : r.violators) w.add({id, csv::format_double(v), "0"});
        w.save(ctx.out_dir / "nontarget.csv");
        json j = {{"version", 1},
                  {"model", chosen->model_name},
                  {"threshold", r.threshold},
                  {"n_nontarget", r.n_nontarget},
                  {"fraction_below", r.fraction_below}};
        json viol = json::array();
        for (const auto& [id, v] : r.violators) viol.push_back(id);
        j["violators"] = viol;
        write_file(ctx.out_dir / "nontarget.json", j.dump(2) + "\n");
        out << r.fraction_below << " of " << r.n_nontarget << " non-target images below " << threshold << "\n";
      };
    });
  }

  // report
  int bins = 10;
  {
    CLI::App* s = add("report", "Score-vs-MOS scatter and MOS histogram series (CSV + SVG)");
    s->add_option("--scores", score_files, "ScoreTable CSV file(s)");
    s->add_option("--mos", mos_path, "MOS CSV")->required()->check(CLI::ExistingFile);
    s->add_option("--bins", bins, "Histogram bins over 0..100")->check(CLI::PositiveNumber)->capture_default_str();
    s->callback([&, s] {
      ctx.sub = s;
      action = [&] {
        const auto mos = load_mos(mos_path);
        const auto tables = score_files.empty() ? std::vector<ScoreTable>{} : load_all_scores(score_files, {});
        ctx.prepare();
        std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
        for (const auto& [id, rec] : mos) {
          auto b = static_cast<std::size_t>(std::floor(rec.mos / 100.0 * bins));
          counts[std::min(b, counts.size() - 1)]++;
        }
        csv::Writer h({"bin_low", "bin_high", "count"});
        for (std::size_t i = 0; i < counts.size(); ++i) {
          h.add({csv::format_double(100.0 * i / bins), csv::format_double(100.0 * (i + 1) / bins),
                 std::to_string(counts[i])});
        }
        h.save(ctx.out_dir / "mos_histogram.csv");
        write_file(ctx.out_dir / "mos_histogram.svg", plots::histogram_svg(counts, 0, 100, "MOS distribution", "MOS"));
        for (const auto& t : tables) {
          csv::Writer w({"image_id", "score", "mos"});
          std::vector<plots::Point> pts;
          for (const auto& [id, score] : t.scores) {
            auto it = mos.find(id);
            if (it == mos.end()) continue;
            w.add({id, csv::format_double(score), csv::format_double(it->second.mos)});
            pts.push_back({score, it->second.mos});
          }
          const std::string base = "scatter_" + safe_name(t.model_name);
          w.save(ctx.out_dir / (base + ".csv"));
          write_file(ctx.out_dir / (base + ".svg"), plots::scatter_svg(pts, t.model_name, "score", "MOS"));
        }
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 1;
  }
  try {
    action();
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

}  // namespace uiqa
