// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// The `reefeval` command line. Exit codes: 0 success, 1 bad data or I/O,
// 2 usage errors (unknown subcommand, bad flag values).

#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "reefeval/curation.hpp"
#include "reefeval/dataset.hpp"
#include "reefeval/error.hpp"
#include "reefeval/eval.hpp"
#include "reefeval/frames.hpp"
#include "reefeval/io.hpp"
#include "reefeval/manifest.hpp"
#include "reefeval/predictions.hpp"
#include "reefeval/report.hpp"

namespace reefeval::cli {

namespace fs = std::filesystem;

// Flag values that violate an operation's preconditions.
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

struct Context {
  std::ostream& out;
  std::ostream& err;
};

inline void emit(Context& ctx, const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    ctx.out << content;
  } else {
    io::write_file_atomic(path, content);
  }
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

inline Dataset load(const std::string& manifest, const std::string& classes) {
  return load_dataset(manifest, classes.empty() ? std::nullopt : std::optional<fs::path>(classes));
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

inline Interpolation mode_flag(const std::string& s) {
  const auto m = parse_interpolation(s);
  require(m.has_value(), "--mode must be 'exact' or '101-point'");
  return *m;
}

inline void require_iou(double v, const char* flag) {
  require(v > 0.0 && v <= 1.0, std::string(flag) + " must be in (0, 1]");
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  using detail::require;
  detail::Context ctx{out, err};

  CLI::App app{"Dataset curation and detection evaluation for transect imagery", "reefeval"};
  app.require_subcommand(1);

  std::string gt;
  std::string classes;
  auto add_gt = [&](CLI::App* sub) {
    sub->add_option("--gt", gt, "Dataset manifest (JSON lines)")->required();
    sub->add_option("--classes", classes, "Class map file (default: classes.txt next to the manifest)");
  };

  // stats
  auto* stats = app.add_subcommand("stats", "Per-family instance histogram");
  add_gt(stats);
  std::string stats_out;
  std::string stats_json;
  stats->add_option("--out", stats_out, "Histogram CSV (default: stdout)");
  stats->add_option("--json", stats_json, "Also write totals and entries as JSON");

  // curate
  auto* curate = app.add_subcommand("curate", "Apply a dataset configuration and re-export it");
  add_gt(curate);
  std::string preset;
  long long top_k = -1;
  std::vector<ClassId> keep;
  std::optional<double> min_area;
  std::optional<double> min_side;
  std::string out_dir;
  curate->add_option("--config", preset, "Preset: A (all), B (top 10), C (top 10 + 500 px^2)");
  curate->add_option("--top-k", top_k, "Keep the k most abundant families");
  curate->add_option("--keep", keep, "Keep these class ids, renumbered in the given order")->delimiter(',');
  curate->add_option("--min-area", min_area, "Drop boxes below this pixel area");
  curate->add_option("--min-side", min_side, "Drop boxes whose longer side is below this many pixels");
  curate->add_option("--out-dir", out_dir, "Output directory (must not exist or be empty)")->required();

  // validate
  auto* validate = app.add_subcommand("validate", "Report boxes that break the minimum-size rule");
  add_gt(validate);
  double validate_side = kMinSidePx;
  std::string validate_out;
  validate->add_option("--min-side", validate_side, "Minimum longer side in pixels")->capture_default_str();
  validate->add_option("--out", validate_out, "Report JSON (default: stdout)");

  // split
  auto* split_cmd = app.add_subcommand("split", "Deterministic train/val/test or k-fold assignment");
  add_gt(split_cmd);
  std::optional<std::uint64_t> seed;
  std::vector<double> ratios{0.7, 0.2, 0.1};
  std::optional<long long> folds;
  std::string split_out;
  split_cmd->add_option("--seed", seed, "Random seed")->required();
  split_cmd->add_option("--ratios", ratios, "train,val,test ratios summing to 1")
      ->delimiter(',')
      ->expected(3);
  split_cmd->add_option("--k-fold", folds, "Assign k folds instead of a ratio split");
  split_cmd->add_option("--out", split_out, "Assignment JSON (default: stdout)");

  // plan-frames
  auto* frames = app.add_subcommand("plan-frames", "Plan frame extraction for one video");
  std::string video;
  double duration = 0.0;
  double fps = 0.0;
  double interval = kFrameIntervalS;
  std::string frames_out;
  std::string tmpl;
  std::string commands_out;
  frames->add_option("--video", video, "Video id or file name")->required();
  frames->add_option("--duration", duration, "Duration in seconds")->required();
  frames->add_option("--fps", fps, "Frames per second")->required();
  frames->add_option("--interval", interval, "Sampling interval in seconds")->capture_default_str();
  frames->add_option("--out", frames_out, "Manifest JSON (default: stdout unless --template)");
  frames->add_option("--template", tmpl, "Command template with {video} {timestamp} {index} {out}");
  frames->add_option("--commands", commands_out, "Write commands here (default: stdout)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "AP/mAP at one IoU threshold and over a range");
  add_gt(evaluate);
  std::string pred;
  double iou_thr = 0.5;
  double range_start = 0.5;
  double range_end = 0.95;
  double range_step = 0.05;
  std::string mode_str = "101-point";
  std::optional<double> score_floor;
  std::string eval_out;
  std::string per_class_out;
  evaluate->add_option("--pred", pred, "Predictions (JSON lines)")->required();
  evaluate->add_option("--iou", iou_thr, "IoU threshold")->capture_default_str();
  evaluate->add_option("--range-start", range_start)->capture_default_str();
  evaluate->add_option("--range-end", range_end)->capture_default_str();
  evaluate->add_option("--range-step", range_step)->capture_default_str();
  evaluate->add_option("--mode", mode_str, "exact | 101-point")->capture_default_str();
  evaluate->add_option("--score-threshold", score_floor, "Drop predictions scoring below this first");
  evaluate->add_option("--out", eval_out, "Evaluation JSON (default: stdout)");
  evaluate->add_option("--per-class", per_class_out, "Per-family CSV");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "F1-optimal confidence threshold");
  add_gt(sweep);
  std::string sweep_out;
  std::string sweep_table;
  sweep->add_option("--pred", pred, "Predictions (JSON lines)")->required();
  sweep->add_option("--iou", iou_thr, "IoU threshold")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Sweep JSON (default: stdout)");
  sweep->add_option("--table", sweep_table, "Per-threshold CSV");

  // report
  auto* report = app.add_subcommand("report", "Render comparison tables and per-family reports");
  std::string configs;
  std::string eval_in;
  std::string sweep_in;
  std::string report_out;
  std::string report_csv;
  report->add_option("--configs", configs, "Metric rows: JSON array or comparison CSV");
  report->add_option("--eval", eval_in, "Evaluation JSON from `evaluate`");
  report->add_option("--sweep", sweep_in, "Sweep JSON from `sweep`");
  report->add_option("--out", report_out, "Output (default: stdout)");
  report->add_option("--csv", report_csv, "Comparison table as CSV");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("reefeval");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (*stats) {
      const auto d = detail::load(gt, classes);
      const auto h = dataset_stats(d);
      if (!stats_json.empty()) {
        nlohmann::ordered_json j;
        j["images"] = h.image_count;
        j["instances"] = h.total;
        j["families"] = nlohmann::ordered_json::array();
        for (const auto& e : h.entries) {
          j["families"].push_back(
              {{"class_id", e.class_id}, {"family", e.family}, {"count", e.count}, {"share", e.share}});
        }
        io::write_file_atomic(stats_json, detail::dump(j));
      }
      detail::emit(ctx, stats_out, render_family_histogram(h));
      return 0;
    }

    if (*curate) {
      std::optional<ConfigPreset> p;
      if (!preset.empty()) {
        p = parse_config_preset(preset);
        require(p.has_value(), "--config must be A, B or C");
        require(top_k < 0 && keep.empty() && !min_area && !min_side,
                "--config cannot be combined with other filters");
      }
      require(top_k == -1 || top_k >= 1, "--top-k must be at least 1");
      require(!min_area || (*min_area >= 0.0 && std::isfinite(*min_area)), "--min-area must be >= 0");
      require(!min_side || (*min_side >= 0.0 && std::isfinite(*min_side)), "--min-side must be >= 0");

      auto d = detail::load(gt, classes);
      const auto prior_plan = fs::path(gt).parent_path() / "plan.json";
      auto c = fs::exists(prior_plan)
                   ? curated_from_json(std::move(d), nlohmann::json::parse(io::read_file(prior_plan)))
                   : CuratedDataset::identity(std::move(d));
      if (p) {
        c = apply_preset(c, *p);
      } else {
        if (!keep.empty()) c = remap_classes(c, keep);
        if (top_k >= 1) c = top_k_families(c, static_cast<std::size_t>(top_k));
        if (min_side) c = filter_min_side(c, *min_side);
        if (min_area) c = filter_min_area(c, *min_area);
      }
      auto files = dataset_bundle(c.dataset);
      files.emplace_back("plan.json", detail::dump(to_json(c)));
      io::write_directory_atomic(out_dir, files);
      out << c.dataset.images.size() << " images, " << c.dataset.box_count() << " boxes, "
          << c.dataset.class_map.size() << " families (dropped " << c.dropped_images << " images, "
          << c.dropped_boxes << " boxes)\n";
      return 0;
    }

    if (*validate) {
      require(validate_side >= 0.0, "--min-side must be >= 0");
      const auto d = detail::load(gt, classes);
      const auto r = validate_annotation_rules(d, validate_side);
      detail::emit(ctx, validate_out, detail::dump(to_json(r)));
      if (!validate_out.empty()) {
        out << r.violations.size() << " of " << r.boxes_checked << " boxes below "
            << text::format_shortest(validate_side) << " px\n";
      }
      return 0;
    }

    if (*split_cmd) {
      std::array<double, 3> rs{ratios.at(0), ratios.at(1), ratios.at(2)};
      double sum = 0.0;
      for (double r : rs) {
        require(r >= 0.0, "--ratios must be non-negative");
        sum += r;
      }
      require(std::abs(sum - 1.0) <= 1e-9, "--ratios must sum to 1");
      require(!folds || *folds >= 2, "--k-fold must be at least 2");
      const auto d = detail::load(gt, classes);
      const auto s = folds ? k_fold(d, static_cast<std::size_t>(*folds), *seed) : split(d, rs, *seed);
      detail::emit(ctx, split_out, detail::dump(to_json(s)));
      return 0;
    }

    if (*frames) {
      require(duration > 0.0 && fps > 0.0 && interval > 0.0,
              "--duration, --fps and --interval must be positive");
      require(commands_out.empty() || !tmpl.empty(), "--commands requires --template");
      const auto m = plan_frames(duration, fps, interval, video);
      if (!tmpl.empty()) {
        std::string cmds;
        for (const auto& c : emit_extraction_commands(m, tmpl)) cmds += c + '\n';
        if (!frames_out.empty()) io::write_file_atomic(frames_out, detail::dump(to_json(m)));
        detail::emit(ctx, commands_out, cmds);
      } else {
        detail::emit(ctx, frames_out, detail::dump(to_json(m)));
      }
      return 0;
    }

    if (*evaluate) {
      detail::require_iou(iou_thr, "--iou");
      const auto mode = detail::mode_flag(mode_str);
      require(range_start > 0.0 && range_start <= range_end && range_end <= 1.0 && range_step > 0.0,
              "IoU range needs 0 < start <= end <= 1 and step > 0");
      require(!score_floor || (*score_floor >= 0.0 && *score_floor <= 1.0),
              "--score-threshold must be in [0, 1]");
      const auto d = detail::load(gt, classes);
      auto preds = parse_predictions(io::read_file(pred));
      if (score_floor) preds = thresholded(preds, *score_floor);
      const EvalIndex idx(d, preds);
      auto at = map_at(idx, iou_thr, mode);
      auto range = map_range(idx, range_start, range_end, range_step, mode);
      at.score_floor = score_floor;
      range.score_floor = score_floor;
      nlohmann::ordered_json j;
      j["kind"] = "evaluation";
      j["map_at"] = to_json(at);
      j["map_range"] = to_json(range);
      if (!per_class_out.empty()) io::write_file_atomic(per_class_out, render_per_class_report(at));
      detail::emit(ctx, eval_out, detail::dump(j));
      return 0;
    }

    if (*sweep) {
      detail::require_iou(iou_thr, "--iou");
      const auto d = detail::load(gt, classes);
      const auto preds = parse_predictions(io::read_file(pred));
      const auto r = f1_sweep(d, preds, iou_thr);
      if (!sweep_table.empty()) {
        std::string csv = csv_row({"threshold", "precision", "recall", "f1", "tp", "fp", "fn"});
        for (const auto& row : r.table) {
          csv += csv_row({text::format_shortest(row.threshold), text::format_fixed(row.precision, 6),
                          text::format_fixed(row.recall, 6), text::format_fixed(row.f1, 6),
                          std::to_string(row.tp), std::to_string(row.fp), std::to_string(row.fn)});
        }
        io::write_file_atomic(sweep_table, csv);
      }
      detail::emit(ctx, sweep_out, detail::dump(to_json(r)));
      return 0;
    }

    if (*report) {
      require(configs.empty() != eval_in.empty(), "report needs exactly one of --configs or --eval");
      require(sweep_in.empty() || !eval_in.empty(), "--sweep requires --eval");
      if (!configs.empty()) {
        const auto raw = io::read_file(configs);
        const auto first = raw.find_first_not_of(" \t\r\n");
        std::vector<ConfigMetrics> rows;
        if (first != std::string::npos && raw[first] == '[') {
          const auto base = fs::path(configs).parent_path();
          for (const auto& e : nlohmann::json::parse(raw)) {
            if (e.contains("eval")) {
              const auto ev = nlohmann::json::parse(io::read_file(base / e.at("eval").get<std::string>()));
              const auto sw = nlohmann::json::parse(io::read_file(base / e.at("sweep").get<std::string>()));
              rows.push_back(config_metrics_from(e.at("name").get<std::string>(),
                                                 e.at("dataset").get<std::string>(),
                                                 ap_result_from_json(ev.at("map_at")),
                                                 ap_result_from_json(ev.at("map_range")),
                                                 sweep_result_from_json(sw)));
            } else {
              rows.push_back(config_metrics_from_json(e));
            }
          }
        } else {
          rows = parse_comparison_csv(raw);
        }
        const auto t = render_comparison_table(rows);
        if (!report_csv.empty()) io::write_file_atomic(report_csv, t.csv);
        detail::emit(ctx, report_out, t.text);
        return 0;
      }
      const auto ev = nlohmann::json::parse(io::read_file(eval_in));
      const auto ap = ap_result_from_json(ev.contains("map_at") ? ev.at("map_at") : ev);
      std::optional<ThresholdSweepResult> sw;
      if (!sweep_in.empty()) sw = sweep_result_from_json(nlohmann::json::parse(io::read_file(sweep_in)));
      detail::emit(ctx, report_out, render_per_class_report(ap, sw));
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace reefeval::cli
