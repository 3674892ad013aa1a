// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "reefeval/cli.hpp"

#include <filesystem>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"

namespace reefeval {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("reefeval_cli_" + std::to_string(::getpid()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(root_);
    fs::create_directories(root_);

    std::mt19937_64 rng(31);
    testing::InstanceShape shape;
    shape.max_classes = 12;
    shape.max_images = 30;
    do {
      data_ = testing::random_dataset(rng, shape, true);
    } while (data_.class_map.size() < 11);
    for (auto& img : data_.images) {
      img.width_px = 320;
      img.height_px = 240;
      img.boxes = parse_label_file(serialize_label_file(img.boxes), img.width_px, img.height_px);
    }
    io::write_directory_atomic(root_ / "data", dataset_bundle(data_));
    preds_ = testing::random_predictions(rng, data_, {});
    io::write_file_atomic(root_ / "preds.jsonl", serialize_predictions(preds_));
  }
  void TearDown() override { fs::remove_all(root_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  std::string path(const std::string& rel) const { return (root_ / rel).string(); }
  std::string manifest() const { return path("data/manifest.jsonl"); }

  // Relative path -> contents for every file under dir.
  std::map<std::string, std::string> snapshot(const fs::path& dir) const {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = io::read_file(e.path());
    }
    return files;
  }

  fs::path root_;
  Dataset data_;
  PredictionSet preds_;
  std::ostringstream out_;
  std::ostringstream err_;
};

TEST_F(Cli, EvaluateWritesReport) {
  ASSERT_EQ(run({"evaluate", "--gt", manifest(), "--pred", path("preds.jsonl"), "--iou", "0.5", "--out",
                 path("eval.json"), "--per-class", path("per_class.csv")}),
            0)
      << err_.str();
  const auto j = nlohmann::json::parse(io::read_file(path("eval.json")));
  EXPECT_EQ(j["kind"], "evaluation");
  const auto at = ap_result_from_json(j["map_at"]);
  EXPECT_EQ(at.map, map_at(data_, preds_, 0.5).map);
  EXPECT_EQ(ap_result_from_json(j["map_range"]).iou_thresholds.size(), 10u);
  EXPECT_EQ(io::read_file(path("per_class.csv")), render_per_class_report(map_at(data_, preds_, 0.5)));
}

TEST_F(Cli, EvaluateScoreThresholdIsRecorded) {
  ASSERT_EQ(run({"evaluate", "--gt", manifest(), "--pred", path("preds.jsonl"), "--score-threshold", "0.25",
                 "--mode", "exact"}),
            0);
  const auto j = nlohmann::json::parse(out_.str());
  const auto at = ap_result_from_json(j["map_at"]);
  EXPECT_EQ(at.score_floor, 0.25);
  EXPECT_EQ(at.mode, Interpolation::kExact);
  EXPECT_EQ(at.map, map_at(data_, thresholded(preds_, 0.25), 0.5, Interpolation::kExact).map);
}

TEST_F(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"curate", "--top-k", "0"}), 2);
  EXPECT_EQ(run({"curate", "--gt", manifest(), "--top-k", "0", "--out-dir", path("o")}), 2);
  EXPECT_FALSE(fs::exists(path("o")));
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"evaluate", "--gt", manifest(), "--pred", path("preds.jsonl"), "--iou", "0"}), 2);
  EXPECT_EQ(run({"evaluate", "--gt", manifest(), "--pred", path("preds.jsonl"), "--mode", "11-point"}), 2);
  EXPECT_EQ(run({"split", "--gt", manifest(), "--seed", "1", "--ratios", "0.5,0.2,0.2"}), 2);
  EXPECT_EQ(run({"split", "--gt", manifest()}), 2);
  EXPECT_EQ(run({"curate", "--gt", manifest(), "--config", "D", "--out-dir", path("o")}), 2);
  EXPECT_EQ(run({"plan-frames", "--video", "v", "--duration", "-1", "--fps", "30"}), 2);
}

TEST_F(Cli, DataErrorsExitOne) {
  EXPECT_EQ(run({"stats", "--gt", path("missing-file")}), 1);
  EXPECT_NE(err_.str().find("missing-file"), std::string::npos);
  io::write_file_atomic(path("bad.jsonl"), R"({"image_id":"nope","class_id":0,"bbox":[0,0,1,1],"score":0.5})");
  EXPECT_EQ(run({"evaluate", "--gt", manifest(), "--pred", path("bad.jsonl")}), 1);
  EXPECT_EQ(run({"sweep", "--gt", manifest(), "--pred", path("missing.jsonl")}), 1);
}

TEST_F(Cli, HelpExitsZero) { EXPECT_EQ(run({"--help"}), 0); }

TEST_F(Cli, StatsMatchesLibrary) {
  ASSERT_EQ(run({"stats", "--gt", manifest(), "--json", path("stats.json")}), 0);
  EXPECT_EQ(out_.str(), render_family_histogram(dataset_stats(data_)));
  EXPECT_EQ(nlohmann::json::parse(io::read_file(path("stats.json")))["instances"], data_.box_count());
}

TEST_F(Cli, ConfigCEqualsTwoStepChain) {
  ASSERT_EQ(run({"curate", "--gt", manifest(), "--config", "C", "--out-dir", path("c")}), 0) << err_.str();
  ASSERT_EQ(run({"curate", "--gt", manifest(), "--top-k", "10", "--out-dir", path("b")}), 0) << err_.str();
  ASSERT_EQ(run({"curate", "--gt", path("b/manifest.jsonl"), "--min-area", "500", "--out-dir", path("bc")}), 0)
      << err_.str();
  const auto c = snapshot(path("c"));
  EXPECT_EQ(c, snapshot(path("bc")));
  EXPECT_TRUE(c.count("plan.json"));
  EXPECT_TRUE(c.count("manifest.jsonl"));

  // The curated bundle reloads as a 10-family dataset.
  EXPECT_EQ(load_dataset(path("c/manifest.jsonl")).class_map.size(), 10u);
}

TEST_F(Cli, CurateRefusesNonEmptyTarget) {
  fs::create_directories(path("busy"));
  io::write_file_atomic(path("busy/x"), "x");
  EXPECT_EQ(run({"curate", "--gt", manifest(), "--config", "A", "--out-dir", path("busy")}), 1);
  EXPECT_EQ(snapshot(path("busy")).size(), 1u);
}

TEST_F(Cli, FailuresLeaveNoPartialOutputs) {
  io::write_file_atomic(path("bad.jsonl"), "{\n");
  EXPECT_EQ(run({"evaluate", "--gt", manifest(), "--pred", path("bad.jsonl"), "--out", path("e.json")}), 1);
  EXPECT_EQ(run({"curate", "--gt", manifest(), "--top-k", "99", "--out-dir", path("k")}), 1);
  EXPECT_EQ(run({"plan-frames", "--video", "v", "--duration", "10", "--fps", "30", "--template", "{bad}",
                 "--out", path("f.json"), "--commands", path("cmds.txt")}),
            1);
  std::vector<std::string> left;
  for (const auto& e : fs::directory_iterator(root_)) left.push_back(e.path().filename().string());
  std::sort(left.begin(), left.end());
  EXPECT_EQ(left, (std::vector<std::string>{"bad.jsonl", "data", "preds.jsonl"}));
}

TEST_F(Cli, SplitIsReproducible) {
  ASSERT_EQ(run({"split", "--gt", manifest(), "--seed", "7"}), 0);
  const auto first = out_.str();
  ASSERT_EQ(run({"split", "--gt", manifest(), "--seed", "7"}), 0);
  EXPECT_EQ(out_.str(), first);
  ASSERT_EQ(run({"split", "--gt", manifest(), "--seed", "7", "--k-fold", "3"}), 0);
  EXPECT_EQ(out_.str(), to_json(k_fold(data_, 3, 7)).dump(2) + "\n");
}

TEST_F(Cli, PlanFramesCommands) {
  ASSERT_EQ(run({"plan-frames", "--video", "t1.mp4", "--duration", "10", "--fps", "30", "--template",
                 "extract {video} at {timestamp} -> {out}"}),
            0);
  EXPECT_EQ(out_.str(),
            "extract t1.mp4 at 0.000 -> t1_f000000.jpg\n"
            "extract t1.mp4 at 3.000 -> t1_f000090.jpg\n"
            "extract t1.mp4 at 6.000 -> t1_f000180.jpg\n"
            "extract t1.mp4 at 9.000 -> t1_f000270.jpg\n");
}

TEST_F(Cli, ValidateReport) {
  ASSERT_EQ(run({"validate", "--gt", manifest(), "--min-side", "50", "--out", path("v.json")}), 0);
  const auto j = nlohmann::json::parse(io::read_file(path("v.json")));
  EXPECT_EQ(j["violations"].size(), validate_annotation_rules(data_, 50).violations.size());
}

TEST_F(Cli, SweepAndReport) {
  ASSERT_EQ(run({"evaluate", "--gt", manifest(), "--pred", path("preds.jsonl"), "--out", path("eval.json")}), 0);
  ASSERT_EQ(run({"sweep", "--gt", manifest(), "--pred", path("preds.jsonl"), "--out", path("sweep.json"),
                 "--table", path("sweep.csv")}),
            0);
  const auto s = f1_sweep(data_, preds_, 0.5);
  EXPECT_EQ(parse_csv(io::read_file(path("sweep.csv"))).size(), s.table.size() + 1);

  ASSERT_EQ(run({"report", "--eval", path("eval.json"), "--sweep", path("sweep.json")}), 0) << err_.str();
  EXPECT_EQ(out_.str(), render_per_class_report(map_at(data_, preds_, 0.5), s));

  io::write_file_atomic(path("rows.json"),
                        R"([{"name":"run","dataset":"d","eval":"eval.json","sweep":"sweep.json"},)"
                        R"({"name":"M","dataset":"D","precision":1,"recall":1,"map50":1,"map5095":1}])");
  ASSERT_EQ(run({"report", "--configs", path("rows.json"), "--csv", path("t.csv")}), 0) << err_.str();
  const auto rows = parse_comparison_csv(io::read_file(path("t.csv")));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NEAR(rows[0].map50, *map_at(data_, preds_, 0.5).map, 5e-4);
  EXPECT_NEAR(rows[0].precision, s.precision, 5e-4);

  ASSERT_EQ(run({"report", "--configs", path("t.csv")}), 0);
  EXPECT_EQ(out_.str(), render_comparison_table(rows).text);
  EXPECT_EQ(run({"report"}), 2);
}

}  // namespace
}  // namespace reefeval
