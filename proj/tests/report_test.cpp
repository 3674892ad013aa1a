// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0

#include "reefeval/report.hpp"

#include <gtest/gtest.h>

#include "support.hpp"

namespace reefeval {
namespace {

TEST(ComparisonTable, ReferenceRowsRenderToThreeDecimals) {
  const auto rows = testing::reference_rows();
  const auto t = render_comparison_table(rows);
  const auto csv = parse_csv(t.csv);
  ASSERT_EQ(csv.size(), 6u);
  EXPECT_EQ(csv[0], (std::vector<std::string>{"Model", "Dataset", "Precision", "Recall", "mAP@0.5", "mAP@0.5:0.95"}));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(csv[i + 1][0], rows[i].name);
    EXPECT_EQ(csv[i + 1][1], rows[i].dataset_label);
    EXPECT_EQ(std::vector<std::string>(csv[i + 1].begin() + 2, csv[i + 1].end()), testing::reference_cells()[i]);
  }
  EXPECT_EQ(csv[3][1], "Top 10, ≥ 500 px²");
  EXPECT_NE(t.csv.find("\"Top 10, ≥ 500 px²\""), std::string::npos);  // comma forces quoting
}

TEST(ComparisonTable, TextLayout) {
  const auto t = render_comparison_table({{"C-DEF", "Top 10, ≥ 500 px²", 0.631, 0.477, 0.520, 0.328},
                                          {"Scratch-tuned", "Top 10, ≥ 500 px²", 0.703, 0.401, 0.490, 0.320}});
  EXPECT_EQ(t.text,
            "Model          Dataset            Precision  Recall  mAP@0.5  mAP@0.5:0.95\n"
            "--------------------------------------------------------------------------\n"
            "C-DEF          Top 10, ≥ 500 px²      0.631   0.477    0.520         0.328\n"
            "Scratch-tuned  Top 10, ≥ 500 px²      0.703   0.401    0.490         0.320\n");
}

TEST(ComparisonTable, OnesAndErrors) {
  const auto t = render_comparison_table({{"M", "D", 1.0, 1.0, 1.0, 1.0}});
  EXPECT_EQ(parse_csv(t.csv)[1], (std::vector<std::string>{"M", "D", "1.000", "1.000", "1.000", "1.000"}));
  EXPECT_THROW(render_comparison_table({}), DomainError);
  EXPECT_THROW(render_comparison_table({{"M", "D", 1.2, 0, 0, 0}}), DomainError);
}

TEST(ComparisonTable, CsvRoundTripAtThreeDecimals) {
  std::vector<ConfigMetrics> rows = {{"x,\"y\"", "line\nbreak", 0.12345, 0.9999, 0.0004, 0.5}};
  const auto back = parse_comparison_csv(render_comparison_table(rows).csv);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].name, rows[0].name);
  EXPECT_EQ(back[0].dataset_label, rows[0].dataset_label);
  EXPECT_EQ(back[0].precision, 0.123);
  EXPECT_EQ(back[0].recall, 1.0);
  EXPECT_EQ(back[0].map50, 0.0);
  EXPECT_EQ(back[0].map5095, 0.5);

  const auto ref = testing::reference_rows();
  EXPECT_EQ(parse_comparison_csv(render_comparison_table(ref).csv), ref);
}

TEST(ComparisonCsv, RejectsBadInput) {
  EXPECT_THROW(parse_comparison_csv(""), ParseError);
  EXPECT_THROW(parse_comparison_csv("a,b\n"), ParseError);
  EXPECT_THROW(parse_comparison_csv("Model,Dataset,Precision,Recall,mAP@0.5,mAP@0.5:0.95\nM,D,x,0,0,0\n"),
               ParseError);
  EXPECT_THROW(parse_csv("\"open"), ParseError);
}

TEST(Histogram, DominantShare) {
  FamilyHistogram h{{{1, "Pomacentridae", 2718, 2718.0 / 5783.0}, {0, "Other", 3065, 3065.0 / 5783.0}}, 5783, 1};
  const auto rows = parse_csv(render_family_histogram(h));
  EXPECT_EQ(rows[1][2], "0.470");
}

TEST(Histogram, EmptyAndArithmetic) {
  EXPECT_EQ(render_family_histogram({}), "family,count,share\n");
  Dataset d;
  d.class_map = FamilyClassMap::from_names({"A", "B"});
  ImageRecord img{"i", 10, 10, {}, {}, {}};
  for (int k = 0; k < 3; ++k) img.boxes.push_back({1, 0.5, 0.5, 0.1, 0.1});
  for (int k = 0; k < 6; ++k) img.boxes.push_back({0, 0.5, 0.5, 0.1, 0.1});
  d.images.push_back(img);
  EXPECT_EQ(render_family_histogram(dataset_stats(d)), "family,count,share\nA,6,0.667\nB,3,0.333\n");
}

ApResult two_class_result() {
  ApResult r;
  r.families = {"Labridae", "Zanclidae", "Lutjanidae"};
  r.per_class = {{0, 4, 5, 0.3}, {1, 2, 2, 0.9}, {2, 0, 1, std::nullopt}};
  return r;
}

TEST(PerClass, SortedByApWithUndefinedLast) {
  const auto rows = parse_csv(render_per_class_report(two_class_result()));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"class_id", "family", "n_gt", "n_pred", "ap"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"1", "Zanclidae", "2", "2", "0.900"}));
  EXPECT_EQ(rows[2][4], "0.300");
  EXPECT_EQ(rows[3], (std::vector<std::string>{"2", "Lutjanidae", "0", "1", "n/a"}));
}

TEST(PerClass, WithSweepColumns) {
  ThresholdSweepResult s;
  s.families = two_class_result().families;
  s.per_class = {{0, 4, 2, 1, 2.0 / 3.0, 0.5, f1_score(2.0 / 3.0, 0.5)}, {1, 2, 2, 0, 1.0, 1.0, 1.0},
                 {2, 0, 0, 1, 0.0, std::nullopt, std::nullopt}};
  const auto rows = parse_csv(render_per_class_report(two_class_result(), s));
  EXPECT_EQ(rows[0].size(), 8u);
  EXPECT_EQ(rows[2], (std::vector<std::string>{"0", "Labridae", "4", "5", "0.300", "0.667", "0.500", "0.571"}));
  EXPECT_EQ(rows[3][6], "n/a");
}

TEST(PerClass, EmptyAndMismatch) {
  EXPECT_EQ(render_per_class_report(ApResult{}), "class_id,family,n_gt,n_pred,ap\n");
  ThresholdSweepResult s;
  s.families = {"Other"};
  EXPECT_THROW(render_per_class_report(two_class_result(), s), DomainError);
  auto bad = two_class_result();
  bad.families.pop_back();
  EXPECT_THROW(render_per_class_report(bad), DomainError);
}

TEST(Metrics, FromEvaluationAndJson) {
  ApResult a;
  a.map = 0.52;
  ApResult b;
  b.map = 0.328;
  ThresholdSweepResult s;
  s.precision = 0.631;
  s.recall = 0.477;
  const auto m = config_metrics_from("C-DEF", "d", a, b, s);
  EXPECT_EQ(m, (ConfigMetrics{"C-DEF", "d", 0.631, 0.477, 0.52, 0.328}));
  EXPECT_EQ(config_metrics_from_json(nlohmann::json::parse(to_json(m).dump())), m);
  EXPECT_THROW(config_metrics_from_json(nlohmann::json::parse(R"({"name":"x"})")), ParseError);
}

TEST(Formatting, LocaleIndependentRounding) {
  EXPECT_EQ(text::format_fixed(0.4695, 3), "0.469");  // nearest double lies below the tie
  EXPECT_EQ(text::format_fixed(0.0, 3), "0.000");
  EXPECT_EQ(text::format_fixed(-0.0001, 3), "0.000");
}

}  // namespace
}  // namespace reefeval
