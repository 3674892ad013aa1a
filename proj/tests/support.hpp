// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// Random instance generators and brute-force reference implementations used by
// the unit and acceptance suites. The oracles here deliberately avoid the
// library's evaluation code paths: they rank, match and integrate on their own.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "reefeval/dataset.hpp"
#include "reefeval/predictions.hpp"
#include "reefeval/report.hpp"

namespace reefeval::testing {

// ---------------------------------------------------------------------------
// Generators

struct InstanceShape {
  int max_images = 10;
  int max_classes = 5;
  int max_boxes_per_image = 6;
  int max_preds_per_image = 20;
};

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline FamilyClassMap make_class_map(int n) {
  std::vector<std::string> names;
  for (int i = 0; i < n; ++i) names.push_back("Family" + std::to_string(i));
  return FamilyClassMap::from_names(std::move(names));
}

// Ground-truth box with integer pixel corners inside a width x height frame.
inline GroundTruthBox random_box(std::mt19937_64& rng, ClassId cls, int width, int height) {
  const int x1 = uniform_int(rng, 0, width - 2);
  const int y1 = uniform_int(rng, 0, height - 2);
  const int x2 = uniform_int(rng, x1 + 1, std::min(width, x1 + width / 2));
  const int y2 = uniform_int(rng, y1 + 1, std::min(height, y1 + height / 2));
  return GroundTruthBox::from_pixels(cls, PixelBox{double(x1), double(y1), double(x2), double(y2)},
                                     width, height);
}

// Every image carries at least one box, and every class at least one instance
// when `all_classes_present` is set.
inline Dataset random_dataset(std::mt19937_64& rng, const InstanceShape& shape,
                              bool all_classes_present = false) {
  Dataset d;
  const int n_classes = uniform_int(rng, 1, shape.max_classes);
  const int n_images = uniform_int(rng, 1, shape.max_images);
  d.class_map = make_class_map(n_classes);
  for (int i = 0; i < n_images; ++i) {
    ImageRecord img;
    img.image_id = "img" + std::to_string(i);
    img.width_px = 100;
    img.height_px = 80;
    const int n_boxes = uniform_int(rng, 1, shape.max_boxes_per_image);
    for (int b = 0; b < n_boxes; ++b) {
      img.boxes.push_back(random_box(rng, uniform_int(rng, 0, n_classes - 1), img.width_px, img.height_px));
    }
    d.images.push_back(std::move(img));
  }
  if (all_classes_present) {
    for (int c = 0; c < n_classes; ++c) {
      auto& img = d.images[static_cast<std::size_t>(uniform_int(rng, 0, n_images - 1))];
      img.boxes.push_back(random_box(rng, c, img.width_px, img.height_px));
    }
  }
  return d;
}

// Mix of jittered copies of ground truth (likely hits), duplicates, and random
// boxes. Scores are multiples of 1/1000 so ties occur occasionally.
inline PredictionSet random_predictions(std::mt19937_64& rng, const Dataset& d, const InstanceShape& shape) {
  PredictionSet out;
  const int n_classes = static_cast<int>(d.class_map.size());
  for (const auto& img : d.images) {
    const int n = uniform_int(rng, 0, shape.max_preds_per_image);
    for (int k = 0; k < n; ++k) {
      Prediction p;
      p.image_id = img.image_id;
      p.score = uniform_int(rng, 0, 1000) / 1000.0;
      if (!img.boxes.empty() && uniform_int(rng, 0, 3) != 0) {
        const auto& g = img.boxes[static_cast<std::size_t>(uniform_int(rng, 0, int(img.boxes.size()) - 1))];
        const auto gp = g.to_pixels(img.width_px, img.height_px);
        const double j = uniform(rng, 0.0, 0.35) * std::max(gp.width(), gp.height());
        p.box = PixelBox{gp.x1 + uniform(rng, -j, j), gp.y1 + uniform(rng, -j, j),
                         gp.x2 + uniform(rng, -j, j), gp.y2 + uniform(rng, -j, j)};
        if (p.box.x2 <= p.box.x1) p.box.x2 = p.box.x1 + 1.0;
        if (p.box.y2 <= p.box.y1) p.box.y2 = p.box.y1 + 1.0;
        p.class_id = uniform_int(rng, 0, 5) == 0 ? uniform_int(rng, 0, n_classes - 1) : g.class_id;
      } else {
        const auto b = random_box(rng, 0, img.width_px, img.height_px).to_pixels(img.width_px, img.height_px);
        p.box = b;
        p.class_id = uniform_int(rng, 0, n_classes - 1);
      }
      out.predictions.push_back(p);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Oracles

// IoU by counting unit cells on an integer grid; boxes must have integer corners.
inline double iou_by_pixel_count(const PixelBox& a, const PixelBox& b) {
  const int lo_x = int(std::min(a.x1, b.x1)), hi_x = int(std::max(a.x2, b.x2));
  const int lo_y = int(std::min(a.y1, b.y1)), hi_y = int(std::max(a.y2, b.y2));
  long inter = 0;
  long uni = 0;
  for (int y = lo_y; y < hi_y; ++y) {
    for (int x = lo_x; x < hi_x; ++x) {
      const double cx = x + 0.5, cy = y + 0.5;
      const bool in_a = cx > a.x1 && cx < a.x2 && cy > a.y1 && cy < a.y2;
      const bool in_b = cx > b.x1 && cx < b.x2 && cy > b.y1 && cy < b.y2;
      inter += in_a && in_b;
      uni += in_a || in_b;
    }
  }
  return uni ? double(inter) / double(uni) : 0.0;
}

inline double oracle_iou(const PixelBox& a, const PixelBox& b) {
  const double w = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double h = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = w * h;
  const double uni = (a.x2 - a.x1) * (a.y2 - a.y1) + (b.x2 - b.x1) * (b.y2 - b.y1) - inter;
  return uni > 0 ? std::min(1.0, inter / uni) : 0.0;
}

// Hit/miss flags per class in global rank order (score desc, input order asc),
// computed by a direct restatement of the greedy rule over the whole set.
struct OracleRanking {
  std::map<ClassId, std::vector<bool>> hits;        // ranked TP flags per class
  std::map<ClassId, std::vector<double>> scores;    // matching scores
  std::map<ClassId, std::size_t> n_gt;
};

inline OracleRanking oracle_rank_and_match(const Dataset& gt, const PredictionSet& preds, double iou_thr,
                                           std::optional<double> floor = std::nullopt) {
  OracleRanking out;
  for (std::size_t c = 0; c < gt.class_map.size(); ++c) {
    out.n_gt[ClassId(c)] = 0;
    out.hits[ClassId(c)];
    out.scores[ClassId(c)];
  }
  for (const auto& img : gt.images) {
    for (const auto& b : img.boxes) ++out.n_gt[b.class_id];
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < preds.predictions.size(); ++i) {
    if (!floor || preds.predictions[i].score >= *floor) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds.predictions[a].score > preds.predictions[b].score;
  });

  // Claimed ground truth per (image, box index).
  std::map<std::pair<std::string, std::size_t>, bool> claimed;
  for (const std::size_t i : order) {
    const auto& p = preds.predictions[i];
    const ImageRecord* img = gt.find_image(p.image_id);
    double best = -1.0;
    std::optional<std::size_t> best_box;
    for (std::size_t k = 0; k < img->boxes.size(); ++k) {
      const auto& g = img->boxes[k];
      if (g.class_id != p.class_id || claimed[{img->image_id, k}]) continue;
      const double o = oracle_iou(p.box, g.to_pixels(img->width_px, img->height_px));
      if (o > best) {
        best = o;
        best_box = k;
      }
    }
    const bool hit = best_box && best >= iou_thr;
    if (hit) claimed[{img->image_id, *best_box}] = true;
    out.hits[p.class_id].push_back(hit);
    out.scores[p.class_id].push_back(p.score);
  }
  return out;
}

// Exact AP by enumerating ranked prefixes: recall steps by 1/n_gt at each hit,
// and the envelope there is the best precision over that prefix and every
// longer one.
inline double brute_force_exact_ap(const std::vector<bool>& hits, std::size_t n_gt) {
  const std::size_t n = hits.size();
  std::vector<double> precision(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t tp = 0;
    for (std::size_t j = 0; j <= k; ++j) tp += hits[j];
    precision[k] = double(tp) / double(k + 1);
  }
  double ap = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!hits[k]) continue;
    double env = 0.0;
    for (std::size_t j = k; j < n; ++j) env = std::max(env, precision[j]);
    ap += env / double(n_gt);
  }
  return ap;
}

// 101-point AP by direct summation over the recall grid.
inline double brute_force_101_ap(const std::vector<bool>& hits, std::size_t n_gt) {
  const std::size_t n = hits.size();
  double sum = 0.0;
  for (int j = 0; j <= 100; ++j) {
    const double r = j / 100.0;
    double best = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      std::size_t tp = 0;
      for (std::size_t i = 0; i <= k; ++i) tp += hits[i];
      const double recall = double(tp) / double(n_gt);
      if (recall >= r) best = std::max(best, double(tp) / double(k + 1));
    }
    sum += best;
  }
  return sum / 101.0;
}

struct OracleSweepPoint {
  double threshold;
  double precision;
  double recall;
  double f1;
};

// Literal sweep: re-filter, re-match and re-average at every candidate.
inline std::vector<OracleSweepPoint> oracle_sweep(const Dataset& gt, const PredictionSet& preds, double iou_thr) {
  std::vector<double> cands;
  for (const auto& p : preds.predictions) cands.push_back(p.score);
  std::sort(cands.begin(), cands.end(), std::greater<>());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  std::vector<bool> has_pred(gt.class_map.size(), false);
  for (const auto& p : preds.predictions) has_pred[std::size_t(p.class_id)] = true;

  std::vector<OracleSweepPoint> out;
  for (double c : cands) {
    const auto m = oracle_rank_and_match(gt, preds, iou_thr, c);
    double psum = 0.0, rsum = 0.0;
    int np = 0, nr = 0;
    for (std::size_t k = 0; k < gt.class_map.size(); ++k) {
      const auto& h = m.hits.at(ClassId(k));
      const std::size_t ngt = m.n_gt.at(ClassId(k));
      const std::size_t tp = std::size_t(std::count(h.begin(), h.end(), true));
      if (ngt > 0 || has_pred[k]) {
        psum += h.empty() ? 0.0 : double(tp) / double(h.size());
        ++np;
      }
      if (ngt > 0) {
        rsum += double(tp) / double(ngt);
        ++nr;
      }
    }
    const double P = np ? psum / np : 0.0;
    const double R = nr ? rsum / nr : 0.0;
    out.push_back({c, P, R, P + R > 0 ? 2 * P * R / (P + R) : 0.0});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Published comparison rows (five configurations, 3-decimal metrics)

inline std::vector<ConfigMetrics> reference_rows() {
  const std::string top10 = "Top 10, ≥ 500 px²";
  return {
      {"A (Full)", "24 families", 0.533, 0.373, 0.374, 0.250},
      {"B (Top 10)", "10 families", 0.530, 0.460, 0.465, 0.280},
      {"C-DEF", top10, 0.631, 0.477, 0.520, 0.328},
      {"Scratch-tuned", top10, 0.703, 0.401, 0.490, 0.320},
      {"COCO-tuned", top10, 0.627, 0.465, 0.493, 0.318},
  };
}

inline const std::vector<std::vector<std::string>>& reference_cells() {
  static const std::vector<std::vector<std::string>> cells = {
      {"0.533", "0.373", "0.374", "0.250"}, {"0.530", "0.460", "0.465", "0.280"},
      {"0.631", "0.477", "0.520", "0.328"}, {"0.703", "0.401", "0.490", "0.320"},
      {"0.627", "0.465", "0.493", "0.318"},
  };
  return cells;
}

}  // namespace reefeval::testing
