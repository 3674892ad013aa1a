// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// Detection evaluation: class-wise greedy IoU matching, precision-recall
// curves, average precision (all-point or 101-point interpolation), mAP at a
// single IoU threshold or averaged over a range, and the confidence threshold
// that maximizes macro-averaged F1.
//
// Matching follows the usual convention. Within one (image, class) cell,
// predictions are visited by descending score (ties by input order); each one
// claims the still-unmatched ground truth with the highest IoU (ties by lower
// ground-truth index) when that IoU reaches the threshold, otherwise it is a
// false positive. Cells are pooled per class and re-ranked globally by
// (score desc, input order) before curves are built, so the result never
// depends on the order cells were evaluated in.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "reefeval/dataset.hpp"
#include "reefeval/error.hpp"
#include "reefeval/predictions.hpp"

namespace reefeval {

enum class Interpolation { kExact, k101Point };

inline const char* interpolation_name(Interpolation m) {
  return m == Interpolation::kExact ? "exact" : "101-point";
}

inline std::optional<Interpolation> parse_interpolation(std::string_view s) {
  if (s == "exact" || s == "all-point") return Interpolation::kExact;
  if (s == "101-point" || s == "101") return Interpolation::k101Point;
  return std::nullopt;
}

inline double iou(const PixelBox& a, const PixelBox& b) noexcept {
  const double iw = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double ih = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? std::min(1.0, inter / uni) : 0.0;
}

struct Verdict {
  std::size_t prediction = 0;         // index into the matched prediction span
  std::optional<std::size_t> gt;      // matched ground truth, none for a false positive
  double iou = 0.0;                   // IoU with the match, or best IoU seen for a false positive
  double score = 0.0;

  bool true_positive() const noexcept { return gt.has_value(); }
};

struct MatchResult {
  std::vector<Verdict> verdicts;  // descending score, ties by input order
  std::size_t n_gt = 0;

  std::size_t true_positives() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.true_positive(); }));
  }
};

// Matches the predictions of one class in one image against that image's
// ground truth of the same class.
inline MatchResult match_detections(std::span<const PixelBox> gts, std::span<const Prediction> preds,
                                    double iou_thr) {
  if (!(iou_thr > 0.0 && iou_thr <= 1.0)) throw DomainError("IoU threshold must be in (0, 1]");
  std::vector<std::size_t> order(preds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return preds[a].score > preds[b].score; });

  MatchResult r;
  r.n_gt = gts.size();
  r.verdicts.reserve(preds.size());
  std::vector<bool> taken(gts.size(), false);
  for (const std::size_t p : order) {
    Verdict v;
    v.prediction = p;
    v.score = preds[p].score;
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g]) continue;
      const double o = iou(preds[p].box, gts[g]);
      if (o > best_iou) {
        best_iou = o;
        best = g;
      }
    }
    if (best && best_iou >= iou_thr) {
      taken[*best] = true;
      v.gt = best;
    }
    v.iou = std::max(best_iou, 0.0);
    r.verdicts.push_back(v);
  }
  return r;
}

// A verdict pooled across images, keyed by the prediction's position in the
// full prediction set for tie-breaking.
struct RankedVerdict {
  double score = 0.0;
  std::size_t input_order = 0;
  bool true_positive = false;
};

struct ClassMatches {
  std::vector<RankedVerdict> verdicts;
  std::size_t n_gt = 0;
};

struct PRPoint {
  double recall = 0.0;
  double precision = 0.0;

  bool operator==(const PRPoint&) const = default;
};

struct PRCurve {
  std::vector<PRPoint> points;
  std::size_t n_gt = 0;
};

namespace detail {

inline void rank(std::vector<RankedVerdict>& v) {
  std::sort(v.begin(), v.end(), [](const RankedVerdict& a, const RankedVerdict& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.input_order < b.input_order;
  });
}

}  // namespace detail

// Cumulative precision/recall after each prediction in global rank order.
// A class without ground truth has no recall axis; asking for its curve with
// predictions present is an error (its AP is reported as undefined instead).
inline PRCurve pr_curve(ClassMatches matches) {
  if (matches.n_gt == 0 && !matches.verdicts.empty()) {
    throw DomainError("precision-recall curve undefined for a class without ground truth");
  }
  detail::rank(matches.verdicts);
  PRCurve c;
  c.n_gt = matches.n_gt;
  c.points.reserve(matches.verdicts.size());
  std::size_t tp = 0;
  std::size_t fp = 0;
  for (const auto& v : matches.verdicts) {
    (v.true_positive ? tp : fp) += 1;
    c.points.push_back({static_cast<double>(tp) / static_cast<double>(matches.n_gt),
                        static_cast<double>(tp) / static_cast<double>(tp + fp)});
  }
  return c;
}

inline PRCurve pr_curve(const MatchResult& m) {
  ClassMatches cm;
  cm.n_gt = m.n_gt;
  for (const auto& v : m.verdicts) cm.verdicts.push_back({v.score, v.prediction, v.true_positive()});
  return pr_curve(std::move(cm));
}

// exact: area under the monotone precision envelope.
// 101-point: mean envelope precision at recall 0.00, 0.01, ..., 1.00.
inline double average_precision(const PRCurve& curve, Interpolation mode) {
  const auto& pts = curve.points;
  if (pts.empty()) return 0.0;
  std::vector<double> envelope(pts.size());
  double running = 0.0;
  for (std::size_t i = pts.size(); i-- > 0;) {
    running = std::max(running, pts[i].precision);
    envelope[i] = running;
  }

  if (mode == Interpolation::kExact) {
    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      ap += (pts[i].recall - prev_recall) * envelope[i];
      prev_recall = pts[i].recall;
    }
    return std::clamp(ap, 0.0, 1.0);
  }

  double sum = 0.0;
  for (int j = 0; j <= 100; ++j) {
    const double r = j / 100.0;
    const auto it = std::lower_bound(pts.begin(), pts.end(), r,
                                     [](const PRPoint& p, double v) { return p.recall < v; });
    if (it == pts.end()) break;
    sum += envelope[static_cast<std::size_t>(it - pts.begin())];
  }
  return std::clamp(sum / 101.0, 0.0, 1.0);
}

struct ClassAp {
  ClassId class_id = 0;
  std::size_t n_gt = 0;
  std::size_t n_pred = 0;
  std::optional<double> ap;  // undefined without ground truth
};

struct ApResult {
  std::vector<std::string> families;
  std::vector<ClassAp> per_class;
  std::optional<double> map;  // mean over classes with ground truth
  std::vector<double> iou_thresholds;
  Interpolation mode = Interpolation::k101Point;
  // Set when AP was computed on predictions already cut at a confidence threshold.
  std::optional<double> score_floor;
};

// Ground truth and predictions bucketed by (image, class), validated once and
// reused for every threshold.
class EvalIndex {
 public:
  EvalIndex(const Dataset& gt, const PredictionSet& preds)
      : families_(gt.class_map.names()), n_classes_(gt.class_map.size()), n_images_(gt.images.size()) {
    std::unordered_map<std::string_view, std::size_t> image_index;
    for (std::size_t i = 0; i < gt.images.size(); ++i) image_index.emplace(gt.images[i].image_id, i);
    cells_.resize(gt.images.size() * n_classes_);
    n_gt_.assign(n_classes_, 0);
    n_pred_.assign(n_classes_, 0);

    for (std::size_t i = 0; i < gt.images.size(); ++i) {
      const auto& img = gt.images[i];
      for (const auto& b : img.boxes) {
        if (!gt.class_map.contains(b.class_id)) {
          throw DomainError("ground truth class id " + std::to_string(b.class_id) + " not in class map");
        }
        cell(i, b.class_id).gts.push_back(b.to_pixels(img.width_px, img.height_px));
        ++n_gt_[static_cast<std::size_t>(b.class_id)];
      }
    }
    for (std::size_t k = 0; k < preds.predictions.size(); ++k) {
      const auto& p = preds.predictions[k];
      const auto it = image_index.find(p.image_id);
      if (it == image_index.end()) {
        throw DomainError("prediction " + std::to_string(k + 1) + " references unknown image_id '" +
                          p.image_id + "'");
      }
      if (!gt.class_map.contains(p.class_id)) {
        throw DomainError("prediction " + std::to_string(k + 1) + " references unknown class_id " +
                          std::to_string(p.class_id));
      }
      auto& c = cell(it->second, p.class_id);
      c.preds.push_back(p);
      c.input_order.push_back(k);
      ++n_pred_[static_cast<std::size_t>(p.class_id)];
    }
  }

  std::size_t class_count() const noexcept { return n_classes_; }
  const std::vector<std::string>& families() const noexcept { return families_; }
  std::size_t n_gt(std::size_t c) const { return n_gt_.at(c); }
  std::size_t n_pred(std::size_t c) const { return n_pred_.at(c); }
  std::size_t total_gt() const {
    std::size_t n = 0;
    for (auto v : n_gt_) n += v;
    return n;
  }

  // Per-class pooled verdicts at one IoU threshold.
  std::vector<ClassMatches> match(double iou_thr) const {
    std::vector<ClassMatches> out(n_classes_);
    for (std::size_t c = 0; c < n_classes_; ++c) out[c].n_gt = n_gt_[c];
    for (std::size_t i = 0; i < n_images_; ++i) {
      for (std::size_t c = 0; c < n_classes_; ++c) {
        const auto& cl = cells_[i * n_classes_ + c];
        if (cl.preds.empty()) continue;
        const auto m = match_detections(cl.gts, cl.preds, iou_thr);
        for (const auto& v : m.verdicts) {
          out[c].verdicts.push_back({v.score, cl.input_order[v.prediction], v.true_positive()});
        }
      }
    }
    return out;
  }

 private:
  struct Cell {
    std::vector<PixelBox> gts;
    std::vector<Prediction> preds;
    std::vector<std::size_t> input_order;
  };

  Cell& cell(std::size_t image, ClassId c) { return cells_[image * n_classes_ + static_cast<std::size_t>(c)]; }

  std::vector<std::string> families_;
  std::size_t n_classes_;
  std::size_t n_images_;
  std::vector<Cell> cells_;
  std::vector<std::size_t> n_gt_;
  std::vector<std::size_t> n_pred_;
};

namespace detail {

inline ApResult ap_from_matches(const EvalIndex& idx, std::vector<ClassMatches> matches, double iou_thr,
                                Interpolation mode) {
  ApResult r;
  r.families = idx.families();
  r.iou_thresholds = {iou_thr};
  r.mode = mode;
  double sum = 0.0;
  std::size_t defined = 0;
  for (std::size_t c = 0; c < idx.class_count(); ++c) {
    ClassAp ca{static_cast<ClassId>(c), idx.n_gt(c), idx.n_pred(c), std::nullopt};
    if (ca.n_gt > 0) {
      ca.ap = average_precision(pr_curve(std::move(matches[c])), mode);
      sum += *ca.ap;
      ++defined;
    }
    r.per_class.push_back(ca);
  }
  if (defined > 0) r.map = sum / static_cast<double>(defined);
  return r;
}

}  // namespace detail

inline ApResult map_at(const EvalIndex& idx, double iou_thr, Interpolation mode = Interpolation::k101Point) {
  if (!(iou_thr > 0.0 && iou_thr <= 1.0)) throw DomainError("IoU threshold must be in (0, 1]");
  return detail::ap_from_matches(idx, idx.match(iou_thr), iou_thr, mode);
}

inline ApResult map_at(const Dataset& gt, const PredictionSet& preds, double iou_thr,
                       Interpolation mode = Interpolation::k101Point) {
  return map_at(EvalIndex(gt, preds), iou_thr, mode);
}

// start, start+step, ..., end inclusive. The last value snaps to `end` when
// within 1e-9 so float accumulation never drops the endpoint.
inline std::vector<double> iou_threshold_range(double start, double end, double step) {
  if (!(start > 0.0 && start <= end && end <= 1.0 && step > 0.0) || !std::isfinite(step)) {
    throw DomainError("empty IoU threshold set: need 0 < start <= end <= 1 and step > 0");
  }
  const auto n = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
  std::vector<double> t;
  for (std::size_t i = 0; i < n; ++i) {
    double v = start + static_cast<double>(i) * step;
    if (std::abs(v - end) < 1e-9) v = end;
    t.push_back(std::min(v, 1.0));
  }
  return t;
}

inline ApResult map_range(const EvalIndex& idx, double start = 0.5, double end = 0.95, double step = 0.05,
                          Interpolation mode = Interpolation::k101Point) {
  const auto thresholds = iou_threshold_range(start, end, step);
  ApResult acc;
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const auto r = map_at(idx, thresholds[i], mode);
    if (i == 0) {
      acc = r;
      continue;
    }
    for (std::size_t c = 0; c < acc.per_class.size(); ++c) {
      if (acc.per_class[c].ap) *acc.per_class[c].ap += *r.per_class[c].ap;
    }
    if (acc.map) *acc.map += *r.map;
  }
  const auto n = static_cast<double>(thresholds.size());
  for (auto& ca : acc.per_class) {
    if (ca.ap) *ca.ap /= n;
  }
  if (acc.map) *acc.map /= n;
  acc.iou_thresholds = thresholds;
  return acc;
}

inline ApResult map_range(const Dataset& gt, const PredictionSet& preds, double start = 0.5,
                          double end = 0.95, double step = 0.05,
                          Interpolation mode = Interpolation::k101Point) {
  return map_range(EvalIndex(gt, preds), start, end, step, mode);
}

// Predictions with score >= floor, input order preserved.
inline PredictionSet thresholded(const PredictionSet& preds, double floor) {
  PredictionSet out;
  for (const auto& p : preds.predictions) {
    if (p.score >= floor) out.predictions.push_back(p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// F1-optimal confidence threshold

inline double f1_score(double p, double r) noexcept { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

struct SweepRow {
  double threshold = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

struct ClassPRF {
  ClassId class_id = 0;
  std::size_t n_gt = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  double precision = 0.0;
  std::optional<double> recall;  // undefined without ground truth
  std::optional<double> f1;
};

struct ThresholdSweepResult {
  std::vector<std::string> families;
  double iou_threshold = 0.5;
  double best_threshold = 1.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::vector<SweepRow> table;       // candidates by descending threshold
  std::vector<ClassPRF> per_class;   // at best_threshold
};

// Candidate thresholds are the distinct prediction scores. At each, per-class
// precision TP/(TP+FP) (0 when nothing is kept) is averaged over classes that
// have ground truth or predictions; per-class recall TP/n_gt over classes with
// ground truth; F1 is taken from the two macro averages. Ties in F1 go to the
// higher threshold.
//
// Greedy matching on a score-thresholded set equals the full matching
// truncated to the kept predictions, so one matching pass serves every candidate.
inline ThresholdSweepResult f1_sweep(const EvalIndex& idx, double iou_thr) {
  if (idx.total_gt() == 0) throw DomainError("f1_sweep requires non-empty ground truth");
  const auto matches = idx.match(iou_thr);
  const std::size_t nc = idx.class_count();

  struct Item {
    double score;
    std::size_t input_order;
    std::size_t cls;
    bool tp;
  };
  std::vector<Item> all;
  for (std::size_t c = 0; c < nc; ++c) {
    for (const auto& v : matches[c].verdicts) all.push_back({v.score, v.input_order, c, v.true_positive});
  }
  std::sort(all.begin(), all.end(), [](const Item& a, const Item& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.input_order < b.input_order;
  });

  std::vector<bool> in_precision(nc, false);
  std::size_t n_prec = 0;
  std::size_t n_rec = 0;
  for (std::size_t c = 0; c < nc; ++c) {
    in_precision[c] = idx.n_gt(c) > 0 || idx.n_pred(c) > 0;
    n_prec += in_precision[c] ? 1 : 0;
    n_rec += idx.n_gt(c) > 0 ? 1 : 0;
  }

  std::vector<std::size_t> tp(nc, 0);
  std::vector<std::size_t> fp(nc, 0);
  auto per_class = [&](std::size_t c) {
    ClassPRF r;
    r.class_id = static_cast<ClassId>(c);
    r.n_gt = idx.n_gt(c);
    r.tp = tp[c];
    r.fp = fp[c];
    const auto kept = tp[c] + fp[c];
    r.precision = kept ? static_cast<double>(tp[c]) / static_cast<double>(kept) : 0.0;
    if (r.n_gt > 0) {
      r.recall = static_cast<double>(tp[c]) / static_cast<double>(r.n_gt);
      r.f1 = f1_score(r.precision, *r.recall);
    }
    return r;
  };
  auto snapshot = [&](double threshold) {
    SweepRow row;
    row.threshold = threshold;
    double psum = 0.0;
    double rsum = 0.0;
    for (std::size_t c = 0; c < nc; ++c) {
      const auto prf = per_class(c);
      if (in_precision[c]) psum += prf.precision;
      if (prf.recall) rsum += *prf.recall;
      row.tp += tp[c];
      row.fp += fp[c];
      row.fn += idx.n_gt(c) - tp[c];
    }
    row.precision = n_prec ? psum / static_cast<double>(n_prec) : 0.0;
    row.recall = n_rec ? rsum / static_cast<double>(n_rec) : 0.0;
    row.f1 = f1_score(row.precision, row.recall);
    return row;
  };

  ThresholdSweepResult r;
  r.families = idx.families();
  r.iou_threshold = iou_thr;
  std::optional<std::size_t> best;
  std::vector<ClassPRF> best_classes;
  for (std::size_t i = 0; i < all.size();) {
    const double s = all[i].score;
    for (; i < all.size() && all[i].score == s; ++i) (all[i].tp ? tp : fp)[all[i].cls] += 1;
    r.table.push_back(snapshot(s));
    if (!best || r.table.back().f1 > r.table[*best].f1) {
      best = r.table.size() - 1;
      best_classes.clear();
      for (std::size_t c = 0; c < nc; ++c) best_classes.push_back(per_class(c));
    }
  }
  if (best) {
    const auto& row = r.table[*best];
    r.best_threshold = row.threshold;
    r.precision = row.precision;
    r.recall = row.recall;
    r.f1 = row.f1;
    r.per_class = std::move(best_classes);
  } else {
    for (std::size_t c = 0; c < nc; ++c) r.per_class.push_back(per_class(c));
  }
  return r;
}

inline ThresholdSweepResult f1_sweep(const Dataset& gt, const PredictionSet& preds, double iou_thr) {
  return f1_sweep(EvalIndex(gt, preds), iou_thr);
}

// ---------------------------------------------------------------------------
// Report files

namespace detail {

inline nlohmann::ordered_json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

inline std::optional<double> opt_double(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ApResult& r) {
  nlohmann::ordered_json j;
  j["kind"] = "ap_result";
  j["interpolation"] = interpolation_name(r.mode);
  j["iou_thresholds"] = r.iou_thresholds;
  j["score_floor"] = detail::opt_json(r.score_floor);
  j["map"] = detail::opt_json(r.map);
  j["per_class"] = nlohmann::ordered_json::array();
  for (const auto& c : r.per_class) {
    nlohmann::ordered_json e;
    e["class_id"] = c.class_id;
    e["family"] = r.families.at(static_cast<std::size_t>(c.class_id));
    e["n_gt"] = c.n_gt;
    e["n_pred"] = c.n_pred;
    e["ap"] = detail::opt_json(c.ap);
    j["per_class"].push_back(std::move(e));
  }
  return j;
}

inline ApResult ap_result_from_json(const nlohmann::json& j) {
  try {
    ApResult r;
    const auto mode = parse_interpolation(j.at("interpolation").get<std::string>());
    if (!mode) throw ParseError(0, "unknown interpolation mode");
    r.mode = *mode;
    r.iou_thresholds = j.at("iou_thresholds").get<std::vector<double>>();
    r.score_floor = detail::opt_double(j.at("score_floor"));
    r.map = detail::opt_double(j.at("map"));
    for (const auto& e : j.at("per_class")) {
      ClassAp c;
      c.class_id = e.at("class_id").get<ClassId>();
      if (c.class_id != static_cast<ClassId>(r.per_class.size())) {
        throw ParseError(0, "per_class entries must be ordered by class_id from 0");
      }
      c.n_gt = e.at("n_gt").get<std::size_t>();
      c.n_pred = e.at("n_pred").get<std::size_t>();
      c.ap = detail::opt_double(e.at("ap"));
      r.families.push_back(e.at("family").get<std::string>());
      r.per_class.push_back(c);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed AP result: ") + e.what());
  }
}

inline nlohmann::ordered_json to_json(const ThresholdSweepResult& r) {
  nlohmann::ordered_json j;
  j["kind"] = "threshold_sweep";
  j["iou_threshold"] = r.iou_threshold;
  j["best_threshold"] = r.best_threshold;
  j["precision"] = r.precision;
  j["recall"] = r.recall;
  j["f1"] = r.f1;
  j["per_class"] = nlohmann::ordered_json::array();
  for (const auto& c : r.per_class) {
    nlohmann::ordered_json e;
    e["class_id"] = c.class_id;
    e["family"] = r.families.at(static_cast<std::size_t>(c.class_id));
    e["n_gt"] = c.n_gt;
    e["tp"] = c.tp;
    e["fp"] = c.fp;
    e["precision"] = c.precision;
    e["recall"] = detail::opt_json(c.recall);
    e["f1"] = detail::opt_json(c.f1);
    j["per_class"].push_back(std::move(e));
  }
  j["table"] = nlohmann::ordered_json::array();
  for (const auto& row : r.table) {
    j["table"].push_back({{"threshold", row.threshold}, {"precision", row.precision},
                          {"recall", row.recall}, {"f1", row.f1}, {"tp", row.tp},
                          {"fp", row.fp}, {"fn", row.fn}});
  }
  return j;
}

inline ThresholdSweepResult sweep_result_from_json(const nlohmann::json& j) {
  try {
    ThresholdSweepResult r;
    r.iou_threshold = j.at("iou_threshold").get<double>();
    r.best_threshold = j.at("best_threshold").get<double>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.f1 = j.at("f1").get<double>();
    for (const auto& e : j.at("per_class")) {
      ClassPRF c;
      c.class_id = e.at("class_id").get<ClassId>();
      if (c.class_id != static_cast<ClassId>(r.per_class.size())) {
        throw ParseError(0, "per_class entries must be ordered by class_id from 0");
      }
      c.n_gt = e.at("n_gt").get<std::size_t>();
      c.tp = e.at("tp").get<std::size_t>();
      c.fp = e.at("fp").get<std::size_t>();
      c.precision = e.at("precision").get<double>();
      c.recall = detail::opt_double(e.at("recall"));
      c.f1 = detail::opt_double(e.at("f1"));
      r.families.push_back(e.at("family").get<std::string>());
      r.per_class.push_back(c);
    }
    for (const auto& e : j.at("table")) {
      SweepRow row;
      row.threshold = e.at("threshold").get<double>();
      row.precision = e.at("precision").get<double>();
      row.recall = e.at("recall").get<double>();
      row.f1 = e.at("f1").get<double>();
      row.tp = e.at("tp").get<std::size_t>();
      row.fp = e.at("fp").get<std::size_t>();
      row.fn = e.at("fn").get<std::size_t>();
      r.table.push_back(row);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed threshold sweep: ") + e.what());
  }
}

}  // namespace reefeval
