// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dataset configurations, annotation-rule validation, class remapping and
// deterministic train/val/test or k-fold splits.
//
// Every filter is a subset operation over a CuratedDataset: boxes survive
// unchanged except for class id remapping, images left without boxes are
// dropped, and the plan accumulates so that chained filters describe the
// whole path back to the source dataset.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "reefeval/dataset.hpp"
#include "reefeval/error.hpp"
#include "reefeval/text.hpp"

namespace reefeval {

inline constexpr std::size_t kTopFamiliesK = 10;
inline constexpr double kMinAreaPx2 = 500.0;
inline constexpr double kMinSidePx = 100.0;

struct CurationPlan {
  // Applied operations in order, e.g. {"top_k=10", "min_area_px2=500"}.
  std::vector<std::string> steps;
  // Source class ids that survive; position is the new class id.
  std::vector<ClassId> kept_class_ids;
  std::optional<double> min_area_px2;
  std::optional<double> min_side_px;
  // Source id -> new id.
  std::map<ClassId, ClassId> id_remap;

  bool operator==(const CurationPlan&) const = default;
};

struct CuratedDataset {
  Dataset dataset;
  CurationPlan plan;
  std::size_t dropped_boxes = 0;
  std::size_t dropped_images = 0;
  std::size_t source_boxes = 0;
  std::size_t source_images = 0;

  // Wraps an uncurated dataset with an identity plan.
  static CuratedDataset identity(Dataset d) {
    CuratedDataset c;
    for (std::size_t i = 0; i < d.class_map.size(); ++i) {
      const auto id = static_cast<ClassId>(i);
      c.plan.kept_class_ids.push_back(id);
      c.plan.id_remap[id] = id;
    }
    c.source_boxes = d.box_count();
    c.source_images = d.images.size();
    c.dataset = std::move(d);
    return c;
  }
};

namespace detail {

// Boundary comparisons tolerate float noise from normalized -> pixel conversion,
// so a box computed at exactly the threshold is kept.
inline bool below_threshold(double value, double threshold) {
  return value < threshold - 1e-9 * std::max(1.0, threshold);
}

inline double longer_side_px(const GroundTruthBox& b, const ImageRecord& img) {
  return std::max(b.pixel_width(img.width_px), b.pixel_height(img.height_px));
}

// Applies a class selection (`keep` lists current ids in new-id order; empty
// means keep all with identity ids) and a per-box predicate.
template <typename BoxPredicate>
CuratedDataset apply_filter(const CuratedDataset& in, const std::vector<ClassId>* keep,
                            BoxPredicate&& keep_box, std::string step) {
  const auto& src = in.dataset;
  std::vector<ClassId> remap(src.class_map.size(), -1);
  CuratedDataset out;
  out.plan = in.plan;
  out.plan.steps.push_back(std::move(step));
  out.source_boxes = in.source_boxes;
  out.source_images = in.source_images;
  out.dropped_boxes = in.dropped_boxes;
  out.dropped_images = in.dropped_images;

  if (keep != nullptr) {
    std::vector<std::string> names;
    std::vector<ClassId> kept_source;
    for (std::size_t i = 0; i < keep->size(); ++i) {
      const ClassId cur = (*keep)[i];
      remap[static_cast<std::size_t>(cur)] = static_cast<ClassId>(i);
      names.push_back(src.class_map.name(cur));
      kept_source.push_back(in.plan.kept_class_ids.at(static_cast<std::size_t>(cur)));
    }
    out.dataset.class_map = FamilyClassMap::from_names(std::move(names));
    out.plan.kept_class_ids = kept_source;
    out.plan.id_remap.clear();
    for (std::size_t i = 0; i < kept_source.size(); ++i) {
      out.plan.id_remap[kept_source[i]] = static_cast<ClassId>(i);
    }
  } else {
    for (std::size_t i = 0; i < remap.size(); ++i) remap[i] = static_cast<ClassId>(i);
    out.dataset.class_map = src.class_map;
  }

  for (const auto& img : src.images) {
    ImageRecord kept = img;
    kept.boxes.clear();
    for (const auto& b : img.boxes) {
      const ClassId nid = remap[static_cast<std::size_t>(b.class_id)];
      if (nid < 0 || !keep_box(b, img)) {
        ++out.dropped_boxes;
        continue;
      }
      GroundTruthBox nb = b;
      nb.class_id = nid;
      kept.boxes.push_back(nb);
    }
    if (kept.boxes.empty()) {
      ++out.dropped_images;
      continue;
    }
    out.dataset.images.push_back(std::move(kept));
  }
  return out;
}

inline std::vector<std::size_t> class_counts(const Dataset& d) {
  std::vector<std::size_t> counts(d.class_map.size(), 0);
  for (const auto& img : d.images) {
    for (const auto& b : img.boxes) ++counts.at(static_cast<std::size_t>(b.class_id));
  }
  return counts;
}

inline void require_threshold(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) {
    throw DomainError(std::string(what) + " must be a finite non-negative number");
  }
}

}  // namespace detail

// Keeps the given classes, renumbered 0..K-1 in the order listed.
inline CuratedDataset remap_classes(const CuratedDataset& in, const std::vector<ClassId>& keep) {
  if (keep.empty()) throw DomainError("remap_classes: keep list is empty");
  std::vector<bool> seen(in.dataset.class_map.size(), false);
  std::string step = "keep=";
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const ClassId id = keep[i];
    if (!in.dataset.class_map.contains(id)) {
      throw DomainError("remap_classes: unknown class id " + std::to_string(id));
    }
    if (seen[static_cast<std::size_t>(id)]) {
      throw DomainError("remap_classes: duplicate class id " + std::to_string(id));
    }
    seen[static_cast<std::size_t>(id)] = true;
    step += (i ? "," : "") + std::to_string(id);
  }
  return detail::apply_filter(
      in, &keep, [](const GroundTruthBox&, const ImageRecord&) { return true; }, std::move(step));
}

inline CuratedDataset remap_classes(const Dataset& d, const std::vector<ClassId>& keep) {
  return remap_classes(CuratedDataset::identity(d), keep);
}

// Keeps the k most abundant families (ties by lower class id). Surviving
// classes keep their relative order, so k = all present classes is the identity.
inline CuratedDataset top_k_families(const CuratedDataset& in, std::size_t k) {
  const auto counts = detail::class_counts(in.dataset);
  const auto present =
      static_cast<std::size_t>(std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }));
  if (k < 1 || k > present) {
    throw DomainError("top_k_families: k=" + std::to_string(k) + " outside [1, " +
                      std::to_string(present) + "] (classes with instances)");
  }
  std::vector<ClassId> order(counts.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<ClassId>(i);
  std::stable_sort(order.begin(), order.end(), [&](ClassId a, ClassId b) {
    return counts[static_cast<std::size_t>(a)] > counts[static_cast<std::size_t>(b)];
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return detail::apply_filter(
      in, &order, [](const GroundTruthBox&, const ImageRecord&) { return true; },
      "top_k=" + std::to_string(k));
}

inline CuratedDataset top_k_families(const Dataset& d, std::size_t k) {
  return top_k_families(CuratedDataset::identity(d), k);
}

// Drops boxes whose pixel area is below the threshold; equal area is kept.
inline CuratedDataset filter_min_area(const CuratedDataset& in, double min_area_px2) {
  detail::require_threshold(min_area_px2, "min_area_px2");
  auto out = detail::apply_filter(
      in, nullptr,
      [&](const GroundTruthBox& b, const ImageRecord& img) {
        return !detail::below_threshold(b.pixel_area(img.width_px, img.height_px), min_area_px2);
      },
      "min_area_px2=" + text::format_shortest(min_area_px2));
  out.plan.min_area_px2 = std::max(in.plan.min_area_px2.value_or(0.0), min_area_px2);
  return out;
}

inline CuratedDataset filter_min_area(const Dataset& d, double min_area_px2) {
  return filter_min_area(CuratedDataset::identity(d), min_area_px2);
}

// Drops boxes whose longer pixel side is below the threshold.
inline CuratedDataset filter_min_side(const CuratedDataset& in, double min_side_px) {
  detail::require_threshold(min_side_px, "min_side_px");
  auto out = detail::apply_filter(
      in, nullptr,
      [&](const GroundTruthBox& b, const ImageRecord& img) {
        return !detail::below_threshold(detail::longer_side_px(b, img), min_side_px);
      },
      "min_side_px=" + text::format_shortest(min_side_px));
  out.plan.min_side_px = std::max(in.plan.min_side_px.value_or(0.0), min_side_px);
  return out;
}

inline CuratedDataset filter_min_side(const Dataset& d, double min_side_px) {
  return filter_min_side(CuratedDataset::identity(d), min_side_px);
}

enum class ConfigPreset { A, B, C };

inline std::optional<ConfigPreset> parse_config_preset(std::string_view s) {
  if (s == "A" || s == "a") return ConfigPreset::A;
  if (s == "B" || s == "b") return ConfigPreset::B;
  if (s == "C" || s == "c") return ConfigPreset::C;
  return std::nullopt;
}

// A: all families. B: the ten most abundant. C: B followed by the 500 px^2 area filter.
inline CuratedDataset apply_preset(const CuratedDataset& in, ConfigPreset preset) {
  switch (preset) {
    case ConfigPreset::A:
      return in;
    case ConfigPreset::B:
      return top_k_families(in, kTopFamiliesK);
    case ConfigPreset::C:
      return filter_min_area(top_k_families(in, kTopFamiliesK), kMinAreaPx2);
  }
  return in;
}

inline CuratedDataset apply_preset(const Dataset& d, ConfigPreset preset) {
  return apply_preset(CuratedDataset::identity(d), preset);
}

inline nlohmann::ordered_json to_json(const CuratedDataset& c) {
  nlohmann::ordered_json j;
  j["steps"] = c.plan.steps;
  j["kept_class_ids"] = c.plan.kept_class_ids;
  j["kept_families"] = c.dataset.class_map.names();
  nlohmann::ordered_json remap = nlohmann::ordered_json::object();
  for (const auto& [from, to] : c.plan.id_remap) remap[std::to_string(from)] = to;
  j["id_remap"] = remap;
  j["min_area_px2"] = c.plan.min_area_px2 ? nlohmann::ordered_json(*c.plan.min_area_px2) : nullptr;
  j["min_side_px"] = c.plan.min_side_px ? nlohmann::ordered_json(*c.plan.min_side_px) : nullptr;
  j["source_images"] = c.source_images;
  j["source_boxes"] = c.source_boxes;
  j["images"] = c.dataset.images.size();
  j["boxes"] = c.dataset.box_count();
  j["dropped_images"] = c.dropped_images;
  j["dropped_boxes"] = c.dropped_boxes;
  return j;
}

// Restores the curation state recorded next to a previously curated dataset so
// further filters extend its plan.
inline CuratedDataset curated_from_json(Dataset d, const nlohmann::json& j) {
  try {
    CuratedDataset c;
    c.plan.steps = j.at("steps").get<std::vector<std::string>>();
    c.plan.kept_class_ids = j.at("kept_class_ids").get<std::vector<ClassId>>();
    for (const auto& [from, to] : j.at("id_remap").items()) {
      c.plan.id_remap[std::stoi(from)] = to.get<ClassId>();
    }
    if (!j.at("min_area_px2").is_null()) c.plan.min_area_px2 = j.at("min_area_px2").get<double>();
    if (!j.at("min_side_px").is_null()) c.plan.min_side_px = j.at("min_side_px").get<double>();
    c.source_images = j.at("source_images").get<std::size_t>();
    c.source_boxes = j.at("source_boxes").get<std::size_t>();
    c.dropped_images = j.at("dropped_images").get<std::size_t>();
    c.dropped_boxes = j.at("dropped_boxes").get<std::size_t>();
    if (c.plan.kept_class_ids.size() != d.class_map.size()) {
      throw DomainError("curation plan lists " + std::to_string(c.plan.kept_class_ids.size()) +
                        " classes but the class map has " + std::to_string(d.class_map.size()));
    }
    c.dataset = std::move(d);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed curation plan: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Annotation rules

struct ValidationReport {
  struct Violation {
    std::string image_id;
    std::size_t box_index = 0;
    ClassId class_id = 0;
    double width_px = 0.0;
    double height_px = 0.0;
    double longer_side_px = 0.0;
  };
  double min_side_px = kMinSidePx;
  std::size_t boxes_checked = 0;
  std::vector<Violation> violations;
};

// Flags every box whose longer pixel side is below `min_side_px`.
inline ValidationReport validate_annotation_rules(const Dataset& d, double min_side_px = kMinSidePx) {
  detail::require_threshold(min_side_px, "min_side_px");
  ValidationReport r;
  r.min_side_px = min_side_px;
  for (const auto& img : d.images) {
    for (std::size_t i = 0; i < img.boxes.size(); ++i) {
      const auto& b = img.boxes[i];
      ++r.boxes_checked;
      const double side = detail::longer_side_px(b, img);
      if (detail::below_threshold(side, min_side_px)) {
        r.violations.push_back({img.image_id, i, b.class_id, b.pixel_width(img.width_px),
                                b.pixel_height(img.height_px), side});
      }
    }
  }
  return r;
}

inline nlohmann::ordered_json to_json(const ValidationReport& r) {
  nlohmann::ordered_json j;
  j["rule"] = "longer_side_px >= min_side_px";
  j["min_side_px"] = r.min_side_px;
  j["boxes_checked"] = r.boxes_checked;
  j["violation_count"] = r.violations.size();
  j["violations"] = nlohmann::ordered_json::array();
  for (const auto& v : r.violations) {
    nlohmann::ordered_json e;
    e["image_id"] = v.image_id;
    e["box_index"] = v.box_index;
    e["class_id"] = v.class_id;
    e["width_px"] = v.width_px;
    e["height_px"] = v.height_px;
    e["longer_side_px"] = v.longer_side_px;
    j["violations"].push_back(std::move(e));
  }
  return j;
}

// ---------------------------------------------------------------------------
// Splits

enum class Partition : int { kTrain = 0, kVal = 1, kTest = 2 };

inline const char* partition_name(int p) {
  switch (p) {
    case 0: return "train";
    case 1: return "val";
    case 2: return "test";
  }
  return "?";
}

struct SplitAssignment {
  enum class Mode { kRatio, kFold };
  Mode mode = Mode::kRatio;
  std::uint64_t seed = 0;
  std::array<double, 3> ratios{};  // kRatio only
  std::size_t k = 0;               // kFold only
  // (image_id, partition index or fold index) in dataset image order.
  std::vector<std::pair<std::string, int>> assignment;

  std::size_t group_count() const noexcept { return mode == Mode::kRatio ? 3 : k; }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s(group_count(), 0);
    for (const auto& [_, g] : assignment) ++s.at(static_cast<std::size_t>(g));
    return s;
  }

  bool operator==(const SplitAssignment&) const = default;
};

namespace detail {

// Dominant family: most instances, ties by lower class id. Images without boxes
// sort after every family.
inline int dominant_family(const ImageRecord& img, std::size_t n_classes) {
  if (img.boxes.empty()) return std::numeric_limits<int>::max();
  std::vector<std::size_t> c(n_classes, 0);
  for (const auto& b : img.boxes) ++c.at(static_cast<std::size_t>(b.class_id));
  return static_cast<int>(std::max_element(c.begin(), c.end()) - c.begin());
}

// Seeded shuffle followed by a stable sort on dominant family, so images of a
// family are contiguous and randomly ordered within it. mt19937_64 output is
// fixed by the standard, and the Fisher-Yates step avoids the
// implementation-defined std::shuffle, keeping results identical across platforms.
inline std::vector<std::size_t> stratified_order(const Dataset& d, std::uint64_t seed,
                                                 std::vector<int>& family_of) {
  const std::size_t n = d.images.size();
  family_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) family_of[i] = dominant_family(d.images[i], d.class_map.size());
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return family_of[a] < family_of[b]; });
  return order;
}

}  // namespace detail

// Partition sizes by largest-remainder rounding of ratio * n (ties to the
// earlier partition).
inline std::array<std::size_t, 3> split_sizes(std::size_t n, const std::array<double, 3>& ratios) {
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> frac{};
  std::size_t assigned = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    const double quota = ratios[p] * static_cast<double>(n);
    sizes[p] = static_cast<std::size_t>(std::floor(quota));
    frac[p] = quota - std::floor(quota);
    assigned += sizes[p];
  }
  std::array<std::size_t, 3> by_frac{0, 1, 2};
  std::stable_sort(by_frac.begin(), by_frac.end(), [&](auto a, auto b) { return frac[a] > frac[b]; });
  for (std::size_t i = 0; assigned < n; i = (i + 1) % 3) {
    ++sizes[by_frac[i]];
    ++assigned;
  }
  while (assigned > n) {  // only reachable through rounding noise in ratio sums
    for (auto p : {2, 1, 0}) {
      if (sizes[static_cast<std::size_t>(p)] > 0 && assigned > n) {
        --sizes[static_cast<std::size_t>(p)];
        --assigned;
      }
    }
  }
  return sizes;
}

// Image-level train/val/test split, stratified by dominant family.
inline SplitAssignment split(const Dataset& d, const std::array<double, 3>& ratios,
                             std::uint64_t seed) {
  double sum = 0.0;
  for (double r : ratios) {
    if (!std::isfinite(r) || r < 0.0) throw DomainError("split ratios must be non-negative");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw DomainError("split ratios sum to " + text::format_shortest(sum) + ", expected 1");
  }

  const std::size_t n = d.images.size();
  const auto sizes = split_sizes(n, ratios);
  std::array<double, 3> target{};
  for (std::size_t p = 0; p < 3; ++p) {
    target[p] = n ? static_cast<double>(sizes[p]) / static_cast<double>(n) : 0.0;
  }

  std::vector<int> family_of;
  const auto order = detail::stratified_order(d, seed, family_of);

  SplitAssignment out;
  out.mode = SplitAssignment::Mode::kRatio;
  out.seed = seed;
  out.ratios = ratios;
  std::vector<int> part(n, 0);
  std::array<std::size_t, 3> remaining = sizes;
  std::map<int, std::array<std::size_t, 3>> per_family;
  std::map<int, std::size_t> seen;

  // Deal each image to the partition furthest below its share of the family
  // seen so far, among partitions with room left.
  for (const std::size_t idx : order) {
    const int fam = family_of[idx];
    const double seen_f = static_cast<double>(++seen[fam]);
    auto& assigned = per_family[fam];
    int best = -1;
    double best_deficit = -std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < 3; ++p) {
      if (remaining[p] == 0) continue;
      const double deficit = target[p] * seen_f - static_cast<double>(assigned[p]);
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = static_cast<int>(p);
      }
    }
    const auto b = static_cast<std::size_t>(best);
    --remaining[b];
    ++assigned[b];
    part[idx] = best;
  }

  for (std::size_t i = 0; i < n; ++i) out.assignment.emplace_back(d.images[i].image_id, part[i]);
  return out;
}

// k folds whose sizes differ by at most one, dealt round-robin over the
// family-stratified order.
inline SplitAssignment k_fold(const Dataset& d, std::size_t k, std::uint64_t seed) {
  const std::size_t n = d.images.size();
  if (k < 2 || k > n) {
    throw DomainError("k_fold: k=" + std::to_string(k) + " outside [2, " + std::to_string(n) + "]");
  }
  std::vector<int> family_of;
  const auto order = detail::stratified_order(d, seed, family_of);
  std::vector<int> fold(n, 0);
  for (std::size_t pos = 0; pos < n; ++pos) fold[order[pos]] = static_cast<int>(pos % k);

  SplitAssignment out;
  out.mode = SplitAssignment::Mode::kFold;
  out.seed = seed;
  out.k = k;
  for (std::size_t i = 0; i < n; ++i) out.assignment.emplace_back(d.images[i].image_id, fold[i]);
  return out;
}

inline nlohmann::ordered_json to_json(const SplitAssignment& s) {
  nlohmann::ordered_json j;
  const bool ratio = s.mode == SplitAssignment::Mode::kRatio;
  j["mode"] = ratio ? "ratio" : "k_fold";
  j["seed"] = s.seed;
  if (ratio) {
    j["ratios"] = s.ratios;
  } else {
    j["k"] = s.k;
  }
  j["sizes"] = s.sizes();
  j["assignment"] = nlohmann::ordered_json::array();
  for (const auto& [id, g] : s.assignment) {
    nlohmann::ordered_json e;
    e["image_id"] = id;
    if (ratio) {
      e["partition"] = partition_name(g);
    } else {
      e["fold"] = g;
    }
    j["assignment"].push_back(std::move(e));
  }
  return j;
}

}  // namespace reefeval
