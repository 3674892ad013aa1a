// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// Domain types for annotated images: the family class map, YOLO-style
// center-normalized ground-truth boxes, image records and datasets, plus the
// plain-text class map and label file formats.
//
// Label files hold one box per line as "class_id cx cy w h" with all four
// geometry values normalized to the image. Values that stray outside [0, 1]
// by at most kUnitTolerance are clamped; anything further out is rejected.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "reefeval/error.hpp"
#include "reefeval/text.hpp"

namespace reefeval {

using ClassId = int;

inline constexpr double kUnitTolerance = 1e-6;

class FamilyClassMap {
 public:
  FamilyClassMap() = default;

  // Ids are assigned by position. Throws DomainError on empty or duplicate names.
  static FamilyClassMap from_names(std::vector<std::string> names) {
    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i].empty()) {
        throw DomainError("empty family name for class " + std::to_string(i));
      }
      if (!seen.insert(names[i]).second) {
        throw DomainError("duplicate family name '" + names[i] + "'");
      }
    }
    FamilyClassMap m;
    m.names_ = std::move(names);
    return m;
  }

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }
  bool contains(ClassId id) const noexcept {
    return id >= 0 && static_cast<std::size_t>(id) < names_.size();
  }
  const std::string& name(ClassId id) const {
    if (!contains(id)) throw DomainError("unknown class id " + std::to_string(id));
    return names_[static_cast<std::size_t>(id)];
  }
  std::optional<ClassId> find(std::string_view family) const {
    auto it = std::find(names_.begin(), names_.end(), family);
    if (it == names_.end()) return std::nullopt;
    return static_cast<ClassId>(it - names_.begin());
  }
  const std::vector<std::string>& names() const noexcept { return names_; }

  bool operator==(const FamilyClassMap&) const = default;

 private:
  std::vector<std::string> names_;
};

// One family name per line; the 0-based line index is the class id. Trailing
// blank lines are ignored.
inline FamilyClassMap parse_class_map(std::string_view text) {
  auto lines = text::split_lines(text);
  while (!lines.empty() && text::trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(0, "empty class map");

  std::vector<std::string> names;
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto name = text::trim(lines[i]);
    if (name.empty()) throw ParseError(i + 1, "empty family name");
    if (!seen.insert(name).second) {
      throw ParseError(i + 1, "duplicate family name '" + std::string(name) + "'");
    }
    names.emplace_back(name);
  }
  return FamilyClassMap::from_names(std::move(names));
}

inline std::string serialize_class_map(const FamilyClassMap& map) {
  std::string out;
  for (const auto& n : map.names()) {
    out += n;
    out += '\n';
  }
  return out;
}

// Corner-format box in pixel coordinates.
struct PixelBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const noexcept { return x2 - x1; }
  double height() const noexcept { return y2 - y1; }
  double area() const noexcept { return width() * height(); }
  bool valid() const noexcept { return x1 < x2 && y1 < y2; }

  bool operator==(const PixelBox&) const = default;
};

struct GroundTruthBox {
  ClassId class_id = 0;
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  // Corner conversion, clipped to the frame so clamped float noise never leaks
  // outside [0, W] x [0, H].
  PixelBox to_pixels(double width_px, double height_px) const noexcept {
    return PixelBox{std::max(0.0, (cx - w / 2) * width_px), std::max(0.0, (cy - h / 2) * height_px),
                    std::min(width_px, (cx + w / 2) * width_px),
                    std::min(height_px, (cy + h / 2) * height_px)};
  }

  static GroundTruthBox from_pixels(ClassId id, const PixelBox& b, double width_px,
                                    double height_px) noexcept {
    return GroundTruthBox{id, (b.x1 + b.x2) / 2 / width_px, (b.y1 + b.y2) / 2 / height_px,
                          (b.x2 - b.x1) / width_px, (b.y2 - b.y1) / height_px};
  }

  double pixel_width(double width_px) const noexcept { return w * width_px; }
  double pixel_height(double height_px) const noexcept { return h * height_px; }
  double pixel_area(double width_px, double height_px) const noexcept {
    return pixel_width(width_px) * pixel_height(height_px);
  }

  bool operator==(const GroundTruthBox&) const = default;
};

struct ImageRecord {
  std::string image_id;
  int width_px = 0;
  int height_px = 0;
  std::vector<GroundTruthBox> boxes;
  std::optional<std::string> source_video;
  std::optional<double> timestamp_s;

  bool operator==(const ImageRecord&) const = default;
};

struct Dataset {
  FamilyClassMap class_map;
  std::vector<ImageRecord> images;

  std::size_t box_count() const noexcept {
    std::size_t n = 0;
    for (const auto& img : images) n += img.boxes.size();
    return n;
  }

  const ImageRecord* find_image(std::string_view id) const {
    for (const auto& img : images) {
      if (img.image_id == id) return &img;
    }
    return nullptr;
  }

  bool operator==(const Dataset&) const = default;
};

namespace detail {

inline std::optional<double> clamp_unit(double v) {
  if (!std::isfinite(v) || v < -kUnitTolerance || v > 1.0 + kUnitTolerance) return std::nullopt;
  return std::clamp(v, 0.0, 1.0);
}

// Empty string when the box is valid, otherwise the violated invariant.
inline std::string box_violation(const GroundTruthBox& b) {
  if (b.class_id < 0) return "negative class id";
  if (!(b.cx >= 0.0 && b.cx <= 1.0 && b.cy >= 0.0 && b.cy <= 1.0)) return "center outside [0,1]";
  if (!(b.w > 0.0)) return "zero width";
  if (!(b.h > 0.0)) return "zero height";
  if (b.w > 1.0 || b.h > 1.0) return "size above 1";
  if (b.cx - b.w / 2 < -kUnitTolerance || b.cx + b.w / 2 > 1.0 + kUnitTolerance ||
      b.cy - b.h / 2 < -kUnitTolerance || b.cy + b.h / 2 > 1.0 + kUnitTolerance) {
    return "box extends outside the image";
  }
  return {};
}

}  // namespace detail

// Parses one label file for an image of the given pixel size.
inline std::vector<GroundTruthBox> parse_label_file(std::string_view text, int width_px,
                                                    int height_px) {
  if (width_px <= 0 || height_px <= 0) {
    throw DomainError("image dimensions must be positive");
  }
  std::vector<GroundTruthBox> boxes;
  const auto lines = text::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = text::trim(lines[i]);
    if (line.empty()) continue;
    const auto tok = text::split_ws(line);
    if (tok.size() != 5) {
      throw ParseError(lineno, "expected 'class_id cx cy w h', got " + std::to_string(tok.size()) +
                                   " fields");
    }
    const auto cls = text::parse_int(tok[0]);
    if (!cls) throw ParseError(lineno, "class id '" + std::string(tok[0]) + "' is not an integer");
    if (*cls < 0) throw ParseError(lineno, "negative class id");

    double v[4];
    static constexpr const char* kNames[4] = {"cx", "cy", "w", "h"};
    for (int k = 0; k < 4; ++k) {
      const auto raw = text::parse_double(tok[k + 1]);
      if (!raw) throw ParseError(lineno, std::string(kNames[k]) + " is not a number");
      const auto c = detail::clamp_unit(*raw);
      if (!c) throw ParseError(lineno, std::string(kNames[k]) + " out of range [0,1]");
      v[k] = *c;
    }
    GroundTruthBox box{static_cast<ClassId>(*cls), v[0], v[1], v[2], v[3]};
    if (auto why = detail::box_violation(box); !why.empty()) throw ParseError(lineno, why);
    if (!(box.pixel_area(width_px, height_px) > 0.0)) {
      throw ParseError(lineno, "box has zero pixel area");
    }
    boxes.push_back(box);
  }
  return boxes;
}

inline std::string serialize_label_file(const std::vector<GroundTruthBox>& boxes) {
  std::string out;
  for (const auto& b : boxes) {
    out += std::to_string(b.class_id);
    for (double v : {b.cx, b.cy, b.w, b.h}) {
      out += ' ';
      out += text::format_fixed(v, 6);
    }
    out += '\n';
  }
  return out;
}

// Checks every Dataset invariant; throws DomainError naming the first violation.
inline void validate_dataset(const Dataset& d) {
  std::unordered_set<std::string_view> ids;
  for (const auto& img : d.images) {
    if (img.image_id.empty()) throw DomainError("image with empty image_id");
    if (!ids.insert(img.image_id).second) {
      throw DomainError("duplicate image_id '" + img.image_id + "'");
    }
    if (img.width_px <= 0 || img.height_px <= 0) {
      throw DomainError("image '" + img.image_id + "' has non-positive dimensions");
    }
    if (img.timestamp_s && !(*img.timestamp_s >= 0.0)) {
      throw DomainError("image '" + img.image_id + "' has a negative timestamp");
    }
    for (std::size_t i = 0; i < img.boxes.size(); ++i) {
      const auto& b = img.boxes[i];
      if (auto why = detail::box_violation(b); !why.empty()) {
        throw DomainError("image '" + img.image_id + "' box " + std::to_string(i) + ": " + why);
      }
      if (!d.class_map.contains(b.class_id)) {
        throw DomainError("image '" + img.image_id + "' box " + std::to_string(i) +
                          ": class id " + std::to_string(b.class_id) + " not in class map");
      }
    }
  }
}

struct FamilyHistogram {
  struct Entry {
    ClassId class_id = 0;
    std::string family;
    std::size_t count = 0;
    double share = 0.0;
  };
  // Families with at least one instance, by descending count then class id.
  std::vector<Entry> entries;
  std::size_t total = 0;
  std::size_t image_count = 0;
};

inline FamilyHistogram dataset_stats(const Dataset& d) {
  std::vector<std::size_t> counts(d.class_map.size(), 0);
  FamilyHistogram h;
  h.image_count = d.images.size();
  for (const auto& img : d.images) {
    for (const auto& b : img.boxes) {
      ++counts.at(static_cast<std::size_t>(b.class_id));
      ++h.total;
    }
  }
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) continue;
    const auto id = static_cast<ClassId>(c);
    h.entries.push_back({id, d.class_map.name(id), counts[c],
                         static_cast<double>(counts[c]) / static_cast<double>(h.total)});
  }
  std::stable_sort(h.entries.begin(), h.entries.end(),
                   [](const auto& a, const auto& b) { return a.count > b.count; });
  return h;
}

}  // namespace reefeval
