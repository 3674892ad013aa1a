// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// Frame-extraction planning for transect videos. Nothing here decodes video;
// plans become command lines for an external extractor.

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "reefeval/error.hpp"
#include "reefeval/text.hpp"

namespace reefeval {

inline constexpr double kFrameIntervalS = 3.0;

struct FrameEntry {
  double timestamp_s = 0.0;
  std::int64_t frame_index = 0;

  bool operator==(const FrameEntry&) const = default;
};

struct FrameManifest {
  std::string video_id;
  double fps = 0.0;
  double duration_s = 0.0;
  double interval_s = 0.0;
  std::vector<FrameEntry> entries;

  bool operator==(const FrameManifest&) const = default;
};

// Samples t = 0, interval, 2*interval, ... for every t < duration. Frame
// indices are round-half-away-from-zero of t*fps; when two samples land on the
// same frame only the first is kept.
inline FrameManifest plan_frames(double duration_s, double fps, double interval_s = kFrameIntervalS,
                                 std::string video_id = {}) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(duration_s)) throw DomainError("duration_s must be positive");
  if (!positive(fps)) throw DomainError("fps must be positive");
  if (!positive(interval_s)) throw DomainError("interval_s must be positive");
  if (duration_s / interval_s > 1e8) throw DomainError("too many frames: duration / interval > 1e8");

  FrameManifest m{std::move(video_id), fps, duration_s, interval_s, {}};
  std::unordered_set<std::int64_t> seen;
  for (std::int64_t i = 0;; ++i) {
    const double t = static_cast<double>(i) * interval_s;
    if (!(t < duration_s)) break;
    const std::int64_t index = std::llround(t * fps);
    if (seen.insert(index).second) m.entries.push_back({t, index});
  }
  return m;
}

namespace detail {

inline std::string video_stem(std::string_view video) {
  const auto slash = video.find_last_of("/\\");
  if (slash != std::string_view::npos) video.remove_prefix(slash + 1);
  const auto dot = video.find_last_of('.');
  if (dot != std::string_view::npos && dot > 0) video = video.substr(0, dot);
  return std::string(video);
}

}  // namespace detail

// Output image name for an entry: "<video stem>_f<index, 6 digits>.jpg". The
// stem part doubles as the image_id in dataset manifests.
inline std::string frame_output_name(std::string_view video_id, std::int64_t frame_index) {
  auto idx = std::to_string(frame_index);
  if (idx.size() < 6) idx.insert(0, 6 - idx.size(), '0');
  return detail::video_stem(video_id) + "_f" + idx + ".jpg";
}

// Substitutes {video}, {timestamp} (3 decimals), {index} and {out} in the
// template once per manifest entry. Any other {...} is an error.
inline std::vector<std::string> emit_extraction_commands(const FrameManifest& m,
                                                         std::string_view tmpl) {
  enum class Field { kLiteral, kVideo, kTimestamp, kIndex, kOut };
  std::vector<std::pair<Field, std::string>> parts;
  std::size_t i = 0;
  while (i < tmpl.size()) {
    const auto open = tmpl.find('{', i);
    const auto stray = tmpl.find('}', i);
    if (stray < open) throw DomainError("unmatched '}' in command template");
    if (open == std::string_view::npos) {
      parts.emplace_back(Field::kLiteral, std::string(tmpl.substr(i)));
      break;
    }
    if (open > i) parts.emplace_back(Field::kLiteral, std::string(tmpl.substr(i, open - i)));
    const auto close = tmpl.find('}', open);
    if (close == std::string_view::npos) throw DomainError("unterminated placeholder in command template");
    const auto name = tmpl.substr(open + 1, close - open - 1);
    if (name == "video") {
      parts.emplace_back(Field::kVideo, "");
    } else if (name == "timestamp") {
      parts.emplace_back(Field::kTimestamp, "");
    } else if (name == "index") {
      parts.emplace_back(Field::kIndex, "");
    } else if (name == "out") {
      parts.emplace_back(Field::kOut, "");
    } else {
      throw DomainError("unknown placeholder {" + std::string(name) + "} in command template");
    }
    i = close + 1;
  }

  std::vector<std::string> commands;
  commands.reserve(m.entries.size());
  for (const auto& e : m.entries) {
    std::string cmd;
    for (const auto& [field, literal] : parts) {
      switch (field) {
        case Field::kLiteral: cmd += literal; break;
        case Field::kVideo: cmd += m.video_id; break;
        case Field::kTimestamp: cmd += text::format_fixed(e.timestamp_s, 3); break;
        case Field::kIndex: cmd += std::to_string(e.frame_index); break;
        case Field::kOut: cmd += frame_output_name(m.video_id, e.frame_index); break;
      }
    }
    commands.push_back(std::move(cmd));
  }
  return commands;
}

inline nlohmann::ordered_json to_json(const FrameManifest& m) {
  nlohmann::ordered_json j;
  j["video_id"] = m.video_id;
  j["fps"] = m.fps;
  j["duration_s"] = m.duration_s;
  j["interval_s"] = m.interval_s;
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& e : m.entries) {
    nlohmann::ordered_json je;
    je["timestamp_s"] = e.timestamp_s;
    je["frame_index"] = e.frame_index;
    je["out"] = frame_output_name(m.video_id, e.frame_index);
    j["entries"].push_back(std::move(je));
  }
  return j;
}

}  // namespace reefeval
