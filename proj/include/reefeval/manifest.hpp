// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// Dataset manifest: line-delimited JSON, one image per line,
//
//   {"image_id":"t01_f000090","width_px":5312,"height_px":2988,
//    "label_path":"labels/t01_f000090.txt","source_video":"t01.mp4","timestamp_s":3.0}
//
// source_video and timestamp_s are optional. label_path is resolved relative to
// the manifest's directory. The class map lives in a plain text file, by default
// classes.txt next to the manifest.

#pragma once

#include <cctype>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reefeval/dataset.hpp"
#include "reefeval/error.hpp"
#include "reefeval/io.hpp"
#include "reefeval/text.hpp"

namespace reefeval {

struct ManifestEntry {
  std::string image_id;
  int width_px = 0;
  int height_px = 0;
  std::string label_path;
  std::optional<std::string> source_video;
  std::optional<double> timestamp_s;
};

inline std::vector<ManifestEntry> parse_manifest(std::string_view text) {
  std::vector<ManifestEntry> entries;
  const auto lines = text::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = text::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(lineno, std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError(lineno, "record is not a JSON object");

    ManifestEntry e;
    auto require_string = [&](const char* key) {
      if (!j.contains(key) || !j[key].is_string() || j[key].get_ref<const std::string&>().empty()) {
        throw ParseError(lineno, std::string("'") + key + "' must be a non-empty string");
      }
      return j[key].get<std::string>();
    };
    auto require_dim = [&](const char* key) {
      if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() <= 0 ||
          j[key].get<long long>() > 1'000'000) {
        throw ParseError(lineno, std::string("'") + key + "' must be a positive integer");
      }
      return static_cast<int>(j[key].get<long long>());
    };
    e.image_id = require_string("image_id");
    e.width_px = require_dim("width_px");
    e.height_px = require_dim("height_px");
    e.label_path = require_string("label_path");
    if (j.contains("source_video") && !j["source_video"].is_null()) {
      if (!j["source_video"].is_string()) throw ParseError(lineno, "'source_video' must be a string");
      e.source_video = j["source_video"].get<std::string>();
    }
    if (j.contains("timestamp_s") && !j["timestamp_s"].is_null()) {
      if (!j["timestamp_s"].is_number() || j["timestamp_s"].get<double>() < 0.0) {
        throw ParseError(lineno, "'timestamp_s' must be a non-negative number");
      }
      e.timestamp_s = j["timestamp_s"].get<double>();
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

inline std::string serialize_manifest(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    nlohmann::ordered_json j;
    j["image_id"] = e.image_id;
    j["width_px"] = e.width_px;
    j["height_px"] = e.height_px;
    j["label_path"] = e.label_path;
    if (e.source_video) j["source_video"] = *e.source_video;
    if (e.timestamp_s) j["timestamp_s"] = *e.timestamp_s;
    out += j.dump();
    out += '\n';
  }
  return out;
}

// Reads a manifest, its label files and the class map into a validated Dataset.
inline Dataset load_dataset(const std::filesystem::path& manifest_path,
                            std::optional<std::filesystem::path> class_map_path = std::nullopt) {
  const auto base = manifest_path.parent_path();
  const auto classes = class_map_path.value_or(base / "classes.txt");

  std::vector<ManifestEntry> entries;
  try {
    entries = parse_manifest(io::read_file(manifest_path));
  } catch (const ParseError& e) {
    throw ParseError(0, manifest_path.string() + ": " + e.what());
  }

  Dataset d;
  try {
    d.class_map = parse_class_map(io::read_file(classes));
  } catch (const ParseError& e) {
    throw ParseError(0, classes.string() + ": " + e.what());
  }

  for (auto& e : entries) {
    const std::filesystem::path label(e.label_path);
    const auto resolved = label.is_absolute() ? label : base / label;
    ImageRecord img;
    img.image_id = std::move(e.image_id);
    img.width_px = e.width_px;
    img.height_px = e.height_px;
    img.source_video = std::move(e.source_video);
    img.timestamp_s = e.timestamp_s;
    try {
      img.boxes = parse_label_file(io::read_file(resolved), img.width_px, img.height_px);
    } catch (const ParseError& err) {
      throw ParseError(0, resolved.string() + ": " + err.what());
    }
    d.images.push_back(std::move(img));
  }
  validate_dataset(d);
  return d;
}

// File name for an image's label file: the id with anything outside
// [A-Za-z0-9._-] replaced by '_', disambiguated by a numeric suffix on clashes.
inline std::vector<std::string> label_file_names(const Dataset& d) {
  std::vector<std::string> names;
  std::set<std::string> used;
  for (const auto& img : d.images) {
    std::string stem;
    for (char c : img.image_id) {
      const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
      stem += ok ? c : '_';
    }
    std::string name = stem + ".txt";
    for (int n = 1; used.count(name) != 0; ++n) name = stem + "~" + std::to_string(n) + ".txt";
    used.insert(name);
    names.push_back(std::move(name));
  }
  return names;
}

// Manifest, class map and label files for `d`, ready for io::write_directory_atomic.
inline io::FileBundle dataset_bundle(const Dataset& d) {
  io::FileBundle files;
  const auto names = label_file_names(d);
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    const auto& img = d.images[i];
    entries.push_back({img.image_id, img.width_px, img.height_px, "labels/" + names[i],
                       img.source_video, img.timestamp_s});
  }
  files.emplace_back("manifest.jsonl", serialize_manifest(entries));
  files.emplace_back("classes.txt", serialize_class_map(d.class_map));
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    files.emplace_back("labels/" + names[i], serialize_label_file(d.images[i].boxes));
  }
  return files;
}

}  // namespace reefeval
