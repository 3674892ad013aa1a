// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// Detector output and its line-delimited JSON interchange format:
//
//   {"image_id":"img1","class_id":0,"bbox":[x1,y1,x2,y2],"score":0.9}
//
// one object per line, pixel corner coordinates, exactly these four fields.
// Blank lines and lines starting with '#' (producer headers) are skipped.

#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "reefeval/dataset.hpp"
#include "reefeval/error.hpp"
#include "reefeval/text.hpp"

namespace reefeval {

struct Prediction {
  std::string image_id;
  ClassId class_id = 0;
  PixelBox box;
  double score = 0.0;

  bool operator==(const Prediction&) const = default;
};

struct PredictionSet {
  std::vector<Prediction> predictions;

  std::size_t size() const noexcept { return predictions.size(); }
  bool empty() const noexcept { return predictions.empty(); }
};

namespace detail {

inline Prediction prediction_from_json(const nlohmann::json& j, std::size_t lineno) {
  if (!j.is_object()) throw ParseError(lineno, "record is not a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "image_id" && key != "class_id" && key != "bbox" && key != "score") {
      throw ParseError(lineno, "unexpected field '" + key + "'");
    }
  }
  for (const char* key : {"image_id", "class_id", "bbox", "score"}) {
    if (!j.contains(key)) throw ParseError(lineno, std::string("missing field '") + key + "'");
  }

  Prediction p;
  const auto& id = j.at("image_id");
  if (!id.is_string() || id.get_ref<const std::string&>().empty()) {
    throw ParseError(lineno, "image_id must be a non-empty string");
  }
  p.image_id = id.get<std::string>();

  const auto& cls = j.at("class_id");
  if (!cls.is_number_integer()) throw ParseError(lineno, "class_id must be an integer");
  const auto cls_value = cls.get<long long>();
  if (cls_value < 0 || cls_value > 1'000'000'000) throw ParseError(lineno, "class_id out of range");
  p.class_id = static_cast<ClassId>(cls_value);

  const auto& bbox = j.at("bbox");
  if (!bbox.is_array() || bbox.size() != 4) {
    throw ParseError(lineno, "bbox must be an array of four numbers");
  }
  double c[4];
  for (std::size_t k = 0; k < 4; ++k) {
    if (!bbox[k].is_number()) throw ParseError(lineno, "bbox must be an array of four numbers");
    c[k] = bbox[k].get<double>();
    if (!std::isfinite(c[k])) throw ParseError(lineno, "bbox coordinate is not finite");
  }
  p.box = PixelBox{c[0], c[1], c[2], c[3]};
  if (!(p.box.x1 < p.box.x2)) throw ParseError(lineno, "bbox requires x1 < x2");
  if (!(p.box.y1 < p.box.y2)) throw ParseError(lineno, "bbox requires y1 < y2");

  const auto& score = j.at("score");
  if (!score.is_number()) throw ParseError(lineno, "score must be a number");
  p.score = score.get<double>();
  if (!(p.score >= 0.0 && p.score <= 1.0)) throw ParseError(lineno, "score outside [0,1]");
  return p;
}

}  // namespace detail

inline PredictionSet parse_predictions(std::string_view text) {
  PredictionSet set;
  const auto lines = text::split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto line = text::trim(lines[i]);
    if (line.empty() || line.front() == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(i + 1, std::string("invalid JSON: ") + e.what());
    }
    set.predictions.push_back(detail::prediction_from_json(j, i + 1));
  }
  return set;
}

inline std::string serialize_predictions(const PredictionSet& set) {
  std::string out;
  for (const auto& p : set.predictions) {
    nlohmann::ordered_json j;
    j["image_id"] = p.image_id;
    j["class_id"] = p.class_id;
    j["bbox"] = {p.box.x1, p.box.y1, p.box.x2, p.box.y2};
    j["score"] = p.score;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace reefeval
