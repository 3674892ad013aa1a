// Copyright 2026 The reefeval Authors
// SPDX-License-Identifier: Apache-2.0
//
// Text and CSV rendering for configuration comparisons, per-family results and
// instance histograms. All numbers go through text::format_fixed, so output is
// locale-independent and fixed at three decimals.

#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "reefeval/dataset.hpp"
#include "reefeval/error.hpp"
#include "reefeval/eval.hpp"
#include "reefeval/text.hpp"

namespace reefeval {

inline constexpr int kReportDecimals = 3;

struct ConfigMetrics {
  std::string name;
  std::string dataset_label;
  double precision = 0.0;
  double recall = 0.0;
  double map50 = 0.0;
  double map5095 = 0.0;

  bool operator==(const ConfigMetrics&) const = default;
};

inline void validate_config_metrics(const ConfigMetrics& m) {
  for (double v : {m.precision, m.recall, m.map50, m.map5095}) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw DomainError("metrics of '" + m.name + "' must lie in [0,1]");
    }
  }
}

// Headline row from an evaluation: P/R at the F1-optimal threshold, mAP from
// the single-threshold and ranged results.
inline ConfigMetrics config_metrics_from(std::string name, std::string dataset_label,
                                         const ApResult& map50, const ApResult& map5095,
                                         const ThresholdSweepResult& sweep) {
  ConfigMetrics m{std::move(name), std::move(dataset_label), sweep.precision, sweep.recall,
                  map50.map.value_or(0.0), map5095.map.value_or(0.0)};
  validate_config_metrics(m);
  return m;
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180 quoting)

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += csv_field(fields[i]);
  }
  out += '\n';
  return out;
}

inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_open = false;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    row_open = true;
    if (c == '"') {
      if (!field.empty()) throw ParseError(line, "quote inside unquoted CSV field");
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
      row_open = false;
      ++line;
    } else {
      field += c;
    }
  }
  if (quoted) throw ParseError(line, "unterminated quoted CSV field");
  if (row_open) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Configuration comparison

inline const std::array<std::string, 6>& comparison_columns() {
  static const std::array<std::string, 6> cols = {"Model",  "Dataset", "Precision",
                                                  "Recall", "mAP@0.5", "mAP@0.5:0.95"};
  return cols;
}

struct RenderedTable {
  std::string text;
  std::string csv;
};

inline RenderedTable render_comparison_table(const std::vector<ConfigMetrics>& rows) {
  if (rows.empty()) throw DomainError("comparison table needs at least one row");
  const auto& cols = comparison_columns();

  std::vector<std::vector<std::string>> cells;
  cells.emplace_back(cols.begin(), cols.end());
  for (const auto& r : rows) {
    validate_config_metrics(r);
    cells.push_back({r.name, r.dataset_label, text::format_fixed(r.precision, kReportDecimals),
                     text::format_fixed(r.recall, kReportDecimals),
                     text::format_fixed(r.map50, kReportDecimals),
                     text::format_fixed(r.map5095, kReportDecimals)});
  }

  std::array<std::size_t, 6> width{};
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], text::display_width(row[c]));
  }

  RenderedTable out;
  auto emit = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      const auto pad = width[c] - text::display_width(row[c]);
      if (c >= 2) line.append(pad, ' ');  // numbers right-aligned
      line += row[c];
      if (c < 2) line.append(pad, ' ');
      if (c + 1 < row.size()) line += "  ";
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out.text += line + '\n';
  };
  emit(cells.front());
  std::size_t total = 0;
  for (auto w : width) total += w;
  out.text += std::string(total + 2 * (width.size() - 1), '-') + '\n';
  for (std::size_t i = 1; i < cells.size(); ++i) emit(cells[i]);

  for (const auto& row : cells) out.csv += csv_row(row);
  return out;
}

// Inverse of the CSV half of render_comparison_table.
inline std::vector<ConfigMetrics> parse_comparison_csv(std::string_view csv) {
  const auto rows = parse_csv(csv);
  if (rows.empty()) throw ParseError(0, "empty comparison CSV");
  const auto& cols = comparison_columns();
  if (rows.front() != std::vector<std::string>(cols.begin(), cols.end())) {
    throw ParseError(1, "unexpected comparison CSV header");
  }
  std::vector<ConfigMetrics> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() == 1 && r[0].empty()) continue;
    if (r.size() != cols.size()) throw ParseError(i + 1, "expected 6 columns");
    ConfigMetrics m{r[0], r[1]};
    double* dst[4] = {&m.precision, &m.recall, &m.map50, &m.map5095};
    for (std::size_t k = 0; k < 4; ++k) {
      const auto v = text::parse_double(r[k + 2]);
      if (!v) throw ParseError(i + 1, "non-numeric metric '" + r[k + 2] + "'");
      *dst[k] = *v;
    }
    validate_config_metrics(m);
    out.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Per-family views

inline std::string render_family_histogram(const FamilyHistogram& h) {
  std::string out = csv_row({"family", "count", "share"});
  for (const auto& e : h.entries) {
    out += csv_row({e.family, std::to_string(e.count), text::format_fixed(e.share, kReportDecimals)});
  }
  return out;
}

// Per-family AP, best first; families without ground truth ("n/a") last. With a
// sweep, adds precision/recall/F1 at its F1-optimal threshold.
inline std::string render_per_class_report(const ApResult& r,
                                           const std::optional<ThresholdSweepResult>& sweep = std::nullopt) {
  if (r.families.size() != r.per_class.size()) {
    throw DomainError("AP result lists " + std::to_string(r.families.size()) + " families but " +
                      std::to_string(r.per_class.size()) + " per-class entries");
  }
  if (sweep && (sweep->families != r.families || sweep->per_class.size() != r.per_class.size())) {
    throw DomainError("class maps of AP result and threshold sweep differ");
  }

  std::vector<std::string> header = {"class_id", "family", "n_gt", "n_pred", "ap"};
  if (sweep) {
    for (const char* c : {"precision", "recall", "f1"}) header.emplace_back(c);
  }
  std::string out = csv_row(header);

  std::vector<std::size_t> order(r.per_class.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = r.per_class[a].ap;
    const auto& y = r.per_class[b].ap;
    if (x.has_value() != y.has_value()) return x.has_value();
    return x && *x > *y;
  });

  auto fmt = [](const std::optional<double>& v) {
    return v ? text::format_fixed(*v, kReportDecimals) : std::string("n/a");
  };
  for (const std::size_t i : order) {
    const auto& c = r.per_class[i];
    std::vector<std::string> row = {std::to_string(c.class_id), r.families[i], std::to_string(c.n_gt),
                                    std::to_string(c.n_pred), fmt(c.ap)};
    if (sweep) {
      const auto& s = sweep->per_class[i];
      row.push_back(text::format_fixed(s.precision, kReportDecimals));
      row.push_back(fmt(s.recall));
      row.push_back(fmt(s.f1));
    }
    out += csv_row(row);
  }
  return out;
}

inline nlohmann::ordered_json to_json(const ConfigMetrics& m) {
  nlohmann::ordered_json j;
  j["name"] = m.name;
  j["dataset"] = m.dataset_label;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["map50"] = m.map50;
  j["map5095"] = m.map5095;
  return j;
}

inline ConfigMetrics config_metrics_from_json(const nlohmann::json& j) {
  try {
    ConfigMetrics m{j.at("name").get<std::string>(), j.at("dataset").get<std::string>(),
                    j.at("precision").get<double>(), j.at("recall").get<double>(),
                    j.at("map50").get<double>(),     j.at("map5095").get<double>()};
    validate_config_metrics(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed metrics row: ") + e.what());
  }
}

}  // namespace reefeval
