// Copyright 2026 The tsfp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Normal-estimation metrics: mean / median angular error and the share of
// pixels whose error is strictly below each threshold.

#ifndef TSFP_EVALKIT_HPP_
#define TSFP_EVALKIT_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsfp/core/angles.hpp"
#include "tsfp/core/errors.hpp"
#include "tsfp/core/plane.hpp"

namespace tsfp {

inline constexpr std::array<double, 3> kDefaultThresholds{11.25, 22.5, 30.0};

struct ErrorMap {
  Plane<double> degrees;
  Mask mask;
};

struct ThresholdAccuracy {
  double threshold = 0.0;  // degrees
  double percent = 0.0;    // [0, 100]
};

struct Metrics {
  double mae = 0.0;     // degrees
  double median = 0.0;  // degrees, lower median
  std::vector<ThresholdAccuracy> accuracy;
  std::size_t valid_pixel_count = 0;

  /// Percentage for `threshold`; throws if it was not evaluated.
  double accuracy_at(double threshold) const {
    for (const auto& a : accuracy)
      if (a.threshold == threshold) return a.percent;
    throw ConfigError("accuracy threshold not evaluated");
  }
};

struct MetricsReport {
  std::map<std::string, Metrics> per_object;
  Metrics pooled;         // all pixels of all objects together
  Metrics object_mean;    // unweighted mean of per-object metrics
};

/// Per-pixel angle in degrees over pixels valid in both maps.
inline ErrorMap angular_error_map(const NormalMap& estimate, const NormalMap& ground_truth) {
  if (estimate.width() != ground_truth.width() || estimate.height() != ground_truth.height()) {
    throw DimensionError("angular_error_map: normal maps differ in size");
  }
  const std::size_t w = estimate.width();
  const std::size_t h = estimate.height();
  ErrorMap out{Plane<double>(w, h, 0.0), Mask(w, h, 0)};
  for (std::size_t i = 0; i < w * h; ++i) {
    if (!estimate.mask[i] || !ground_truth.mask[i]) continue;
    out.degrees[i] = rad2deg(angle_between(estimate.normals[i], ground_truth.normals[i]));
    out.mask[i] = 1;
  }
  return out;
}

inline Metrics summarize(std::span<const double> errors,
                         std::span<const double> thresholds = kDefaultThresholds) {
  if (errors.empty()) throw EmptyReportError("cannot summarize an empty set of pixels");
  Metrics m;
  m.valid_pixel_count = errors.size();
  double sum = 0.0;
  for (double e : errors) sum += e;
  m.mae = sum / static_cast<double>(errors.size());

  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  m.median = sorted[(sorted.size() - 1) / 2];

  for (double t : thresholds) {
    const auto below = std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin();
    m.accuracy.push_back(
        {t, 100.0 * static_cast<double>(below) / static_cast<double>(sorted.size())});
  }
  return m;
}

inline std::vector<double> valid_errors(const ErrorMap& map) {
  std::vector<double> errors;
  for (std::size_t i = 0; i < map.degrees.size(); ++i)
    if (map.mask[i]) errors.push_back(map.degrees[i]);
  return errors;
}

inline Metrics summarize(const ErrorMap& map,
                         std::span<const double> thresholds = kDefaultThresholds) {
  const auto errors = valid_errors(map);
  return summarize(std::span<const double>(errors), thresholds);
}

inline MetricsReport aggregate(const std::vector<std::pair<std::string, ErrorMap>>& objects,
                               std::span<const double> thresholds = kDefaultThresholds) {
  if (objects.empty()) throw EmptyReportError("no objects to aggregate");
  MetricsReport report;
  std::vector<double> pooled;
  for (const auto& [name, map] : objects) {
    auto errors = valid_errors(map);
    report.per_object[name] = summarize(std::span<const double>(errors), thresholds);
    pooled.insert(pooled.end(), errors.begin(), errors.end());
  }
  report.pooled = summarize(std::span<const double>(pooled), thresholds);

  Metrics& avg = report.object_mean;
  const auto count = static_cast<double>(report.per_object.size());
  for (double t : thresholds) avg.accuracy.push_back({t, 0.0});
  for (const auto& [name, m] : report.per_object) {
    avg.mae += m.mae / count;
    avg.median += m.median / count;
    avg.valid_pixel_count += m.valid_pixel_count;
    for (std::size_t k = 0; k < m.accuracy.size(); ++k)
      avg.accuracy[k].percent += m.accuracy[k].percent / count;
  }
  return report;
}

/// Text table with one column per object plus the pooled and object-averaged
/// "All" columns, and one row per metric.
inline std::string format_table(const MetricsReport& report) {
  std::vector<std::pair<std::string, const Metrics*>> columns;
  for (const auto& [name, m] : report.per_object) columns.emplace_back(name, &m);
  columns.emplace_back("All(pooled)", &report.pooled);
  columns.emplace_back("All(object-mean)", &report.object_mean);

  std::vector<std::pair<std::string, std::vector<std::string>>> rows;
  auto cell = [](double v, const char* unit) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f%s", v, unit);
    return std::string(buf);
  };
  std::vector<std::string> mean_row, median_row;
  for (const auto& c : columns) {
    mean_row.push_back(cell(c.second->mae, "deg"));
    median_row.push_back(cell(c.second->median, "deg"));
  }
  rows.emplace_back("Mean", mean_row);
  rows.emplace_back("Median", median_row);
  const auto& first = *columns.front().second;
  for (std::size_t k = 0; k < first.accuracy.size(); ++k) {
    std::vector<std::string> row;
    for (const auto& c : columns) row.push_back(cell(c.second->accuracy[k].percent, "%"));
    rows.emplace_back("Acc<" + cell(first.accuracy[k].threshold, "deg"), row);
  }

  std::size_t label_w = 6;
  for (const auto& r : rows) label_w = std::max(label_w, r.first.size());
  std::vector<std::size_t> col_w;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    std::size_t cw = columns[c].first.size();
    for (const auto& r : rows) cw = std::max(cw, r.second[c].size());
    col_w.push_back(cw);
  }
  auto pad = [](const std::string& s, std::size_t width) {
    return std::string(width - s.size(), ' ') + s;
  };
  std::string out = pad("Metric", label_w);
  for (std::size_t c = 0; c < columns.size(); ++c) out += "  " + pad(columns[c].first, col_w[c]);
  out += '\n';
  for (const auto& r : rows) {
    out += pad(r.first, label_w);
    for (std::size_t c = 0; c < columns.size(); ++c) out += "  " + pad(r.second[c], col_w[c]);
    out += '\n';
  }
  return out;
}

}  // namespace tsfp

#endif  // TSFP_EVALKIT_HPP_
