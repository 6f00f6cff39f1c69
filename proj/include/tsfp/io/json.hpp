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

// JSON forms of scene specs and metric reports. Angles are stored in
// degrees in JSON (keys carry a _deg suffix) and radians in memory.

#ifndef TSFP_IO_JSON_HPP_
#define TSFP_IO_JSON_HPP_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tsfp/core/angles.hpp"
#include "tsfp/core/errors.hpp"
#include "tsfp/evalkit.hpp"
#include "tsfp/synthpolar.hpp"

namespace tsfp::io {

using nlohmann::json;

inline json shape_to_json(const Shape& shape) {
  if (const auto* hemi = std::get_if<Hemisphere>(&shape)) {
    return {{"type", "hemisphere"},
            {"radius", hemi->radius},
            {"center", {hemi->center_x, hemi->center_y}}};
  }
  const auto& plane = std::get<TiltedPlane>(shape);
  return {{"type", "plane"},
          {"tilt_deg", rad2deg(plane.tilt)},
          {"azimuth_deg", rad2deg(plane.azimuth)}};
}

inline json scene_to_json(const SceneSpec& spec) {
  json shapes = json::array();
  for (const auto& s : spec.shapes) shapes.push_back(shape_to_json(s));
  json j{{"object", spec.object},
         {"width", spec.width},
         {"height", spec.height},
         {"refractive_index", spec.refractive_index},
         {"illumination", spec.illumination},
         {"shapes", shapes},
         {"transmission",
          {{"enabled", spec.transmission.enabled},
           {"zenith_threshold_deg", rad2deg(spec.transmission.zenith_threshold)},
           {"flip_probability", spec.transmission.flip_probability},
           {"noise_sigma_deg", rad2deg(spec.transmission.noise_sigma)}}},
         {"seed", spec.seed}};
  j["quantization_bits"] = spec.quantization_bits ? json(*spec.quantization_bits) : json(nullptr);
  return j;
}

/// Parses a scene spec. Missing keys keep their defaults; malformed input
/// raises ConfigError.
inline SceneSpec scene_from_json(const json& j) {
  SceneSpec spec;
  try {
    spec.object = j.value("object", spec.object);
    spec.width = j.value("width", spec.width);
    spec.height = j.value("height", spec.height);
    spec.refractive_index = j.value("refractive_index", spec.refractive_index);
    spec.illumination = j.value("illumination", spec.illumination);
    spec.seed = j.value("seed", spec.seed);
    if (j.contains("quantization_bits") && !j["quantization_bits"].is_null()) {
      spec.quantization_bits = j["quantization_bits"].get<int>();
    }
    if (j.contains("transmission")) {
      const auto& t = j["transmission"];
      spec.transmission.enabled = t.value("enabled", false);
      spec.transmission.zenith_threshold =
          deg2rad(t.value("zenith_threshold_deg", rad2deg(spec.transmission.zenith_threshold)));
      spec.transmission.flip_probability =
          t.value("flip_probability", spec.transmission.flip_probability);
      spec.transmission.noise_sigma = deg2rad(t.value("noise_sigma_deg", 0.0));
    }
    for (const auto& s : j.at("shapes")) {
      const std::string type = s.at("type").get<std::string>();
      if (type == "hemisphere") {
        const auto center = s.at("center").get<std::vector<double>>();
        if (center.size() != 2) throw ConfigError("hemisphere center must have two entries");
        spec.shapes.push_back(Hemisphere{s.at("radius").get<double>(), center[0], center[1]});
      } else if (type == "plane") {
        spec.shapes.push_back(TiltedPlane{deg2rad(s.at("tilt_deg").get<double>()),
                                          deg2rad(s.value("azimuth_deg", 0.0))});
      } else {
        throw ConfigError("unknown shape type '" + type + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scene spec: ") + e.what());
  }
  if (spec.shapes.empty()) throw ConfigError("scene spec lists no shapes");
  spec.validate();
  return spec;
}

inline json metrics_to_json(const Metrics& m) {
  json j{{"mae_deg", m.mae}, {"median_deg", m.median}, {"valid_pixel_count", m.valid_pixel_count}};
  json acc = json::array();
  for (const auto& a : m.accuracy) acc.push_back({{"threshold_deg", a.threshold}, {"percent", a.percent}});
  j["accuracy"] = acc;
  return j;
}

inline json report_to_json(const MetricsReport& report) {
  json objects = json::object();
  for (const auto& [name, m] : report.per_object) objects[name] = metrics_to_json(m);
  return {{"per_object", objects},
          {"all_pooled", metrics_to_json(report.pooled)},
          {"all_object_mean", metrics_to_json(report.object_mean)}};
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing input: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw DataError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

inline void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace tsfp::io

#endif  // TSFP_IO_JSON_HPP_
