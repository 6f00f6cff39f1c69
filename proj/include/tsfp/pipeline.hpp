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

// Directory-level pipeline stages. Each stage reads the previous stage's
// directory, runs exactly one module operation and writes its own directory
// with a meta.json that echoes the configuration (never paths or times, so
// reruns are byte-identical).
//
// Layout:
//   render      <out>/<object>/<rotation>/{0,45,90,135}.png, normals-gt.pfm,
//               mask.png, corruption-mask.png, meta.json
//   features    s0.pfm s1.pfm s2.pfm dolp.pfm aolp.pfm low-signal.png mask.png
//   prior       prior-{low,high}-{plus,minus}.pfm mask.png
//   confidence  noise-density.pfm confidence.pfm reliability.pfm mask.png
//   fuse        normals.pfm normals.png disambiguated.pfm mask.png

#ifndef TSFP_PIPELINE_HPP_
#define TSFP_PIPELINE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <future>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsfp/confidence.hpp"
#include "tsfp/core/errors.hpp"
#include "tsfp/evalkit.hpp"
#include "tsfp/fresnel.hpp"
#include "tsfp/fuse.hpp"
#include "tsfp/io/json.hpp"
#include "tsfp/io/pfm.hpp"
#include "tsfp/io/png.hpp"
#include "tsfp/polarcore.hpp"
#include "tsfp/synthpolar.hpp"

namespace tsfp::pipeline {

namespace fs = std::filesystem;
using io::json;

inline std::string rotation_label(double degrees) {
  if (degrees == std::floor(degrees)) return std::to_string(static_cast<long long>(degrees));
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", degrees);
  return buf;
}

inline fs::path require(const fs::path& path) {
  if (!fs::exists(path)) throw DataError("missing input: " + path.string());
  return path;
}

inline void prepare_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create directory " + dir.string() + ": " + ec.message());
}

inline Mask load_mask_or_full(const fs::path& dir, std::size_t width, std::size_t height) {
  const fs::path p = dir / "mask.png";
  if (!fs::exists(p)) return full_mask(width, height);
  Mask mask = io::read_png_mask(p);
  if (mask.width() != width || mask.height() != height) {
    throw DimensionError("mask.png does not match the image size in " + dir.string());
  }
  return mask;
}

inline void write_sample(const RenderedSample& sample, const SceneSpec& spec,
                         double rotation_deg, const fs::path& dir) {
  prepare_directory(dir);
  for (std::size_t k = 0; k < sample.stack.planes.size(); ++k) {
    io::write_png_gray(dir / (std::to_string(kCanonicalAnglesDeg[k]) + ".png"),
                       sample.stack.planes[k], 16);
  }
  io::write_normals_pfm(dir / "normals-gt.pfm", sample.gt_normals);
  io::write_png_mask(dir / "mask.png", sample.gt_normals.mask);
  io::write_png_mask(dir / "corruption-mask.png", sample.corruption_mask);
  io::write_json(dir / "meta.json", {{"stage", "render"},
                                     {"scene", io::scene_to_json(spec)},
                                     {"seed", spec.seed},
                                     {"rotation_deg", rotation_deg}});
}

/// Renders one sample per rotation (degrees) into <out>/<object>/<rotation>/.
/// Rotations are rendered `jobs` at a time; the output does not depend on it.
inline std::vector<fs::path> render_stage(const SceneSpec& spec,
                                          std::span<const double> rotations_deg,
                                          const fs::path& out_root, int jobs = 1) {
  spec.validate();
  std::vector<fs::path> dirs;
  for (double deg : rotations_deg) dirs.push_back(out_root / spec.object / rotation_label(deg));
  const std::size_t batch = static_cast<std::size_t>(std::max(1, jobs));
  for (std::size_t start = 0; start < rotations_deg.size(); start += batch) {
    std::vector<std::future<void>> pending;
    for (std::size_t k = start; k < std::min(start + batch, rotations_deg.size()); ++k) {
      pending.push_back(std::async(std::launch::async, [&, k] {
        write_sample(render_rotated(spec, deg2rad(rotations_deg[k])), spec, rotations_deg[k],
                     dirs[k]);
      }));
    }
    for (auto& f : pending) f.get();
  }
  return dirs;
}

inline PolarizationStack load_stack(const fs::path& sample_dir) {
  PolarizationStack stack;
  for (int a : kCanonicalAnglesDeg) {
    const auto img = io::read_png_gray(require(sample_dir / (std::to_string(a) + ".png")));
    if (stack.planes.empty()) {
      stack.width = img.values.width();
      stack.height = img.values.height();
    } else if (!img.values.same_shape(stack.planes.front())) {
      throw DimensionError("polarization images in " + sample_dir.string() + " differ in size");
    }
    stack.angles.push_back(deg2rad(a));
    stack.planes.push_back(img.values);
  }
  return stack;
}

inline void features_stage(const fs::path& sample_dir, const fs::path& out_dir) {
  const PolarizationStack stack = load_stack(sample_dir);
  const Mask mask = load_mask_or_full(sample_dir, stack.width, stack.height);
  const PolarFeatures f = compute_features(stack);
  prepare_directory(out_dir);
  io::write_plane_pfm(out_dir / "s0.pfm", f.s0);
  io::write_plane_pfm(out_dir / "s1.pfm", f.s1);
  io::write_plane_pfm(out_dir / "s2.pfm", f.s2);
  io::write_plane_pfm(out_dir / "dolp.pfm", f.dolp);
  io::write_plane_pfm(out_dir / "aolp.pfm", f.aolp);
  io::write_png_mask(out_dir / "low-signal.png", f.low_signal);
  io::write_png_mask(out_dir / "mask.png", mask);
  io::write_json(out_dir / "meta.json",
                 {{"stage", "features"},
                  {"angles", {0, 45, 90, 135}},
                  {"convention",
                   "s0=(I0+I45+I90+I135)/2, s1=I0-I90, s2=I45-I135, "
                   "dolp=hypot(s1,s2)/s0 clamped to [0,1], aolp=atan2(s2,s1)/2 in [0,pi)"},
                  {"clamp_count", f.clamp_count},
                  {"low_signal_threshold", kLowSignalDolp}});
}

inline PolarFeatures load_features(const fs::path& dir) {
  PolarFeatures f;
  f.s0 = io::read_plane_pfm(require(dir / "s0.pfm"));
  f.s1 = io::read_plane_pfm(require(dir / "s1.pfm"));
  f.s2 = io::read_plane_pfm(require(dir / "s2.pfm"));
  f.dolp = io::read_plane_pfm(require(dir / "dolp.pfm"));
  f.aolp = io::read_plane_pfm(require(dir / "aolp.pfm"));
  for (const auto* p : {&f.s0, &f.s1, &f.s2, &f.aolp}) {
    if (!p->same_shape(f.dolp)) throw DimensionError("feature planes differ in size in " + dir.string());
  }
  f.low_signal = Mask(f.dolp.width(), f.dolp.height(), 0);
  for (std::size_t i = 0; i < f.dolp.size(); ++i) f.low_signal[i] = f.dolp[i] < kLowSignalDolp;
  return f;
}

inline void prior_stage(const fs::path& features_dir, const fs::path& out_dir, RefractionIndex n) {
  const PolarFeatures f = load_features(features_dir);
  const Mask mask = load_mask_or_full(features_dir, f.dolp.width(), f.dolp.height());
  const PriorCandidates c = prior_candidates(f, n, mask);
  prepare_directory(out_dir);
  for (std::size_t k = 0; k < c.maps.size(); ++k) {
    io::write_normals_pfm(out_dir / (std::string("prior-") + kCandidateNames[k] + ".pfm"),
                          c.normal_map(k));
  }
  io::write_png_mask(out_dir / "mask.png", c.mask);
  io::write_json(out_dir / "meta.json",
                 {{"stage", "prior"},
                  {"refractive_index", n.value()},
                  {"ordering", {"low-plus", "low-minus", "high-plus", "high-minus"}},
                  {"zenith_cap_rad", kZenithCap}});
}

inline PriorCandidates load_candidates(const fs::path& dir) {
  PriorCandidates c;
  for (std::size_t k = 0; k < c.maps.size(); ++k) {
    NormalMap m =
        io::read_normals_pfm(require(dir / (std::string("prior-") + kCandidateNames[k] + ".pfm")));
    if (k > 0 && !m.normals.same_shape(c.maps[0])) {
      throw DimensionError("prior candidate maps differ in size in " + dir.string());
    }
    c.maps[k] = std::move(m.normals);
  }
  c.mask = load_mask_or_full(dir, c.maps[0].width(), c.maps[0].height());
  return c;
}

inline void confidence_stage(const fs::path& features_dir, const fs::path& out_dir,
                             WindowParams params) {
  params.validate();
  const Plane<double> aolp = io::read_plane_pfm(require(features_dir / "aolp.pfm"));
  const Mask mask = load_mask_or_full(features_dir, aolp.width(), aolp.height());
  const NoiseDensityMap d = noise_density(aolp, mask, params);
  const ReliabilityMap r = normalize_confidence(d, mask);
  prepare_directory(out_dir);
  io::write_plane_pfm(out_dir / "noise-density.pfm", d.d);
  io::write_plane_pfm(out_dir / "confidence.pfm", r.confidence);
  io::write_plane_pfm(out_dir / "reliability.pfm", r.reliability);
  io::write_png_mask(out_dir / "mask.png", mask);
  io::write_json(out_dir / "meta.json", {{"stage", "confidence"},
                                         {"window", params.window},
                                         {"exponent", params.exponent},
                                         {"max_d", r.max_density},
                                         {"degenerate", r.degenerate}});
}

inline ReliabilityMap load_reliability(const fs::path& dir) {
  ReliabilityMap r;
  r.confidence = io::read_plane_pfm(require(dir / "confidence.pfm"));
  r.reliability = io::read_plane_pfm(require(dir / "reliability.pfm"));
  if (!r.confidence.same_shape(r.reliability)) {
    throw DimensionError("confidence and reliability planes differ in size in " + dir.string());
  }
  return r;
}

inline void fuse_stage(const fs::path& prior_dir, const fs::path& confidence_dir,
                       const fs::path& out_dir, const FusionConfig& config,
                       const std::optional<fs::path>& ground_truth = std::nullopt) {
  config.validate();
  const PriorCandidates candidates = load_candidates(prior_dir);
  const ReliabilityMap reliability = load_reliability(confidence_dir);
  if (reliability.reliability.width() != candidates.width() ||
      reliability.reliability.height() != candidates.height()) {
    throw DimensionError("prior and confidence maps differ in size");
  }
  NormalMap prior;
  if (config.mode == DisambiguationMode::oracle) {
    if (!ground_truth) throw ConfigError("oracle disambiguation needs a ground-truth normal map");
    const NormalMap gt = io::read_normals_pfm(require(*ground_truth));
    prior = disambiguate_oracle(candidates, candidates.mask, gt);
  } else {
    prior = disambiguate(candidates, candidates.mask, config.zenith_split);
  }
  const NormalMap fused = fuse(prior, reliability, config);
  prepare_directory(out_dir);
  io::write_normals_pfm(out_dir / "disambiguated.pfm", prior);
  io::write_normals_pfm(out_dir / "normals.pfm", fused);
  io::write_png_normals(out_dir / "normals.png", fused);
  io::write_png_mask(out_dir / "mask.png", fused.mask);
  io::write_json(
      out_dir / "meta.json",
      {{"stage", "fuse"},
       {"disambiguation",
        config.mode == DisambiguationMode::oracle ? "oracle" : "boundary_propagation"},
       {"smoothing_iterations", config.smoothing_iterations},
       {"step", config.step},
       {"reliability_floor", config.reliability_floor},
       {"zenith_split", config.zenith_split}});
}

struct EvalPair {
  std::string name;
  fs::path estimate;
  fs::path ground_truth;
};

inline MetricsReport eval_stage(const std::vector<EvalPair>& pairs,
                                const std::optional<fs::path>& report_path = std::nullopt) {
  std::vector<std::pair<std::string, ErrorMap>> maps;
  for (const auto& p : pairs) {
    const NormalMap est = io::read_normals_pfm(require(p.estimate));
    const NormalMap gt = io::read_normals_pfm(require(p.ground_truth));
    maps.emplace_back(p.name, angular_error_map(est, gt));
  }
  MetricsReport report = aggregate(maps);
  if (report_path) {
    if (report_path->has_parent_path()) prepare_directory(report_path->parent_path());
    io::write_json(*report_path, io::report_to_json(report));
  }
  return report;
}

}  // namespace tsfp::pipeline

#endif  // TSFP_PIPELINE_HPP_
