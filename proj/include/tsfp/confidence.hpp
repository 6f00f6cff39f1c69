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

// AoLP fault detection. For each pixel the K x K neighborhood P (center
// included, reflect-padded, masked-out neighbors dropped) yields
//
//   d(i, j) = sum_{p in P} |p - mean(P)|^m
//
// and the confidence map is d / max(d). AoLP values are plain scalars here, so
// the 0 / pi seam of the AoLP map is reported as a fault too.

#ifndef TSFP_CONFIDENCE_HPP_
#define TSFP_CONFIDENCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tsfp/core/errors.hpp"
#include "tsfp/core/plane.hpp"

namespace tsfp {

struct WindowParams {
  int window = 9;         // K, odd
  double exponent = 0.5;  // m

  void validate() const {
    if (window < 3 || window % 2 == 0) {
      throw ConfigError("window must be odd and >= 3, got " + std::to_string(window));
    }
    if (!(exponent > 0.0) || !std::isfinite(exponent)) {
      throw ConfigError("exponent must be > 0, got " + std::to_string(exponent));
    }
  }
};

struct NoiseDensityMap {
  Plane<double> d;
  WindowParams params;
};

struct ReliabilityMap {
  Plane<double> confidence;   // c = d / max d
  Plane<double> reliability;  // r = 1 - c
  double max_density = 0.0;
  bool degenerate = false;
};

inline constexpr double kDegenerateDensity = 1e-12;

/// Mirror index into [0, n) without repeating the edge sample (..2 1 | 0 1 2..).
inline std::ptrdiff_t reflect_index(std::ptrdiff_t i, std::ptrdiff_t n) {
  if (n == 1) return 0;
  const std::ptrdiff_t period = 2 * (n - 1);
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - i;
}

inline NoiseDensityMap noise_density(const Plane<double>& aolp, const Mask& mask,
                                     WindowParams params = {}) {
  params.validate();
  if (!mask.same_shape(aolp)) {
    throw DimensionError("noise_density: AoLP plane and mask differ in size");
  }
  const auto w = static_cast<std::ptrdiff_t>(aolp.width());
  const auto h = static_cast<std::ptrdiff_t>(aolp.height());
  const std::ptrdiff_t half = params.window / 2;
  const bool root = params.exponent == 0.5;

  NoiseDensityMap out{Plane<double>(aolp.width(), aolp.height()), params};
  std::vector<double> window;
  window.reserve(static_cast<std::size_t>(params.window * params.window));

  for (std::ptrdiff_t y = 0; y < h; ++y) {
    for (std::ptrdiff_t x = 0; x < w; ++x) {
      if (!mask(x, y)) continue;
      window.clear();
      for (std::ptrdiff_t dy = -half; dy <= half; ++dy) {
        const auto yy = static_cast<std::size_t>(reflect_index(y + dy, h));
        for (std::ptrdiff_t dx = -half; dx <= half; ++dx) {
          const auto xx = static_cast<std::size_t>(reflect_index(x + dx, w));
          if (mask(xx, yy)) window.push_back(aolp(xx, yy));
        }
      }
      // Mean accumulated relative to the first sample so a constant window
      // yields exactly zero deviations (the root would amplify rounding).
      const double ref = window.front();
      double shift = 0.0;
      for (double p : window) shift += p - ref;
      const double mean = ref + shift / static_cast<double>(window.size());
      double d = 0.0;
      for (double p : window) {
        const double dev = std::abs(p - mean);
        d += root ? std::sqrt(dev) : std::pow(dev, params.exponent);
      }
      out.d(x, y) = d;
    }
  }
  return out;
}

/// Masked-out pixels get c = 0, r = 1.
inline ReliabilityMap normalize_confidence(const NoiseDensityMap& density, const Mask& mask) {
  if (!mask.same_shape(density.d)) {
    throw DimensionError("normalize_confidence: density map and mask differ in size");
  }
  const std::size_t w = density.d.width();
  const std::size_t h = density.d.height();
  ReliabilityMap out{Plane<double>(w, h, 0.0), Plane<double>(w, h, 1.0), 0.0, false};
  for (std::size_t i = 0; i < w * h; ++i) {
    if (mask[i]) out.max_density = std::max(out.max_density, density.d[i]);
  }
  out.degenerate = out.max_density < kDegenerateDensity;
  if (out.degenerate) return out;
  for (std::size_t i = 0; i < w * h; ++i) {
    if (!mask[i]) continue;
    out.confidence[i] = density.d[i] / out.max_density;
    out.reliability[i] = 1.0 - out.confidence[i];
  }
  return out;
}

/// Constant reliability field (r = value, c = 1 - value) for ablations.
inline ReliabilityMap constant_reliability(std::size_t width, std::size_t height, double value) {
  return {Plane<double>(width, height, 1.0 - value), Plane<double>(width, height, value), 0.0,
          false};
}

}  // namespace tsfp

#endif  // TSFP_CONFIDENCE_HPP_
