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

// Stokes / DoLP / AoLP extraction from multi-angle linear polarization
// observations, including 2x2 polarization-filter-array demosaicking.
//
// Conventions:
//   s0 = (I0 + I45 + I90 + I135) / 2, s1 = I0 - I90, s2 = I45 - I135
//   dolp = hypot(s1, s2) / s0 (0 where s0 <= 0), clamped to <= 1
//   aolp = atan2(s2, s1) / 2 wrapped into [0, pi)
// For arbitrary angle sets the intensity model
//   I(a) = c0 + c1 cos 2a + c2 sin 2a
// is fit by least squares and (s0, s1, s2) = 2 (c0, c1, c2).

#ifndef TSFP_POLARCORE_HPP_
#define TSFP_POLARCORE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tsfp/core/angles.hpp"
#include "tsfp/core/errors.hpp"
#include "tsfp/core/plane.hpp"

namespace tsfp {

inline constexpr std::array<int, 4> kCanonicalAnglesDeg{0, 45, 90, 135};

/// Pixels whose DoLP falls below this are flagged as low-signal (AoLP unreliable).
inline constexpr double kLowSignalDolp = 1e-4;

/// Tolerance used to decide whether two polarizer angles coincide modulo pi.
inline constexpr double kAngleTolerance = 1e-9;

struct PolarizationStack {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> angles;          // radians, one per plane
  std::vector<Plane<double>> planes;   // normalized radiance, >= 0

  /// Throws DimensionError / DomainError / ConfigError when an invariant is broken.
  void validate() const;
};

struct PolarFeatures {
  Plane<double> s0;
  Plane<double> s1;
  Plane<double> s2;
  Plane<double> dolp;
  Plane<double> aolp;
  Mask low_signal;
  std::size_t clamp_count = 0;
};

/// Raw division-of-focal-plane frame. pattern holds the polarizer angle in
/// degrees at the top-left, top-right, bottom-left and bottom-right of every
/// 2x2 super-pixel.
struct RawMosaic {
  Plane<double> values;
  std::array<int, 4> pattern{0, 45, 90, 135};
};

struct SinusoidFit {
  double mean = 0.0;
  double rho = 0.0;
  double phi = 0.0;
  bool clamped = false;
};

struct PolarSample {
  double angle = 0.0;
  double intensity = 0.0;
};

/// I(angle) = mean * (1 + rho cos(2 angle - 2 phi))
inline double sinusoid_intensity(double angle, double mean, double rho, double phi) {
  return mean * (1.0 + rho * std::cos(2.0 * angle - 2.0 * phi));
}

/// Number of angles that are pairwise distinct modulo pi.
inline std::size_t count_distinct_angles(std::span<const double> angles) {
  std::vector<double> seen;
  for (double a : angles) {
    const bool dup = std::any_of(seen.begin(), seen.end(), [a](double s) {
      return axial_distance(a, s) < kAngleTolerance;
    });
    if (!dup) seen.push_back(a);
  }
  return seen.size();
}

namespace detail {

struct Coefficients {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

inline SinusoidFit fit_from_coefficients(const Coefficients& c) {
  SinusoidFit fit;
  fit.mean = c.c0;
  if (c.c0 > 0.0) {
    fit.rho = std::hypot(c.c1, c.c2) / c.c0;
    if (fit.rho > 1.0) {
      fit.rho = 1.0;
      fit.clamped = true;
    }
  }
  fit.phi = wrap_pi(0.5 * std::atan2(c.c2, c.c1));
  return fit;
}

}  // namespace detail

/// Least-squares fitter for a fixed set of polarizer angles. The pseudo-inverse
/// of the {1, cos 2a, sin 2a} design matrix is computed once.
class SinusoidFitter {
 public:
  explicit SinusoidFitter(std::span<const double> angles) {
    if (angles.size() < 3) {
      throw ConfigError("sinusoid fit needs at least 3 polarizer angles, got " +
                        std::to_string(angles.size()));
    }
    // Normal matrix A^T A (symmetric 3x3).
    double m[3][3] = {};
    rows_.reserve(angles.size());
    for (double a : angles) {
      const double basis[3] = {1.0, std::cos(2.0 * a), std::sin(2.0 * a)};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] += basis[i] * basis[j];
    }
    const double cof[3][3] = {
        {m[1][1] * m[2][2] - m[1][2] * m[2][1], m[1][2] * m[2][0] - m[1][0] * m[2][2],
         m[1][0] * m[2][1] - m[1][1] * m[2][0]},
        {m[0][2] * m[2][1] - m[0][1] * m[2][2], m[0][0] * m[2][2] - m[0][2] * m[2][0],
         m[0][1] * m[2][0] - m[0][0] * m[2][1]},
        {m[0][1] * m[1][2] - m[0][2] * m[1][1], m[0][2] * m[1][0] - m[0][0] * m[1][2],
         m[0][0] * m[1][1] - m[0][1] * m[1][0]}};
    const double det = m[0][0] * cof[0][0] + m[0][1] * cof[0][1] + m[0][2] * cof[0][2];
    const double n = static_cast<double>(angles.size());
    if (!(std::abs(det) > 1e-10 * n * n * n)) {
      throw FitError("degenerate sinusoid design: polarizer angles coincide modulo pi");
    }
    // inverse is cof^T / det; m is symmetric so cof is too.
    for (double a : angles) {
      const double basis[3] = {1.0, std::cos(2.0 * a), std::sin(2.0 * a)};
      std::array<double, 3> row{};
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) row[i] += cof[j][i] / det * basis[j];
      }
      rows_.push_back(row);
    }
  }

  std::size_t sample_count() const noexcept { return rows_.size(); }

  detail::Coefficients coefficients(std::span<const double> intensities) const {
    if (intensities.size() != rows_.size()) {
      throw DimensionError("sinusoid fit: expected " + std::to_string(rows_.size()) +
                           " intensities, got " + std::to_string(intensities.size()));
    }
    detail::Coefficients c;
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      c.c0 += rows_[k][0] * intensities[k];
      c.c1 += rows_[k][1] * intensities[k];
      c.c2 += rows_[k][2] * intensities[k];
    }
    return c;
  }

  SinusoidFit fit(std::span<const double> intensities) const {
    return detail::fit_from_coefficients(coefficients(intensities));
  }

 private:
  std::vector<std::array<double, 3>> rows_;
};

inline SinusoidFit fit_sinusoid(std::span<const PolarSample> samples) {
  std::vector<double> angles;
  std::vector<double> values;
  angles.reserve(samples.size());
  values.reserve(samples.size());
  for (const auto& s : samples) {
    angles.push_back(s.angle);
    values.push_back(s.intensity);
  }
  return SinusoidFitter(angles).fit(values);
}

inline void PolarizationStack::validate() const {
  if (angles.size() != planes.size()) {
    throw DimensionError("polarization stack: " + std::to_string(angles.size()) +
                         " angles but " + std::to_string(planes.size()) + " planes");
  }
  if (angles.size() < 3) {
    throw ConfigError("polarization stack needs at least 3 angles");
  }
  for (const auto& p : planes) {
    if (p.width() != width || p.height() != height) {
      throw DimensionError("polarization stack planes differ in size");
    }
    for (double v : p) {
      if (!std::isfinite(v) || v < 0.0) {
        throw DomainError("polarization stack holds a negative or non-finite intensity");
      }
    }
  }
}

namespace detail {

// Index of each canonical angle inside `angles`, when the set is exactly
// {0, 45, 90, 135} degrees (any order, modulo pi).
inline std::optional<std::array<std::size_t, 4>> canonical_layout(
    std::span<const double> angles) {
  if (angles.size() != 4) return std::nullopt;
  std::array<std::size_t, 4> idx{};
  std::array<bool, 4> found{};
  for (std::size_t k = 0; k < 4; ++k) {
    bool matched = false;
    for (std::size_t c = 0; c < 4; ++c) {
      if (!found[c] && axial_distance(angles[k], deg2rad(kCanonicalAnglesDeg[c])) < kAngleTolerance) {
        idx[c] = k;
        found[c] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }
  return idx;
}

inline void store_features(PolarFeatures& f, std::size_t i, double s0, double s1, double s2) {
  f.s0[i] = s0;
  f.s1[i] = s1;
  f.s2[i] = s2;
  double rho = s0 > 0.0 ? std::hypot(s1, s2) / s0 : 0.0;
  if (rho > 1.0) {
    rho = 1.0;
    ++f.clamp_count;
  }
  f.dolp[i] = rho;
  f.aolp[i] = wrap_pi(0.5 * std::atan2(s2, s1));
  f.low_signal[i] = rho < kLowSignalDolp ? 1 : 0;
}

}  // namespace detail

/// Per-pixel Stokes components, DoLP and AoLP. Uses the closed-form Stokes
/// estimate for the {0, 45, 90, 135} degree set and a least-squares sinusoid
/// fit otherwise.
inline PolarFeatures compute_features(const PolarizationStack& stack) {
  if (count_distinct_angles(stack.angles) < 3) {
    throw ConfigError("compute_features needs at least 3 polarizer angles distinct modulo pi");
  }
  stack.validate();

  const std::size_t w = stack.width;
  const std::size_t h = stack.height;
  PolarFeatures f{Plane<double>(w, h), Plane<double>(w, h), Plane<double>(w, h),
                  Plane<double>(w, h), Plane<double>(w, h), Mask(w, h, 0), 0};

  if (const auto layout = detail::canonical_layout(stack.angles)) {
    const auto& i0 = stack.planes[(*layout)[0]];
    const auto& i45 = stack.planes[(*layout)[1]];
    const auto& i90 = stack.planes[(*layout)[2]];
    const auto& i135 = stack.planes[(*layout)[3]];
    for (std::size_t i = 0; i < w * h; ++i) {
      detail::store_features(f, i, 0.5 * (i0[i] + i45[i] + i90[i] + i135[i]), i0[i] - i90[i],
                             i45[i] - i135[i]);
    }
    return f;
  }

  const SinusoidFitter fitter(stack.angles);
  std::vector<double> values(stack.planes.size());
  for (std::size_t i = 0; i < w * h; ++i) {
    for (std::size_t k = 0; k < values.size(); ++k) values[k] = stack.planes[k][i];
    const auto c = fitter.coefficients(values);
    detail::store_features(f, i, 2.0 * c.c0, 2.0 * c.c1, 2.0 * c.c2);
  }
  return f;
}

/// Bilinear demosaicking of a 2x2 polarization filter array. Each orientation
/// is interpolated on its own rectangular sub-grid (pitch 2) with clamped
/// edges. Output planes are ordered 0, 45, 90, 135 degrees.
inline PolarizationStack demosaic_pfa(const RawMosaic& mosaic) {
  const std::size_t w = mosaic.values.width();
  const std::size_t h = mosaic.values.height();
  if (w == 0 || h == 0 || w % 2 != 0 || h % 2 != 0) {
    throw DimensionError("mosaic dimensions must be even and non-zero, got " +
                         std::to_string(w) + "x" + std::to_string(h));
  }
  auto sorted = mosaic.pattern;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != kCanonicalAnglesDeg) {
    throw ConfigError("mosaic pattern must be a permutation of {0, 45, 90, 135}");
  }

  const std::size_t gw = w / 2;
  const std::size_t gh = h / 2;
  PolarizationStack stack;
  stack.width = w;
  stack.height = h;
  for (int angle : kCanonicalAnglesDeg) {
    const auto pos = static_cast<std::size_t>(
        std::find(mosaic.pattern.begin(), mosaic.pattern.end(), angle) - mosaic.pattern.begin());
    const std::size_t ox = pos % 2;
    const std::size_t oy = pos / 2;
    auto sample = [&](std::size_t gx, std::size_t gy) {
      return mosaic.values(2 * gx + ox, 2 * gy + oy);
    };

    Plane<double> plane(w, h);
    for (std::size_t y = 0; y < h; ++y) {
      const double v = std::clamp((static_cast<double>(y) - static_cast<double>(oy)) / 2.0, 0.0,
                                  static_cast<double>(gh - 1));
      const auto v0 = static_cast<std::size_t>(v);
      const std::size_t v1 = std::min(v0 + 1, gh - 1);
      const double fv = v - static_cast<double>(v0);
      for (std::size_t x = 0; x < w; ++x) {
        const double u = std::clamp((static_cast<double>(x) - static_cast<double>(ox)) / 2.0, 0.0,
                                    static_cast<double>(gw - 1));
        const auto u0 = static_cast<std::size_t>(u);
        const std::size_t u1 = std::min(u0 + 1, gw - 1);
        const double fu = u - static_cast<double>(u0);
        plane(x, y) = (1.0 - fv) * ((1.0 - fu) * sample(u0, v0) + fu * sample(u1, v0)) +
                      fv * ((1.0 - fu) * sample(u0, v1) + fu * sample(u1, v1));
      }
    }
    stack.angles.push_back(deg2rad(angle));
    stack.planes.push_back(std::move(plane));
  }
  return stack;
}

}  // namespace tsfp

#endif  // TSFP_POLARCORE_HPP_
