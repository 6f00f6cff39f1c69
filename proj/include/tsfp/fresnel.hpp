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

// Specular Fresnel prior: DoLP <-> zenith on both branches of the specular
// curve, the pi-ambiguous azimuth pair from the AoLP, and the four candidate
// normal maps built from their product.

#ifndef TSFP_FRESNEL_HPP_
#define TSFP_FRESNEL_HPP_

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "tsfp/core/angles.hpp"
#include "tsfp/core/errors.hpp"
#include "tsfp/core/plane.hpp"
#include "tsfp/detail/bisect.hpp"
#include "tsfp/polarcore.hpp"

namespace tsfp {

inline constexpr double kDefaultRefractiveIndex = 1.52;

/// Largest zenith the specular model is evaluated at; pi/2 itself is the
/// occluding contour.
inline constexpr double kZenithCap = kHalfPi - 1e-6;

/// Residual DoLP bound that inverted zeniths are expected to meet.
inline constexpr double kDolpTolerance = 1e-9;

class RefractionIndex {
 public:
  explicit RefractionIndex(double n = kDefaultRefractiveIndex) : n_(n) {
    if (!std::isfinite(n) || !(n > 1.0)) {
      throw ConfigError("refractive index must be finite and > 1, got " + std::to_string(n));
    }
  }
  double value() const noexcept { return n_; }

 private:
  double n_;
};

inline double brewster_angle(RefractionIndex n) { return std::atan(n.value()); }

/// Specular degree of linear polarization at zenith theta.
inline double dolp_from_zenith(double theta, RefractionIndex n) {
  if (!(theta >= 0.0 && theta < kHalfPi)) {
    throw DomainError("zenith must lie in [0, pi/2), got " + std::to_string(theta));
  }
  const double n2 = n.value() * n.value();
  const double s = std::sin(theta);
  const double s2 = s * s;
  const double num = 2.0 * s2 * std::cos(theta) * std::sqrt(n2 - s2);
  const double den = n2 - s2 - n2 * s2 + 2.0 * s2 * s2;
  return num / den;
}

struct ZenithPair {
  double low = 0.0;       // [0, brewster]
  double high = 0.0;      // [brewster, kZenithCap]
  double brewster = 0.0;
};

/// Both zeniths producing `rho`. Each branch is monotone, so plain bisection
/// is run on each one to double-precision convergence. DoLP values below the
/// curve's value at kZenithCap saturate the high branch at the cap.
inline ZenithPair zenith_from_dolp(double rho, RefractionIndex n) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw DomainError("DoLP must lie in [0, 1], got " + std::to_string(rho));
  }
  const double brewster = brewster_angle(n);
  const auto curve = [n](double t) { return dolp_from_zenith(t, n); };
  if (rho >= curve(brewster)) return {brewster, brewster, brewster};

  ZenithPair pair{0.0, kZenithCap, brewster};
  if (rho > 0.0) pair.low = detail::bisect_monotone(curve, rho, 0.0, brewster, true);
  if (rho > curve(kZenithCap)) {
    pair.high = detail::bisect_monotone(curve, rho, brewster, kZenithCap, false);
  }
  return pair;
}

struct AzimuthPair {
  double plus = 0.0;   // wrap(phi + pi/2)
  double minus = 0.0;  // wrap(phi - pi/2)
};

inline AzimuthPair azimuth_candidates(double phi) {
  return {wrap_two_pi(phi + kHalfPi), wrap_two_pi(phi - kHalfPi)};
}

inline Vec3 normal_from_angles(double theta, double azimuth) {
  const double s = std::sin(theta);
  return {s * std::cos(azimuth), s * std::sin(azimuth), std::cos(theta)};
}

enum class ZenithBranch { low = 0, high = 1 };
enum class AzimuthBranch { plus = 0, minus = 1 };

/// The four candidate normal maps, ordered (low,+), (low,-), (high,+), (high,-).
struct PriorCandidates {
  std::array<Plane<Vec3>, 4> maps;
  Mask mask;

  static constexpr std::size_t index(ZenithBranch z, AzimuthBranch a) {
    return 2 * static_cast<std::size_t>(z) + static_cast<std::size_t>(a);
  }
  std::size_t width() const noexcept { return mask.width(); }
  std::size_t height() const noexcept { return mask.height(); }
  const Plane<Vec3>& at(ZenithBranch z, AzimuthBranch a) const { return maps[index(z, a)]; }

  NormalMap normal_map(std::size_t k) const {
    NormalMap out;
    out.normals = maps[k];
    out.mask = mask;
    return out;
  }
};

inline constexpr std::array<const char*, 4> kCandidateNames{"low-plus", "low-minus", "high-plus",
                                                            "high-minus"};

/// Pixels that fail the physics (non-finite or out-of-domain inputs) are
/// marked invalid instead of aborting the image.
inline PriorCandidates prior_candidates(const PolarFeatures& features, RefractionIndex n,
                                        const Mask& mask) {
  const std::size_t w = features.dolp.width();
  const std::size_t h = features.dolp.height();
  if (!features.aolp.same_shape(features.dolp) || !mask.same_shape(features.dolp)) {
    throw DimensionError("prior_candidates: features and mask differ in size");
  }
  PriorCandidates out;
  for (auto& m : out.maps) m = Plane<Vec3>(w, h);
  out.mask = Mask(w, h, 0);

  for (std::size_t i = 0; i < w * h; ++i) {
    if (!mask[i]) continue;
    const double rho = features.dolp[i];
    const double phi = features.aolp[i];
    if (!std::isfinite(rho) || !std::isfinite(phi) || rho < 0.0 || rho > 1.0) continue;
    const ZenithPair zenith = zenith_from_dolp(rho, n);
    const AzimuthPair azimuth = azimuth_candidates(wrap_pi(phi));
    out.maps[0][i] = normal_from_angles(zenith.low, azimuth.plus);
    out.maps[1][i] = normal_from_angles(zenith.low, azimuth.minus);
    out.maps[2][i] = normal_from_angles(zenith.high, azimuth.plus);
    out.maps[3][i] = normal_from_angles(zenith.high, azimuth.minus);
    out.mask[i] = 1;
  }
  return out;
}

}  // namespace tsfp

#endif  // TSFP_FRESNEL_HPP_
