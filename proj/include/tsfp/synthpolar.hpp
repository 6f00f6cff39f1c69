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

// Analytic polarized renderer for transparent test objects under an
// orthographic camera. Object pixels follow the specular model exactly
// (DoLP from zenith, AoLP = azimuth - pi/2); background pixels are weakly
// polarized with random AoLP. The optional transmission model flips the AoLP
// by pi/2 (plus jitter) on near-frontal pixels to mimic background leaking
// through the object.
//
// Image coordinates: x to the right, y down, pixel centers at integers.
// Camera coordinates: origin at the image center, +X right, +Y up, +Z toward
// the camera.

#ifndef TSFP_SYNTHPOLAR_HPP_
#define TSFP_SYNTHPOLAR_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsfp/core/angles.hpp"
#include "tsfp/core/errors.hpp"
#include "tsfp/core/plane.hpp"
#include "tsfp/fresnel.hpp"
#include "tsfp/polarcore.hpp"

namespace tsfp {

/// Half sphere bulging toward the camera; radius and center in pixels
/// (image coordinates).
struct Hemisphere {
  double radius = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
};

/// Planar facet covering the whole frame.
struct TiltedPlane {
  double tilt = 0.0;     // zenith, radians
  double azimuth = 0.0;  // radians
};

using Shape = std::variant<Hemisphere, TiltedPlane>;

struct TransmissionModel {
  bool enabled = false;
  double zenith_threshold = deg2rad(20.0);
  double flip_probability = 0.5;
  double noise_sigma = 0.0;  // radians
};

struct SceneSpec {
  std::string object = "object";
  std::vector<Shape> shapes;  // painted in order; later shapes cover earlier ones
  double refractive_index = kDefaultRefractiveIndex;
  std::size_t width = 256;
  std::size_t height = 256;
  double illumination = 0.4;
  TransmissionModel transmission;
  std::optional<int> quantization_bits;
  std::uint64_t seed = 0;

  void validate() const;
};

struct RenderedSample {
  NormalMap gt_normals;
  PolarizationStack stack;
  Plane<double> gt_zenith;
  Plane<double> gt_azimuth;
  Mask corruption_mask;
  double rotation = 0.0;
};

/// DoLP range of the weakly polarized background.
inline constexpr double kBackgroundMaxDolp = 0.05;

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based generator keyed on (seed, salt, x, y): the stream of a pixel
/// does not depend on the order pixels are visited in.
class PixelRng {
 public:
  PixelRng(std::uint64_t seed, std::uint64_t salt, std::uint64_t x, std::uint64_t y)
      : key_(mix64(mix64(mix64(seed) ^ salt) ^ ((x << 32) | (y & 0xffffffffULL)))) {}

  double uniform() {
    // 53 random mantissa bits -> [0, 1)
    return static_cast<double>(mix64(key_ + counter_++ * 0x9e3779b97f4a7c15ULL) >> 11) * 0x1.0p-53;
  }

  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline std::optional<Vec3> shape_normal(const Shape& shape, double cam_x, double cam_y,
                                        double image_cx, double image_cy) {
  if (const auto* hemi = std::get_if<Hemisphere>(&shape)) {
    const double dx = cam_x - (hemi->center_x - image_cx);
    const double dy = cam_y - (image_cy - hemi->center_y);
    const double r2 = dx * dx + dy * dy;
    const double R2 = hemi->radius * hemi->radius;
    if (!(r2 < R2)) return std::nullopt;
    return Vec3{dx / hemi->radius, dy / hemi->radius, std::sqrt(std::max(0.0, 1.0 - r2 / R2))};
  }
  const auto& plane = std::get<TiltedPlane>(shape);
  return normal_from_angles(plane.tilt, plane.azimuth);
}

inline double quantize(double v, int bits) {
  const double levels = std::ldexp(1.0, bits) - 1.0;
  return std::round(std::clamp(v, 0.0, 1.0) * levels) / levels;
}

}  // namespace detail

inline void SceneSpec::validate() const {
  if (width == 0 || height == 0) throw ConfigError("scene image size must be non-zero");
  RefractionIndex{refractive_index};
  if (!(illumination >= 0.0 && illumination <= 1.0)) {
    throw ConfigError("illumination must lie in [0, 1]");
  }
  if (!(transmission.flip_probability >= 0.0 && transmission.flip_probability <= 1.0)) {
    throw ConfigError("flip_probability must lie in [0, 1]");
  }
  if (!(transmission.noise_sigma >= 0.0) || !(transmission.zenith_threshold >= 0.0)) {
    throw ConfigError("transmission noise sigma and zenith threshold must be >= 0");
  }
  if (quantization_bits && (*quantization_bits < 8 || *quantization_bits > 16)) {
    throw ConfigError("quantization bits must lie in [8, 16]");
  }
  const double xmax = static_cast<double>(width) - 0.5;
  const double ymax = static_cast<double>(height) - 0.5;
  for (const auto& shape : shapes) {
    if (const auto* hemi = std::get_if<Hemisphere>(&shape)) {
      if (!(hemi->radius > 0.0) || hemi->center_x - hemi->radius < -0.5 ||
          hemi->center_x + hemi->radius > xmax || hemi->center_y - hemi->radius < -0.5 ||
          hemi->center_y + hemi->radius > ymax) {
        throw ConfigError("hemisphere does not fit inside the image");
      }
    } else {
      const auto& plane = std::get<TiltedPlane>(shape);
      if (!(plane.tilt >= 0.0 && plane.tilt < kHalfPi)) {
        throw ConfigError("plane tilt must lie in [0, pi/2)");
      }
    }
  }
}

/// Renders the scene rotated in-plane by `rotation` radians (counter-clockwise
/// about the image center, seen from the camera).
inline RenderedSample render_rotated(const SceneSpec& spec, double rotation) {
  spec.validate();
  const RefractionIndex n{spec.refractive_index};
  const std::size_t w = spec.width;
  const std::size_t h = spec.height;
  const double image_cx = 0.5 * static_cast<double>(w - 1);
  const double image_cy = 0.5 * static_cast<double>(h - 1);
  const double cr = std::cos(rotation);
  const double sr = std::sin(rotation);
  const std::uint64_t salt = std::bit_cast<std::uint64_t>(rotation == 0.0 ? 0.0 : rotation);

  RenderedSample out;
  out.rotation = rotation;
  out.gt_normals = NormalMap(w, h);
  out.gt_zenith = Plane<double>(w, h);
  out.gt_azimuth = Plane<double>(w, h);
  out.corruption_mask = Mask(w, h, 0);
  out.stack.width = w;
  out.stack.height = h;
  for (int a : kCanonicalAnglesDeg) {
    out.stack.angles.push_back(deg2rad(a));
    out.stack.planes.emplace_back(w, h);
  }

  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      detail::PixelRng rng(spec.seed, salt, x, y);
      const double cam_x = static_cast<double>(x) - image_cx;
      const double cam_y = image_cy - static_cast<double>(y);
      // Sample the unrotated scene, then rotate the normal back.
      const double src_x = cr * cam_x + sr * cam_y;
      const double src_y = -sr * cam_x + cr * cam_y;

      std::optional<Vec3> hit;
      for (const auto& shape : spec.shapes) {
        if (auto nrm = detail::shape_normal(shape, src_x, src_y, image_cx, image_cy)) hit = nrm;
      }

      double rho = 0.0;
      double phi = 0.0;
      if (hit) {
        const Vec3 normal{cr * hit->x - sr * hit->y, sr * hit->x + cr * hit->y, hit->z};
        const double theta = std::atan2(std::hypot(normal.x, normal.y), normal.z);
        const double azimuth = wrap_two_pi(std::atan2(normal.y, normal.x));
        out.gt_normals.set(x, y, normal);
        out.gt_zenith(x, y) = theta;
        out.gt_azimuth(x, y) = azimuth;
        rho = dolp_from_zenith(std::min(theta, kZenithCap), n);
        phi = wrap_pi(azimuth - kHalfPi);
        const auto& tm = spec.transmission;
        if (tm.enabled && theta < tm.zenith_threshold && rng.uniform() < tm.flip_probability) {
          phi = wrap_pi(phi + kHalfPi + tm.noise_sigma * rng.normal());
          out.corruption_mask(x, y) = 1;
        }
      } else {
        phi = kPi * rng.uniform();
        rho = kBackgroundMaxDolp * rng.uniform();
      }

      for (std::size_t k = 0; k < out.stack.planes.size(); ++k) {
        double v = sinusoid_intensity(out.stack.angles[k], spec.illumination, rho, phi);
        if (spec.quantization_bits) v = detail::quantize(v, *spec.quantization_bits);
        out.stack.planes[k](x, y) = v;
      }
    }
  }
  return out;
}

inline RenderedSample render(const SceneSpec& spec) { return render_rotated(spec, 0.0); }

inline std::vector<RenderedSample> sweep(const SceneSpec& spec, std::span<const double> rotations) {
  std::vector<RenderedSample> samples;
  samples.reserve(rotations.size());
  for (double r : rotations) samples.push_back(render_rotated(spec, r));
  return samples;
}

}  // namespace tsfp

#endif  // TSFP_SYNTHPOLAR_HPP_
