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

// Collapses the four Fresnel candidates into one normal field and blends it
// with a smoothed copy of itself, gated by the AoLP reliability map:
//
//   v = r * n_prior + (1 - r) * n_smooth,   n = v / |v|

#ifndef TSFP_FUSE_HPP_
#define TSFP_FUSE_HPP_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tsfp/confidence.hpp"
#include "tsfp/core/angles.hpp"
#include "tsfp/core/errors.hpp"
#include "tsfp/core/plane.hpp"
#include "tsfp/fresnel.hpp"

namespace tsfp {

enum class DisambiguationMode { boundary_propagation, oracle };

struct FusionConfig {
  int smoothing_iterations = 30;
  double step = 0.5;
  double reliability_floor = 0.0;
  DisambiguationMode mode = DisambiguationMode::boundary_propagation;
  // Pixels whose normalized boundary distance exceeds this take the low
  // zenith branch.
  double zenith_split = 0.5;

  void validate() const {
    if (smoothing_iterations < 0) throw ConfigError("smoothing iterations must be >= 0");
    if (!(step > 0.0 && step <= 1.0)) throw ConfigError("smoothing step must lie in (0, 1]");
    if (!(reliability_floor >= 0.0 && reliability_floor < 1.0)) {
      throw ConfigError("reliability floor must lie in [0, 1)");
    }
    if (!(zenith_split >= 0.0 && zenith_split <= 1.0)) {
      throw ConfigError("zenith split must lie in [0, 1]");
    }
  }
};

namespace detail {

// Squared 1-D distance transform of a sampled function (lower envelope of
// parabolas).
inline void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
  const std::size_t n = f.size();
  std::vector<std::size_t> v(n);
  std::vector<double> z(n + 1);
  std::size_t k = 0;
  v[0] = 0;
  z[0] = -std::numeric_limits<double>::infinity();
  z[1] = std::numeric_limits<double>::infinity();
  auto sq = [](double a) { return a * a; };
  auto intersect = [&](std::size_t q, std::size_t p) {
    const auto qd = static_cast<double>(q);
    const auto pd = static_cast<double>(p);
    return ((f[q] + sq(qd)) - (f[p] + sq(pd))) / (2.0 * qd - 2.0 * pd);
  };
  for (std::size_t q = 1; q < n; ++q) {
    double s = intersect(q, v[k]);
    while (s <= z[k]) {
      --k;
      s = intersect(q, v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = std::numeric_limits<double>::infinity();
  }
  k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    while (z[k + 1] < static_cast<double>(q)) ++k;
    d[q] = sq(static_cast<double>(q) - static_cast<double>(v[k])) + f[v[k]];
  }
}

}  // namespace detail

/// Euclidean distance from each valid pixel to the nearest invalid pixel,
/// treating everything outside the image as invalid. Invalid pixels get 0.
inline Plane<double> distance_transform(const Mask& mask) {
  const std::size_t w = mask.width() + 2;
  const std::size_t h = mask.height() + 2;
  const double inf = 1e20;
  Plane<double> g(w, h, 0.0);
  for (std::size_t y = 0; y < mask.height(); ++y)
    for (std::size_t x = 0; x < mask.width(); ++x) g(x + 1, y + 1) = mask(x, y) ? inf : 0.0;

  std::vector<double> f, d;
  f.resize(h);
  d.resize(h);
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y) f[y] = g(x, y);
    detail::edt_1d(f, d);
    for (std::size_t y = 0; y < h; ++y) g(x, y) = d[y];
  }
  f.resize(w);
  d.resize(w);
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) f[x] = g(x, y);
    detail::edt_1d(f, d);
    for (std::size_t x = 0; x < w; ++x) g(x, y) = d[x];
  }

  Plane<double> out(mask.width(), mask.height(), 0.0);
  for (std::size_t y = 0; y < mask.height(); ++y)
    for (std::size_t x = 0; x < mask.width(); ++x)
      if (mask(x, y)) out(x, y) = std::sqrt(g(x + 1, y + 1));
  return out;
}

namespace detail {

inline bool valid_at(const Mask& mask, std::ptrdiff_t x, std::ptrdiff_t y) {
  return x >= 0 && y >= 0 && x < static_cast<std::ptrdiff_t>(mask.width()) &&
         y < static_cast<std::ptrdiff_t>(mask.height()) &&
         mask(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) != 0;
}

inline double azimuth_of(const Vec3& n) { return wrap_two_pi(std::atan2(n.y, n.x)); }

// Picks the azimuth branch closer to `reference`; ties go to +pi/2.
inline AzimuthBranch closer_branch(double plus, double minus, double reference) {
  return std::abs(angle_diff(plus, reference)) <= std::abs(angle_diff(minus, reference))
             ? AzimuthBranch::plus
             : AzimuthBranch::minus;
}

}  // namespace detail

/// Boundary-prior disambiguation. Boundary pixels align their azimuth with the
/// outward silhouette normal; the choice then spreads inward in breadth-first
/// order, each pixel following the circular mean of its decided neighbors.
/// The zenith branch comes from the normalized distance transform: interior
/// (> zenith_split) takes the low branch, the rim the high branch.
inline NormalMap disambiguate(const PriorCandidates& candidates, const Mask& mask,
                              double zenith_split = 0.5) {
  const std::size_t w = candidates.width();
  const std::size_t h = candidates.height();
  if (!mask.same_shape(candidates.mask)) {
    throw DimensionError("disambiguate: mask and candidates differ in size");
  }
  Mask valid(w, h, 0);
  for (std::size_t i = 0; i < w * h; ++i) valid[i] = (mask[i] && candidates.mask[i]) ? 1 : 0;

  NormalMap out(w, h);
  if (count_valid(valid) == 0) return out;

  const auto& high_plus = candidates.at(ZenithBranch::high, AzimuthBranch::plus);
  const auto& high_minus = candidates.at(ZenithBranch::high, AzimuthBranch::minus);
  Plane<double> az_plus(w, h), az_minus(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    // The high branch never sits at the pole, so its azimuth is well defined.
    az_plus[i] = detail::azimuth_of(high_plus[i]);
    az_minus[i] = detail::azimuth_of(high_minus[i]);
  }

  // BFS levels (4-connectivity) from the silhouette.
  constexpr std::size_t kUnvisited = std::numeric_limits<std::size_t>::max();
  Plane<std::size_t> level(w, h, kUnvisited);
  std::vector<std::size_t> frontier;
  for (std::size_t y = 0; y < h; ++y) {
    for (std::size_t x = 0; x < w; ++x) {
      if (!valid(x, y)) continue;
      const auto xi = static_cast<std::ptrdiff_t>(x);
      const auto yi = static_cast<std::ptrdiff_t>(y);
      if (!detail::valid_at(valid, xi - 1, yi) || !detail::valid_at(valid, xi + 1, yi) ||
          !detail::valid_at(valid, xi, yi - 1) || !detail::valid_at(valid, xi, yi + 1)) {
        level(x, y) = 0;
        frontier.push_back(y * w + x);
      }
    }
  }
  std::vector<std::vector<std::size_t>> levels;
  while (!frontier.empty()) {
    std::sort(frontier.begin(), frontier.end());  // row-major within a level
    levels.push_back(frontier);
    std::vector<std::size_t> next;
    const std::size_t depth = levels.size();
    for (std::size_t i : frontier) {
      const auto x = static_cast<std::ptrdiff_t>(i % w);
      const auto y = static_cast<std::ptrdiff_t>(i / w);
      constexpr std::array<std::array<int, 2>, 4> kSteps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
      for (const auto& s : kSteps) {
        const std::ptrdiff_t nx = x + s[0];
        const std::ptrdiff_t ny = y + s[1];
        if (!detail::valid_at(valid, nx, ny)) continue;
        const auto j = static_cast<std::size_t>(ny) * w + static_cast<std::size_t>(nx);
        if (level[j] != kUnvisited) continue;
        level[j] = depth;
        next.push_back(j);
      }
    }
    frontier = std::move(next);
  }

  Plane<std::uint8_t> decided(w, h, 0);
  Plane<double> chosen(w, h, 0.0);
  Plane<std::uint8_t> branch(w, h, 0);
  constexpr int kBoundaryRadius = 2;
  for (std::size_t depth = 0; depth < levels.size(); ++depth) {
    for (std::size_t i : levels[depth]) {
      const auto x = static_cast<std::ptrdiff_t>(i % w);
      const auto y = static_cast<std::ptrdiff_t>(i / w);
      double rx = 0.0;
      double ry = 0.0;
      if (depth == 0) {
        // Outward silhouette direction: sum of offsets to invalid neighbors,
        // flipped into camera orientation (+y up).
        for (int dy = -kBoundaryRadius; dy <= kBoundaryRadius; ++dy) {
          for (int dx = -kBoundaryRadius; dx <= kBoundaryRadius; ++dx) {
            if (!detail::valid_at(valid, x + dx, y + dy)) {
              rx += dx;
              ry -= dy;
            }
          }
        }
      } else {
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if ((dx == 0 && dy == 0) || !detail::valid_at(valid, x + dx, y + dy)) continue;
            const auto j = static_cast<std::size_t>(y + dy) * w + static_cast<std::size_t>(x + dx);
            if (!decided[j]) continue;
            rx += std::cos(chosen[j]);
            ry += std::sin(chosen[j]);
          }
        }
      }
      AzimuthBranch pick = AzimuthBranch::plus;
      if (std::hypot(rx, ry) > 1e-9) {
        pick = detail::closer_branch(az_plus[i], az_minus[i], std::atan2(ry, rx));
      }
      branch[i] = static_cast<std::uint8_t>(pick);
      chosen[i] = pick == AzimuthBranch::plus ? az_plus[i] : az_minus[i];
      decided[i] = 1;
    }
  }

  const Plane<double> dist = distance_transform(valid);
  const double max_dist = *std::max_element(dist.begin(), dist.end());
  for (std::size_t i = 0; i < w * h; ++i) {
    if (!valid[i]) continue;
    const ZenithBranch z =
        dist[i] / max_dist > zenith_split ? ZenithBranch::low : ZenithBranch::high;
    out.normals[i] = candidates.at(z, static_cast<AzimuthBranch>(branch[i]))[i];
    out.mask[i] = 1;
  }
  return out;
}

/// Test-only disambiguation: the candidate closest in angle to ground truth.
inline NormalMap disambiguate_oracle(const PriorCandidates& candidates, const Mask& mask,
                                     const NormalMap& ground_truth) {
  const std::size_t w = candidates.width();
  const std::size_t h = candidates.height();
  if (!mask.same_shape(candidates.mask) || ground_truth.width() != w ||
      ground_truth.height() != h) {
    throw DimensionError("disambiguate_oracle: inputs differ in size");
  }
  NormalMap out(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    if (!mask[i] || !candidates.mask[i] || !ground_truth.mask[i]) continue;
    std::size_t best = 0;
    double best_angle = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < candidates.maps.size(); ++k) {
      const double a = angle_between(candidates.maps[k][i], ground_truth.normals[i]);
      if (a < best_angle) {
        best_angle = a;
        best = k;
      }
    }
    out.normals[i] = candidates.maps[best][i];
    out.mask[i] = 1;
  }
  return out;
}

/// Iterative 4-neighborhood averaging, renormalized every iteration:
///   n <- normalize((1 - step) n + step * mean(valid 4-neighbors))
/// Invalid pixels never contribute and never change.
inline NormalMap smooth_field(const NormalMap& normals, const Mask& mask, int iterations,
                              double step) {
  if (iterations < 0) throw ConfigError("smoothing iterations must be >= 0");
  if (!(step > 0.0 && step <= 1.0)) throw ConfigError("smoothing step must lie in (0, 1]");
  if (!mask.same_shape(normals.mask)) {
    throw DimensionError("smooth_field: mask and normal map differ in size");
  }
  const std::size_t w = normals.width();
  const std::size_t h = normals.height();
  NormalMap current(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    if (mask[i] && normals.mask[i]) {
      current.normals[i] = normals.normals[i];
      current.mask[i] = 1;
    }
  }
  NormalMap next = current;
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t y = 0; y < h; ++y) {
      for (std::size_t x = 0; x < w; ++x) {
        if (!current.mask(x, y)) continue;
        const auto xi = static_cast<std::ptrdiff_t>(x);
        const auto yi = static_cast<std::ptrdiff_t>(y);
        Vec3 sum;
        int count = 0;
        constexpr std::array<std::array<int, 2>, 4> kSteps{{{-1, 0}, {1, 0}, {0, -1}, {0, 1}}};
        for (const auto& s : kSteps) {
          if (!detail::valid_at(current.mask, xi + s[0], yi + s[1])) continue;
          sum += current.normals(static_cast<std::size_t>(xi + s[0]),
                                 static_cast<std::size_t>(yi + s[1]));
          ++count;
        }
        if (count == 0) continue;
        const Vec3 v = (1.0 - step) * current.normals(x, y) + (step / count) * sum;
        const double len = norm(v);
        next.normals(x, y) = len > 1e-12 ? (1.0 / len) * v : current.normals(x, y);
      }
    }
    std::swap(current, next);
  }
  return current;
}

/// Reliability-gated blend of the disambiguated prior with its smoothed copy.
/// The gate is max(r, reliability_floor); an antipodal blend that cancels
/// falls back to the smoothed normal.
inline NormalMap fuse(const NormalMap& prior, const ReliabilityMap& reliability,
                      const FusionConfig& config) {
  config.validate();
  const std::size_t w = prior.width();
  const std::size_t h = prior.height();
  if (reliability.reliability.width() != w || reliability.reliability.height() != h) {
    throw DimensionError("fuse: prior and reliability map differ in size");
  }
  const NormalMap smooth =
      smooth_field(prior, prior.mask, config.smoothing_iterations, config.step);
  NormalMap out(w, h);
  for (std::size_t i = 0; i < w * h; ++i) {
    if (!prior.mask[i]) continue;
    const double r =
        std::clamp(std::max(reliability.reliability[i], config.reliability_floor), 0.0, 1.0);
    const Vec3& p = prior.normals[i];
    const Vec3& s = smooth.normals[i];
    Vec3 n;
    if (r == 1.0) {
      n = p;
    } else if (r == 0.0) {
      n = s;
    } else {
      const Vec3 v = r * p + (1.0 - r) * s;
      const double len = norm(v);
      n = len < 1e-8 ? s : (1.0 / len) * v;
    }
    out.set(i % w, i / w, n);
  }
  return out;
}

/// Sum over commonly valid pixels of (1 - cosine similarity).
inline double angular_loss(const NormalMap& estimate, const NormalMap& ground_truth) {
  if (estimate.width() != ground_truth.width() || estimate.height() != ground_truth.height()) {
    throw DimensionError("angular_loss: normal maps differ in size");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < estimate.normals.size(); ++i) {
    if (!estimate.mask[i] || !ground_truth.mask[i]) continue;
    const Vec3& a = estimate.normals[i];
    const Vec3& b = ground_truth.normals[i];
    const double denom = norm(a) * norm(b);
    if (denom == 0.0) continue;
    loss += 1.0 - dot(a, b) / denom;
  }
  return loss;
}

}  // namespace tsfp

#endif  // TSFP_FUSE_HPP_
