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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "tsfp/polarcore.hpp"

namespace tsfp {
namespace {

PolarizationStack canonical_stack(std::size_t w, std::size_t h) {
  PolarizationStack s;
  s.width = w;
  s.height = h;
  for (int a : kCanonicalAnglesDeg) {
    s.angles.push_back(deg2rad(a));
    s.planes.emplace_back(w, h);
  }
  return s;
}

PolarFeatures single_pixel(double i0, double i45, double i90, double i135) {
  auto s = canonical_stack(1, 1);
  s.planes[0][0] = i0;
  s.planes[1][0] = i45;
  s.planes[2][0] = i90;
  s.planes[3][0] = i135;
  return compute_features(s);
}

std::vector<PolarSample> synthesize(std::span<const double> angles, double mean, double rho,
                                    double phi) {
  std::vector<PolarSample> out;
  for (double a : angles) out.push_back({a, sinusoid_intensity(a, mean, rho, phi)});
  return out;
}

TEST(ComputeFeatures, UnpolarizedLight) {
  const auto f = single_pixel(0.4, 0.4, 0.4, 0.4);
  EXPECT_DOUBLE_EQ(f.s0[0], 0.8);
  EXPECT_DOUBLE_EQ(f.s1[0], 0.0);
  EXPECT_DOUBLE_EQ(f.s2[0], 0.0);
  EXPECT_DOUBLE_EQ(f.dolp[0], 0.0);
  EXPECT_DOUBLE_EQ(f.aolp[0], 0.0);
  EXPECT_EQ(f.low_signal[0], 1);
}

TEST(ComputeFeatures, FullyPolarizedAlongZero) {
  const auto f = single_pixel(0.8, 0.4, 0.0, 0.4);
  EXPECT_DOUBLE_EQ(f.dolp[0], 1.0);
  EXPECT_DOUBLE_EQ(f.aolp[0], 0.0);
  EXPECT_EQ(f.low_signal[0], 0);
}

TEST(ComputeFeatures, FullyPolarizedAlong45) {
  const auto f = single_pixel(0.4, 0.8, 0.4, 0.0);
  EXPECT_DOUBLE_EQ(f.dolp[0], 1.0);
  EXPECT_NEAR(f.aolp[0], deg2rad(45.0), 1e-15);
}

TEST(ComputeFeatures, ZeroIntensityGivesZeroDolp) {
  const auto f = single_pixel(0.0, 0.0, 0.0, 0.0);
  EXPECT_EQ(f.dolp[0], 0.0);
  EXPECT_EQ(f.aolp[0], 0.0);
}

TEST(ComputeFeatures, DolpAboveOneIsClampedAndCounted) {
  // s0 = 1, s1 = 1, s2 = 1 -> raw dolp = sqrt(2)
  const auto f = single_pixel(1.0, 1.0, 0.0, 0.0);
  EXPECT_EQ(f.dolp[0], 1.0);
  EXPECT_EQ(f.clamp_count, 1u);
}

TEST(ComputeFeatures, RejectsFewerThanThreeDistinctAngles) {
  PolarizationStack s;
  s.width = s.height = 1;
  s.angles = {0.0, kPi, kHalfPi};  // 0 and pi coincide
  s.planes.assign(3, Plane<double>(1, 1, 0.5));
  EXPECT_THROW(compute_features(s), ConfigError);
  s.angles = {0.0, kHalfPi};
  s.planes.assign(2, Plane<double>(1, 1, 0.5));
  EXPECT_THROW(compute_features(s), ConfigError);
}

TEST(ComputeFeatures, RejectsBrokenStacks) {
  auto s = canonical_stack(2, 2);
  s.planes[1] = Plane<double>(3, 2);
  EXPECT_THROW(compute_features(s), DimensionError);
  s = canonical_stack(2, 2);
  s.planes[2][1] = -0.1;
  EXPECT_THROW(compute_features(s), DomainError);
  s = canonical_stack(2, 2);
  s.planes[0][0] = std::nan("");
  EXPECT_THROW(compute_features(s), DomainError);
}

TEST(ComputeFeatures, NonCanonicalAnglesUseTheFit) {
  const std::vector<double> angles{deg2rad(10), deg2rad(70), deg2rad(130)};
  PolarizationStack s;
  s.width = s.height = 1;
  s.angles = angles;
  for (double a : angles) s.planes.emplace_back(1, 1, sinusoid_intensity(a, 0.3, 0.4, 1.1));
  const auto f = compute_features(s);
  EXPECT_NEAR(f.s0[0], 0.6, 1e-12);
  EXPECT_NEAR(f.dolp[0], 0.4, 1e-12);
  EXPECT_NEAR(f.aolp[0], 1.1, 1e-12);
}

TEST(FitSinusoid, RecoversSynthesizedParameters) {
  const std::vector<double> angles{0.0, deg2rad(45), deg2rad(90), deg2rad(135)};
  const auto samples = synthesize(angles, 0.5, 0.6, deg2rad(70));
  const auto fit = fit_sinusoid(samples);
  EXPECT_NEAR(fit.mean, 0.5, 1e-9);
  EXPECT_NEAR(fit.rho, 0.6, 1e-9);
  EXPECT_NEAR(fit.phi, deg2rad(70), 1e-9);
}

TEST(FitSinusoid, ConstantSignal) {
  const std::vector<PolarSample> samples{{0.0, 0.3}, {0.7, 0.3}, {1.9, 0.3}, {2.5, 0.3}};
  const auto fit = fit_sinusoid(samples);
  EXPECT_NEAR(fit.mean, 0.3, 1e-15);
  EXPECT_NEAR(fit.rho, 0.0, 1e-14);
}

TEST(FitSinusoid, DegenerateDesignIsAFitError) {
  const std::vector<PolarSample> samples{{0.0, 0.3}, {kPi, 0.3}, {kHalfPi, 0.3}};
  EXPECT_THROW(fit_sinusoid(samples), FitError);
  const std::vector<PolarSample> two{{0.0, 0.3}, {1.0, 0.3}};
  EXPECT_THROW(fit_sinusoid(two), ConfigError);
}

TEST(FitSinusoid, MatchesClosedFormStokesOnRandomPixels) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto stack = canonical_stack(1000, 1);
  for (auto& p : stack.planes)
    for (auto& v : p) v = u(rng);
  const auto f = compute_features(stack);
  const SinusoidFitter fitter(stack.angles);
  std::size_t closed_form_clamps = 0;
  for (std::size_t i = 0; i < 1000; ++i) {
    const std::vector<double> values{stack.planes[0][i], stack.planes[1][i], stack.planes[2][i],
                                     stack.planes[3][i]};
    const auto fit = fitter.fit(values);
    EXPECT_NEAR(2.0 * fit.mean, f.s0[i], 1e-9);
    EXPECT_NEAR(fit.rho, f.dolp[i], 1e-9);
    EXPECT_NEAR(axial_distance(fit.phi, f.aolp[i]), 0.0, 1e-9);
    closed_form_clamps += fit.clamped ? 1 : 0;
  }
  EXPECT_EQ(closed_form_clamps, f.clamp_count);
}

// Round trip over random angle sets (3 to 8 angles) and random parameters.
TEST(FitSinusoid, RoundTripProperty) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 6);
    std::vector<double> angles;
    for (int k = 0; k < n; ++k) angles.push_back(kPi * (k + 0.8 * u(rng)) / n);
    const double mean = 0.01 + u(rng);
    const double rho = u(rng);
    const double phi = kPi * u(rng);
    const auto fit = fit_sinusoid(synthesize(angles, mean, rho, phi));
    ASSERT_NEAR(fit.mean, mean, 1e-6);
    ASSERT_NEAR(fit.rho, rho, 1e-6);
    ASSERT_NEAR(axial_distance(fit.phi, phi), 0.0, 1e-6) << "rho=" << rho;
  }
}

TEST(FitSinusoid, PiShiftOfAnglesChangesNothing) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> angles{0.1, 0.9, 1.7, 2.6};
    const auto samples = synthesize(angles, 0.2 + u(rng), u(rng), kPi * u(rng));
    auto shifted = samples;
    for (auto& s : shifted) s.angle += kPi;
    const auto a = fit_sinusoid(samples);
    const auto b = fit_sinusoid(shifted);
    EXPECT_NEAR(a.mean, b.mean, 1e-12);
    EXPECT_NEAR(a.rho, b.rho, 1e-12);
    EXPECT_NEAR(axial_distance(a.phi, b.phi), 0.0, 1e-9);
  }
}

TEST(ComputeFeatures, IntensityScalingScalesStokesOnly) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto stack = canonical_stack(50, 4);
  for (std::size_t i = 0; i < 200; ++i) {
    const double mean = 0.1 + 0.4 * u(rng), rho = u(rng), phi = kPi * u(rng);
    for (std::size_t k = 0; k < 4; ++k)
      stack.planes[k][i] = sinusoid_intensity(stack.angles[k], mean, rho, phi);
  }
  auto scaled = stack;
  const double k = 1.7;
  for (auto& p : scaled.planes)
    for (auto& v : p) v *= k;
  const auto a = compute_features(stack);
  const auto b = compute_features(scaled);
  for (std::size_t i = 0; i < 200; ++i) {
    EXPECT_NEAR(b.s0[i], k * a.s0[i], 1e-12);
    EXPECT_NEAR(b.s1[i], k * a.s1[i], 1e-12);
    EXPECT_NEAR(b.s2[i], k * a.s2[i], 1e-12);
    EXPECT_NEAR(b.dolp[i], a.dolp[i], 1e-12);
    EXPECT_NEAR(axial_distance(b.aolp[i], a.aolp[i]), 0.0, 1e-12);
  }
}

TEST(ComputeFeatures, IsPixelLocal) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto stack = canonical_stack(16, 8);
  for (auto& p : stack.planes)
    for (auto& v : p) v = u(rng);
  std::vector<std::size_t> perm(128);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  auto permuted = stack;
  for (std::size_t k = 0; k < 4; ++k)
    for (std::size_t i = 0; i < 128; ++i) permuted.planes[k][i] = stack.planes[k][perm[i]];
  const auto a = compute_features(stack);
  const auto b = compute_features(permuted);
  for (std::size_t i = 0; i < 128; ++i) {
    EXPECT_EQ(b.dolp[i], a.dolp[perm[i]]);
    EXPECT_EQ(b.aolp[i], a.aolp[perm[i]]);
    EXPECT_EQ(b.s0[i], a.s0[perm[i]]);
  }
}

TEST(Demosaic, SingleSuperPixelGivesConstantPlanes) {
  RawMosaic m{Plane<double>(2, 2), {0, 45, 90, 135}};
  m.values(0, 0) = 0.1;  // 0
  m.values(1, 0) = 0.2;  // 45
  m.values(0, 1) = 0.3;  // 90
  m.values(1, 1) = 0.4;  // 135
  const auto s = demosaic_pfa(m);
  ASSERT_EQ(s.planes.size(), 4u);
  const double expected[4] = {0.1, 0.2, 0.3, 0.4};
  for (std::size_t k = 0; k < 4; ++k) {
    EXPECT_DOUBLE_EQ(s.angles[k], deg2rad(kCanonicalAnglesDeg[k]));
    for (double v : s.planes[k]) EXPECT_EQ(v, expected[k]);
  }
}

TEST(Demosaic, PatternOrderIsHonored) {
  RawMosaic m{Plane<double>(2, 2), {90, 0, 135, 45}};
  m.values(0, 0) = 0.9;
  m.values(1, 0) = 0.0;
  m.values(0, 1) = 1.35;
  m.values(1, 1) = 0.45;
  const auto s = demosaic_pfa(m);
  EXPECT_EQ(s.planes[0][0], 0.0);
  EXPECT_EQ(s.planes[1][0], 0.45);
  EXPECT_EQ(s.planes[2][0], 0.9);
  EXPECT_EQ(s.planes[3][0], 1.35);
}

TEST(Demosaic, ConstantMosaic) {
  RawMosaic m{Plane<double>(10, 6, 0.37), {0, 45, 90, 135}};
  for (const auto& p : demosaic_pfa(m).planes)
    for (double v : p) EXPECT_DOUBLE_EQ(v, 0.37);
}

// Independent oracle: normalized tent-kernel (pitch 2) weighting over every
// site of an orientation. Inside the sub-grid hull this is bilinear
// interpolation; outside, it degenerates to the nearest edge row/column.
double tent_oracle(const RawMosaic& m, std::size_t ox, std::size_t oy, double x, double y) {
  double num = 0.0, den = 0.0;
  for (std::size_t sy = oy; sy < m.values.height(); sy += 2) {
    for (std::size_t sx = ox; sx < m.values.width(); sx += 2) {
      const double wx = std::max(0.0, 1.0 - std::abs(x - static_cast<double>(sx)) / 2.0);
      const double wy = std::max(0.0, 1.0 - std::abs(y - static_cast<double>(sy)) / 2.0);
      num += wx * wy * m.values(sx, sy);
      den += wx * wy;
    }
  }
  return num / den;
}

TEST(Demosaic, LinearRampMatchesBilinearOracle) {
  RawMosaic m{Plane<double>(4, 4), {0, 45, 90, 135}};
  const double base[4] = {0.1, 0.2, 0.3, 0.4};
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 4; ++x) {
      const std::size_t pos = (y % 2) * 2 + (x % 2);
      const double gx = static_cast<double>(x / 2), gy = static_cast<double>(y / 2);
      m.values(x, y) = base[pos] + 0.05 * gx + 0.02 * gy;
    }
  }
  const auto s = demosaic_pfa(m);
  for (std::size_t pos = 0; pos < 4; ++pos) {
    const std::size_t ox = pos % 2, oy = pos / 2;
    for (std::size_t y = 0; y < 4; ++y) {
      for (std::size_t x = 0; x < 4; ++x) {
        const double got = s.planes[pos](x, y);
        EXPECT_NEAR(got, tent_oracle(m, ox, oy, static_cast<double>(x), static_cast<double>(y)),
                    1e-15);
        if (x % 2 == ox && y % 2 == oy) {
          EXPECT_EQ(got, m.values(x, y));
        }
      }
    }
  }
}

TEST(Demosaic, RandomMosaicMatchesOracle) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RawMosaic m{Plane<double>(12, 8), {45, 135, 0, 90}};
  for (auto& v : m.values) v = u(rng);
  const auto s = demosaic_pfa(m);
  for (std::size_t k = 0; k < 4; ++k) {
    const auto pos = static_cast<std::size_t>(
        std::find(m.pattern.begin(), m.pattern.end(), kCanonicalAnglesDeg[k]) - m.pattern.begin());
    for (std::size_t y = 0; y < 8; ++y)
      for (std::size_t x = 0; x < 12; ++x)
        EXPECT_NEAR(s.planes[k](x, y),
                    tent_oracle(m, pos % 2, pos / 2, static_cast<double>(x), static_cast<double>(y)),
                    1e-14);
  }
}

TEST(Demosaic, RejectsOddDimensionsAndBadPatterns) {
  EXPECT_THROW(demosaic_pfa(RawMosaic{Plane<double>(3, 2), {0, 45, 90, 135}}), DimensionError);
  EXPECT_THROW(demosaic_pfa(RawMosaic{Plane<double>(2, 5), {0, 45, 90, 135}}), DimensionError);
  EXPECT_THROW(demosaic_pfa(RawMosaic{Plane<double>(2, 2), {0, 45, 45, 135}}), ConfigError);
}

}  // namespace
}  // namespace tsfp
