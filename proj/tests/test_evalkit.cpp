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

#include <cmath>
#include <random>
#include <vector>

#include "tsfp/evalkit.hpp"
#include "tsfp/fresnel.hpp"

namespace tsfp {
namespace {

// Brute-force reference: counting and selection without sorting.
struct Reference {
  double mean;
  double median;
  std::vector<double> accuracy;
};

Reference brute_force(const std::vector<double>& e, std::span<const double> thresholds) {
  Reference r{0.0, 0.0, {}};
  long double sum = 0.0L;
  for (double v : e) sum += v;
  r.mean = static_cast<double>(sum / e.size());
  // lower median: the smallest value with at least ceil(n/2) values <= it
  const std::size_t need = (e.size() + 1) / 2;
  double best = std::numeric_limits<double>::infinity();
  for (double c : e) {
    std::size_t le = 0;
    for (double v : e) le += v <= c ? 1 : 0;
    if (le >= need) best = std::min(best, c);
  }
  r.median = best;
  for (double t : thresholds) {
    std::size_t below = 0;
    for (double v : e) below += v < t ? 1 : 0;
    r.accuracy.push_back(100.0 * static_cast<double>(below) / static_cast<double>(e.size()));
  }
  return r;
}

NormalMap field(std::size_t w, std::size_t h, Vec3 n) {
  NormalMap m(w, h);
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) m.set(x, y, n);
  return m;
}

TEST(AngularErrorMap, Examples) {
  const auto z = field(2, 2, Vec3{0, 0, 1});
  for (double v : angular_error_map(z, z).degrees) EXPECT_EQ(v, 0.0);
  const auto ortho = angular_error_map(z, field(2, 2, Vec3{1, 0, 0}));
  for (double v : ortho.degrees) EXPECT_NEAR(v, 90.0, 1e-12);
  const double t = deg2rad(11.25);
  const auto tilted = angular_error_map(z, field(2, 2, Vec3{0, std::sin(t), std::cos(t)}));
  for (double v : tilted.degrees) EXPECT_NEAR(v, 11.25, 1e-9);
  EXPECT_THROW(angular_error_map(z, field(3, 2, Vec3{0, 0, 1})), DimensionError);
}

TEST(AngularErrorMap, UsesPixelsValidInBoth) {
  auto a = field(3, 1, Vec3{0, 0, 1});
  auto b = field(3, 1, Vec3{0, 0, 1});
  a.clear(0, 0);
  b.clear(2, 0);
  const auto e = angular_error_map(a, b);
  EXPECT_EQ(e.mask[0], 0);
  EXPECT_EQ(e.mask[1], 1);
  EXPECT_EQ(e.mask[2], 0);
}

TEST(Summarize, HandExample) {
  const std::vector<double> e{0.0, 10.0, 20.0, 40.0};
  const auto m = summarize(e);
  EXPECT_DOUBLE_EQ(m.mae, 17.5);
  EXPECT_DOUBLE_EQ(m.median, 10.0);
  EXPECT_EQ(m.valid_pixel_count, 4u);
  // Strict "<": 0 and 10 are below 11.25; 0, 10 and 20 are below 22.5 and 30.
  const auto ref = brute_force(e, kDefaultThresholds);
  EXPECT_EQ(ref.accuracy, (std::vector<double>{50.0, 75.0, 75.0}));
  EXPECT_EQ(m.accuracy_at(11.25), 50.0);
  EXPECT_EQ(m.accuracy_at(22.5), 75.0);
  EXPECT_EQ(m.accuracy_at(30.0), 75.0);
  EXPECT_THROW(m.accuracy_at(45.0), ConfigError);
}

TEST(Summarize, StrictThreshold) {
  const std::vector<double> e{22.5, 22.5};
  EXPECT_EQ(summarize(e).accuracy_at(22.5), 0.0);
  EXPECT_EQ(summarize(e).accuracy_at(30.0), 100.0);
}

TEST(Summarize, AllZerosAndAllNinety) {
  const std::vector<double> zeros(7, 0.0);
  const auto a = summarize(zeros);
  EXPECT_EQ(a.mae, 0.0);
  EXPECT_EQ(a.median, 0.0);
  for (const auto& t : a.accuracy) EXPECT_EQ(t.percent, 100.0);
  const std::vector<double> ninety(5, 90.0);
  const auto b = summarize(ninety);
  EXPECT_EQ(b.mae, 90.0);
  for (const auto& t : b.accuracy) EXPECT_EQ(t.percent, 0.0);
}

TEST(Summarize, EmptyIsAnError) {
  EXPECT_THROW(summarize(std::vector<double>{}), EmptyReportError);
  ErrorMap e{Plane<double>(2, 2, 5.0), Mask(2, 2, 0)};
  EXPECT_THROW(summarize(e), EmptyReportError);
}

TEST(Summarize, MatchesBruteForceOnRandomMaps) {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 1 + rng() % 40;
    std::vector<double> e(n);
    for (auto& v : e) {
      // mix in exact threshold hits and duplicates
      const auto r = rng() % 10;
      v = r == 0 ? kDefaultThresholds[rng() % 3] : r == 1 ? 10.0 : u(rng);
    }
    const auto m = summarize(e);
    const auto ref = brute_force(e, kDefaultThresholds);
    ASSERT_NEAR(m.mae, ref.mean, 1e-12);
    ASSERT_EQ(m.median, ref.median);
    for (std::size_t k = 0; k < 3; ++k) ASSERT_EQ(m.accuracy[k].percent, ref.accuracy[k]);
    ASSERT_LE(m.accuracy[0].percent, m.accuracy[1].percent);
    ASSERT_LE(m.accuracy[1].percent, m.accuracy[2].percent);
  }
}

TEST(Summarize, MaskInvariance) {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(0.0, 40.0);
  ErrorMap e{Plane<double>(10, 10), Mask(10, 10, 0)};
  for (std::size_t i = 0; i < 100; ++i) {
    e.degrees[i] = u(rng);
    e.mask[i] = i % 3 ? 1 : 0;
  }
  const auto before = summarize(e);
  for (std::size_t i = 0; i < 100; ++i)
    if (!e.mask[i]) e.degrees[i] = 1e6;
  const auto after = summarize(e);
  EXPECT_EQ(before.mae, after.mae);
  EXPECT_EQ(before.median, after.median);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(before.accuracy[k].percent, after.accuracy[k].percent);
}

Vec3 rotate(const Vec3& v, const std::array<double, 9>& r) {
  return {r[0] * v.x + r[1] * v.y + r[2] * v.z, r[3] * v.x + r[4] * v.y + r[5] * v.z,
          r[6] * v.x + r[7] * v.y + r[8] * v.z};
}

TEST(AngularErrorMap, RotationEquivariance) {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> g;
  NormalMap a(12, 12), b(12, 12);
  for (std::size_t y = 0; y < 12; ++y) {
    for (std::size_t x = 0; x < 12; ++x) {
      a.set(x, y, normalized(Vec3{g(rng), g(rng), g(rng)}));
      b.set(x, y, normalized(Vec3{g(rng), g(rng), g(rng)}));
    }
  }
  // rotation from an arbitrary axis-angle (Rodrigues)
  const Vec3 k = normalized(Vec3{0.3, -0.8, 0.5});
  const double t = 1.1, c = std::cos(t), s = std::sin(t), v = 1.0 - c;
  const std::array<double, 9> r{c + k.x * k.x * v,       k.x * k.y * v - k.z * s, k.x * k.z * v + k.y * s,
                                k.y * k.x * v + k.z * s, c + k.y * k.y * v,       k.y * k.z * v - k.x * s,
                                k.z * k.x * v - k.y * s, k.z * k.y * v + k.x * s, c + k.z * k.z * v};
  NormalMap ra = a, rb = b;
  for (auto& n : ra.normals) n = rotate(n, r);
  for (auto& n : rb.normals) n = rotate(n, r);
  const auto e0 = angular_error_map(a, b);
  const auto e1 = angular_error_map(ra, rb);
  for (std::size_t i = 0; i < 144; ++i) EXPECT_NEAR(e0.degrees[i], e1.degrees[i], 1e-9);
}

TEST(Aggregate, PooledAndObjectMean) {
  ErrorMap a{Plane<double>(2, 1), full_mask(2, 1)};
  a.degrees[0] = 0.0;
  a.degrees[1] = 10.0;
  ErrorMap b{Plane<double>(4, 1), full_mask(4, 1)};
  for (std::size_t i = 0; i < 4; ++i) b.degrees[i] = 40.0;
  const auto report = aggregate({{"a", a}, {"b", b}});
  EXPECT_DOUBLE_EQ(report.per_object.at("a").mae, 5.0);
  EXPECT_DOUBLE_EQ(report.per_object.at("b").mae, 40.0);
  EXPECT_DOUBLE_EQ(report.pooled.mae, 170.0 / 6.0);
  EXPECT_DOUBLE_EQ(report.object_mean.mae, 22.5);
  EXPECT_DOUBLE_EQ(report.object_mean.accuracy_at(11.25), 50.0);
  EXPECT_EQ(report.pooled.valid_pixel_count, 6u);

  const std::string table = format_table(report);
  EXPECT_NE(table.find("All(pooled)"), std::string::npos);
  EXPECT_NE(table.find("All(object-mean)"), std::string::npos);
  EXPECT_NE(table.find("Acc<11.25deg"), std::string::npos);
  EXPECT_NE(table.find("22.50deg"), std::string::npos);
  EXPECT_THROW(aggregate({}), EmptyReportError);
}

}  // namespace
}  // namespace tsfp
