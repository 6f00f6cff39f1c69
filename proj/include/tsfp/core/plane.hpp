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

#ifndef TSFP_CORE_PLANE_HPP_
#define TSFP_CORE_PLANE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tsfp {

/// Dense row-major image plane. Pixel (x, y) lives at index y * width + x.
template <typename T>
class Plane {
 public:
  using value_type = T;

  Plane() = default;
  Plane(std::size_t width, std::size_t height, T fill = T{})
      : width_(width), height_(height), data_(width * height, fill) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t x, std::size_t y) { return data_[y * width_ + x]; }
  const T& operator()(std::size_t x, std::size_t y) const {
    return data_[y * width_ + x];
  }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::span<T> row(std::size_t y) { return {data_.data() + y * width_, width_}; }
  std::span<const T> row(std::size_t y) const {
    return {data_.data() + y * width_, width_};
  }
  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  template <typename U>
  bool same_shape(const Plane<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Plane&, const Plane&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<T> data_;
};

/// Per-pixel validity flags; nonzero means valid.
using Mask = Plane<std::uint8_t>;

inline Mask full_mask(std::size_t width, std::size_t height) {
  return Mask(width, height, 1);
}

inline std::size_t count_valid(const Mask& mask) {
  return static_cast<std::size_t>(
      std::count_if(mask.begin(), mask.end(), [](std::uint8_t v) { return v != 0; }));
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend Vec3 operator*(double s, const Vec3& v) { return {s * v.x, s * v.y, s * v.z}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline bool is_zero(const Vec3& v) { return v.x == 0.0 && v.y == 0.0 && v.z == 0.0; }

inline Vec3 normalized(const Vec3& v) {
  const double len = norm(v);
  return len > 0.0 ? (1.0 / len) * v : Vec3{};
}

/// Angle between two directions in radians; the dot product is clamped before acos.
inline double angle_between(const Vec3& a, const Vec3& b) {
  const double denom = norm(a) * norm(b);
  if (denom == 0.0) return 0.0;
  return std::acos(std::clamp(dot(a, b) / denom, -1.0, 1.0));
}

/// Unit normal field in camera space (+x right, +y up, +z toward the camera).
/// Invalid pixels carry the zero vector.
struct NormalMap {
  Plane<Vec3> normals;
  Mask mask;

  NormalMap() = default;
  NormalMap(std::size_t width, std::size_t height)
      : normals(width, height), mask(width, height, 0) {}

  std::size_t width() const noexcept { return normals.width(); }
  std::size_t height() const noexcept { return normals.height(); }

  void set(std::size_t x, std::size_t y, const Vec3& n) {
    normals(x, y) = n;
    mask(x, y) = 1;
  }
  void clear(std::size_t x, std::size_t y) {
    normals(x, y) = Vec3{};
    mask(x, y) = 0;
  }

  friend bool operator==(const NormalMap&, const NormalMap&) = default;
};

}  // namespace tsfp

#endif  // TSFP_CORE_PLANE_HPP_
