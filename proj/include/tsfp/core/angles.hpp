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

#ifndef TSFP_CORE_ANGLES_HPP_
#define TSFP_CORE_ANGLES_HPP_

#include <cmath>
#include <numbers>

namespace tsfp {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

constexpr double deg2rad(double deg) { return deg * (kPi / 180.0); }
constexpr double rad2deg(double rad) { return rad * (180.0 / kPi); }

namespace detail {
inline double wrap_period(double a, double period) {
  double w = std::fmod(a, period);
  if (w < 0.0) w += period;
  // fmod of a tiny negative number can round up to exactly one period.
  if (w >= period) w = 0.0;
  return w;
}
}  // namespace detail

/// Wraps into [0, pi). AoLP lives here.
inline double wrap_pi(double a) { return detail::wrap_period(a, kPi); }

/// Wraps into [0, 2pi). Azimuths live here.
inline double wrap_two_pi(double a) { return detail::wrap_period(a, kTwoPi); }

/// Signed difference a - b folded into (-pi, pi].
inline double angle_diff(double a, double b) {
  double d = wrap_two_pi(a - b);
  if (d > kPi) d -= kTwoPi;
  return d;
}

/// Distance between two axial angles of period pi, in [0, pi/2].
inline double axial_distance(double a, double b) {
  const double d = wrap_pi(a - b);
  return d > kHalfPi ? kPi - d : d;
}

}  // namespace tsfp

#endif  // TSFP_CORE_ANGLES_HPP_
