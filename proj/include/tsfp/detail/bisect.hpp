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

#ifndef TSFP_DETAIL_BISECT_HPP_
#define TSFP_DETAIL_BISECT_HPP_

#include <cmath>

namespace tsfp::detail {

/// Solves f(x) == target on [lo, hi] where f is monotone on the interval
/// (increasing or decreasing as stated) and the interval brackets the target.
/// Halves until the bracket cannot shrink any further in double precision
/// or max_iterations is reached, then returns the endpoint with the smaller
/// residual.
template <class F>
double bisect_monotone(const F& f, double target, double lo, double hi, bool increasing,
                       int max_iterations = 200) {
  for (int it = 0; it < max_iterations; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == target) return mid;
    if ((fm < target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::abs(f(lo) - target) <= std::abs(f(hi) - target) ? lo : hi;
}

}  // namespace tsfp::detail

#endif  // TSFP_DETAIL_BISECT_HPP_
