/*
 * Copyright 2026 The fuzzdiag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fuzzdiag {

/// Closed real interval [lo, hi] with finite endpoints.
class Interval {
public:
    constexpr Interval() = default;

    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!std::isfinite(lo) || !std::isfinite(hi)) {
            throw std::invalid_argument("interval endpoints must be finite");
        }
        if (lo > hi) {
            throw std::invalid_argument("interval lower bound " + std::to_string(lo) +
                                        " exceeds upper bound " + std::to_string(hi));
        }
    }

    constexpr double lo() const noexcept { return lo_; }
    constexpr double hi() const noexcept { return hi_; }
    constexpr double width() const noexcept { return hi_ - lo_; }
    constexpr double midpoint() const noexcept { return std::midpoint(lo_, hi_); }
    constexpr bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }

    friend constexpr bool operator==(const Interval&, const Interval&) = default;

private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

/// a is a subset of b. Exact comparisons; equal intervals include each other.
constexpr bool includes(const Interval& a, const Interval& b) noexcept {
    return a.lo() >= b.lo() && a.hi() <= b.hi();
}

/// Closed intervals share at least one point (touching endpoints count).
constexpr bool intersects(const Interval& a, const Interval& b) noexcept {
    return std::max(a.lo(), b.lo()) <= std::min(a.hi(), b.hi());
}

}  // namespace fuzzdiag
