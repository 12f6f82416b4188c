// Copyright 2026 The CFSK Receiver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>

namespace cfsk {

struct Interval {
  double low = 0.0;
  double high = 1.0;

  double halfwidth() const { return 0.5 * (high - low); }
  bool contains(double x) const { return low <= x && x <= high; }

  bool operator==(const Interval&) const = default;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for a binomial proportion. Stays inside [0, 1]
/// and is well behaved at zero or very few successes.
Interval wilson_interval(std::int64_t successes, std::int64_t trials,
                         double z = kZ95);

/// 10*log10(value/reference). Returns -inf for value == 0.
double decibels(double value, double reference);

}  // namespace cfsk
