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

#include "cfsk/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cfsk/errors.hpp"

namespace cfsk {

Interval wilson_interval(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw ConfigError("wilson_interval: need 0 <= successes <= trials, trials > 0");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double spread = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // Clamp so that the interval always contains the point estimate even
  // after rounding at p == 0 or p == 1.
  return {std::clamp(std::min(center - spread, p), 0.0, 1.0),
          std::clamp(std::max(center + spread, p), 0.0, 1.0)};
}

double decibels(double value, double reference) {
  if (value <= 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(value / reference);
}

}  // namespace cfsk
