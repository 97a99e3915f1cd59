// Copyright 2026 The PPES Authors. All Rights Reserved.
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
// =============================================================================

#include "ppes/normal.hpp"

#include <cmath>
#include <numbers>

namespace ppes {
namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Mills ratio R(t) = Phi(-t) / phi(t) for t > 0 by Lentz's continued fraction
//   R(t) = 1 / (t + 1 / (t + 2 / (t + 3 / (t + ...)))).
double mills_ratio(double t) {
  constexpr double kTiny = 1e-300;
  double f = t;
  double c = t;
  double d = 0.0;
  for (int k = 1; k < 500; ++k) {
    d = t + k * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = t + k / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

}  // namespace

double norm_pdf(double z) { return kInvSqrt2Pi * std::exp(-0.5 * z * z); }

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_norm_cdf(double z) {
  if (z > -5.0) return std::log(norm_cdf(z));
  return std::log(mills_ratio(-z)) - 0.5 * z * z + std::log(kInvSqrt2Pi);
}

double pdf_over_cdf(double z) {
  if (z > -5.0) return norm_pdf(z) / norm_cdf(z);
  return 1.0 / mills_ratio(-z);
}

}  // namespace ppes
