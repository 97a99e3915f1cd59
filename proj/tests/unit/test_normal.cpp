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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <boost/math/distributions/normal.hpp>

#include "ppes/normal.hpp"

using namespace ppes;

TEST_CASE("norm_cdf and log_norm_cdf agree with boost") {
  const boost::math::normal_distribution<double> n01;
  for (double z = -30.0; z <= 8.0; z += 0.37) {
    const double ref = boost::math::cdf(n01, z);
    CHECK(norm_cdf(z) == doctest::Approx(ref).epsilon(1e-12));
    CHECK(log_norm_cdf(z) == doctest::Approx(std::log(ref)).epsilon(1e-12));
    CHECK(norm_pdf(z) == doctest::Approx(boost::math::pdf(n01, z)).epsilon(1e-12));
  }
}

TEST_CASE("pdf_over_cdf is accurate and smooth across the continued-fraction switch") {
  const boost::math::normal_distribution<double> n01;
  for (double z = -35.0; z <= 10.0; z += 0.013) {
    const double ref = boost::math::pdf(n01, z) / boost::math::cdf(n01, z);
    CHECK(pdf_over_cdf(z) == doctest::Approx(ref).epsilon(1e-10));
  }
  // Asymptote r(z) ~ -z for very negative z.
  CHECK(pdf_over_cdf(-1e4) == doctest::Approx(1e4).epsilon(1e-6));
  CHECK(std::isfinite(pdf_over_cdf(-1e300)));
}
