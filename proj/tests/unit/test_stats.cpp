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

#include "ppes/stats.hpp"

using namespace ppes;

TEST_CASE("order statistics") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
  CHECK(mean({1.0, 2.0, 6.0}) == 3.0);
  CHECK(stddev({2.0}) == 0.0);
  CHECK(stddev({1.0, 3.0}) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS(median({}));
}

TEST_CASE("ranks and spearman") {
  const std::vector<double> r = ranks({10.0, 30.0, 20.0, 30.0});
  CHECK(r == std::vector<double>{1.0, 3.5, 2.0, 3.5});
  CHECK(spearman({1, 2, 3, 4}, {2, 4, 8, 16}) == doctest::Approx(1.0));
  CHECK(spearman({1, 2, 3, 4}, {4, 3, 2, 1}) == doctest::Approx(-1.0));
  CHECK(spearman({1, 2, 3, 4, 5}, {5, 6, 7, 8, 7}) == doctest::Approx(8.0 / std::sqrt(95.0)));
}

TEST_CASE("bootstrap of the median") {
  Rng rng(1);
  CHECK(bootstrap_median_sd({2.0, 2.0, 2.0}, 200, rng) == 0.0);
  CHECK(bootstrap_median_sd({5.0}, 200, rng) == 0.0);
  std::vector<double> v;
  std::normal_distribution<double> z(0.0, 1.0);
  for (int i = 0; i < 400; ++i) v.push_back(z(rng));
  // Asymptotic s.d. of the median of N(0,1): sqrt(pi / (2 n)).
  const double expect = std::sqrt(M_PI / (2.0 * 400.0));
  CHECK(bootstrap_median_sd(v, 4000, rng) == doctest::Approx(expect).epsilon(0.25));
}

TEST_CASE("wilcoxon exact small cases") {
  // All five differences negative: W+ = 0, p = 1/32.
  WilcoxonResult w = wilcoxon_signed_rank_less({1, 2, 3, 4, 5}, {2, 4, 6, 8, 10});
  CHECK(w.exact);
  CHECK(w.n == 5);
  CHECK(w.statistic == 0.0);
  CHECK(w.p_value == doctest::Approx(1.0 / 32.0));
  // Differences -1,-2,-3,+4,-5: W+ = 4, subsets of {1..5} with sum <= 4 number 7.
  w = wilcoxon_signed_rank_less({0, 0, 0, 4, 0}, {1, 2, 3, 0, 5});
  CHECK(w.statistic == 4.0);
  CHECK(w.p_value == doctest::Approx(7.0 / 32.0));
  // Zero differences are dropped.
  w = wilcoxon_signed_rank_less({1, 2, 3, 7}, {2, 4, 6, 7});
  CHECK(w.n == 3);
  CHECK(w.p_value == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("wilcoxon normal approximation") {
  Rng rng(2);
  std::normal_distribution<double> z(0.0, 1.0);
  std::vector<double> x, y;
  for (int i = 0; i < 60; ++i) {
    x.push_back(z(rng));
    y.push_back(z(rng) + 0.2);
  }
  const WilcoxonResult exact = wilcoxon_signed_rank_less(x, y);
  CHECK(exact.exact);
  x.push_back(0.0);
  y.push_back(0.5);
  const WilcoxonResult approx = wilcoxon_signed_rank_less(x, y);
  CHECK_FALSE(approx.exact);
  CHECK(approx.p_value == doctest::Approx(exact.p_value).epsilon(0.3));
  // Ties fall back to the approximation.
  const WilcoxonResult tied = wilcoxon_signed_rank_less({0, 0, 0, 0}, {1, 1, 2, 2});
  CHECK_FALSE(tied.exact);
  CHECK(tied.p_value < 0.1);
  CHECK_THROWS(wilcoxon_signed_rank_less({1, 2}, {1}));
}
