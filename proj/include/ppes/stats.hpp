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

#pragma once

// Small statistics toolbox for reports and acceptance checks.

#include <vector>

#include "ppes/common.hpp"

namespace ppes {

double median(std::vector<double> v);
double mean(const std::vector<double>& v);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double stddev(const std::vector<double>& v);

// Standard deviation of the median over `resamples` bootstrap resamples.
double bootstrap_median_sd(const std::vector<double>& v, int resamples, Rng& rng);

// Paired Wilcoxon signed-rank test of H1: x tends to be smaller than y.
// Zero differences are dropped. Exact null distribution when there are no
// tied magnitudes and n <= 60, normal approximation otherwise.
struct WilcoxonResult {
  double statistic = 0.0;  // W+ (sum of ranks of positive x - y)
  double p_value = 1.0;
  int n = 0;               // non-zero pairs
  bool exact = false;
};
WilcoxonResult wilcoxon_signed_rank_less(const std::vector<double>& x, const std::vector<double>& y);

// Average ranks (1-based, ties share the mean rank).
std::vector<double> ranks(const std::vector<double>& v);
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace ppes
