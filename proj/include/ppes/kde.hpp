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

// Differential entropy of 2-D samples by Gaussian product-kernel density
// estimation: fit on the first half, average -log p over the second half.

#include "ppes/common.hpp"

namespace ppes {

struct Bandwidth2 {
  double h0 = 0.0;
  double h1 = 0.0;
};

// Silverman's rule per axis, n^{-1/6} scaling, robust spread min(sd, IQR/1.349).
Bandwidth2 silverman_bandwidth(const double* a, const double* b, std::size_t n);

// With `whiten`, samples are first mapped through the inverse Cholesky factor
// of the fit half's covariance (a full-covariance kernel); the entropy is
// shifted back by the log-determinant.

// Direct O(n_fit * n_eval) density sums.
double kde_entropy_exact(const double* a, const double* b, std::size_t n, bool whiten = false);

// Linear binning onto a grid of spacing <= h/2, separable convolution and
// bilinear evaluation; held-out points outside the grid or in its near-empty
// tails fall back to direct sums.
double kde_entropy_binned(const double* a, const double* b, std::size_t n, bool whiten = false);

}  // namespace ppes
