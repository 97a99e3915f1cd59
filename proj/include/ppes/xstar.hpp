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

// Approximate draws from p(x* | data): the MAP estimate (argmax of the
// posterior mean) and argmaxes of random-Fourier-feature sample paths.

#include <vector>

#include "ppes/gp.hpp"
#include "ppes/optimize.hpp"

namespace ppes {

// g(x) = sqrt(2 alpha / m) * sum_k weights_k cos(freq_k . x + phase_k) + mean_offset
struct RandomFeatureModel {
  Matrix freq;         // m x D; column d is contiguous over features
  Vector phase;        // m, in [0, 2 pi)
  double amp_norm = 1.0;
  Vector weights;      // m
  double mean_offset = 0.0;

  int num_features() const { return static_cast<int>(phase.size()); }
  double feature_scale() const;

  // phi(x), the m-dimensional feature vector.
  Vector features(const Vector& x) const;
  // Feature matrix with one row per input row.
  Matrix feature_matrix(const Matrix& inputs) const;
  // g(x) and optionally its gradient.
  double value(const Vector& x, Vector* grad = nullptr) const;
};

struct MaximizerSample {
  enum class Source { kMap, kRandomFeature };
  GpHyper hyper;
  Vector x_star;
  Source source = Source::kRandomFeature;
};

struct XStarOptions {
  int num_features = 500;
  MultiStartOptions search;
};

Vector map_maximizer(const Dataset& data, const GpHyper& hyper, const Domain& domain, Rng& rng,
                     const XStarOptions& options = {});

RandomFeatureModel draw_feature_model(const Dataset& data, const GpHyper& hyper, int m, Rng& rng);

Vector sample_maximizer_rf(const Dataset& data, const GpHyper& hyper, const Domain& domain, int m,
                           Rng& rng, const XStarOptions& options = {});

namespace detail {

// Posterior over feature weights theta ~ N(0, I) given r = Phi theta + noise.
// Two algebraically equivalent routes: the m x m primal system
// A = Phi^T Phi + noise I, and the n x n dual system Phi Phi^T + noise I.
struct WeightPosterior {
  Vector mean;
  Matrix cov;
};
WeightPosterior weight_posterior_primal(const Matrix& phi, const Vector& r, double noise_var);
WeightPosterior weight_posterior_dual(const Matrix& phi, const Vector& r, double noise_var);

// Exact posterior draw by perturbing a prior draw through the dual system
// (theta0 + Phi^T (Phi Phi^T + noise I)^{-1} (r - Phi theta0 - eps)).
Vector sample_weights_dual(const Matrix& phi, const Vector& r, double noise_var, Rng& rng);
// Draw via the Cholesky factor of the primal system.
Vector sample_weights_primal(const Matrix& phi, const Vector& r, double noise_var, Rng& rng);

}  // namespace detail
}  // namespace ppes
