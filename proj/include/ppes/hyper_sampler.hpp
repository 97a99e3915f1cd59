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

// Monte-Carlo samples from p(hyper | data) by coordinate-wise slice sampling
// over (mean, log amplitude^2, log lengthscales, log noise variance).

#include <vector>

#include "ppes/gp.hpp"

namespace ppes {

struct HyperPrior {
  double mean_center = 0.0;  // Normal prior on the constant mean
  double mean_var = 1.0;
  double gamma_shape = 1.5;  // Gamma prior on amplitude^2, lengthscales, noise variance
  double gamma_rate = 0.5;

  // Normal(mean of outputs, output variance + 1) on the mean.
  static HyperPrior from_data(const Dataset& data);

  // Log density of the prior over the sampler's coordinates (includes the
  // log-Jacobian of the exp transform).
  double log_density(const Vector& theta) const;
};

struct HyperPosteriorSamples {
  std::vector<GpHyper> samples;
  std::size_t size() const { return samples.size(); }
};

struct SliceSamplerOptions {
  int burn_in = 300;
  int thin = 5;
  double width = 1.0;  // initial bracket width in log space
  int max_step_out = 16;
};

// theta = [mean, log amp^2, log l_1..l_D, log noise]
Vector hyper_to_theta(const GpHyper& h);
GpHyper theta_to_hyper(const Vector& theta);

// Unnormalized log posterior over theta; -inf where the likelihood fails.
double log_hyper_posterior(const Dataset& data, const HyperPrior& prior, const Vector& theta);

// A persistent chain so the harness can warm start between iterations.
class HyperChain {
 public:
  HyperChain(const Dataset& data, SliceSamplerOptions options = {});

  // Draws M samples; burn-in is run fully on the first call and is shortened
  // to `warm_burn_in` sweeps afterwards.
  HyperPosteriorSamples sample(const Dataset& data, int m, Rng& rng, int warm_burn_in = 50);

  const Vector& state() const { return theta_; }

 private:
  void sweep(const Dataset& data, const HyperPrior& prior, Rng& rng, double* log_post);

  SliceSamplerOptions options_;
  Vector theta_;
  bool warmed_ = false;
};

// Initial state from data-scale heuristics.
GpHyper initial_hyper(const Dataset& data);

HyperPosteriorSamples sample_hyperparameters(const Dataset& data, int m, Rng& rng,
                                             const SliceSamplerOptions& options = {});

}  // namespace ppes
