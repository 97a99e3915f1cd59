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

// Monte-Carlo parallel predictive entropy search objective
//
//   a(S) = 1/(2M) sum_i [ log det(K_i + s2_i I) - log det(Sigma_i + s2_i I) ]
//
// where K_i is the Q x Q latent predictive covariance of the batch under the
// i-th hyperparameter sample and Sigma_i is its counterpart after EP
// conditioning on x*_i being the maximizer. The gradient holds the converged
// EP sites fixed and propagates dK+ through Sigma+ = Sigma+ K+^{-1} dK+ K+^{-1} Sigma+.

#include <vector>

#include "ppes/ep.hpp"
#include "ppes/gp.hpp"
#include "ppes/hyper_sampler.hpp"
#include "ppes/xstar.hpp"

namespace ppes {

struct BatchCandidate {
  Matrix points;  // Q x D, one point per row

  int size() const { return static_cast<int>(points.rows()); }
};

class AcquisitionContext {
 public:
  AcquisitionContext(const Dataset& data, std::vector<MaximizerSample> samples,
                     EpOptions ep = {});

  const Dataset& data() const { return data_; }
  std::size_t size() const { return terms_.size(); }
  const MaximizerSample& sample(std::size_t i) const { return samples_[i]; }
  const EpOptions& ep_options() const { return ep_; }

  struct Term {
    GpPosterior post;
    Vector k_star;      // k(x*, X)
    Vector alpha_star;  // (K + s2 I)^{-1} k(x*, X)
    double mean_star;
  };
  const Term& term(std::size_t i) const { return terms_[i]; }

 private:
  Dataset data_;
  std::vector<MaximizerSample> samples_;
  std::vector<Term> terms_;
  EpOptions ep_;
};

struct ContextOptions {
  bool use_map = false;    // MAP point estimate instead of random-feature draws
  int num_features = 500;
  int probe_batch_size = 1;
  int max_redraws = 50;    // failed-EP redraws before falling back to MAP
  XStarOptions xstar;
  EpOptions ep;
};

// One maximizer sample per hyperparameter sample; draws whose EP fails on a
// random probe batch are rejected and redrawn.
AcquisitionContext build_acquisition_context(const Dataset& data,
                                             const HyperPosteriorSamples& hypers,
                                             const Domain& domain, Rng& rng,
                                             const ContextOptions& options = {});

struct PpesEvaluation {
  double value = 0.0;
  Matrix gradient;                 // Q x D, batch order of the input (when requested)
  Matrix gradient_prior_term;      // gradient of the 0.5 logdet(K + s2 I) part alone
  std::vector<double> terms;       // per-sample 0.5*(logdet K - logdet Sigma); NaN if EP failed
  std::vector<SiteParams> sites;   // per-sample converged sites, canonical order
  std::vector<int> order;          // canonical position -> input row
  int failed = 0;
};

// Batch points are put in lexicographic order (and exact duplicates nudged by
// 1e-6) before evaluation, so the result does not depend on input order.
PpesEvaluation evaluate_ppes(const BatchCandidate& batch, const AcquisitionContext& ctx,
                             bool with_gradient);

double ppes_value(const BatchCandidate& batch, const AcquisitionContext& ctx);
Matrix ppes_gradient(const BatchCandidate& batch, const AcquisitionContext& ctx);

struct BatchOptimizerOptions {
  int n_random = 1000;
  int n_restarts = 1;  // ascents from the best random batches
  AscentOptions ascent{.max_steps = 100};
};

BatchCandidate optimize_batch(const AcquisitionContext& ctx, const Domain& domain, int q, Rng& rng,
                              const BatchOptimizerOptions& options = {});

}  // namespace ppes
