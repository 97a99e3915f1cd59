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

// Greedy batch policies used as baselines, plus single-point expected improvement.

#include <functional>
#include <string>
#include <vector>

#include "ppes/acquisition.hpp"
#include "ppes/gp.hpp"
#include "ppes/hyper_sampler.hpp"
#include "ppes/optimize.hpp"

namespace ppes {

struct UcbSchedule {
  std::function<double(int)> alpha_t;

  double operator()(int t) const { return alpha_t(t); }
  // alpha_t = 2 log(D t^2 pi^2 / 0.6)
  static UcbSchedule standard(int dim);
  static UcbSchedule constant(double alpha);
};

enum class Method { kPpes, kEiMcmc, kSmUcb, kGpBucb, kGpUcbPe, kRandom };

std::string method_name(Method m);
// Accepts ppes, ei_mcmc, sm_ucb, gp_bucb, gp_ucb_pe, random (case-insensitive, '-' == '_').
Method parse_method(const std::string& s);

struct PolicyConfig {
  Method method = Method::kPpes;
  int q = 3;
  int n_fantasy = 100;   // EI-MCMC fantasies
  int pool = 30;         // simulated-matching population
  int n_candidates = 2000;  // GP-UCB-PE region / variance candidate set
  UcbSchedule schedule;  // defaults to UcbSchedule::standard(D) when empty
  MultiStartOptions search;  // inner point optimizer of the greedy policies
  ContextOptions context;    // PPES x* sampling
  BatchOptimizerOptions batch;  // PPES joint batch search
};

// EI from predictive moments: sd [phi(tau) + tau Phi(tau)], tau = (mu - best) / sd.
double expected_improvement(double mu, double sd, double best);
// best = largest observed output of data.
double expected_improvement(const Vector& x, const Dataset& data, const GpHyper& hyper);
// Value and gradient for an existing posterior.
double expected_improvement_grad(const GpPosterior& post, double best, const Vector& x, Vector* grad);

// mu + sqrt(alpha) * sd, with gradient.
double ucb_value(const GpPosterior& post, double alpha, const Vector& x, Vector* grad);
Vector ucb_argmax(const GpPosterior& post, double alpha, const Domain& domain, Rng& rng,
                  const MultiStartOptions& search = {});

BatchCandidate ei_mcmc_batch(const Dataset& data, const HyperPosteriorSamples& hypers,
                             const Domain& domain, int q, int n_fantasy, Rng& rng,
                             const MultiStartOptions& search = {});

// Draws n joint fantasies of the noisy outputs at `points`.
Matrix fantasize_outputs(const GpPosterior& post, const Matrix& points, int n, Rng& rng);

BatchCandidate sm_ucb_batch(const Dataset& data, const GpHyper& hyper, const Domain& domain, int q,
                            int pool, const UcbSchedule& schedule, int t, Rng& rng,
                            const MultiStartOptions& search = {});

// Greedy build followed by swap improvement; returns row indices of the medoids.
std::vector<int> greedy_k_medoids(const Matrix& points, int k);
double k_medoids_cost(const Matrix& points, const std::vector<int>& medoids);

BatchCandidate gp_bucb_batch(const Dataset& data, const GpHyper& hyper, const Domain& domain, int q,
                             const UcbSchedule& schedule, int t, Rng& rng,
                             const MultiStartOptions& search = {});

struct UcbPeTrace {
  Matrix candidates;          // candidate set
  std::vector<bool> in_region;
  double lcb_max = 0.0;
};
BatchCandidate gp_ucb_pe_batch(const Dataset& data, const GpHyper& hyper, const Domain& domain,
                               int q, const UcbSchedule& schedule, int t, Rng& rng,
                               int n_candidates = 2000, const MultiStartOptions& search = {},
                               UcbPeTrace* trace = nullptr);

BatchCandidate random_batch(const Domain& domain, int q, Rng& rng);

// Nudges exact duplicate rows by 1e-6 (towards the interior of the box).
void separate_duplicates(Matrix* points, const Domain& domain);

}  // namespace ppes
