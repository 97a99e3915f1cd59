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

// Expectation propagation for a Gaussian over f+ = [f_1..f_Q, f*] subject to
//   f* >= f_q            for every batch coordinate q   (hard factors)
//   Phi((f* - y_max)/s)  with s^2 the observation noise  (one soft factor)
// Each factor is replaced by a scaled univariate Gaussian site on c_q^T f+.

#include "ppes/common.hpp"
#include "ppes/gp.hpp"

namespace ppes {

// Column q holds c_q: for q < Q it is -e_q + e_Q, and column Q is e_Q.
Matrix constraint_vectors(int batch_size);

// Site parameters in moment form. tau_tilde is the site variance; a site that
// does not participate (soft factor with y_max = -inf) has tau_tilde = +inf.
struct SiteParams {
  Vector z_tilde;
  Vector mu_tilde;
  Vector tau_tilde;

  // Natural parameters 1/tau and mu/tau (zero for inactive sites).
  Vector precision() const;
  Vector precision_mean() const;
};

struct EpOptions {
  double damping = 0.5;         // weight of the new natural parameters
  double tolerance = 1e-6;      // max absolute change of site natural parameters
  int max_sweeps = 60;
  double initial_site_var = 1e6;
  int max_skipped_sweeps = 3;   // consecutive negative-cavity sweeps before failing
};

struct EpResult {
  Vector mu_plus;
  Matrix sigma_plus;
  double log_z = 0.0;
  SiteParams sites;
  bool converged = false;
  int iterations = 0;
};

// pred is the joint predictive over [batch; x*]; the last coordinate is f*.
// y_max = -inf drops the soft factor.
EpResult ep_condition(const MvnPredictive& pred, double y_max, double noise_var,
                      const EpOptions& options = {});

// Gaussian moments of N(m, K) multiplied by fixed sites, without any EP
// update. ep_condition's output satisfies apply_sites(pred, r.sites) == r.
MvnPredictive apply_sites(const MvnPredictive& pred, const SiteParams& sites);

// K^{-1} Sigma for Sigma = apply_sites(pred, sites).cov, computed without
// inverting K (which may be singular for duplicated points).
Matrix prior_inverse_times_posterior(const Matrix& prior_cov, const SiteParams& sites);

// 0.5 * log det(2 pi e (sigma + noise_var I))
double batch_entropy(const Matrix& sigma, double noise_var);

}  // namespace ppes
