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

// Gaussian-process surrogate: ARD squared-exponential kernel with a constant
// mean, exact posterior predictive moments and the marginal likelihood.

#include <cstddef>
#include <vector>

#include "ppes/common.hpp"
#include "ppes/linalg.hpp"

namespace ppes {

// Axis-aligned box lower[d] < upper[d].
class Domain {
 public:
  Domain(Vector lower, Vector upper);

  static Domain unit(int dim);

  int dim() const { return static_cast<int>(lower_.size()); }
  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Vector width() const { return upper_ - lower_; }

  bool contains(const Vector& x) const;
  Vector clamp(const Vector& x) const;
  Vector sample(Rng& rng) const;

  // The Q-fold product of this box, for optimizing flattened batches.
  Domain power(int q) const;

 private:
  Vector lower_;
  Vector upper_;
};

// Observations (x_i, y_i), one input per row.
class Dataset {
 public:
  explicit Dataset(int dim);
  Dataset(Matrix inputs, Vector outputs);

  void add(const Vector& x, double y);

  std::size_t size() const { return static_cast<std::size_t>(outputs_.size()); }
  bool empty() const { return outputs_.size() == 0; }
  int dim() const { return static_cast<int>(inputs_.cols()); }
  const Matrix& inputs() const { return inputs_; }
  const Vector& outputs() const { return outputs_; }

  // Largest output; -inf when empty.
  double y_max() const { return y_max_; }
  // Row index of the largest output; requires !empty().
  std::size_t argmax() const;

 private:
  Matrix inputs_;
  Vector outputs_;
  double y_max_;
};

struct GpHyper {
  double mean = 0.0;          // constant prior mean
  double amplitude_sq = 1.0;  // signal variance
  Vector lengthscale;         // one per input dimension
  double noise_var = 1e-4;    // observation noise variance

  int dim() const { return static_cast<int>(lengthscale.size()); }
  Vector inv_lengthscale_sq() const;

  // Throws std::invalid_argument when a positive parameter is not positive.
  void validate() const;
};

struct MvnPredictive {
  Vector mean;
  Matrix cov;
};

double kernel_eval(const Vector& x, const Vector& x2, const GpHyper& hyper);

// Gradient of k(x, x2) with respect to x.
Vector kernel_grad(const Vector& x, const Vector& x2, const GpHyper& hyper);

// Prior covariance between the rows of a and the rows of b.
Matrix kernel_matrix(const Matrix& a, const Matrix& b, const GpHyper& hyper);

// Conditioned GP for one dataset and one hyperparameter setting. The
// factorization of K + noise*I is computed once and reused by every query.
class GpPosterior {
 public:
  GpPosterior(const Dataset& data, const GpHyper& hyper);

  const Dataset& data() const { return data_; }
  const GpHyper& hyper() const { return hyper_; }
  std::size_t size() const { return data_.size(); }

  // k(x, X) for the training inputs X.
  Vector cross_cov(const Vector& x) const;
  // (K + noise*I)^{-1} k(x, X)
  Vector solve(const Vector& k) const;

  double mean(const Vector& x) const;
  double variance(const Vector& x) const;
  // Posterior mean and its gradient with respect to x.
  double mean_grad(const Vector& x, Vector* grad) const;
  // Posterior mean/variance and their gradients with respect to x.
  void moments_grad(const Vector& x, double* mu, double* var, Vector* dmu, Vector* dvar) const;

  // Joint latent predictive at the rows of test (no observation noise).
  MvnPredictive predictive(const Matrix& test) const;

  // (K + noise*I)^{-1} (y - mean)
  const Vector& weights() const { return weights_; }
  double jitter() const { return chol_.jitter; }

 private:
  Dataset data_;
  GpHyper hyper_;
  Vector inv_ls2_;
  JitteredCholesky chol_;
  Vector weights_;
};

MvnPredictive posterior_predictive(const Dataset& data, const GpHyper& hyper,
                                   const Matrix& test);

// log N(y; mean*1, K + noise*I); data must be non-empty.
double log_marginal_likelihood(const Dataset& data, const GpHyper& hyper);

}  // namespace ppes
