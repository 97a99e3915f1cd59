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

#include "ppes/hyper_sampler.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace ppes {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double gamma_log_pdf_of_log(double u, double shape, double rate) {
  // Density of u = log(x) for x ~ Gamma(shape, rate), up to a constant:
  // shape * u - rate * exp(u).
  return shape * u - rate * std::exp(u);
}

}  // namespace

HyperPrior HyperPrior::from_data(const Dataset& data) {
  HyperPrior p;
  if (!data.empty()) {
    const Vector& y = data.outputs();
    p.mean_center = y.mean();
    const double var = (y.array() - p.mean_center).square().sum() /
                       std::max<double>(1.0, static_cast<double>(y.size()) - 1.0);
    p.mean_var = var + 1.0;
  }
  return p;
}

double HyperPrior::log_density(const Vector& theta) const {
  double lp = -0.5 * (theta[0] - mean_center) * (theta[0] - mean_center) / mean_var;
  for (Eigen::Index i = 1; i < theta.size(); ++i) {
    lp += gamma_log_pdf_of_log(theta[i], gamma_shape, gamma_rate);
  }
  return lp;
}

Vector hyper_to_theta(const GpHyper& h) {
  const int d = h.dim();
  Vector theta(d + 3);
  theta[0] = h.mean;
  theta[1] = std::log(h.amplitude_sq);
  for (int i = 0; i < d; ++i) theta[2 + i] = std::log(h.lengthscale[i]);
  theta[d + 2] = std::log(h.noise_var);
  return theta;
}

GpHyper theta_to_hyper(const Vector& theta) {
  const int d = static_cast<int>(theta.size()) - 3;
  GpHyper h;
  h.mean = theta[0];
  h.amplitude_sq = std::exp(theta[1]);
  h.lengthscale = theta.segment(2, d).array().exp().matrix();
  h.noise_var = std::exp(theta[d + 2]);
  return h;
}

double log_hyper_posterior(const Dataset& data, const HyperPrior& prior, const Vector& theta) {
  if (!theta.allFinite()) return kNegInf;
  // exp() must stay representable and strictly positive.
  if ((theta.tail(theta.size() - 1).array().abs() > 30.0).any()) return kNegInf;
  const double lp = prior.log_density(theta);
  if (data.empty()) return lp;
  try {
    const double ll = log_marginal_likelihood(data, theta_to_hyper(theta));
    return std::isfinite(ll) ? lp + ll : kNegInf;
  } catch (const NumericalError&) {
    return kNegInf;
  }
}

GpHyper initial_hyper(const Dataset& data) {
  GpHyper h;
  const int d = data.dim();
  h.lengthscale = Vector::Constant(d, 0.25);
  if (!data.empty()) {
    const Vector& y = data.outputs();
    const double mu = y.mean();
    const double var = (y.array() - mu).square().mean();
    h.mean = mu;
    h.amplitude_sq = std::max(var, 1e-2);
    h.noise_var = 1e-2 * h.amplitude_sq;
    const Vector w = data.inputs().colwise().maxCoeff() - data.inputs().colwise().minCoeff();
    for (int i = 0; i < d; ++i) h.lengthscale[i] = std::max(0.25 * w[i], 0.05);
  } else {
    h.amplitude_sq = 1.0;
    h.noise_var = 1e-2;
  }
  return h;
}

HyperChain::HyperChain(const Dataset& data, SliceSamplerOptions options)
    : options_(options), theta_(hyper_to_theta(initial_hyper(data))) {}

void HyperChain::sweep(const Dataset& data, const HyperPrior& prior, Rng& rng,
                       double* log_post) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double mean_width = std::sqrt(prior.mean_var);
  for (Eigen::Index i = 0; i < theta_.size(); ++i) {
    const double w = (i == 0) ? mean_width : options_.width;
    const double log_y = *log_post + std::log(unif(rng));
    // Step out.
    double lo = theta_[i] - w * unif(rng);
    double hi = lo + w;
    Vector probe = theta_;
    int j = static_cast<int>(std::floor(options_.max_step_out * unif(rng)));
    int k = options_.max_step_out - 1 - j;
    probe[i] = lo;
    while (j-- > 0 && log_hyper_posterior(data, prior, probe) > log_y) {
      lo -= w;
      probe[i] = lo;
    }
    probe[i] = hi;
    while (k-- > 0 && log_hyper_posterior(data, prior, probe) > log_y) {
      hi += w;
      probe[i] = hi;
    }
    // Shrink.
    for (int iter = 0; iter < 200; ++iter) {
      probe[i] = lo + (hi - lo) * unif(rng);
      const double lp = log_hyper_posterior(data, prior, probe);
      if (lp > log_y) {
        theta_[i] = probe[i];
        *log_post = lp;
        break;
      }
      if (probe[i] < theta_[i]) {
        lo = probe[i];
      } else {
        hi = probe[i];
      }
    }
  }
}

HyperPosteriorSamples HyperChain::sample(const Dataset& data, int m, Rng& rng,
                                         int warm_burn_in) {
  if (m < 1) throw std::invalid_argument("HyperChain::sample: M must be >= 1");
  const HyperPrior prior = HyperPrior::from_data(data);
  if (theta_.size() != data.dim() + 3) theta_ = hyper_to_theta(initial_hyper(data));
  double log_post = log_hyper_posterior(data, prior, theta_);
  if (!std::isfinite(log_post)) {
    theta_ = hyper_to_theta(initial_hyper(data));
    log_post = log_hyper_posterior(data, prior, theta_);
    if (!std::isfinite(log_post)) throw NumericalError("HyperChain: invalid initial state");
  }
  const int burn = warmed_ ? warm_burn_in : options_.burn_in;
  for (int s = 0; s < burn; ++s) sweep(data, prior, rng, &log_post);
  warmed_ = true;

  HyperPosteriorSamples out;
  out.samples.reserve(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    for (int t = 0; t < std::max(1, options_.thin); ++t) sweep(data, prior, rng, &log_post);
    out.samples.push_back(theta_to_hyper(theta_));
  }
  return out;
}

HyperPosteriorSamples sample_hyperparameters(const Dataset& data, int m, Rng& rng,
                                             const SliceSamplerOptions& options) {
  if (data.size() < 2) throw std::invalid_argument("sample_hyperparameters: need >= 2 points");
  HyperChain chain(data, options);
  return chain.sample(data, m, rng);
}

}  // namespace ppes
