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

// Shared fixtures for the acquisition tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <Eigen/Cholesky>

#include "ppes/acquisition.hpp"

namespace ppes::testing {

inline double logdet_spd(const Matrix& a) {
  Eigen::LLT<Matrix> llt(a);
  if (llt.info() != Eigen::Success) throw std::runtime_error("logdet_spd: not positive definite");
  return 2.0 * llt.matrixLLT().diagonal().array().log().sum();
}

inline Dataset noisy_sine_data(int n, int dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix x(n, dim);
  Vector y(n);
  for (int i = 0; i < n; ++i) {
    for (int d = 0; d < dim; ++d) x(i, d) = u(rng);
    y[i] = std::sin(6.0 * x(i, 0)) + 0.3 * (2.0 * u(rng) - 1.0);
  }
  return Dataset(x, y);
}

inline GpHyper random_hyper(int dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GpHyper h;
  h.mean = 0.2 * (2.0 * u(rng) - 1.0);
  h.amplitude_sq = 0.5 + 1.5 * u(rng);
  h.lengthscale = Vector(dim);
  for (int d = 0; d < dim; ++d) h.lengthscale[d] = 0.2 + 0.4 * u(rng);
  h.noise_var = 1e-3 + 1e-2 * u(rng);
  return h;
}

inline AcquisitionContext random_context(const Dataset& data, int m, Rng& rng) {
  const Domain dom = Domain::unit(data.dim());
  HyperPosteriorSamples hs;
  for (int i = 0; i < m; ++i) hs.samples.push_back(random_hyper(data.dim(), rng));
  ContextOptions opts;
  opts.num_features = 200;
  opts.xstar.search.n_scan = 200;
  opts.xstar.search.n_starts = 3;
  return build_acquisition_context(data, hs, dom, rng, opts);
}

// Rows sorted lexicographically, so the canonical order is the identity.
inline BatchCandidate random_sorted_batch(int q, int dim, Rng& rng) {
  const Domain dom = Domain::unit(dim);
  std::vector<Vector> pts;
  for (int i = 0; i < q; ++i) pts.push_back(dom.sample(rng));
  std::sort(pts.begin(), pts.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  BatchCandidate b{Matrix(q, dim)};
  for (int i = 0; i < q; ++i) b.points.row(i) = pts[static_cast<std::size_t>(i)].transpose();
  return b;
}

// The objective with every sample's EP sites held at the given values, built
// only from posterior_predictive and apply_sites.
inline double frozen_value(const BatchCandidate& batch, const AcquisitionContext& ctx,
                    const PpesEvaluation& base) {
  const int q = batch.size();
  double sum = 0.0;
  int ok = 0;
  for (std::size_t i = 0; i < ctx.size(); ++i) {
    if (std::isnan(base.terms[i])) continue;
    const MaximizerSample& s = ctx.sample(i);
    Matrix pts(q + 1, batch.points.cols());
    pts.topRows(q) = batch.points;
    pts.row(q) = s.x_star.transpose();
    const MvnPredictive pred = posterior_predictive(ctx.data(), s.hyper, pts);
    const MvnPredictive post = apply_sites(pred, base.sites[i]);
    const Matrix eye = s.hyper.noise_var * Matrix::Identity(q, q);
    sum += 0.5 * (logdet_spd(pred.cov.topLeftCorner(q, q) + eye) -
                  logdet_spd(post.cov.topLeftCorner(q, q) + eye));
    ++ok;
  }
  return sum / ok;
}

inline Matrix frozen_fd_gradient(const BatchCandidate& batch, const AcquisitionContext& ctx,
                          const PpesEvaluation& base, double h = 1e-5) {
  Matrix g(batch.points.rows(), batch.points.cols());
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index d = 0; d < g.cols(); ++d) {
      BatchCandidate up = batch, dn = batch;
      up.points(i, d) += h;
      dn.points(i, d) -= h;
      g(i, d) = (frozen_value(up, ctx, base) - frozen_value(dn, ctx, base)) / (2.0 * h);
    }
  }
  return g;
}

inline double relative_error(const Matrix& a, const Matrix& b) {
  return (a - b).norm() / std::max(b.norm(), 1e-12);
}


}  // namespace ppes::testing
