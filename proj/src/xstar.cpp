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

#include "ppes/xstar.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Cholesky>

#include "ppes/linalg.hpp"
#include "ppes/simd/kernels.hpp"

namespace ppes {
namespace {

Vector standard_normal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = normal(rng);
  return z;
}

}  // namespace

double RandomFeatureModel::feature_scale() const {
  return std::sqrt(2.0 * amp_norm / static_cast<double>(num_features()));
}

Vector RandomFeatureModel::features(const Vector& x) const {
  const auto m = static_cast<std::size_t>(num_features());
  Vector out(num_features());
  simd::active_kernels().cos_features(x.data(), freq.data(), phase.data(), m, m,
                                      static_cast<std::size_t>(x.size()), feature_scale(),
                                      out.data());
  return out;
}

Matrix RandomFeatureModel::feature_matrix(const Matrix& inputs) const {
  Matrix out(inputs.rows(), num_features());
  for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
    out.row(i) = features(inputs.row(i).transpose()).transpose();
  }
  return out;
}

double RandomFeatureModel::value(const Vector& x, Vector* grad) const {
  const auto m = static_cast<std::size_t>(num_features());
  const auto dim = static_cast<std::size_t>(x.size());
  if (grad) grad->resize(x.size());
  const double v = simd::active_kernels().cos_features_dot(
      x.data(), freq.data(), phase.data(), weights.data(), m, m, dim, feature_scale(),
      grad ? grad->data() : nullptr);
  return v + mean_offset;
}

namespace detail {

WeightPosterior weight_posterior_primal(const Matrix& phi, const Vector& r, double noise_var) {
  Matrix a = phi.transpose() * phi;
  a.diagonal().array() += noise_var;
  const JitteredCholesky chol = jittered_cholesky(a);
  WeightPosterior out;
  out.mean = chol.llt.solve(phi.transpose() * r);
  out.cov = noise_var * chol.llt.solve(Matrix::Identity(a.rows(), a.cols()));
  return out;
}

WeightPosterior weight_posterior_dual(const Matrix& phi, const Vector& r, double noise_var) {
  Matrix g = phi * phi.transpose();
  g.diagonal().array() += noise_var;
  const JitteredCholesky chol = jittered_cholesky(g);
  WeightPosterior out;
  out.mean = phi.transpose() * chol.llt.solve(r);
  out.cov = Matrix::Identity(phi.cols(), phi.cols()) - phi.transpose() * chol.llt.solve(phi);
  return out;
}

Vector sample_weights_dual(const Matrix& phi, const Vector& r, double noise_var, Rng& rng) {
  Matrix g = phi * phi.transpose();
  g.diagonal().array() += noise_var;
  const JitteredCholesky chol = jittered_cholesky(g);
  const Vector theta0 = standard_normal(phi.cols(), rng);
  const Vector eps = std::sqrt(noise_var) * standard_normal(phi.rows(), rng);
  return theta0 + phi.transpose() * chol.llt.solve(r - phi * theta0 - eps);
}

Vector sample_weights_primal(const Matrix& phi, const Vector& r, double noise_var, Rng& rng) {
  Matrix a = phi.transpose() * phi;
  a.diagonal().array() += noise_var;
  const JitteredCholesky chol = jittered_cholesky(a);
  const Vector mean = chol.llt.solve(phi.transpose() * r);
  // cov = noise * A^{-1} = (sqrt(noise) L^{-T})(...)^T
  const Vector z = standard_normal(phi.cols(), rng);
  const Vector noise_part = chol.llt.matrixU().solve(z);
  return mean + std::sqrt(noise_var) * noise_part;
}

}  // namespace detail

Vector map_maximizer(const Dataset& data, const GpHyper& hyper, const Domain& domain, Rng& rng,
                     const XStarOptions& options) {
  const GpPosterior post(data, hyper);
  const ValueGrad f = [&post](const Vector& x, Vector* grad) { return post.mean_grad(x, grad); };
  std::vector<Vector> extra;
  for (Eigen::Index i = 0; i < data.inputs().rows(); ++i) extra.push_back(data.inputs().row(i).transpose());
  return multistart_maximize(f, domain, rng, options.search, extra).x;
}

RandomFeatureModel draw_feature_model(const Dataset& data, const GpHyper& hyper, int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("draw_feature_model: m must be >= 1");
  hyper.validate();
  const int dim = hyper.dim();
  RandomFeatureModel model;
  model.freq.resize(m, dim);
  model.phase.resize(m);
  model.amp_norm = hyper.amplitude_sq;
  model.mean_offset = hyper.mean;

  // The spectral density of the SE kernel is N(0, diag(1 / l_d^2)).
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
  for (int k = 0; k < m; ++k) {
    for (int d = 0; d < dim; ++d) model.freq(k, d) = normal(rng) / hyper.lengthscale[d];
  }
  for (int k = 0; k < m; ++k) {
    double b = unif(rng);
    if (b >= 2.0 * std::numbers::pi) b = 0.0;
    model.phase[k] = b;
  }

  if (data.empty()) {
    model.weights = standard_normal(m, rng);
    return model;
  }
  if (data.dim() != dim) throw std::invalid_argument("draw_feature_model: dimension mismatch");
  const Matrix phi = model.feature_matrix(data.inputs());
  const Vector r = data.outputs().array() - hyper.mean;
  model.weights = (static_cast<Eigen::Index>(data.size()) < m)
                      ? detail::sample_weights_dual(phi, r, hyper.noise_var, rng)
                      : detail::sample_weights_primal(phi, r, hyper.noise_var, rng);
  return model;
}

Vector sample_maximizer_rf(const Dataset& data, const GpHyper& hyper, const Domain& domain, int m,
                           Rng& rng, const XStarOptions& options) {
  const RandomFeatureModel model = draw_feature_model(data, hyper, m, rng);
  const ValueGrad f = [&model](const Vector& x, Vector* grad) { return model.value(x, grad); };
  return multistart_maximize(f, domain, rng, options.search).x;
}

}  // namespace ppes
