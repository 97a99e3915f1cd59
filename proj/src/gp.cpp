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

#include "ppes/gp.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ppes/simd/kernels.hpp"

namespace ppes {

Domain::Domain(Vector lower, Vector upper) : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() < 1 || lower_.size() != upper_.size()) {
    throw std::invalid_argument("Domain: bounds must be non-empty and of equal length");
  }
  for (Eigen::Index d = 0; d < lower_.size(); ++d) {
    if (!(lower_[d] < upper_[d])) throw std::invalid_argument("Domain: lower must be < upper");
  }
}

Domain Domain::unit(int dim) { return Domain(Vector::Zero(dim), Vector::Ones(dim)); }

bool Domain::contains(const Vector& x) const {
  if (x.size() != lower_.size()) return false;
  return (x.array() >= lower_.array()).all() && (x.array() <= upper_.array()).all();
}

Vector Domain::clamp(const Vector& x) const {
  return x.cwiseMax(lower_).cwiseMin(upper_);
}

Vector Domain::sample(Rng& rng) const {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vector x(lower_.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    x[d] = lower_[d] + unif(rng) * (upper_[d] - lower_[d]);
  }
  return x;
}

Domain Domain::power(int q) const {
  return Domain(lower_.replicate(q, 1), upper_.replicate(q, 1));
}

Dataset::Dataset(int dim)
    : inputs_(0, dim), outputs_(0), y_max_(-std::numeric_limits<double>::infinity()) {
  if (dim < 1) throw std::invalid_argument("Dataset: dimension must be >= 1");
}

Dataset::Dataset(Matrix inputs, Vector outputs)
    : inputs_(std::move(inputs)),
      outputs_(std::move(outputs)),
      y_max_(-std::numeric_limits<double>::infinity()) {
  if (inputs_.rows() != outputs_.size()) {
    throw std::invalid_argument("Dataset: inputs and outputs differ in length");
  }
  if (inputs_.cols() < 1) throw std::invalid_argument("Dataset: dimension must be >= 1");
  if (outputs_.size() > 0) y_max_ = outputs_.maxCoeff();
}

void Dataset::add(const Vector& x, double y) {
  if (x.size() != inputs_.cols()) throw std::invalid_argument("Dataset::add: dimension mismatch");
  const Eigen::Index n = inputs_.rows();
  inputs_.conservativeResize(n + 1, Eigen::NoChange);
  inputs_.row(n) = x.transpose();
  outputs_.conservativeResize(n + 1);
  outputs_[n] = y;
  y_max_ = std::max(y_max_, y);
}

std::size_t Dataset::argmax() const {
  if (empty()) throw std::logic_error("Dataset::argmax on empty dataset");
  Eigen::Index i = 0;
  outputs_.maxCoeff(&i);
  return static_cast<std::size_t>(i);
}

Vector GpHyper::inv_lengthscale_sq() const {
  return lengthscale.array().square().inverse().matrix();
}

void GpHyper::validate() const {
  if (!(amplitude_sq > 0.0) || !(noise_var > 0.0) || lengthscale.size() < 1 ||
      !(lengthscale.array() > 0.0).all() || !std::isfinite(mean)) {
    throw std::invalid_argument("GpHyper: parameters must be positive and finite");
  }
}

double kernel_eval(const Vector& x, const Vector& x2, const GpHyper& hyper) {
  if (x.size() != x2.size() || x.size() != hyper.lengthscale.size()) {
    throw std::invalid_argument("kernel_eval: dimension mismatch");
  }
  const double r2 = ((x - x2).array() / hyper.lengthscale.array()).square().sum();
  return hyper.amplitude_sq * std::exp(-0.5 * r2);
}

Vector kernel_grad(const Vector& x, const Vector& x2, const GpHyper& hyper) {
  const double k = kernel_eval(x, x2, hyper);
  return (-k * (x - x2).array() / hyper.lengthscale.array().square()).matrix();
}

Matrix kernel_matrix(const Matrix& a, const Matrix& b, const GpHyper& hyper) {
  if (a.cols() != b.cols() || a.cols() != hyper.lengthscale.size()) {
    throw std::invalid_argument("kernel_matrix: dimension mismatch");
  }
  const Vector inv_ls2 = hyper.inv_lengthscale_sq();
  Matrix out(a.rows(), b.rows());
  Vector row(b.rows());
  Vector x(a.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    x = a.row(i).transpose();
    simd::active_kernels().se_row(x.data(), b.data(), static_cast<std::size_t>(b.rows()),
                                  static_cast<std::size_t>(b.rows()),
                                  static_cast<std::size_t>(x.size()), inv_ls2.data(),
                                  hyper.amplitude_sq, row.data());
    out.row(i) = row.transpose();
  }
  return out;
}

GpPosterior::GpPosterior(const Dataset& data, const GpHyper& hyper)
    : data_(data), hyper_(hyper), inv_ls2_(hyper.inv_lengthscale_sq()) {
  hyper_.validate();
  if (hyper_.dim() != data_.dim()) throw std::invalid_argument("GpPosterior: dimension mismatch");
  Matrix k = kernel_matrix(data_.inputs(), data_.inputs(), hyper_);
  k.diagonal().array() += hyper_.noise_var;
  chol_ = jittered_cholesky(k);
  const Vector resid = data_.outputs().array() - hyper_.mean;
  weights_ = chol_.llt.solve(resid);
}

Vector GpPosterior::cross_cov(const Vector& x) const {
  if (x.size() != data_.dim()) throw std::invalid_argument("cross_cov: dimension mismatch");
  const std::size_t n = data_.size();
  Vector out(static_cast<Eigen::Index>(n));
  if (n == 0) return out;
  simd::active_kernels().se_row(x.data(), data_.inputs().data(), n, n,
                                static_cast<std::size_t>(x.size()), inv_ls2_.data(),
                                hyper_.amplitude_sq, out.data());
  return out;
}

Vector GpPosterior::solve(const Vector& k) const {
  if (k.size() == 0) return k;
  return chol_.llt.solve(k);
}

double GpPosterior::mean(const Vector& x) const {
  if (data_.empty()) return hyper_.mean;
  return hyper_.mean + cross_cov(x).dot(weights_);
}

double GpPosterior::variance(const Vector& x) const {
  if (data_.empty()) return hyper_.amplitude_sq;
  const Vector k = cross_cov(x);
  const Vector v = chol_.llt.matrixL().solve(k);
  return std::max(hyper_.amplitude_sq - v.squaredNorm(), 0.0);
}

double GpPosterior::mean_grad(const Vector& x, Vector* grad) const {
  const int dim = data_.dim();
  if (data_.empty()) {
    if (grad) grad->setZero(dim);
    return hyper_.mean;
  }
  const Vector k = cross_cov(x);
  if (grad) {
    // d k_i / d x_d = -k_i (x_d - X_id) / l_d^2
    const Vector kw = k.cwiseProduct(weights_);
    grad->resize(dim);
    for (int d = 0; d < dim; ++d) {
      (*grad)[d] = -inv_ls2_[d] * (kw.array() * (x[d] - data_.inputs().col(d).array())).sum();
    }
  }
  return hyper_.mean + k.dot(weights_);
}

void GpPosterior::moments_grad(const Vector& x, double* mu, double* var, Vector* dmu,
                               Vector* dvar) const {
  const int dim = data_.dim();
  if (data_.empty()) {
    *mu = hyper_.mean;
    *var = hyper_.amplitude_sq;
    if (dmu) dmu->setZero(dim);
    if (dvar) dvar->setZero(dim);
    return;
  }
  const Vector k = cross_cov(x);
  const Vector a = chol_.llt.solve(k);
  *mu = hyper_.mean + k.dot(weights_);
  *var = std::max(hyper_.amplitude_sq - k.dot(a), 0.0);
  if (dmu) dmu->resize(dim);
  if (dvar) dvar->resize(dim);
  for (int d = 0; d < dim; ++d) {
    const Eigen::ArrayXd dk =
        -inv_ls2_[d] * k.array() * (x[d] - data_.inputs().col(d).array());
    if (dmu) (*dmu)[d] = (dk * weights_.array()).sum();
    if (dvar) (*dvar)[d] = -2.0 * (dk * a.array()).sum();
  }
}

MvnPredictive GpPosterior::predictive(const Matrix& test) const {
  if (test.rows() < 1) throw std::invalid_argument("predictive: empty test set");
  if (test.cols() != data_.dim()) throw std::invalid_argument("predictive: dimension mismatch");
  MvnPredictive out;
  Matrix prior = kernel_matrix(test, test, hyper_);
  if (data_.empty()) {
    out.mean = Vector::Constant(test.rows(), hyper_.mean);
    out.cov = prior;
    return out;
  }
  const Matrix kx = kernel_matrix(data_.inputs(), test, hyper_);  // n x t
  const Matrix v = chol_.llt.matrixL().solve(kx);
  out.mean = (kx.transpose() * weights_).array() + hyper_.mean;
  out.cov = prior - v.transpose() * v;
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  return out;
}

MvnPredictive posterior_predictive(const Dataset& data, const GpHyper& hyper,
                                   const Matrix& test) {
  return GpPosterior(data, hyper).predictive(test);
}

double log_marginal_likelihood(const Dataset& data, const GpHyper& hyper) {
  if (data.empty()) throw std::invalid_argument("log_marginal_likelihood: empty dataset");
  hyper.validate();
  Matrix k = kernel_matrix(data.inputs(), data.inputs(), hyper);
  k.diagonal().array() += hyper.noise_var;
  const JitteredCholesky chol = jittered_cholesky(k);
  const Vector resid = data.outputs().array() - hyper.mean;
  const Vector v = chol.llt.matrixL().solve(resid);
  const double n = static_cast<double>(data.size());
  return -0.5 * v.squaredNorm() - 0.5 * chol.log_det() - 0.5 * n * std::log(2.0 * std::numbers::pi);
}

}  // namespace ppes
