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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/LU>

#include "ppes/gp.hpp"
#include "ppes/linalg.hpp"

using namespace ppes;

namespace {

GpHyper hyper1d(double l2 = 0.025, double noise = 1e-4) {
  GpHyper h;
  h.mean = 0.0;
  h.amplitude_sq = 1.0;
  h.lengthscale = Vector::Constant(1, std::sqrt(l2));
  h.noise_var = noise;
  return h;
}

Vector v1(double a) { return Vector::Constant(1, a); }

GpHyper random_hyper(int dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.2, 1.5);
  GpHyper h;
  h.mean = u(rng) - 0.8;
  h.amplitude_sq = u(rng);
  h.lengthscale.resize(dim);
  for (int d = 0; d < dim; ++d) h.lengthscale[d] = u(rng) * 0.5;
  h.noise_var = 0.01 * u(rng);
  return h;
}

Dataset noisy_sine_data(int n, int dim, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Dataset d(dim);
  for (int i = 0; i < n; ++i) {
    Vector x(dim);
    for (int k = 0; k < dim; ++k) x[k] = u(rng);
    d.add(x, std::sin(6.0 * x.sum()) + 0.1 * u(rng));
  }
  return d;
}

}  // namespace

TEST_CASE("kernel_eval examples") {
  const GpHyper h = hyper1d();
  CHECK(kernel_eval(v1(0.3), v1(0.3), h) == doctest::Approx(1.0));
  CHECK(kernel_eval(v1(0.0), v1(0.1), h) == doctest::Approx(std::exp(-0.2)).epsilon(1e-14));
  CHECK(kernel_eval(v1(0.0), v1(0.1), h) == doctest::Approx(0.81873).epsilon(1e-5));

  Rng rng(1);
  GpHyper h3 = random_hyper(3, rng);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    Vector a(3), b(3);
    for (int k = 0; k < 3; ++k) {
      a[k] = u(rng);
      b[k] = u(rng);
    }
    CHECK(kernel_eval(a, b, h3) == kernel_eval(b, a, h3));
    double s = 0.0;
    for (int k = 0; k < 3; ++k) s += (a[k] - b[k]) * (a[k] - b[k]) / (h3.lengthscale[k] * h3.lengthscale[k]);
    CHECK(kernel_eval(a, b, h3) == doctest::Approx(h3.amplitude_sq * std::exp(-0.5 * s)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(kernel_eval(Vector::Zero(2), Vector::Zero(2), h), std::invalid_argument);
}

TEST_CASE("kernel_grad matches finite differences") {
  Rng rng(2);
  const GpHyper h = random_hyper(2, rng);
  Vector a(2), b(2);
  a << 0.3, 0.7;
  b << 0.5, 0.2;
  const Vector g = kernel_grad(a, b, h);
  for (int d = 0; d < 2; ++d) {
    Vector hi = a, lo = a;
    hi[d] += 1e-6;
    lo[d] -= 1e-6;
    CHECK(g[d] == doctest::Approx((kernel_eval(hi, b, h) - kernel_eval(lo, b, h)) / 2e-6).epsilon(1e-6));
  }
}

TEST_CASE("posterior_predictive examples") {
  const GpHyper h = hyper1d();
  Matrix test(1, 1);
  test << 0.4;
  SUBCASE("empty data is the prior") {
    GpHyper hm = h;
    hm.mean = 0.7;
    const MvnPredictive p = posterior_predictive(Dataset(1), hm, test);
    CHECK(p.mean[0] == doctest::Approx(0.7));
    CHECK(p.cov(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("noiseless limit interpolates") {
    const GpHyper hn = hyper1d(0.025, 1e-12);
    Dataset d(1);
    d.add(v1(0.4), 2.5);
    const MvnPredictive p = posterior_predictive(d, hn, test);
    CHECK(p.mean[0] == doctest::Approx(2.5).epsilon(1e-6));
    CHECK(std::abs(p.cov(0, 0)) < 1e-6);
  }
  SUBCASE("closed-form one-point conditional") {
    Dataset d(1);
    d.add(v1(0.3), 1.0);
    const MvnPredictive p = posterior_predictive(d, h, test);
    const double k = std::exp(-0.5 * 0.01 / 0.025);
    // The factorization always carries a ~1e-10 relative jitter.
    CHECK(p.mean[0] == doctest::Approx(k / (1.0 + 1e-4)).epsilon(1e-9));
    CHECK(p.mean[0] == doctest::Approx(0.81865).epsilon(1e-5));
    CHECK(p.cov(0, 0) == doctest::Approx(1.0 - k * k / (1.0 + 1e-4)).epsilon(1e-9));
  }
}

TEST_CASE("posterior_predictive matches a dense direct solve") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 1 + trial % 3;
    const int n = 1 + trial % 10;
    const GpHyper h = random_hyper(dim, rng);
    const Dataset d = noisy_sine_data(n, dim, rng);
    const Matrix test = Matrix::Random(4, dim).array() * 0.5 + 0.5;
    const MvnPredictive p = posterior_predictive(d, h, test);

    Matrix k(n, n), ks(4, n), kss(4, 4);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) k(i, j) = kernel_eval(d.inputs().row(i).transpose(), d.inputs().row(j).transpose(), h);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < n; ++j) ks(i, j) = kernel_eval(test.row(i).transpose(), d.inputs().row(j).transpose(), h);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) kss(i, j) = kernel_eval(test.row(i).transpose(), test.row(j).transpose(), h);
    k.diagonal().array() += h.noise_var;
    const Matrix kinv = k.fullPivLu().inverse();
    const Vector mean = (ks * kinv * (d.outputs().array() - h.mean).matrix()).array() + h.mean;
    const Matrix cov = kss - ks * kinv * ks.transpose();
    CHECK((p.mean - mean).norm() <= 1e-8 * (1.0 + mean.norm()));
    CHECK((p.cov - cov).norm() <= 1e-8 * (1.0 + cov.norm()));
    CHECK((p.cov - p.cov.transpose()).norm() == 0.0);
  }
}

TEST_CASE("GpPosterior pointwise queries agree with the joint predictive") {
  Rng rng(6);
  const GpHyper h = random_hyper(2, rng);
  const Dataset d = noisy_sine_data(8, 2, rng);
  const GpPosterior post(d, h);
  const Matrix test = Matrix::Random(5, 2).array() * 0.5 + 0.5;
  const MvnPredictive p = post.predictive(test);
  for (int i = 0; i < 5; ++i) {
    const Vector x = test.row(i).transpose();
    CHECK(post.mean(x) == doctest::Approx(p.mean[i]).epsilon(1e-12));
    CHECK(post.variance(x) == doctest::Approx(p.cov(i, i)).epsilon(1e-9));
    double mu, var;
    Vector dmu, dvar;
    post.moments_grad(x, &mu, &var, &dmu, &dvar);
    for (int k = 0; k < 2; ++k) {
      Vector hi = x, lo = x;
      hi[k] += 1e-6;
      lo[k] -= 1e-6;
      CHECK(dmu[k] == doctest::Approx((post.mean(hi) - post.mean(lo)) / 2e-6).epsilon(1e-5));
      CHECK(dvar[k] == doctest::Approx((post.variance(hi) - post.variance(lo)) / 2e-6).epsilon(1e-5));
    }
    Vector g;
    CHECK(post.mean_grad(x, &g) == doctest::Approx(mu));
    CHECK((g - dmu).norm() < 1e-12);
  }
}

TEST_CASE("posterior variance at a training input shrinks with the noise") {
  Rng rng(8);
  const Dataset d = noisy_sine_data(6, 1, rng);
  const Vector x = d.inputs().row(2).transpose();
  double prev = 1e300;
  for (double s2 : {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    const double v = GpPosterior(d, hyper1d(0.05, s2)).variance(x);
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("log_marginal_likelihood examples") {
  const GpHyper h = hyper1d();
  SUBCASE("single point at the mean") {
    Dataset d(1);
    d.add(v1(0.2), h.mean);
    const double v = h.amplitude_sq + h.noise_var;
    CHECK(log_marginal_likelihood(d, h) == doctest::Approx(-0.5 * std::log(2.0 * std::numbers::pi * v)));
  }
  SUBCASE("duplicated inputs stay finite") {
    Dataset d(1);
    d.add(v1(0.2), 0.3);
    d.add(v1(0.2), 0.3);
    CHECK(std::isfinite(log_marginal_likelihood(d, hyper1d(0.025, 1e-12))));
  }
  SUBCASE("dense direct evaluation") {
    Rng rng(10);
    const GpHyper hr = random_hyper(2, rng);
    const Dataset d = noisy_sine_data(3, 2, rng);
    Matrix k(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) k(i, j) = kernel_eval(d.inputs().row(i).transpose(), d.inputs().row(j).transpose(), hr);
    k.diagonal().array() += hr.noise_var;
    const Vector r = d.outputs().array() - hr.mean;
    const double direct = -0.5 * r.dot(k.inverse() * r) - 0.5 * std::log(k.determinant()) -
                          1.5 * std::log(2.0 * std::numbers::pi);
    CHECK(log_marginal_likelihood(d, hr) == doctest::Approx(direct).epsilon(1e-10));
  }
  SUBCASE("permutation invariance") {
    Rng rng(12);
    const GpHyper hr = random_hyper(2, rng);
    const Dataset d = noisy_sine_data(7, 2, rng);
    Matrix xi = d.inputs();
    Vector yi = d.outputs();
    xi.row(0).swap(xi.row(5));
    std::swap(yi[0], yi[5]);
    xi.row(2).swap(xi.row(3));
    std::swap(yi[2], yi[3]);
    CHECK(log_marginal_likelihood(Dataset(xi, yi), hr) ==
          doctest::Approx(log_marginal_likelihood(d, hr)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(log_marginal_likelihood(Dataset(1), h), std::invalid_argument);
}

TEST_CASE("kernel matrices factor after jitter") {
  Rng rng(14);
  const GpHyper h = random_hyper(2, rng);
  Matrix pts = Matrix::Random(30, 2);
  pts.row(3) = pts.row(7);
  pts.row(11) = pts.row(7);
  const Matrix k = kernel_matrix(pts, pts, h);
  CHECK((k - k.transpose()).norm() <= 1e-14);  // FMA kernels round each side differently
  const JitteredCholesky c = jittered_cholesky(k);
  CHECK(c.llt.info() == Eigen::Success);
  CHECK(c.jitter > 0.0);
  CHECK(c.jitter <= 1e-4 * k.diagonal().mean());
  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = -1.0;
  CHECK_THROWS_AS(jittered_cholesky(bad), NumericalError);
}

TEST_CASE("Dataset and Domain bookkeeping") {
  Dataset d(2);
  CHECK(d.empty());
  CHECK(std::isinf(d.y_max()));
  Vector x(2);
  x << 0.1, 0.2;
  d.add(x, 1.0);
  d.add(x * 2, 3.0);
  d.add(x * 3, 2.0);
  CHECK(d.y_max() == 3.0);
  CHECK(d.argmax() == 1);
  CHECK_THROWS_AS(Domain(Vector::Zero(2), Vector::Zero(2)), std::invalid_argument);
  const Domain u = Domain::unit(2);
  Vector o(2);
  o << -1.0, 2.0;
  CHECK(u.clamp(o) == Vector((Vector(2) << 0.0, 1.0).finished()));
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(u.contains(u.sample(rng)));
  CHECK(u.power(3).dim() == 6);
}
