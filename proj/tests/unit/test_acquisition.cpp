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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Cholesky>

#include "ppes/acquisition.hpp"
#include "ppes/oracle.hpp"
#include "ppes/stats.hpp"
#include "support/fixtures.hpp"

using namespace ppes;
using namespace ppes::testing;

TEST_CASE("inactive constraints give a value near zero") {
  Matrix x(2, 1);
  x << 0.1, 0.9;
  Vector y(2);
  y << 0.0, 100.0;
  const Dataset data(x, y);
  GpHyper h;
  h.lengthscale = Vector::Constant(1, 0.05);
  MaximizerSample s;
  s.hyper = h;
  s.x_star = Vector::Constant(1, 0.9);
  const AcquisitionContext ctx(data, {s, s});
  BatchCandidate b{Matrix(2, 1)};
  b.points << 0.2, 0.3;
  CHECK(std::abs(ppes_value(b, ctx)) < 1e-3);
}

TEST_CASE("value and gradient are permutation symmetric") {
  Rng rng(11);
  const Dataset data = noisy_sine_data(8, 2, rng);
  const AcquisitionContext ctx = random_context(data, 4, rng);
  for (int trial = 0; trial < 100; ++trial) {
    BatchCandidate b{Matrix(3, 2)};
    for (int i = 0; i < 3; ++i) b.points.row(i) = Domain::unit(2).sample(rng).transpose();
    BatchCandidate p{Matrix(3, 2)};
    p.points.row(0) = b.points.row(2);
    p.points.row(1) = b.points.row(0);
    p.points.row(2) = b.points.row(1);
    const PpesEvaluation e1 = evaluate_ppes(b, ctx, true);
    const PpesEvaluation e2 = evaluate_ppes(p, ctx, true);
    CHECK(std::abs(e1.value - e2.value) <= 1e-10);
    CHECK((e1.gradient.row(2) - e2.gradient.row(0)).norm() <= 1e-10);
    CHECK((e1.gradient.row(0) - e2.gradient.row(1)).norm() <= 1e-10);
    CHECK(e1.value >= -1e-8);
  }
}

TEST_CASE("gradient matches finite differences with sites held fixed") {
  Rng rng(2024);
  int checked = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = noisy_sine_data(6, 2, rng);
    const AcquisitionContext ctx = random_context(data, 3, rng);
    const BatchCandidate b = random_sorted_batch(2, 2, rng);
    const PpesEvaluation e = evaluate_ppes(b, ctx, true);
    REQUIRE(e.failed < 3);
    const Matrix fd = frozen_fd_gradient(b, ctx, e);
    const double err = relative_error(e.gradient, fd);
    INFO("trial " << trial << " relative error " << err);
    CHECK(err <= 1e-4);
    ++checked;
  }
  CHECK(checked == 10);
}

TEST_CASE("gradient check across batch sizes and dimensions") {
  Rng rng(77);
  for (int dim = 1; dim <= 2; ++dim) {
    for (int q = 1; q <= 3; ++q) {
      const Dataset data = noisy_sine_data(5, dim, rng);
      const AcquisitionContext ctx = random_context(data, 2, rng);
      const BatchCandidate b = random_sorted_batch(q, dim, rng);
      const PpesEvaluation e = evaluate_ppes(b, ctx, true);
      const Matrix fd = frozen_fd_gradient(b, ctx, e);
      INFO("D=" << dim << " Q=" << q);
      CHECK(relative_error(e.gradient, fd) <= 1e-4);
    }
  }
}

TEST_CASE("mirrored batch on a symmetric posterior has mirrored gradient") {
  Matrix x(3, 1);
  x << 0.2, 0.5, 0.8;
  Vector y(3);
  y << 0.3, 1.0, 0.3;
  const Dataset data(x, y);
  GpHyper h;
  h.lengthscale = Vector::Constant(1, 0.15);
  h.noise_var = 1e-3;
  MaximizerSample s;
  s.hyper = h;
  s.x_star = Vector::Constant(1, 0.5);
  const AcquisitionContext ctx(data, {s});
  BatchCandidate b{Matrix(2, 1)};
  b.points << 0.35, 0.65;
  const Matrix g = ppes_gradient(b, ctx);
  CHECK(std::abs(g(0, 0)) > 1e-6);
  CHECK(g(0, 0) == doctest::Approx(-g(1, 0)).epsilon(1e-4));
}

TEST_CASE("first term gradient with no data") {
  const Dataset data(2);
  GpHyper h;
  h.lengthscale = Vector(2);
  h.lengthscale << 0.3, 0.5;
  h.noise_var = 1e-2;
  MaximizerSample s;
  s.hyper = h;
  s.x_star = Vector::Constant(2, 0.99);
  const AcquisitionContext ctx(data, {s});
  BatchCandidate b{Matrix(3, 2)};
  b.points << 0.1, 0.2, 0.3, 0.7, 0.4, 0.35;
  const PpesEvaluation e = evaluate_ppes(b, ctx, true);
  const auto first = [&](const Matrix& p) {
    Matrix k = kernel_matrix(p, p, h);
    k.diagonal().array() += h.noise_var;
    return 0.5 * logdet_spd(k);
  };
  Matrix fd(3, 2);
  for (int i = 0; i < 3; ++i) {
    for (int d = 0; d < 2; ++d) {
      Matrix up = b.points, dn = b.points;
      up(i, d) += 1e-5;
      dn(i, d) -= 1e-5;
      fd(i, d) = (first(up) - first(dn)) / 2e-5;
    }
  }
  CHECK(relative_error(e.gradient_prior_term, fd) <= 1e-6);
}

TEST_CASE("nonnegative over random instances") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = noisy_sine_data(6, 2, rng);
    const AcquisitionContext ctx = random_context(data, 3, rng);
    for (int k = 0; k < 5; ++k) {
      const BatchCandidate b = random_sorted_batch(1 + k % 3, 2, rng);
      CHECK(ppes_value(b, ctx) >= -1e-8);
    }
  }
}

TEST_CASE("doubling M is stable") {
  Rng rng(3);
  const GpHyper h = validation_hyper();
  const Dataset data = validation_dataset(h, 5, rng);
  HyperPosteriorSamples hs;
  hs.samples.assign(100, h);
  ContextOptions opts;
  opts.probe_batch_size = 2;
  const AcquisitionContext big = build_acquisition_context(data, hs, Domain::unit(1), rng, opts);
  std::vector<MaximizerSample> half;
  for (std::size_t i = 0; i < 50; ++i) half.push_back(big.sample(i));
  const AcquisitionContext small(data, half);
  BatchCandidate b{Matrix(2, 1)};
  b.points << 0.3, 0.6;
  const PpesEvaluation es = evaluate_ppes(b, small, false);
  const PpesEvaluation eb = evaluate_ppes(b, big, false);
  std::vector<double> terms;
  for (double t : es.terms) {
    if (!std::isnan(t)) terms.push_back(t);
  }
  const double se = stddev(terms) / std::sqrt(static_cast<double>(terms.size()));
  CHECK(std::abs(eb.value - es.value) < 3.0 * se);
}

TEST_CASE("optimize_batch never loses to its random scan and stays in bounds") {
  Rng rng(8);
  const Dataset data = noisy_sine_data(6, 2, rng);
  const AcquisitionContext ctx = random_context(data, 3, rng);
  const Domain dom = Domain::unit(2);
  BatchOptimizerOptions scan_only;
  scan_only.n_random = 200;
  scan_only.ascent.max_steps = 0;
  BatchOptimizerOptions full = scan_only;
  full.ascent.max_steps = 100;
  Rng r1 = rng, r2 = rng;
  const BatchCandidate a = optimize_batch(ctx, dom, 3, r1, scan_only);
  const BatchCandidate b = optimize_batch(ctx, dom, 3, r2, full);
  CHECK(ppes_value(b, ctx) >= ppes_value(a, ctx));
  for (int i = 0; i < b.size(); ++i) CHECK(dom.contains(b.points.row(i).transpose()));
  CHECK(b.size() == 3);
}

TEST_CASE("optimize_batch lands near the grid argmax on the 1-D validation problem") {
  Rng rng(7);
  const GpHyper h = validation_hyper();
  const Dataset data = validation_dataset(h, 5, rng);
  HyperPosteriorSamples hs;
  hs.samples.assign(200, h);
  ContextOptions opts;
  opts.probe_batch_size = 2;
  const AcquisitionContext ctx = build_acquisition_context(data, hs, Domain::unit(1), rng, opts);
  const Vector grid = Vector::LinSpaced(50, 0.0, 1.0);
  const Matrix surf = ppes_surface(ctx, grid);
  int gi = 0, gj = 0;
  surface_argmax(surf, &gi, &gj);
  const BatchCandidate best = optimize_batch(ctx, Domain::unit(1), 2, rng);
  double p0 = best.points(0, 0), p1 = best.points(1, 0);
  if (p0 > p1) std::swap(p0, p1);
  double g0 = grid[gi], g1 = grid[gj];
  if (g0 > g1) std::swap(g0, g1);
  INFO("grid argmax (" << g0 << ", " << g1 << ") optimizer (" << p0 << ", " << p1 << ")");
  CHECK(std::abs(p0 - g0) <= 0.1);
  CHECK(std::abs(p1 - g1) <= 0.1);
}

TEST_CASE("errors") {
  const Dataset data(1);
  CHECK_THROWS_AS(AcquisitionContext(data, {}), std::invalid_argument);
  MaximizerSample s;
  s.hyper.lengthscale = Vector::Constant(1, 0.2);
  s.x_star = Vector::Constant(1, 0.5);
  const AcquisitionContext ctx(data, {s});
  CHECK_THROWS_AS(ppes_value(BatchCandidate{Matrix(0, 1)}, ctx), std::invalid_argument);
  CHECK_THROWS_AS(ppes_value(BatchCandidate{Matrix(2, 2)}, ctx), std::invalid_argument);
}
