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
#include <random>
#include <vector>

#include "ppes/gp.hpp"
#include "ppes/simd/kernels.hpp"

using namespace ppes;

namespace {

std::vector<double> random_vec(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& e : v) e = u(rng);
  return v;
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("scalar table is always available") {
  CHECK(simd::scalar_kernels().isa == simd::Isa::kScalar);
  CHECK(simd::isa_name(simd::Isa::kScalar) == "scalar");
}

TEST_CASE("se_row: vector variant matches scalar reference") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (!v) {
    MESSAGE("AVX2 variant unavailable on this machine; skipped");
    return;
  }
  std::mt19937_64 rng(3);
  for (std::size_t dim : {1u, 2u, 3u, 6u, 17u}) {
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 33u, 250u}) {
      const std::size_t ld = n + 2;
      const auto pts = random_vec(ld * dim, -2.0, 2.0, rng);
      const auto x = random_vec(dim, -2.0, 2.0, rng);
      const auto ils = random_vec(dim, 0.1, 30.0, rng);
      std::vector<double> a(n + 1, -7.0), b(n + 1, -7.0);
      simd::scalar_kernels().se_row(x.data(), pts.data(), n, ld, dim, ils.data(), 1.7, a.data());
      v->se_row(x.data(), pts.data(), n, ld, dim, ils.data(), 1.7, b.data());
      for (std::size_t j = 0; j < n; ++j) CHECK(rel_diff(b[j], a[j]) < 1e-13);
      CHECK(b[n] == -7.0);  // no write past n
    }
  }
}

TEST_CASE("se_row: extreme exponents underflow to zero in both variants") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (!v) return;
  const double x[1] = {0.0};
  const double pts[5] = {0.0, 10.0, 100.0, 1e3, 1e8};
  const double ils[1] = {1.0};
  double a[5], b[5];
  simd::scalar_kernels().se_row(x, pts, 5, 5, 1, ils, 1.0, a);
  v->se_row(x, pts, 5, 5, 1, ils, 1.0, b);
  for (int j = 0; j < 5; ++j) {
    CHECK(std::isfinite(b[j]));
    CHECK(std::abs(a[j] - b[j]) < 1e-300 + 1e-13 * a[j]);
  }
  CHECK(b[4] == 0.0);
}

TEST_CASE("cos_features and cos_features_dot: vector variant matches scalar reference") {
  const simd::KernelTable* v = simd::avx2_kernels();
  if (!v) return;
  std::mt19937_64 rng(5);
  for (std::size_t dim : {1u, 2u, 6u, 16u, 19u}) {
    for (std::size_t m : {1u, 3u, 4u, 9u, 500u}) {
      const auto freq = random_vec(m * dim, -60.0, 60.0, rng);
      const auto phase = random_vec(m, 0.0, 2.0 * std::numbers::pi, rng);
      const auto w = random_vec(m, -1.0, 1.0, rng);
      const auto x = random_vec(dim, 0.0, 1.0, rng);
      const double scale = std::sqrt(2.0 / static_cast<double>(m));
      std::vector<double> a(m), b(m);
      simd::scalar_kernels().cos_features(x.data(), freq.data(), phase.data(), m, m, dim, scale, a.data());
      v->cos_features(x.data(), freq.data(), phase.data(), m, m, dim, scale, b.data());
      for (std::size_t k = 0; k < m; ++k) CHECK(std::abs(a[k] - b[k]) < 1e-12);

      std::vector<double> ga(dim), gb(dim);
      const double va = simd::scalar_kernels().cos_features_dot(x.data(), freq.data(), phase.data(), w.data(),
                                                               m, m, dim, scale, ga.data());
      const double vb = v->cos_features_dot(x.data(), freq.data(), phase.data(), w.data(), m, m, dim,
                                            scale, gb.data());
      CHECK(std::abs(va - vb) < 1e-11);
      for (std::size_t d = 0; d < dim; ++d) CHECK(std::abs(ga[d] - gb[d]) < 1e-9 * (1.0 + std::abs(ga[d])));
      // Value-only call.
      const double vc = v->cos_features_dot(x.data(), freq.data(), phase.data(), w.data(), m, m, dim,
                                            scale, nullptr);
      CHECK(vc == doctest::Approx(vb).epsilon(1e-14));
    }
  }
}

TEST_CASE("cos_features_dot gradient matches finite differences (scalar path)") {
  std::mt19937_64 rng(9);
  const std::size_t m = 40, dim = 3;
  const auto freq = random_vec(m * dim, -5.0, 5.0, rng);
  const auto phase = random_vec(m, 0.0, 6.2, rng);
  const auto w = random_vec(m, -1.0, 1.0, rng);
  auto x = random_vec(dim, 0.0, 1.0, rng);
  std::vector<double> g(dim);
  const auto& k = simd::scalar_kernels();
  k.cos_features_dot(x.data(), freq.data(), phase.data(), w.data(), m, m, dim, 0.3, g.data());
  for (std::size_t d = 0; d < dim; ++d) {
    auto hi = x, lo = x;
    hi[d] += 1e-6;
    lo[d] -= 1e-6;
    const double fd = (k.cos_features_dot(hi.data(), freq.data(), phase.data(), w.data(), m, m, dim, 0.3, nullptr) -
                       k.cos_features_dot(lo.data(), freq.data(), phase.data(), w.data(), m, m, dim, 0.3, nullptr)) /
                      2e-6;
    CHECK(g[d] == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("library results do not depend on the selected ISA") {
  if (!simd::avx2_kernels()) return;
  std::mt19937_64 rng(11);
  Matrix a = Matrix::Random(23, 3);
  GpHyper h;
  h.lengthscale = Vector::Constant(3, 0.4);
  REQUIRE(simd::set_active_isa(simd::Isa::kScalar));
  const Matrix ks = kernel_matrix(a, a, h);
  REQUIRE(simd::set_active_isa(simd::Isa::kAvx2));
  const Matrix kv = kernel_matrix(a, a, h);
  CHECK((ks - kv).cwiseAbs().maxCoeff() < 1e-14);
}
