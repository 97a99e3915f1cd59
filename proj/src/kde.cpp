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

#include "ppes/kde.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ppes {
namespace {

constexpr double kCutoff = 4.0;  // kernel support in bandwidths
constexpr int kMaxBins = 512;

double spread(const double* v, std::size_t n) {
  std::vector<double> s(v, v + n);
  double m = 0.0;
  for (double e : s) m += e;
  m /= static_cast<double>(n);
  double var = 0.0;
  for (double e : s) var += (e - m) * (e - m);
  const double sd = std::sqrt(var / static_cast<double>(n > 1 ? n - 1 : 1));
  std::sort(s.begin(), s.end());
  const auto q = [&](double p) {
    const double pos = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    return s[lo] + (pos - static_cast<double>(lo)) * (s[hi] - s[lo]);
  };
  const double iqr = (q(0.75) - q(0.25)) / 1.349;
  const double r = (iqr > 0.0) ? std::min(sd, iqr) : sd;
  return r > 0.0 ? r : 1e-12;
}

double exact_density(double x, double y, const double* a, const double* b, std::size_t n,
                     const Bandwidth2& bw) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (x - a[i]) / bw.h0;
    const double v = (y - b[i]) / bw.h1;
    s += std::exp(-0.5 * (u * u + v * v));
  }
  return s / (static_cast<double>(n) * 2.0 * std::numbers::pi * bw.h0 * bw.h1);
}

void check_size(std::size_t n) {
  if (n < 4) throw std::invalid_argument("kde entropy: need at least 4 samples");
}

// Whitens (a, b) in place with the fit-half covariance; returns log det of
// the map back to the original coordinates.
double whiten_pairs(std::vector<double>* a, std::vector<double>* b, std::size_t nf) {
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < nf; ++i) {
    ma += (*a)[i];
    mb += (*b)[i];
  }
  ma /= static_cast<double>(nf);
  mb /= static_cast<double>(nf);
  double saa = 0.0, sab = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < nf; ++i) {
    const double da = (*a)[i] - ma;
    const double db = (*b)[i] - mb;
    saa += da * da;
    sab += da * db;
    sbb += db * db;
  }
  const double den = static_cast<double>(nf - 1);
  saa /= den;
  sab /= den;
  sbb /= den;
  // Lower Cholesky factor [l11 0; l21 l22].
  const double l11 = std::sqrt(std::max(saa, 1e-300));
  const double l21 = sab / l11;
  const double l22 = std::sqrt(std::max(sbb - l21 * l21, 1e-300 * std::max(sbb, 1.0)));
  for (std::size_t i = 0; i < a->size(); ++i) {
    const double wa = ((*a)[i] - ma) / l11;
    const double wb = ((*b)[i] - mb - l21 * wa) / l22;
    (*a)[i] = wa;
    (*b)[i] = wb;
  }
  return std::log(l11) + std::log(l22);
}

double binned_impl(const double* a, const double* b, std::size_t n);
double exact_impl(const double* a, const double* b, std::size_t n);

template <typename Impl>
double with_whitening(const double* a, const double* b, std::size_t n, bool whiten, Impl impl) {
  if (!whiten) return impl(a, b, n);
  std::vector<double> wa(a, a + n), wb(b, b + n);
  const double log_det = whiten_pairs(&wa, &wb, n / 2);
  return impl(wa.data(), wb.data(), n) + log_det;
}

}  // namespace

Bandwidth2 silverman_bandwidth(const double* a, const double* b, std::size_t n) {
  check_size(n);
  const double f = std::pow(static_cast<double>(n), -1.0 / 6.0);
  return {spread(a, n) * f, spread(b, n) * f};
}

double kde_entropy_exact(const double* a, const double* b, std::size_t n, bool whiten) {
  check_size(n);
  return with_whitening(a, b, n, whiten, exact_impl);
}

double kde_entropy_binned(const double* a, const double* b, std::size_t n, bool whiten) {
  check_size(n);
  return with_whitening(a, b, n, whiten, binned_impl);
}

namespace {

double exact_impl(const double* a, const double* b, std::size_t n) {
  const std::size_t nf = n / 2;
  const Bandwidth2 bw = silverman_bandwidth(a, b, nf);
  double s = 0.0;
  for (std::size_t i = nf; i < n; ++i) {
    s -= std::log(std::max(exact_density(a[i], b[i], a, b, nf, bw), 1e-300));
  }
  return s / static_cast<double>(n - nf);
}

double binned_impl(const double* a, const double* b, std::size_t n) {
  const std::size_t nf = n / 2;
  const Bandwidth2 bw = silverman_bandwidth(a, b, nf);
  const auto [a_lo, a_hi] = std::minmax_element(a, a + nf);
  const auto [b_lo, b_hi] = std::minmax_element(b, b + nf);
  const double x0 = *a_lo - kCutoff * bw.h0;
  const double y0 = *b_lo - kCutoff * bw.h1;
  const double xr = *a_hi + kCutoff * bw.h0 - x0;
  const double yr = *b_hi + kCutoff * bw.h1 - y0;
  const int gx = std::clamp(static_cast<int>(std::ceil(2.0 * xr / bw.h0)) + 1, 8, kMaxBins);
  const int gy = std::clamp(static_cast<int>(std::ceil(2.0 * yr / bw.h1)) + 1, 8, kMaxBins);
  const double dx = xr / (gx - 1);
  const double dy = yr / (gy - 1);

  // Linear binning, row-major [ix * gy + iy].
  std::vector<double> grid(static_cast<std::size_t>(gx) * gy, 0.0);
  for (std::size_t i = 0; i < nf; ++i) {
    const double fx = (a[i] - x0) / dx;
    const double fy = (b[i] - y0) / dy;
    const int ix = std::min(static_cast<int>(fx), gx - 2);
    const int iy = std::min(static_cast<int>(fy), gy - 2);
    const double wx = fx - ix;
    const double wy = fy - iy;
    double* g = &grid[static_cast<std::size_t>(ix) * gy + iy];
    g[0] += (1 - wx) * (1 - wy);
    g[1] += (1 - wx) * wy;
    g[gy] += wx * (1 - wy);
    g[gy + 1] += wx * wy;
  }

  const auto taps = [](double h, double d) {
    const int r = static_cast<int>(std::ceil(kCutoff * h / d));
    std::vector<double> t(static_cast<std::size_t>(2 * r + 1));
    for (int k = -r; k <= r; ++k) {
      const double u = k * d / h;
      t[static_cast<std::size_t>(k + r)] = std::exp(-0.5 * u * u);
    }
    return t;
  };
  const std::vector<double> tx = taps(bw.h0, dx);
  const std::vector<double> ty = taps(bw.h1, dy);
  const int rx = static_cast<int>(tx.size() / 2);
  const int ry = static_cast<int>(ty.size() / 2);

  std::vector<double> tmp(grid.size(), 0.0);
  for (int ix = 0; ix < gx; ++ix) {
    const double* src = &grid[static_cast<std::size_t>(ix) * gy];
    double* dst = &tmp[static_cast<std::size_t>(ix) * gy];
    for (int iy = 0; iy < gy; ++iy) {
      if (src[iy] == 0.0) continue;
      const int k0 = std::max(-ry, -iy);
      const int k1 = std::min(ry, gy - 1 - iy);
      for (int k = k0; k <= k1; ++k) dst[iy + k] += src[iy] * ty[static_cast<std::size_t>(k + ry)];
    }
  }
  std::fill(grid.begin(), grid.end(), 0.0);
  for (int ix = 0; ix < gx; ++ix) {
    const double* src = &tmp[static_cast<std::size_t>(ix) * gy];
    const int k0 = std::max(-rx, -ix);
    const int k1 = std::min(rx, gx - 1 - ix);
    for (int k = k0; k <= k1; ++k) {
      const double w = tx[static_cast<std::size_t>(k + rx)];
      double* dst = &grid[static_cast<std::size_t>(ix + k) * gy];
      for (int iy = 0; iy < gy; ++iy) dst[iy] += w * src[iy];
    }
  }
  const double norm = 1.0 / (static_cast<double>(nf) * 2.0 * std::numbers::pi * bw.h0 * bw.h1);
  // One fit point three bandwidths away.
  const double tail_floor = norm * std::exp(-4.5);

  double s = 0.0;
  for (std::size_t i = nf; i < n; ++i) {
    const double fx = (a[i] - x0) / dx;
    const double fy = (b[i] - y0) / dy;
    double p;
    if (fx < 0.0 || fy < 0.0 || fx >= gx - 1 || fy >= gy - 1) {
      p = exact_density(a[i], b[i], a, b, nf, bw);
    } else {
      const int ix = static_cast<int>(fx);
      const int iy = static_cast<int>(fy);
      const double wx = fx - ix;
      const double wy = fy - iy;
      const double* g = &grid[static_cast<std::size_t>(ix) * gy + iy];
      p = norm * ((1 - wx) * ((1 - wy) * g[0] + wy * g[1]) + wx * ((1 - wy) * g[gy] + wy * g[gy + 1]));
      // Sparse tails: the truncated kernels can miss every neighbour.
      if (p < tail_floor) p = exact_density(a[i], b[i], a, b, nf, bw);
    }
    s -= std::log(std::max(p, 1e-300));
  }
  return s / static_cast<double>(n - nf);
}

}  // namespace
}  // namespace ppes
