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

#include "ppes/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "ppes/kde.hpp"
#include "ppes/linalg.hpp"

namespace ppes {
namespace {

// Noisy pair (y_i, y_j) for the listed paths. For i == j the second slot
// borrows the noise draw of the neighbouring path, which is independent.
void gather_pair(const OraclePaths& p, int i, int j, const std::vector<int>& rows,
                 std::vector<double>* a, std::vector<double>* b) {
  const auto n = static_cast<int>(p.f.rows());
  a->resize(rows.size());
  b->resize(rows.size());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int r = rows[k];
    (*a)[k] = p.f(r, i) + p.noise(r, i);
    const int rn = (i == j) ? (r + 1) % n : r;
    (*b)[k] = p.f(r, j) + p.noise(rn, j);
  }
}

}  // namespace

OraclePaths sample_oracle_paths(const Dataset& data, const GpHyper& hyper, int grid_n, int n_paths,
                                Rng& rng) {
  if (data.dim() != 1) throw std::invalid_argument("oracle: only D = 1 is supported");
  if (grid_n < 20) throw std::invalid_argument("oracle: grid_n must be >= 20");
  if (n_paths < 10000) throw std::invalid_argument("oracle: n_paths must be >= 1e4");
  OraclePaths p;
  p.grid = Vector::LinSpaced(grid_n, 0.0, 1.0);
  const Matrix test = p.grid;
  const MvnPredictive pred = posterior_predictive(data, hyper, test);
  const JitteredCholesky chol = jittered_cholesky(pred.cov);
  const Matrix l = chol.llt.matrixL();

  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix z(n_paths, grid_n);
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    for (Eigen::Index r = 0; r < z.rows(); ++r) z(r, c) = normal(rng);
  }
  p.f = z * l.transpose();
  p.f.rowwise() += pred.mean.transpose();
  const double sd = std::sqrt(hyper.noise_var);
  p.noise.resize(n_paths, grid_n);
  for (Eigen::Index c = 0; c < z.cols(); ++c) {
    for (Eigen::Index r = 0; r < z.rows(); ++r) p.noise(r, c) = sd * normal(rng);
  }

  p.argmax.resize(static_cast<std::size_t>(n_paths));
  p.by_argmax.assign(static_cast<std::size_t>(grid_n), {});
  for (int r = 0; r < n_paths; ++r) {
    int best = 0;
    for (int c = 1; c < grid_n; ++c) {
      if (p.f(r, c) > p.f(r, best)) best = c;
    }
    p.argmax[static_cast<std::size_t>(r)] = best;
    p.by_argmax[static_cast<std::size_t>(best)].push_back(r);
  }
  return p;
}

double oracle_pair_value(const OraclePaths& paths, int i, int j, const OracleOptions& opts,
                         int* excluded, const std::vector<int>& subset) {
  const auto grid_n = static_cast<int>(paths.grid.size());
  std::vector<int> all;
  const std::vector<int>* rows = &subset;
  if (subset.empty()) {
    all.resize(paths.argmax.size());
    for (std::size_t r = 0; r < all.size(); ++r) all[r] = static_cast<int>(r);
    rows = &all;
  }
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(grid_n));
  for (int r : *rows) groups[static_cast<std::size_t>(paths.argmax[static_cast<std::size_t>(r)])].push_back(r);

  std::vector<double> a, b;
  gather_pair(paths, i, j, *rows, &a, &b);
  const double h_all = kde_entropy_binned(a.data(), b.data(), a.size(), opts.whiten);

  // Conditional term, renormalized over the retained x*.
  double h_cond = 0.0;
  std::size_t used = 0;
  int dropped = 0;
  for (const auto& g : groups) {
    if (g.empty()) continue;
    if (static_cast<int>(g.size()) < opts.min_accepted) {
      ++dropped;
      continue;
    }
    gather_pair(paths, i, j, g, &a, &b);
    h_cond += static_cast<double>(g.size()) * kde_entropy_binned(a.data(), b.data(), a.size(), opts.whiten);
    used += g.size();
  }
  if (excluded) *excluded = dropped;
  if (used == 0) return std::numeric_limits<double>::quiet_NaN();
  return h_all - h_cond / static_cast<double>(used);
}

double oracle_pair_bootstrap_se(const OraclePaths& paths, int i, int j, int resamples, Rng& rng,
                                const OracleOptions& opts) {
  const auto n = static_cast<int>(paths.argmax.size());
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<double> vals;
  std::vector<int> rows(static_cast<std::size_t>(n));
  for (int s = 0; s < resamples; ++s) {
    for (auto& r : rows) r = pick(rng);
    vals.push_back(oracle_pair_value(paths, i, j, opts, nullptr, rows));
  }
  double m = 0.0;
  for (double v : vals) m += v;
  m /= static_cast<double>(vals.size());
  double var = 0.0;
  for (double v : vals) var += (v - m) * (v - m);
  return std::sqrt(var / static_cast<double>(vals.size() > 1 ? vals.size() - 1 : 1));
}

GroundTruthSurface ground_truth_from_paths(const OraclePaths& paths, const OracleOptions& opts) {
  const auto grid_n = static_cast<int>(paths.grid.size());
  GroundTruthSurface s;
  s.grid = paths.grid;
  s.p_star.resize(grid_n);
  const auto total = static_cast<double>(paths.argmax.size());
  for (int k = 0; k < grid_n; ++k) {
    s.p_star[k] = static_cast<double>(paths.by_argmax[static_cast<std::size_t>(k)].size()) / total;
  }
  s.values.resize(grid_n, grid_n);
  for (int i = 0; i < grid_n; ++i) {
    for (int j = i; j < grid_n; ++j) {
      int dropped = 0;
      const double v = oracle_pair_value(paths, i, j, opts, &dropped);
      s.values(i, j) = v;
      s.values(j, i) = v;
      s.excluded = std::max(s.excluded, dropped);
    }
  }
  surface_argmax(s.values, &s.argmax_i, &s.argmax_j);
  return s;
}

GroundTruthSurface ground_truth_ppes(const Dataset& data, const GpHyper& hyper, int grid_n,
                                     int n_paths, Rng& rng, const OracleOptions& opts) {
  return ground_truth_from_paths(sample_oracle_paths(data, hyper, grid_n, n_paths, rng), opts);
}

void surface_argmax(const Matrix& values, int* i, int* j) {
  double best = -std::numeric_limits<double>::infinity();
  *i = 0;
  *j = 0;
  for (Eigen::Index a = 0; a < values.rows(); ++a) {
    for (Eigen::Index b = a; b < values.cols(); ++b) {
      if (values(a, b) > best) {
        best = values(a, b);
        *i = static_cast<int>(a);
        *j = static_cast<int>(b);
      }
    }
  }
}

GpHyper validation_hyper() {
  GpHyper h;
  h.mean = 0.0;
  h.amplitude_sq = 1.0;
  h.lengthscale = Vector::Constant(1, std::sqrt(0.025));
  h.noise_var = 1e-4;
  return h;
}

Dataset validation_dataset(const GpHyper& hyper, int n_obs, Rng& rng) {
  if (n_obs < 1) throw std::invalid_argument("validation_dataset: n_obs must be >= 1");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n_obs, hyper.dim());
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = unif(rng);
  Matrix k = kernel_matrix(x, x, hyper);
  k.diagonal().array() += hyper.noise_var;
  const JitteredCholesky chol = jittered_cholesky(k);
  Vector z(n_obs);
  for (int i = 0; i < n_obs; ++i) z[i] = normal(rng);
  const Vector y = (chol.llt.matrixL() * z).array() + hyper.mean;
  return Dataset(x, y);
}

Matrix ppes_surface(const AcquisitionContext& ctx, const Vector& grid) {
  if (ctx.data().dim() != 1) throw std::invalid_argument("ppes_surface: 1-D contexts only");
  const auto n = grid.size();
  Matrix out(n, n);
  BatchCandidate b{Matrix(2, 1)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      b.points << grid[i], grid[j];
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = ppes_value(b, ctx);
      } catch (const EpFailure&) {
      }
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

void write_surface_csv(const std::string& path, const Vector& grid, const Matrix& values) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_surface_csv: cannot open " + path);
  out.precision(10);
  out << "x,x_prime,value\n";
  for (Eigen::Index a = 0; a < grid.size(); ++a) {
    for (Eigen::Index b = 0; b < grid.size(); ++b) {
      out << grid[a] << ',' << grid[b] << ',' << values(a, b) << '\n';
    }
  }
}

}  // namespace ppes
