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

// Ground-truth information gain for a 1-D problem and batches of two,
// estimated from joint GP sample paths on a grid: p(x*) from argmax counts,
// conditional entropies from the paths whose argmax is x* (rejection
// sampling) and KDE entropy estimates of the noisy pair (y, y').

#include <string>
#include <vector>

#include "ppes/acquisition.hpp"
#include "ppes/gp.hpp"

namespace ppes {

struct OraclePaths {
  Vector grid;              // grid_n points on [0,1]
  Matrix f;                 // n_paths x grid_n latent values
  Matrix noise;             // n_paths x grid_n observation noise draws
  std::vector<int> argmax;  // per path, ties to the lowest index
  // Paths grouped by argmax index.
  std::vector<std::vector<int>> by_argmax;
};

OraclePaths sample_oracle_paths(const Dataset& data, const GpHyper& hyper, int grid_n, int n_paths,
                                Rng& rng);

struct OracleOptions {
  int min_accepted = 50;  // x* with fewer accepted paths are excluded
  bool whiten = true;     // full-covariance kernel (see kde.hpp)
};

// Value at grid pair (i, j) from the given subset of paths (all when empty).
double oracle_pair_value(const OraclePaths& paths, int i, int j, const OracleOptions& opts = {},
                         int* excluded = nullptr, const std::vector<int>& subset = {});

// Bootstrap standard error of oracle_pair_value over resampled paths.
double oracle_pair_bootstrap_se(const OraclePaths& paths, int i, int j, int resamples, Rng& rng,
                                const OracleOptions& opts = {});

struct GroundTruthSurface {
  Vector grid;
  Matrix values;   // grid_n x grid_n, symmetric
  Vector p_star;   // estimated p(x* = grid[k])
  int argmax_i = 0;
  int argmax_j = 0;
  int excluded = 0;  // x* grid points dropped for too few accepted paths
};

GroundTruthSurface ground_truth_ppes(const Dataset& data, const GpHyper& hyper, int grid_n,
                                     int n_paths, Rng& rng, const OracleOptions& opts = {});
GroundTruthSurface ground_truth_from_paths(const OraclePaths& paths, const OracleOptions& opts = {});

// Unordered pair argmax of a symmetric surface (ties to the lowest index).
void surface_argmax(const Matrix& values, int* i, int* j);

// The 1-D validation setup: gamma^2 = 1, noise 1e-4, l^2 = 0.025, zero mean.
GpHyper validation_hyper();
// n_obs uniform inputs with outputs drawn jointly from the GP prior plus noise.
Dataset validation_dataset(const GpHyper& hyper, int n_obs, Rng& rng);

// ppes_value over all unordered grid pairs (mirrored), 1-D contexts only.
// Failed pairs are NaN.
Matrix ppes_surface(const AcquisitionContext& ctx, const Vector& grid);

// CSV with header x,x_prime,value.
void write_surface_csv(const std::string& path, const Vector& grid, const Matrix& values);

}  // namespace ppes
