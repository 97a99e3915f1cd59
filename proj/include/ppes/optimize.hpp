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

// Box-constrained maximization helpers shared by the samplers and policies.

#include <functional>
#include <vector>

#include "ppes/gp.hpp"

namespace ppes {

// Returns f(x); fills *grad when it is non-null.
using ValueGrad = std::function<double(const Vector& x, Vector* grad)>;

struct AscentOptions {
  int max_steps = 200;
  double step_tol = 1e-10;   // stop when the accepted move is this small (inf-norm)
  double value_tol = 1e-14;  // or when the relative improvement is this small
  double armijo = 1e-4;
};

struct AscentResult {
  Vector x;
  double value = 0.0;
  int steps = 0;
};

// Projected gradient ascent with backtracking. Never returns a point worse
// than x0.
AscentResult projected_gradient_ascent(const ValueGrad& f, const Vector& x0,
                                       const Domain& domain, const AscentOptions& options = {});

struct MultiStartOptions {
  int n_scan = 1000;  // uniform candidates scored before ascent
  int n_starts = 20;  // best candidates that seed an ascent
  AscentOptions ascent;
};

// Scores n_scan uniform candidates (plus any extra points), runs an ascent
// from the n_starts best and returns the best point found; ties keep the first.
AscentResult multistart_maximize(const ValueGrad& f, const Domain& domain, Rng& rng,
                                 const MultiStartOptions& options = {},
                                 const std::vector<Vector>& extra_candidates = {});

// Central finite-difference gradient of a scalar function, with the stencil
// clipped to the domain.
Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                   const Domain& domain, double h = 1e-6);

}  // namespace ppes
