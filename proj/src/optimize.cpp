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

#include "ppes/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ppes {

AscentResult projected_gradient_ascent(const ValueGrad& f, const Vector& x0,
                                       const Domain& domain, const AscentOptions& options) {
  AscentResult best{domain.clamp(x0), 0.0, 0};
  Vector grad;
  best.value = f(best.x, &grad);
  if (!std::isfinite(best.value) || !grad.allFinite()) return best;

  const double min_width = domain.width().minCoeff();
  double step = -1.0;
  int stalls = 0;
  for (int it = 0; it < options.max_steps; ++it) {
    const double gnorm = grad.lpNorm<Eigen::Infinity>();
    if (gnorm == 0.0) break;
    if (step <= 0.0) step = 0.1 * min_width / gnorm;

    bool accepted = false;
    Vector candidate;
    double cand_value = 0.0;
    Vector cand_grad;
    for (int bt = 0; bt < 60; ++bt) {
      candidate = domain.clamp(best.x + step * grad);
      const Vector move = candidate - best.x;
      if (move.lpNorm<Eigen::Infinity>() < options.step_tol) break;
      cand_value = f(candidate, &cand_grad);
      if (std::isfinite(cand_value) && cand_value >= best.value + options.armijo * grad.dot(move)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    const double gain = cand_value - best.value;
    const double moved = (candidate - best.x).lpNorm<Eigen::Infinity>();
    best.x = candidate;
    best.value = cand_value;
    best.steps = it + 1;
    if (!cand_grad.allFinite()) break;
    grad = cand_grad;
    step *= 2.0;
    if (moved < options.step_tol ||
        gain <= options.value_tol * (1.0 + std::abs(best.value))) {
      if (++stalls >= 2) break;
    } else {
      stalls = 0;
    }
  }
  return best;
}

AscentResult multistart_maximize(const ValueGrad& f, const Domain& domain, Rng& rng,
                                 const MultiStartOptions& options,
                                 const std::vector<Vector>& extra_candidates) {
  std::vector<Vector> candidates;
  candidates.reserve(static_cast<std::size_t>(options.n_scan) + extra_candidates.size());
  for (int i = 0; i < options.n_scan; ++i) candidates.push_back(domain.sample(rng));
  for (const Vector& x : extra_candidates) candidates.push_back(domain.clamp(x));

  std::vector<double> scores(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double v = f(candidates[i], nullptr);
    scores[i] = std::isfinite(v) ? v : -std::numeric_limits<double>::infinity();
  }
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  const std::size_t starts =
      std::min<std::size_t>(order.size(), static_cast<std::size_t>(std::max(1, options.n_starts)));
  AscentResult best{candidates[order[0]], scores[order[0]], 0};
  for (std::size_t s = 0; s < starts; ++s) {
    const AscentResult r = projected_gradient_ascent(f, candidates[order[s]], domain, options.ascent);
    if (r.value > best.value) best = r;
  }
  return best;
}

Vector fd_gradient(const std::function<double(const Vector&)>& f, const Vector& x,
                   const Domain& domain, double h) {
  Vector g(x.size());
  for (Eigen::Index d = 0; d < x.size(); ++d) {
    Vector lo = x;
    Vector hi = x;
    lo[d] = std::max(x[d] - h, domain.lower()[d]);
    hi[d] = std::min(x[d] + h, domain.upper()[d]);
    const double span = hi[d] - lo[d];
    g[d] = (span > 0.0) ? (f(hi) - f(lo)) / span : 0.0;
  }
  return g;
}

}  // namespace ppes
