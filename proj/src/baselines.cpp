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

#include "ppes/baselines.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "ppes/linalg.hpp"
#include "ppes/normal.hpp"

namespace ppes {
namespace {

constexpr double kNudge = 1e-6;

Matrix stack_rows(const std::vector<Vector>& rows, int dim) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), dim);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  return m;
}

// Data plus hallucinated observations y = mu(x) at the picks.
Dataset hallucinate(const Dataset& data, const GpPosterior& post, const std::vector<Vector>& picks) {
  Dataset aug = data;
  for (const Vector& x : picks) aug.add(x, post.mean(x));
  return aug;
}

}  // namespace

UcbSchedule UcbSchedule::standard(int dim) {
  return {[dim](int t) {
    const double tt = std::max(1, t);
    return 2.0 * std::log(dim * tt * tt * std::numbers::pi * std::numbers::pi / 0.6);
  }};
}

UcbSchedule UcbSchedule::constant(double alpha) {
  return {[alpha](int) { return alpha; }};
}

std::string method_name(Method m) {
  switch (m) {
    case Method::kPpes: return "ppes";
    case Method::kEiMcmc: return "ei_mcmc";
    case Method::kSmUcb: return "sm_ucb";
    case Method::kGpBucb: return "gp_bucb";
    case Method::kGpUcbPe: return "gp_ucb_pe";
    case Method::kRandom: return "random";
  }
  return "unknown";
}

Method parse_method(const std::string& s) {
  std::string k;
  for (char c : s) k.push_back(c == '-' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  for (Method m : {Method::kPpes, Method::kEiMcmc, Method::kSmUcb, Method::kGpBucb, Method::kGpUcbPe,
                   Method::kRandom}) {
    if (method_name(m) == k) return m;
  }
  throw std::invalid_argument("unknown policy '" + s + "'");
}

double expected_improvement(double mu, double sd, double best) {
  if (!(sd > 0.0)) return std::max(mu - best, 0.0);
  const double tau = (mu - best) / sd;
  return sd * (norm_pdf(tau) + tau * norm_cdf(tau));
}

double expected_improvement(const Vector& x, const Dataset& data, const GpHyper& hyper) {
  if (data.empty()) throw std::invalid_argument("expected_improvement: empty dataset");
  const GpPosterior post(data, hyper);
  return expected_improvement_grad(post, data.y_max(), x, nullptr);
}

double expected_improvement_grad(const GpPosterior& post, double best, const Vector& x, Vector* grad) {
  double mu = 0.0, var = 0.0;
  Vector dmu, dvar;
  post.moments_grad(x, &mu, &var, grad ? &dmu : nullptr, grad ? &dvar : nullptr);
  const double sd = std::sqrt(var);
  if (!(sd > 0.0)) {
    if (grad) *grad = (mu > best) ? dmu : Vector::Zero(x.size());
    return std::max(mu - best, 0.0);
  }
  const double tau = (mu - best) / sd;
  if (grad) *grad = norm_cdf(tau) * dmu + norm_pdf(tau) * dvar / (2.0 * sd);
  return sd * (norm_pdf(tau) + tau * norm_cdf(tau));
}

double ucb_value(const GpPosterior& post, double alpha, const Vector& x, Vector* grad) {
  double mu = 0.0, var = 0.0;
  Vector dmu, dvar;
  post.moments_grad(x, &mu, &var, grad ? &dmu : nullptr, grad ? &dvar : nullptr);
  const double beta = std::sqrt(alpha);
  const double sd = std::sqrt(var);
  if (grad) {
    *grad = dmu;
    if (sd > 0.0) *grad += beta * dvar / (2.0 * sd);
  }
  return mu + beta * sd;
}

Vector ucb_argmax(const GpPosterior& post, double alpha, const Domain& domain, Rng& rng,
                  const MultiStartOptions& search) {
  const ValueGrad f = [&](const Vector& x, Vector* g) { return ucb_value(post, alpha, x, g); };
  return multistart_maximize(f, domain, rng, search).x;
}

Matrix fantasize_outputs(const GpPosterior& post, const Matrix& points, int n, Rng& rng) {
  MvnPredictive pred = post.predictive(points);
  pred.cov.diagonal().array() += post.hyper().noise_var;
  const JitteredCholesky chol = jittered_cholesky(pred.cov);
  const Matrix l = chol.llt.matrixL();
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(n, points.rows());
  Vector z(points.rows());
  for (int j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    out.row(j) = (pred.mean + l * z).transpose();
  }
  return out;
}

BatchCandidate ei_mcmc_batch(const Dataset& data, const HyperPosteriorSamples& hypers,
                             const Domain& domain, int q, int n_fantasy, Rng& rng,
                             const MultiStartOptions& search) {
  if (q < 1 || n_fantasy < 1) throw std::invalid_argument("ei_mcmc_batch: need Q >= 1, n_fantasy >= 1");
  if (hypers.samples.empty()) throw std::invalid_argument("ei_mcmc_batch: no hyper samples");
  if (data.empty()) throw std::invalid_argument("ei_mcmc_batch: empty dataset");
  const std::size_t m = hypers.size();
  std::vector<GpPosterior> base;
  base.reserve(m);
  for (const GpHyper& h : hypers.samples) base.emplace_back(data, h);

  // Fantasy j is paired with hyper sample j mod M.
  std::vector<double> weight(m, 0.0);
  for (int j = 0; j < n_fantasy; ++j) weight[static_cast<std::size_t>(j) % m] += 1.0 / n_fantasy;

  std::vector<Vector> picks;
  for (int k = 0; k < q; ++k) {
    std::vector<GpPosterior> posts;
    std::vector<double> bests;
    std::vector<double> w;
    if (picks.empty()) {
      for (std::size_t i = 0; i < m; ++i) {
        if (weight[i] == 0.0) continue;
        posts.push_back(base[i]);
        bests.push_back(data.y_max());
        w.push_back(weight[i]);
      }
    } else {
      const Matrix chosen = stack_rows(picks, domain.dim());
      for (int j = 0; j < n_fantasy; ++j) {
        const GpPosterior& p = base[static_cast<std::size_t>(j) % m];
        const Vector y = fantasize_outputs(p, chosen, 1, rng).row(0).transpose();
        Dataset aug = data;
        for (Eigen::Index r = 0; r < chosen.rows(); ++r) aug.add(chosen.row(r).transpose(), y[r]);
        bests.push_back(aug.y_max());
        posts.emplace_back(aug, p.hyper());
        w.push_back(1.0 / n_fantasy);
      }
    }
    const ValueGrad f = [&](const Vector& x, Vector* grad) {
      double v = 0.0;
      Vector g;
      if (grad) grad->setZero(x.size());
      for (std::size_t i = 0; i < posts.size(); ++i) {
        v += w[i] * expected_improvement_grad(posts[i], bests[i], x, grad ? &g : nullptr);
        if (grad) *grad += w[i] * g;
      }
      return v;
    };
    picks.push_back(multistart_maximize(f, domain, rng, search).x);
  }
  BatchCandidate out{stack_rows(picks, domain.dim())};
  separate_duplicates(&out.points, domain);
  return out;
}

double k_medoids_cost(const Matrix& points, const std::vector<int>& medoids) {
  double cost = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (int m : medoids) best = std::min(best, (points.row(i) - points.row(m)).squaredNorm());
    cost += best;
  }
  return cost;
}

std::vector<int> greedy_k_medoids(const Matrix& points, int k) {
  const auto n = static_cast<int>(points.rows());
  if (k < 1 || k > n) throw std::invalid_argument("greedy_k_medoids: need 1 <= k <= n");
  Matrix d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) d(i, j) = (points.row(i) - points.row(j)).squaredNorm();
  }
  const auto cost_of = [&](const std::vector<int>& med) {
    double c = 0.0;
    for (int i = 0; i < n; ++i) {
      double b = std::numeric_limits<double>::infinity();
      for (int m : med) b = std::min(b, d(i, m));
      c += b;
    }
    return c;
  };
  std::vector<int> med;
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (int s = 0; s < k; ++s) {
    int best = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n; ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      med.push_back(c);
      const double v = cost_of(med);
      med.pop_back();
      if (v < best_cost) {
        best_cost = v;
        best = c;
      }
    }
    med.push_back(best);
    used[static_cast<std::size_t>(best)] = true;
  }
  // Swap phase.
  double cur = cost_of(med);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int s = 0; s < k; ++s) {
      for (int c = 0; c < n; ++c) {
        if (used[static_cast<std::size_t>(c)]) continue;
        const int old = med[static_cast<std::size_t>(s)];
        med[static_cast<std::size_t>(s)] = c;
        const double v = cost_of(med);
        if (v < cur - 1e-15 * (1.0 + cur)) {
          cur = v;
          used[static_cast<std::size_t>(old)] = false;
          used[static_cast<std::size_t>(c)] = true;
          improved = true;
        } else {
          med[static_cast<std::size_t>(s)] = old;
        }
      }
    }
  }
  return med;
}

BatchCandidate sm_ucb_batch(const Dataset& data, const GpHyper& hyper, const Domain& domain, int q,
                            int pool, const UcbSchedule& schedule, int t, Rng& rng,
                            const MultiStartOptions& search) {
  if (q < 1 || pool < q) throw std::invalid_argument("sm_ucb_batch: need 1 <= Q <= pool");
  const double alpha = schedule(t);
  const GpPosterior post(data, hyper);
  // Every simulation starts from the same data, so its first step is shared.
  const Vector first = ucb_argmax(post, alpha, domain, rng, search);

  std::vector<Vector> population;
  for (int s = 0; s < pool; ++s) {
    Dataset sim = data;
    Vector best_x = first;
    double best_y = -std::numeric_limits<double>::infinity();
    for (int step = 0; step < q; ++step) {
      Vector x;
      if (step == 0) {
        x = first;
      } else {
        const GpPosterior p(sim, hyper);
        x = ucb_argmax(p, alpha, domain, rng, search);
      }
      const GpPosterior p(sim, hyper);
      const double y = fantasize_outputs(p, x.transpose(), 1, rng)(0, 0);
      sim.add(x, y);
      if (y > best_y) {
        best_y = y;
        best_x = x;
      }
    }
    population.push_back(best_x);
  }
  const Matrix pop = stack_rows(population, domain.dim());
  const std::vector<int> med = greedy_k_medoids(pop, q);
  BatchCandidate out{Matrix(q, domain.dim())};
  for (int i = 0; i < q; ++i) out.points.row(i) = pop.row(med[static_cast<std::size_t>(i)]);
  separate_duplicates(&out.points, domain);
  return out;
}

BatchCandidate gp_bucb_batch(const Dataset& data, const GpHyper& hyper, const Domain& domain, int q,
                             const UcbSchedule& schedule, int t, Rng& rng,
                             const MultiStartOptions& search) {
  if (q < 1) throw std::invalid_argument("gp_bucb_batch: Q must be >= 1");
  const double beta = std::sqrt(schedule(t));
  const GpPosterior post(data, hyper);
  std::vector<Vector> picks;
  for (int k = 0; k < q; ++k) {
    if (k == 0) {
      picks.push_back(ucb_argmax(post, schedule(t), domain, rng, search));
      continue;
    }
    const GpPosterior upd(hallucinate(data, post, picks), hyper);
    const ValueGrad f = [&](const Vector& x, Vector* grad) {
      double mu_u = 0.0, var = 0.0;
      Vector dmu_u, dvar;
      upd.moments_grad(x, &mu_u, &var, nullptr, grad ? &dvar : nullptr);
      Vector dmu;
      const double mu = post.mean_grad(x, grad ? &dmu : nullptr);
      const double sd = std::sqrt(var);
      if (grad) {
        *grad = dmu;
        if (sd > 0.0) *grad += beta * dvar / (2.0 * sd);
      }
      return mu + beta * sd;
    };
    picks.push_back(multistart_maximize(f, domain, rng, search).x);
  }
  BatchCandidate out{stack_rows(picks, domain.dim())};
  separate_duplicates(&out.points, domain);
  return out;
}

BatchCandidate gp_ucb_pe_batch(const Dataset& data, const GpHyper& hyper, const Domain& domain,
                               int q, const UcbSchedule& schedule, int t, Rng& rng,
                               int n_candidates, const MultiStartOptions& search,
                               UcbPeTrace* trace) {
  if (q < 1) throw std::invalid_argument("gp_ucb_pe_batch: Q must be >= 1");
  const double alpha = schedule(t);
  const double beta = std::sqrt(alpha);
  const GpPosterior post(data, hyper);
  std::vector<Vector> picks{ucb_argmax(post, alpha, domain, rng, search)};
  if (q == 1 && !trace) return BatchCandidate{stack_rows(picks, domain.dim())};

  std::vector<Vector> cands;
  for (int i = 0; i < n_candidates; ++i) cands.push_back(domain.sample(rng));
  cands.push_back(picks[0]);
  std::vector<double> ucb(cands.size()), lcb(cands.size());
  double lcb_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const double mu = post.mean(cands[i]);
    const double sd = std::sqrt(post.variance(cands[i]));
    ucb[i] = mu + beta * sd;
    lcb[i] = mu - beta * sd;
    lcb_max = std::max(lcb_max, lcb[i]);
  }
  std::vector<bool> region(cands.size());
  for (std::size_t i = 0; i < cands.size(); ++i) region[i] = ucb[i] >= lcb_max;

  for (int k = 1; k < q; ++k) {
    const GpPosterior upd(hallucinate(data, post, picks), hyper);
    std::size_t best = cands.size();
    double best_var = -1.0;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (!region[i]) continue;
      const double v = upd.variance(cands[i]);
      if (v > best_var) {
        best_var = v;
        best = i;
      }
    }
    picks.push_back(cands[best]);
  }
  if (trace) {
    trace->candidates = stack_rows(cands, domain.dim());
    trace->in_region = region;
    trace->lcb_max = lcb_max;
  }
  BatchCandidate out{stack_rows(picks, domain.dim())};
  separate_duplicates(&out.points, domain);
  return out;
}

BatchCandidate random_batch(const Domain& domain, int q, Rng& rng) {
  if (q < 1) throw std::invalid_argument("random_batch: Q must be >= 1");
  BatchCandidate out{Matrix(q, domain.dim())};
  for (int i = 0; i < q; ++i) out.points.row(i) = domain.sample(rng).transpose();
  return out;
}

void separate_duplicates(Matrix* points, const Domain& domain) {
  Matrix& p = *points;
  for (Eigen::Index k = 1; k < p.rows(); ++k) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (p.row(k) != p.row(j)) continue;
      for (Eigen::Index d = 0; d < p.cols(); ++d) {
        const double mid = 0.5 * (domain.lower()[d] + domain.upper()[d]);
        p(k, d) += (p(k, d) < mid) ? kNudge : -kNudge;
      }
      j = -1;
    }
  }
}

}  // namespace ppes
