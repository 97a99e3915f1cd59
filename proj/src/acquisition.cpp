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

#include "ppes/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Cholesky>

#include "ppes/linalg.hpp"

namespace ppes {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kDuplicateNudge = 1e-6;

bool lex_less(const Matrix& p, int a, int b) {
  for (Eigen::Index d = 0; d < p.cols(); ++d) {
    if (p(a, d) != p(b, d)) return p(a, d) < p(b, d);
  }
  return false;
}

// Sorted copy of the batch; order[k] is the input row placed at position k.
Matrix canonical_batch(const Matrix& points, std::vector<int>* order) {
  const int q = static_cast<int>(points.rows());
  order->resize(static_cast<std::size_t>(q));
  std::iota(order->begin(), order->end(), 0);
  std::stable_sort(order->begin(), order->end(),
                   [&](int a, int b) { return lex_less(points, a, b); });
  Matrix out(points.rows(), points.cols());
  for (int k = 0; k < q; ++k) out.row(k) = points.row((*order)[static_cast<std::size_t>(k)]);
  for (int k = 1; k < q; ++k) {
    for (int j = 0; j < k; ++j) {
      if (out.row(k) == out.row(j)) {
        out(k, 0) += kDuplicateNudge * (k - j);
        j = -1;  // recheck against every earlier row
      }
    }
  }
  return out;
}

// Everything about one sample that the value and gradient need.
struct SampleEval {
  double term = 0.0;
  SiteParams sites;
  Matrix grad;        // Q x D, canonical order
  Matrix grad_prior;  // first term only
};

SampleEval evaluate_sample(const Matrix& batch, const AcquisitionContext::Term& t,
                           const Vector& x_star, double y_max, const EpOptions& ep,
                           bool with_gradient) {
  const GpPosterior& post = t.post;
  const GpHyper& h = post.hyper();
  const Vector inv_ls2 = h.inv_lengthscale_sq();
  const int q = static_cast<int>(batch.rows());
  const int dim = static_cast<int>(batch.cols());
  const int n = q + 1;
  const bool has_data = post.size() > 0;

  // Augmented point set [batch; x*].
  Matrix pts(n, dim);
  pts.topRows(q) = batch;
  pts.row(q) = x_star.transpose();

  const auto nd = static_cast<Eigen::Index>(post.size());
  Matrix kx(nd, n);     // k(X, a_j)
  Matrix alpha(nd, n);  // (K + s2 I)^{-1} k(X, a_j)
  for (int j = 0; j < q; ++j) {
    if (!has_data) break;
    kx.col(j) = post.cross_cov(batch.row(j).transpose());
    alpha.col(j) = post.solve(kx.col(j));
  }
  if (has_data) {
    kx.col(q) = t.k_star;
    alpha.col(q) = t.alpha_star;
  }

  MvnPredictive pred;
  pred.cov = kernel_matrix(pts, pts, h);
  pred.mean = Vector::Constant(n, h.mean);
  if (has_data) {
    pred.cov -= kx.transpose() * alpha;
    pred.cov = 0.5 * (pred.cov + pred.cov.transpose());
    pred.mean += kx.transpose() * post.weights();
  }

  const EpResult res = ep_condition(pred, y_max, h.noise_var, ep);

  Matrix kb = pred.cov.topLeftCorner(q, q);
  kb.diagonal().array() += h.noise_var;
  Matrix sb = res.sigma_plus.topLeftCorner(q, q);
  sb.diagonal().array() += h.noise_var;
  const JitteredCholesky kb_chol = jittered_cholesky(kb);
  const JitteredCholesky sb_chol = jittered_cholesky(sb);

  SampleEval out;
  out.term = 0.5 * (kb_chol.log_det() - sb_chol.log_det());
  out.sites = res.sites;
  if (!with_gradient) return out;

  // d/dx_{q,d} of the term is (P g_b)_q - (G g)_q where g_j = dK+_{qj}/dx_{q,d}
  // (with the diagonal entry halved), P = (K_b + s2 I)^{-1} and
  // G = B R B^T for B = K+^{-1} Sigma+ and R the zero-padded (Sigma_b + s2 I)^{-1}.
  const Matrix p = kb_chol.llt.solve(Matrix::Identity(q, q));
  Matrix r = Matrix::Zero(n, n);
  r.topLeftCorner(q, q) = sb_chol.llt.solve(Matrix::Identity(q, q));
  const Matrix b = prior_inverse_times_posterior(pred.cov, res.sites);
  const Matrix g_mat = b * r * b.transpose();

  const Matrix kpp = kernel_matrix(pts, pts, h);  // prior k(a_i, a_j)
  out.grad.resize(q, dim);
  out.grad_prior.resize(q, dim);
  Vector g(n);
  for (int i = 0; i < q; ++i) {
    for (int d = 0; d < dim; ++d) {
      Vector dk_data;
      if (has_data) {
        // d k(x_i, X_l) / d x_{i,d}
        dk_data = -inv_ls2[d] * kx.col(i).array() *
                  (batch(i, d) - post.data().inputs().col(d).array());
      }
      for (int j = 0; j < n; ++j) {
        double v = (j == i) ? 0.0 : -inv_ls2[d] * kpp(i, j) * (batch(i, d) - pts(j, d));
        if (has_data) v -= dk_data.dot(alpha.col(j));
        g[j] = v;
      }
      out.grad_prior(i, d) = p.row(i).dot(g.head(q));
      out.grad(i, d) = out.grad_prior(i, d) - g_mat.row(i).dot(g);
    }
  }
  return out;
}

}  // namespace

AcquisitionContext::AcquisitionContext(const Dataset& data, std::vector<MaximizerSample> samples,
                                       EpOptions ep)
    : data_(data), samples_(std::move(samples)), ep_(ep) {
  if (samples_.empty()) throw std::invalid_argument("AcquisitionContext: need M >= 1 samples");
  terms_.reserve(samples_.size());
  for (const MaximizerSample& s : samples_) {
    if (s.x_star.size() != data_.dim()) {
      throw std::invalid_argument("AcquisitionContext: x* dimension mismatch");
    }
    GpPosterior post(data_, s.hyper);
    Vector ks = post.cross_cov(s.x_star);
    Vector as = post.solve(ks);
    const double ms = post.mean(s.x_star);
    terms_.push_back(Term{std::move(post), std::move(ks), std::move(as), ms});
  }
}

AcquisitionContext build_acquisition_context(const Dataset& data,
                                             const HyperPosteriorSamples& hypers,
                                             const Domain& domain, Rng& rng,
                                             const ContextOptions& options) {
  if (hypers.samples.empty()) throw std::invalid_argument("build_acquisition_context: no samples");
  std::vector<MaximizerSample> samples;
  samples.reserve(hypers.size());
  const int probe_q = std::max(1, options.probe_batch_size);
  for (const GpHyper& h : hypers.samples) {
    MaximizerSample s;
    s.hyper = h;
    if (options.use_map) {
      s.x_star = map_maximizer(data, h, domain, rng, options.xstar);
      s.source = MaximizerSample::Source::kMap;
      samples.push_back(std::move(s));
      continue;
    }
    bool accepted = false;
    for (int attempt = 0; attempt <= options.max_redraws && !accepted; ++attempt) {
      s.x_star = sample_maximizer_rf(data, h, domain, options.num_features, rng, options.xstar);
      s.source = MaximizerSample::Source::kRandomFeature;
      BatchCandidate probe{Matrix(probe_q, domain.dim())};
      for (int i = 0; i < probe_q; ++i) probe.points.row(i) = domain.sample(rng).transpose();
      try {
        const AcquisitionContext single(data, {s}, options.ep);
        evaluate_ppes(probe, single, false);
        accepted = true;
      } catch (const EpFailure&) {
      } catch (const NumericalError&) {
      }
    }
    if (!accepted) {
      s.x_star = map_maximizer(data, h, domain, rng, options.xstar);
      s.source = MaximizerSample::Source::kMap;
    }
    samples.push_back(std::move(s));
  }
  return AcquisitionContext(data, std::move(samples), options.ep);
}

PpesEvaluation evaluate_ppes(const BatchCandidate& batch, const AcquisitionContext& ctx,
                             bool with_gradient) {
  const int q = batch.size();
  const int dim = ctx.data().dim();
  if (q < 1) throw std::invalid_argument("evaluate_ppes: empty batch");
  if (batch.points.cols() != dim) throw std::invalid_argument("evaluate_ppes: dimension mismatch");
  if (!batch.points.allFinite()) throw std::invalid_argument("evaluate_ppes: non-finite batch");

  PpesEvaluation out;
  const Matrix canon = canonical_batch(batch.points, &out.order);
  const std::size_t m = ctx.size();
  out.terms.assign(m, std::numeric_limits<double>::quiet_NaN());
  out.sites.resize(m);

  Matrix grad_sum = Matrix::Zero(q, dim);
  Matrix prior_sum = Matrix::Zero(q, dim);
  double sum = 0.0;
  int ok = 0;
  for (std::size_t i = 0; i < m; ++i) {
    try {
      SampleEval e = evaluate_sample(canon, ctx.term(i), ctx.sample(i).x_star, ctx.data().y_max(),
                                     ctx.ep_options(), with_gradient);
      out.terms[i] = e.term;
      out.sites[i] = std::move(e.sites);
      sum += e.term;
      if (with_gradient) {
        grad_sum += e.grad;
        prior_sum += e.grad_prior;
      }
      ++ok;
    } catch (const EpFailure&) {
      ++out.failed;
    } catch (const NumericalError&) {
      ++out.failed;
    }
  }
  if (ok == 0) throw EpFailure("evaluate_ppes: EP failed for every sample");
  out.value = sum / ok;
  if (with_gradient) {
    out.gradient.resize(q, dim);
    out.gradient_prior_term.resize(q, dim);
    for (int k = 0; k < q; ++k) {
      const auto row = out.order[static_cast<std::size_t>(k)];
      out.gradient.row(row) = grad_sum.row(k) / ok;
      out.gradient_prior_term.row(row) = prior_sum.row(k) / ok;
    }
  }
  return out;
}

double ppes_value(const BatchCandidate& batch, const AcquisitionContext& ctx) {
  return evaluate_ppes(batch, ctx, false).value;
}

Matrix ppes_gradient(const BatchCandidate& batch, const AcquisitionContext& ctx) {
  return evaluate_ppes(batch, ctx, true).gradient;
}

BatchCandidate optimize_batch(const AcquisitionContext& ctx, const Domain& domain, int q, Rng& rng,
                              const BatchOptimizerOptions& options) {
  if (q < 1) throw std::invalid_argument("optimize_batch: Q must be >= 1");
  const int dim = domain.dim();
  const auto to_batch = [q, dim](const Vector& flat) {
    BatchCandidate b{Matrix(q, dim)};
    for (int i = 0; i < q; ++i) b.points.row(i) = flat.segment(i * dim, dim).transpose();
    return b;
  };
  const ValueGrad f = [&](const Vector& flat, Vector* grad) {
    try {
      const PpesEvaluation e = evaluate_ppes(to_batch(flat), ctx, grad != nullptr);
      if (grad) {
        grad->resize(flat.size());
        for (int i = 0; i < q; ++i) grad->segment(i * dim, dim) = e.gradient.row(i).transpose();
      }
      return e.value;
    } catch (const EpFailure&) {
    } catch (const NumericalError&) {
    }
    if (grad) grad->setZero(flat.size());
    return kNegInf;
  };

  const Domain box = domain.power(q);
  const int n_random = std::max(1, options.n_random);
  std::vector<Vector> cands;
  std::vector<double> scores;
  cands.reserve(static_cast<std::size_t>(n_random));
  for (int k = 0; k < n_random; ++k) {
    cands.push_back(box.sample(rng));
    scores.push_back(f(cands.back(), nullptr));
  }
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  Vector best_x = cands[order[0]];
  double best_v = scores[order[0]];
  const std::size_t restarts =
      std::min(order.size(), static_cast<std::size_t>(std::max(1, options.n_restarts)));
  for (std::size_t s = 0; s < restarts; ++s) {
    if (!std::isfinite(scores[order[s]])) break;
    const AscentResult r = projected_gradient_ascent(f, cands[order[s]], box, options.ascent);
    if (r.value > best_v) {
      best_v = r.value;
      best_x = r.x;
    }
  }
  return to_batch(best_x);
}

}  // namespace ppes
