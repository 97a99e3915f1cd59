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

#include "ppes/ep.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Cholesky>

#include "ppes/linalg.hpp"
#include "ppes/normal.hpp"

namespace ppes {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Moments {
  Vector mean;
  Matrix cov;
};

// Moments of N(m, K) * prod_q exp(-0.5 nu_q (c_q^T f)^2 + eta_q c_q^T f), in
// the form that only factorizes B = I + N^1/2 C^T K C N^1/2 (always SPD).
Moments moments_from_natural(const Vector& m, const Matrix& k, const Matrix& c,
                             const Vector& nu, const Vector& eta) {
  const Vector sq = nu.cwiseSqrt();
  const Matrix kc = k * c;
  const Matrix a = c.transpose() * kc;
  Matrix b = sq.asDiagonal() * a * sq.asDiagonal();
  b.diagonal().array() += 1.0;
  const Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) throw EpFailure("EP: site system not positive definite");

  const Matrix skc = sq.asDiagonal() * kc.transpose();  // N^1/2 C^T K
  Moments out;
  out.cov = k - skc.transpose() * llt.solve(skc);
  out.cov = 0.5 * (out.cov + out.cov.transpose());
  const Vector inner = c.transpose() * m + a * eta;
  const Vector corr = eta - sq.cwiseProduct(llt.solve(sq.cwiseProduct(inner)));
  out.mean = m + kc * corr;
  return out;
}

struct Tilted {
  double log_z;
  double mean;
  double var;
};

// Moments of N(u; mu, tau) * I(u >= 0).
Tilted tilt_hard(double mu, double tau) {
  const double s = std::sqrt(tau);
  const double z = mu / s;
  const double r = pdf_over_cdf(z);
  const double shrink = std::max(1.0 - r * (r + z), 1e-14);
  return {log_norm_cdf(z), mu + s * r, tau * shrink};
}

// Moments of N(u; mu, tau) * Phi((u - y_max) / sqrt(noise)).
Tilted tilt_soft(double mu, double tau, double y_max, double noise) {
  const double total = noise + tau;
  const double s = std::sqrt(total);
  const double z = (mu - y_max) / s;
  const double r = pdf_over_cdf(z);
  const double shrink = std::max(1.0 - (tau / total) * r * (r + z), 1e-14);
  return {log_norm_cdf(z), mu + tau * r / s, tau * shrink};
}

}  // namespace

Matrix constraint_vectors(int batch_size) {
  if (batch_size < 1) throw std::invalid_argument("constraint_vectors: batch size must be >= 1");
  const int n = batch_size + 1;
  Matrix c = Matrix::Zero(n, n);
  for (int q = 0; q < batch_size; ++q) {
    c(q, q) = -1.0;
    c(batch_size, q) = 1.0;
  }
  c(batch_size, batch_size) = 1.0;
  return c;
}

Vector SiteParams::precision() const {
  Vector nu(tau_tilde.size());
  for (Eigen::Index i = 0; i < nu.size(); ++i) {
    nu[i] = std::isinf(tau_tilde[i]) ? 0.0 : 1.0 / tau_tilde[i];
  }
  return nu;
}

Vector SiteParams::precision_mean() const {
  Vector eta(tau_tilde.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    eta[i] = std::isinf(tau_tilde[i]) ? 0.0 : mu_tilde[i] / tau_tilde[i];
  }
  return eta;
}

MvnPredictive apply_sites(const MvnPredictive& pred, const SiteParams& sites) {
  const int q = static_cast<int>(pred.mean.size()) - 1;
  Moments mom = moments_from_natural(pred.mean, pred.cov, constraint_vectors(q),
                                     sites.precision(), sites.precision_mean());
  return {std::move(mom.mean), std::move(mom.cov)};
}

Matrix prior_inverse_times_posterior(const Matrix& prior_cov, const SiteParams& sites) {
  const int n = static_cast<int>(prior_cov.rows());
  const Matrix c = constraint_vectors(n - 1);
  const Vector sq = sites.precision().cwiseSqrt();
  const Matrix kc = prior_cov * c;
  Matrix b = sq.asDiagonal() * (c.transpose() * kc) * sq.asDiagonal();
  b.diagonal().array() += 1.0;
  const Eigen::LLT<Matrix> llt(b);
  if (llt.info() != Eigen::Success) throw EpFailure("EP: site system not positive definite");
  const Matrix skc = sq.asDiagonal() * kc.transpose();
  return Matrix::Identity(n, n) - c * sq.asDiagonal() * llt.solve(skc);
}

EpResult ep_condition(const MvnPredictive& pred, double y_max, double noise_var,
                      const EpOptions& options) {
  const int n = static_cast<int>(pred.mean.size());
  if (n < 2 || pred.cov.rows() != n || pred.cov.cols() != n) {
    throw std::invalid_argument("ep_condition: predictive must have dimension Q+1 >= 2");
  }
  if (!pred.mean.allFinite() || !pred.cov.allFinite()) {
    throw EpFailure("ep_condition: non-finite predictive moments");
  }
  const int batch = n - 1;
  const bool soft_active = std::isfinite(y_max);
  const Matrix c = constraint_vectors(batch);

  Vector nu = Vector::Constant(n, 1.0 / options.initial_site_var);
  Vector eta = Vector::Zero(n);
  if (!soft_active) nu[batch] = 0.0;

  Moments mom = moments_from_natural(pred.mean, pred.cov, c, nu, eta);
  std::vector<int> skipped(static_cast<std::size_t>(n), 0);

  EpResult result;
  for (int sweep = 1; sweep <= options.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (int q = 0; q < n; ++q) {
      if (q == batch && !soft_active) continue;
      const Vector s = mom.cov * c.col(q);
      const double v = c.col(q).dot(s);
      const double mm = c.col(q).dot(mom.mean);
      const double cav_prec = 1.0 / v - nu[q];
      if (!(cav_prec > 0.0) || !std::isfinite(cav_prec)) {
        ++skipped[static_cast<std::size_t>(q)];
        continue;
      }
      skipped[static_cast<std::size_t>(q)] = 0;
      const double cav_var = 1.0 / cav_prec;
      const double cav_mean = cav_var * (mm / v - eta[q]);
      const Tilted t = (q < batch) ? tilt_hard(cav_mean, cav_var)
                                   : tilt_soft(cav_mean, cav_var, y_max, noise_var);
      if (!std::isfinite(t.mean) || !(t.var > 0.0)) continue;

      const double nu_new = std::max(1.0 / t.var - cav_prec, 0.0);
      const double eta_new = t.mean / t.var - cav_mean * cav_prec;
      const double nu_next = (1.0 - options.damping) * nu[q] + options.damping * nu_new;
      const double eta_next = (1.0 - options.damping) * eta[q] + options.damping * eta_new;
      const double dnu = nu_next - nu[q];
      const double deta = eta_next - eta[q];
      max_change = std::max({max_change, std::abs(dnu), std::abs(deta)});

      // Rank-one refresh of the moments.
      const double denom = 1.0 + dnu * v;
      mom.cov -= (dnu / denom) * s * s.transpose();
      mom.mean += ((deta - mm * dnu) / denom) * s;
      nu[q] = nu_next;
      eta[q] = eta_next;
    }
    for (int q = 0; q < n; ++q) {
      if (skipped[static_cast<std::size_t>(q)] >= options.max_skipped_sweeps) {
        throw EpFailure("ep_condition: persistent negative cavity variance");
      }
    }
    mom = moments_from_natural(pred.mean, pred.cov, c, nu, eta);
    if (!mom.mean.allFinite() || !mom.cov.allFinite()) {
      throw EpFailure("ep_condition: non-finite moments");
    }
    result.iterations = sweep;
    if (max_change < options.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.mu_plus = mom.mean;
  result.sigma_plus = mom.cov;

  // Site parameters in moment form, with the scale Z~ from the final cavities.
  SiteParams& sites = result.sites;
  sites.tau_tilde.resize(n);
  sites.mu_tilde.resize(n);
  sites.z_tilde.resize(n);
  Vector log_zt = Vector::Zero(n);
  for (int q = 0; q < n; ++q) {
    if (nu[q] <= 0.0) {
      sites.tau_tilde[q] = kInf;
      sites.mu_tilde[q] = 0.0;
      sites.z_tilde[q] = 1.0;
      continue;
    }
    sites.tau_tilde[q] = 1.0 / nu[q];
    sites.mu_tilde[q] = eta[q] / nu[q];
    const double v = c.col(q).dot(mom.cov * c.col(q));
    const double mm = c.col(q).dot(mom.mean);
    const double cav_prec = 1.0 / v - nu[q];
    if (!(cav_prec > 0.0)) {
      sites.z_tilde[q] = 1.0;
      continue;
    }
    const double cav_var = 1.0 / cav_prec;
    const double cav_mean = cav_var * (mm / v - eta[q]);
    const Tilted t = (q < batch) ? tilt_hard(cav_mean, cav_var)
                                 : tilt_soft(cav_mean, cav_var, y_max, noise_var);
    const double spread = cav_var + sites.tau_tilde[q];
    const double diff = cav_mean - sites.mu_tilde[q];
    log_zt[q] = t.log_z + 0.5 * std::log(2.0 * std::numbers::pi * spread) +
                0.5 * diff * diff / spread;
    sites.z_tilde[q] = std::exp(log_zt[q]);
  }

  // log Z = sum_q log Z~_q + log N(mu~; C^T m, C^T K C + diag(tau~)) over the
  // participating sites.
  std::vector<int> active;
  for (int q = 0; q < n; ++q) {
    if (nu[q] > 0.0) active.push_back(q);
  }
  double log_z = 0.0;
  if (!active.empty()) {
    const int na = static_cast<int>(active.size());
    Matrix ca(n, na);
    Vector mt(na);
    Vector tt(na);
    for (int i = 0; i < na; ++i) {
      ca.col(i) = c.col(active[static_cast<std::size_t>(i)]);
      mt[i] = sites.mu_tilde[active[static_cast<std::size_t>(i)]];
      tt[i] = sites.tau_tilde[active[static_cast<std::size_t>(i)]];
      log_z += log_zt[active[static_cast<std::size_t>(i)]];
    }
    Matrix s = ca.transpose() * pred.cov * ca;
    s.diagonal() += tt;
    const Eigen::LLT<Matrix> llt(s);
    const Vector r = mt - ca.transpose() * pred.mean;
    if (llt.info() == Eigen::Success) {
      const Matrix l = llt.matrixL();
      const Vector w = llt.matrixL().solve(r);
      log_z += -0.5 * w.squaredNorm() - l.diagonal().array().log().sum() -
               0.5 * na * std::log(2.0 * std::numbers::pi);
    } else {
      log_z = std::numeric_limits<double>::quiet_NaN();
    }
  }
  result.log_z = log_z;
  return result;
}

double batch_entropy(const Matrix& sigma, double noise_var) {
  if (sigma.rows() != sigma.cols() || sigma.rows() < 1) {
    throw std::invalid_argument("batch_entropy: matrix must be square and non-empty");
  }
  Matrix a = sigma;
  a.diagonal().array() += noise_var;
  const double q = static_cast<double>(sigma.rows());
  return 0.5 * (q * std::log(2.0 * std::numbers::pi * std::numbers::e) + log_det_spd(a));
}

}  // namespace ppes
