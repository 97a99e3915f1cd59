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

#include "ppes/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <thread>

#include <json.hpp>

#include "ppes/acquisition.hpp"
#include "ppes/stats.hpp"

namespace ppes {
namespace {

Dataset standardized(const Dataset& raw, bool on) {
  if (!on || raw.size() < 2) return raw;
  const Vector& y = raw.outputs();
  const double m = y.mean();
  const double sd = std::sqrt((y.array() - m).square().sum() / static_cast<double>(y.size() - 1));
  const double s = (sd > 0.0) ? sd : 1.0;
  return Dataset(raw.inputs(), (y.array() - m) / s);
}

}  // namespace

GpHyper most_probable_hyper(const Dataset& data, const HyperPosteriorSamples& hypers) {
  if (hypers.samples.empty()) throw std::invalid_argument("most_probable_hyper: no samples");
  const HyperPrior prior = HyperPrior::from_data(data);
  std::size_t best = 0;
  double best_lp = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hypers.size(); ++i) {
    const double lp = log_hyper_posterior(data, prior, hyper_to_theta(hypers.samples[i]));
    if (lp > best_lp) {
      best_lp = lp;
      best = i;
    }
  }
  return hypers.samples[best];
}

BatchCandidate select_batch(const PolicyConfig& policy, const PolicyInput& in, Rng& rng) {
  const UcbSchedule schedule = policy.schedule.alpha_t ? policy.schedule
                                                       : UcbSchedule::standard(in.domain.dim());
  switch (policy.method) {
    case Method::kPpes: {
      const AcquisitionContext ctx = build_acquisition_context(in.data, in.hypers, in.domain, rng,
                                                               policy.context);
      return optimize_batch(ctx, in.domain, in.q, rng, policy.batch);
    }
    case Method::kEiMcmc:
      return ei_mcmc_batch(in.data, in.hypers, in.domain, in.q, policy.n_fantasy, rng, policy.search);
    case Method::kSmUcb:
      return sm_ucb_batch(in.data, most_probable_hyper(in.data, in.hypers), in.domain, in.q,
                          std::max(policy.pool, in.q), schedule, in.t, rng, policy.search);
    case Method::kGpBucb:
      return gp_bucb_batch(in.data, most_probable_hyper(in.data, in.hypers), in.domain, in.q,
                           schedule, in.t, rng, policy.search);
    case Method::kGpUcbPe:
      return gp_ucb_pe_batch(in.data, most_probable_hyper(in.data, in.hypers), in.domain, in.q,
                             schedule, in.t, rng, policy.n_candidates, policy.search);
    case Method::kRandom:
      return random_batch(in.domain, in.q, rng);
  }
  throw std::logic_error("select_batch: unhandled method");
}

Vector recommend_point(const Dataset& data, const HyperPosteriorSamples& hypers, const Domain& domain,
                       Rng& rng) {
  std::vector<GpPosterior> posts;
  posts.reserve(hypers.size());
  for (const GpHyper& h : hypers.samples) posts.emplace_back(data, h);
  const double w = 1.0 / static_cast<double>(posts.size());
  const ValueGrad f = [&](const Vector& x, Vector* grad) {
    double v = 0.0;
    Vector g;
    if (grad) grad->setZero(x.size());
    for (const GpPosterior& p : posts) {
      v += w * p.mean_grad(x, grad ? &g : nullptr);
      if (grad) *grad += w * g;
    }
    return v;
  };
  std::vector<Vector> extra;
  for (Eigen::Index i = 0; i < data.inputs().rows(); ++i) extra.push_back(data.inputs().row(i).transpose());
  return multistart_maximize(f, domain, rng, {}, extra).x;
}

Rng repeat_rng(std::uint64_t seed, int run_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(run_id), 0x9e3779b9u};
  return Rng(seq);
}

RegretTrace run_experiment(const ExperimentConfig& cfg, int run_id, Rng& rng) {
  if (cfg.iters < 1 || cfg.init_count < 1 || cfg.policy.q < 1 || cfg.m_samples < 1) {
    throw std::invalid_argument("run_experiment: iters, init_count, q and m_samples must be >= 1");
  }
  const Objective obj = make_objective(cfg.objective, cfg.noise_sd);
  const Domain domain = obj.domain();
  RegretTrace trace;
  trace.run_id = run_id;

  Dataset raw(obj.dim);
  for (int i = 0; i < cfg.init_count; ++i) {
    const Vector x = domain.sample(rng);
    raw.add(x, observe(obj, x, rng));
  }
  HyperChain chain(standardized(raw, cfg.standardize), cfg.slice);

  for (int t = 1; t <= cfg.iters; ++t) {
    const auto start = std::chrono::steady_clock::now();
    IterationRecord rec;
    rec.t = t;
    try {
      const Dataset data = standardized(raw, cfg.standardize);
      const HyperPosteriorSamples hypers = chain.sample(data, cfg.m_samples, rng, cfg.warm_burn_in);
      const PolicyInput in{data, hypers, domain, t, cfg.policy.q};
      const BatchCandidate batch =
          cfg.custom_policy ? cfg.custom_policy(in, rng) : select_batch(cfg.policy, in, rng);
      if (batch.size() != cfg.policy.q || batch.points.cols() != obj.dim) {
        throw std::runtime_error("policy returned a batch of the wrong shape");
      }
      rec.batch = batch.points;
      for (Eigen::Index i = 0; i < batch.points.rows(); ++i) {
        const Vector x = domain.clamp(batch.points.row(i).transpose());
        rec.batch.row(i) = x.transpose();
        raw.add(x, observe(obj, x, rng));
      }
      if (cfg.recommend == Recommendation::kBestObserved) {
        rec.recommendation = raw.inputs().row(static_cast<Eigen::Index>(raw.argmax())).transpose();
      } else {
        const Dataset post_data = standardized(raw, cfg.standardize);
        const HyperPosteriorSamples rh = chain.sample(post_data, cfg.m_samples, rng, cfg.warm_burn_in);
        rec.recommendation = recommend_point(post_data, rh, domain, rng);
      }
      rec.regret = std::abs(obj.evaluate(rec.recommendation) - obj.known_max);
      rec.best_observed = raw.y_max();
    } catch (const std::exception& e) {
      trace.aborted = true;
      trace.error = "t=" + std::to_string(t) + ": " + e.what();
      return trace;
    }
    rec.wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    trace.iterations.push_back(std::move(rec));
  }
  return trace;
}

int default_thread_count() {
  if (const char* env = std::getenv("PPES_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<RegretTrace> run_repeats(const ExperimentConfig& cfg) {
  if (cfg.repeats < 1) throw std::invalid_argument("run_repeats: repeats must be >= 1");
  std::vector<RegretTrace> out(static_cast<std::size_t>(cfg.repeats));
  std::atomic<int> next{0};
  const auto work = [&]() {
    for (int r = next++; r < cfg.repeats; r = next++) {
      Rng rng = repeat_rng(cfg.seed, r);
      out[static_cast<std::size_t>(r)] = run_experiment(cfg, r, rng);
    }
  };
  const int n_threads = std::min(cfg.threads > 0 ? cfg.threads : default_thread_count(), cfg.repeats);
  std::vector<std::thread> pool;
  for (int i = 1; i < n_threads; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  return out;
}

RegretReport aggregate(const std::vector<RegretTrace>& traces, int resamples, std::uint64_t seed) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  RegretReport rep;
  rep.runs = static_cast<int>(traces.size());
  std::size_t len = 0;
  for (const RegretTrace& tr : traces) {
    if (tr.aborted) {
      ++rep.aborted;
      continue;
    }
    len = std::max(len, tr.iterations.size());
  }
  Rng rng(seed);
  for (std::size_t t = 0; t < len; ++t) {
    std::vector<double> col;
    for (const RegretTrace& tr : traces) {
      if (!tr.aborted && t < tr.iterations.size()) col.push_back(tr.iterations[t].regret);
    }
    // Sorting first makes the bootstrap independent of trace order.
    std::sort(col.begin(), col.end());
    rep.median.push_back(median(col));
    rep.band.push_back(bootstrap_median_sd(col, resamples, rng));
  }
  return rep;
}

void write_traces_csv(const std::string& path, const std::vector<RegretTrace>& traces) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_traces_csv: cannot open " + path);
  out.precision(12);
  Eigen::Index dim = 0, q = 0;
  for (const RegretTrace& tr : traces) {
    if (!tr.iterations.empty()) {
      dim = tr.iterations[0].recommendation.size();
      q = tr.iterations[0].batch.rows();
      break;
    }
  }
  out << "run_id,t,r_t";
  for (Eigen::Index d = 0; d < dim; ++d) out << ",rec_" << d;
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index d = 0; d < dim; ++d) out << ",batch_" << i << '_' << d;
  }
  out << ",wall_ms\n";
  for (const RegretTrace& tr : traces) {
    for (const IterationRecord& rec : tr.iterations) {
      out << tr.run_id << ',' << rec.t << ',' << rec.regret;
      for (Eigen::Index d = 0; d < rec.recommendation.size(); ++d) out << ',' << rec.recommendation[d];
      for (Eigen::Index i = 0; i < rec.batch.rows(); ++i) {
        for (Eigen::Index d = 0; d < rec.batch.cols(); ++d) out << ',' << rec.batch(i, d);
      }
      out << ',' << rec.wall_ms << '\n';
    }
  }
}

void write_report_json(const std::string& path, const ExperimentConfig& cfg, const RegretReport& report) {
  nlohmann::json j;
  j["objective"] = cfg.objective;
  j["policy"] = method_name(cfg.policy.method);
  j["q"] = cfg.policy.q;
  j["iters"] = cfg.iters;
  j["repeats"] = cfg.repeats;
  j["seed"] = cfg.seed;
  j["m_samples"] = cfg.m_samples;
  j["runs"] = report.runs;
  j["aborted"] = report.aborted;
  j["median_regret"] = report.median;
  j["median_regret_bootstrap_sd"] = report.band;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_report_json: cannot open " + path);
  out << j.dump(2) << '\n';
}

}  // namespace ppes
