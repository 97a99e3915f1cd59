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

// Experiment runner: random initial design, policy loop, model-based
// recommendation, immediate regret and aggregate reports.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ppes/baselines.hpp"
#include "ppes/hyper_sampler.hpp"
#include "ppes/objectives.hpp"

namespace ppes {

enum class Recommendation { kPosteriorMean, kBestObserved };

// What a batch policy sees at iteration t (1-based).
struct PolicyInput {
  const Dataset& data;  // standardized outputs
  const HyperPosteriorSamples& hypers;
  const Domain& domain;
  int t;
  int q;
};
using BatchPolicy = std::function<BatchCandidate(const PolicyInput&, Rng&)>;

struct ExperimentConfig {
  std::string objective = "branin";
  PolicyConfig policy;
  int iters = 15;
  int repeats = 20;
  std::uint64_t seed = 1;
  int m_samples = 10;
  int init_count = 5;
  double noise_sd = 0.1;
  bool standardize = true;
  Recommendation recommend = Recommendation::kPosteriorMean;
  SliceSamplerOptions slice;
  int warm_burn_in = 50;
  int threads = 0;  // 0: PPES_THREADS or hardware concurrency
  BatchPolicy custom_policy;  // replaces the configured method when set
};

struct IterationRecord {
  int t = 0;
  Vector recommendation;
  double regret = 0.0;
  double best_observed = 0.0;  // largest raw noisy output so far
  Matrix batch;
  double wall_ms = 0.0;
};

struct RegretTrace {
  int run_id = 0;
  std::vector<IterationRecord> iterations;
  bool aborted = false;
  std::string error;
};

// The built-in policies.
BatchCandidate select_batch(const PolicyConfig& policy, const PolicyInput& in, Rng& rng);

// Sample with the highest unnormalized posterior density.
GpHyper most_probable_hyper(const Dataset& data, const HyperPosteriorSamples& hypers);

// Argmax of the hyper-averaged posterior mean.
Vector recommend_point(const Dataset& data, const HyperPosteriorSamples& hypers, const Domain& domain,
                       Rng& rng);

// Deterministic per-repeat stream.
Rng repeat_rng(std::uint64_t seed, int run_id);

RegretTrace run_experiment(const ExperimentConfig& cfg, int run_id, Rng& rng);
// All repeats on a thread pool; results ordered by run id.
std::vector<RegretTrace> run_repeats(const ExperimentConfig& cfg);

// Thread count from PPES_THREADS (falls back to hardware concurrency).
int default_thread_count();

struct RegretReport {
  std::vector<double> median;  // per iteration
  std::vector<double> band;    // bootstrap s.d. of the median
  int runs = 0;
  int aborted = 0;
};
// Aborted traces are excluded from the medians.
RegretReport aggregate(const std::vector<RegretTrace>& traces, int resamples = 1000,
                       std::uint64_t seed = 0);

void write_traces_csv(const std::string& path, const std::vector<RegretTrace>& traces);
void write_report_json(const std::string& path, const ExperimentConfig& cfg, const RegretReport& report);

}  // namespace ppes
