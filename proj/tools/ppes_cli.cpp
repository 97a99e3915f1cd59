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

// Command-line front end: benchmark runs, the 1-D oracle surface and PPES
// surface dumps.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ppes/acquisition.hpp"
#include "ppes/harness.hpp"
#include "ppes/oracle.hpp"

namespace {

int cmd_run(const ppes::ExperimentConfig& cfg, const std::string& out) {
  const std::vector<ppes::RegretTrace> traces = ppes::run_repeats(cfg);
  const ppes::RegretReport rep = ppes::aggregate(traces, 1000, cfg.seed);
  ppes::write_traces_csv(out + ".csv", traces);
  ppes::write_report_json(out + ".json", cfg, rep);
  for (const auto& tr : traces) {
    if (tr.aborted) std::cerr << "repeat " << tr.run_id << " aborted: " << tr.error << '\n';
  }
  for (std::size_t t = 0; t < rep.median.size(); ++t) {
    std::printf("t=%zu median_regret=%.6g band=%.3g\n", t + 1, rep.median[t], rep.band[t]);
  }
  std::printf("aborted %d of %d\n", rep.aborted, rep.runs);
  return (rep.aborted * 10 > rep.runs) ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Batch Bayesian optimization with parallel predictive entropy search"};
  app.require_subcommand(1);

  ppes::ExperimentConfig cfg;
  std::string policy = "ppes";
  std::string out = "ppes_run";
  int num_features = 500;
  auto* run = app.add_subcommand("run", "run a benchmark experiment");
  run->add_option("--objective", cfg.objective, "branin|cosines|shekel10|hartmann6|rocket");
  run->add_option("--policy", policy, "ppes|ei_mcmc|sm_ucb|gp_bucb|gp_ucb_pe|random");
  run->add_option("--q", cfg.policy.q, "batch size")->check(CLI::PositiveNumber);
  run->add_option("--iters", cfg.iters, "batch iterations")->check(CLI::PositiveNumber);
  run->add_option("--repeats", cfg.repeats, "independent repeats")->check(CLI::PositiveNumber);
  run->add_option("--seed", cfg.seed, "base seed");
  run->add_option("--m-samples", cfg.m_samples, "hyperparameter samples")->check(CLI::PositiveNumber);
  run->add_option("--init", cfg.init_count, "initial random points")->check(CLI::PositiveNumber);
  run->add_option("--noise-sd", cfg.noise_sd, "observation noise s.d.");
  run->add_option("--features", num_features, "random features per x* sample");
  run->add_option("--restarts", cfg.policy.batch.n_restarts, "PPES ascents from the best random batches");
  run->add_option("--out", out, "output prefix (writes .csv and .json)");

  std::uint64_t oseed = 7;
  int grid_n = 50;
  int n_paths = 200000;
  int m_vis = 200;
  std::string oout = "oracle_surface.csv";
  auto* oracle = app.add_subcommand("oracle", "ground-truth information gain on the 1-D validation problem");
  oracle->add_option("--seed", oseed, "seed for the dataset and paths");
  oracle->add_option("--grid", grid_n, "grid points per axis");
  oracle->add_option("--paths", n_paths, "GP sample paths");
  oracle->add_option("--out", oout, "CSV path");

  std::string vout = "ppes_surface.csv";
  auto* vis = app.add_subcommand("visualize", "PPES objective on a grid for the 1-D validation problem");
  vis->add_option("--seed", oseed, "seed for the dataset and x* samples");
  vis->add_option("--grid", grid_n, "grid points per axis");
  vis->add_option("--m-samples", m_vis, "x* samples");
  vis->add_option("--out", vout, "CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      cfg.policy.method = ppes::parse_method(policy);
      cfg.policy.context.num_features = num_features;
      cfg.policy.context.probe_batch_size = cfg.policy.q;
      return cmd_run(cfg, out);
    }
    ppes::Rng rng(oseed);
    const ppes::GpHyper hyper = ppes::validation_hyper();
    const ppes::Dataset data = ppes::validation_dataset(hyper, 5, rng);
    if (*oracle) {
      const ppes::GroundTruthSurface s = ppes::ground_truth_ppes(data, hyper, grid_n, n_paths, rng);
      ppes::write_surface_csv(oout, s.grid, s.values);
      std::printf("argmax (%.4f, %.4f), excluded x* %d\n", s.grid[s.argmax_i], s.grid[s.argmax_j],
                  s.excluded);
      return 0;
    }
    ppes::HyperPosteriorSamples hs;
    hs.samples.assign(static_cast<std::size_t>(m_vis), hyper);
    ppes::ContextOptions copts;
    copts.probe_batch_size = 2;
    const ppes::AcquisitionContext ctx =
        ppes::build_acquisition_context(data, hs, ppes::Domain::unit(1), rng, copts);
    const ppes::Vector grid = ppes::Vector::LinSpaced(grid_n, 0.0, 1.0);
    const ppes::Matrix surf = ppes::ppes_surface(ctx, grid);
    ppes::write_surface_csv(vout, grid, surf);
    int i = 0, j = 0;
    ppes::surface_argmax(surf, &i, &j);
    std::printf("argmax (%.4f, %.4f)\n", grid[i], grid[j]);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
