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

// Benchmark objectives, all maximized over the unit cube [0,1]^D.

#include <functional>
#include <string>
#include <vector>

#include "ppes/common.hpp"
#include "ppes/gp.hpp"

namespace ppes {

struct Objective {
  std::string name;
  int dim = 0;
  std::function<double(const Vector&)> evaluate;  // noiseless
  double noise_sd = 0.1;
  double known_max = 0.0;
  std::vector<Vector> argmax;  // unit-cube coordinates (empty when only the value is known)

  Domain domain() const { return Domain::unit(dim); }
};

// branin, cosines, shekel10, hartmann6 or rocket. Throws std::invalid_argument otherwise.
Objective make_objective(const std::string& name, double noise_sd = 0.1);
Objective make_synthetic(const std::string& name, double noise_sd = 0.1);

std::vector<std::string> objective_names();

// Raw forms on their native domains (maximization sign).
double branin(double x1, double x2);
double cosines(double x, double y);
double shekel10(const Vector& x4);
double hartmann6(const Vector& x6);

struct RocketParams {
  double exhaust_velocity = 1000.0;  // m/s
  double burn_rate = 1.0;            // kg/s
  double dry_mass = 1.0;             // kg
  double max_fuel = 10.0;            // kg
  double max_height = 100.0;         // m
  double gravity = 9.81;             // m/s^2
  double dt = 0.01;                  // s
  double time_cap = 600.0;           // s
  double escape_speed = 2000.0;      // m/s
};

// x = (launch height, fuel mass, launch angle) in [0,1]^3. Returns seconds
// until the altitude is back to zero, or 0 when the rocket does not return.
double rocket_flight_time(const Vector& x, const RocketParams& params = {});

// evaluate(x) + N(0, noise_sd^2)
double observe(const Objective& obj, const Vector& x, Rng& rng);

}  // namespace ppes
