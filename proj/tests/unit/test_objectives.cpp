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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ppes/objectives.hpp"
#include "ppes/stats.hpp"

using namespace ppes;

namespace {

Vector vec3(double a, double b, double c) {
  Vector v(3);
  v << a, b, c;
  return v;
}

double random_scan_max(const Objective& o, int n, Rng& rng) {
  const Domain dom = o.domain();
  double best = -1e300;
  for (int i = 0; i < n; ++i) best = std::max(best, o.evaluate(dom.sample(rng)));
  return best;
}

}  // namespace

TEST_CASE("branin optimum") {
  const Objective o = make_synthetic("branin");
  CHECK(o.dim == 2);
  Vector x(2);
  x << (std::numbers::pi + 5.0) / 15.0, 2.275 / 15.0;
  CHECK(o.evaluate(x) == doctest::Approx(-0.397887).epsilon(1e-5));
  CHECK(std::abs(o.evaluate(x) - o.known_max) <= 1e-5);
  REQUIRE(o.argmax.size() == 3);
  for (const Vector& a : o.argmax) CHECK(std::abs(o.evaluate(a) - o.known_max) <= 1e-5);
}

TEST_CASE("hartmann6 optimum") {
  const Objective o = make_synthetic("hartmann6");
  CHECK(o.dim == 6);
  CHECK(o.known_max == doctest::Approx(3.32237).epsilon(1e-5));
  Vector p(6);
  p << 0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573;
  CHECK(hartmann6(p) == doctest::Approx(3.32237).epsilon(1e-5));
  CHECK(o.known_max >= hartmann6(p));
  Rng rng(1);
  CHECK(o.known_max >= random_scan_max(o, 100000, rng));
}

TEST_CASE("cosines and shekel10 beat a dense random scan") {
  Rng rng(2);
  for (const char* name : {"cosines", "shekel10"}) {
    const Objective o = make_synthetic(name);
    CHECK(o.dim == 2);
    const double scan = random_scan_max(o, 1000000, rng);
    INFO(name << " known " << o.known_max << " scan " << scan);
    CHECK(o.known_max >= scan);
    CHECK(o.known_max - scan < 1e-2);
    for (const Vector& a : o.argmax) CHECK(o.evaluate(a) == doctest::Approx(o.known_max));
  }
}

TEST_CASE("names") {
  for (const std::string& n : objective_names()) {
    const Objective o = make_objective(n);
    CHECK(o.name == n);
    CHECK(o.dim >= 2);
    Rng rng(3);
    for (int i = 0; i < 100; ++i) CHECK(o.known_max >= o.evaluate(o.domain().sample(rng)) - 1e-12);
  }
  CHECK_THROWS_AS(make_objective("boston"), std::invalid_argument);
  CHECK_THROWS_AS(make_synthetic("rocket"), std::invalid_argument);
}

TEST_CASE("rocket: zero fuel from the ground") {
  for (double a : {0.0, 0.3, 1.0}) CHECK(rocket_flight_time(vec3(0.0, 0.0, a)) == 0.0);
}

TEST_CASE("rocket: short vertical burn is ballistic") {
  const RocketParams p;
  for (double fuel_frac : {0.001, 0.002, 0.005}) {
    const double fuel = fuel_frac * p.max_fuel;
    const double tb = fuel / p.burn_rate;
    const double vb = p.exhaust_velocity * std::log((p.dry_mass + fuel) / p.dry_mass) - p.gravity * tb;
    const double expect = tb + 2.0 * vb / p.gravity;
    const double got = rocket_flight_time(vec3(0.0, fuel_frac, 1.0));
    INFO("fuel " << fuel << " expect " << expect << " got " << got);
    CHECK(std::abs(got - expect) <= 0.02 * expect);
  }
}

TEST_CASE("rocket: escape returns zero and the boundary is discontinuous") {
  CHECK(rocket_flight_time(vec3(0.0, 1.0, 1.0)) == 0.0);
  CHECK(rocket_flight_time(vec3(0.5, 1.0, 0.9)) == 0.0);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    (rocket_flight_time(vec3(0.0, mid, 1.0)) > 0.0 ? lo : hi) = mid;
  }
  const double below = rocket_flight_time(vec3(0.0, lo, 1.0));
  const double above = rocket_flight_time(vec3(0.0, hi, 1.0));
  CHECK(hi - lo < 0.01);
  CHECK(below - above > 10.0);

  const Objective o = make_objective("rocket");
  CHECK(o.known_max >= below - 1e-9);
  Rng rng(4);
  for (int i = 0; i < 2000; ++i) {
    const double v = o.evaluate(o.domain().sample(rng));
    CHECK(v >= 0.0);
    CHECK(v <= RocketParams{}.time_cap);
    CHECK(v <= o.known_max + 1e-9);
  }
}

TEST_CASE("rocket: dropping from a height") {
  const double t = rocket_flight_time(vec3(1.0, 0.0, 0.5));
  CHECK(t == doctest::Approx(std::sqrt(2.0 * 100.0 / 9.81)).epsilon(1e-3));
}

TEST_CASE("observe") {
  Objective o = make_synthetic("branin", 0.0);
  Rng rng(5);
  Vector x(2);
  x << 0.3, 0.6;
  CHECK(observe(o, x, rng) == o.evaluate(x));
  o.noise_sd = 0.1;
  std::vector<double> ys;
  for (int i = 0; i < 100000; ++i) ys.push_back(observe(o, x, rng));
  CHECK(std::abs(mean(ys) - o.evaluate(x)) <= 3.0 * 0.1 / std::sqrt(1e5));
  CHECK(std::abs(stddev(ys) - 0.1) <= 0.002);
  Rng a(9), b(9);
  CHECK(observe(o, x, a) == observe(o, x, b));
}
