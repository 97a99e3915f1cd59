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

#include "ppes/objectives.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "ppes/optimize.hpp"

namespace ppes {
namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<std::array<double, 4>, 10> kShekelA = {{{4, 4, 4, 4},
                                                            {1, 1, 1, 1},
                                                            {8, 8, 8, 8},
                                                            {6, 6, 6, 6},
                                                            {3, 7, 3, 7},
                                                            {2, 9, 2, 9},
                                                            {5, 5, 3, 3},
                                                            {8, 1, 8, 1},
                                                            {6, 2, 6, 2},
                                                            {7, 3.6, 7, 3.6}}};
constexpr std::array<double, 10> kShekelC = {0.1, 0.2, 0.2, 0.4, 0.4, 0.6, 0.3, 0.7, 0.5, 0.5};

constexpr std::array<double, 4> kHartAlpha = {1.0, 1.2, 3.0, 3.2};
constexpr std::array<std::array<double, 6>, 4> kHartA = {{{10, 3, 17, 3.5, 1.7, 8},
                                                         {0.05, 10, 17, 0.1, 8, 14},
                                                         {3, 3.5, 1.7, 10, 17, 8},
                                                         {17, 8, 0.05, 10, 0.1, 14}}};
constexpr std::array<std::array<double, 6>, 4> kHartP = {
    {{0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
     {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
     {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
     {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381}}};

// Shekel slice: x3 = x4 = 4.
constexpr double kShekelFixed = 4.0;

void check_point(const Vector& x, int dim, const char* who) {
  if (x.size() != dim) throw std::invalid_argument(std::string(who) + ": wrong dimension");
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) out[i++] = e;
  return out;
}

struct State {
  double x, y, vx, vy;
};

State deriv(const State& s, double thrust_acc, double ux, double uy, double g) {
  return {s.vx, s.vy, thrust_acc * ux, thrust_acc * uy - g};
}

State axpy(const State& s, double h, const State& d) {
  return {s.x + h * d.x, s.y + h * d.y, s.vx + h * d.vx, s.vy + h * d.vy};
}

// Supremum of the flight time over vertical launches: bisect the fuel mass
// on the escape boundary at each launch height end point.
double rocket_sup(const RocketParams& p) {
  double best = 0.0;
  for (double h : {0.0, 1.0}) {
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 40; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (rocket_flight_time(vec({h, mid, 1.0}), p) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    best = std::max(best, rocket_flight_time(vec({h, lo, 1.0}), p));
  }
  return best;
}

// Polishes a published optimizer location with finite-difference ascent.
Vector refine_max(const std::function<double(const Vector&)>& f, const Vector& x0) {
  const Domain box = Domain::unit(static_cast<int>(x0.size()));
  const ValueGrad fg = [&](const Vector& x, Vector* grad) {
    if (grad) *grad = fd_gradient(f, x, box, 1e-7);
    return f(x);
  };
  AscentOptions opts;
  opts.max_steps = 500;
  opts.step_tol = 1e-13;
  return projected_gradient_ascent(fg, x0, box, opts).x;
}

}  // namespace

double branin(double x1, double x2) {
  const double b = 5.1 / (4.0 * kPi * kPi);
  const double c = 5.0 / kPi;
  const double t = 1.0 / (8.0 * kPi);
  const double u = x2 - b * x1 * x1 + c * x1 - 6.0;
  return -(u * u + 10.0 * (1.0 - t) * std::cos(x1) + 10.0);
}

double cosines(double x, double y) {
  const double u = 1.6 * x - 0.5;
  const double v = 1.6 * y - 0.5;
  return 1.0 - (u * u + v * v - 0.3 * std::cos(3.0 * kPi * u) - 0.3 * std::cos(3.0 * kPi * v));
}

double shekel10(const Vector& x4) {
  check_point(x4, 4, "shekel10");
  double s = 0.0;
  for (std::size_t i = 0; i < kShekelA.size(); ++i) {
    double d = kShekelC[i];
    for (int j = 0; j < 4; ++j) {
      const double e = x4[j] - kShekelA[i][static_cast<std::size_t>(j)];
      d += e * e;
    }
    s += 1.0 / d;
  }
  return s;
}

double hartmann6(const Vector& x6) {
  check_point(x6, 6, "hartmann6");
  double s = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    double e = 0.0;
    for (std::size_t j = 0; j < 6; ++j) {
      const double d = x6[static_cast<Eigen::Index>(j)] - kHartP[i][j];
      e += kHartA[i][j] * d * d;
    }
    s += kHartAlpha[i] * std::exp(-e);
  }
  return s;
}

double rocket_flight_time(const Vector& x, const RocketParams& p) {
  check_point(x, 3, "rocket_flight_time");
  const double height = std::clamp(x[0], 0.0, 1.0) * p.max_height;
  const double fuel = std::clamp(x[1], 0.0, 1.0) * p.max_fuel;
  const double angle = std::clamp(x[2], 0.0, 1.0) * 0.5 * kPi;
  const double ux = std::cos(angle);
  const double uy = std::sin(angle);
  const double burn_time = fuel / p.burn_rate;
  const double thrust = p.exhaust_velocity * p.burn_rate;

  State s{0.0, height, 0.0, 0.0};
  double t = 0.0;
  const double escape2 = p.escape_speed * p.escape_speed;
  while (t < p.time_cap) {
    double h = p.dt;
    // Land the step exactly on burnout so the thrust cut-off is not smeared.
    if (t < burn_time && t + h > burn_time) h = burn_time - t;
    const auto acc = [&](double tt) {
      if (tt >= burn_time) return 0.0;
      return thrust / (p.dry_mass + fuel - p.burn_rate * tt);
    };
    const double a0 = acc(t);
    const double a_mid = (t < burn_time) ? acc(t + 0.5 * h) : 0.0;
    const double a1 = (t + h < burn_time) ? acc(t + h) : ((t < burn_time) ? thrust / p.dry_mass : 0.0);
    const State k1 = deriv(s, a0, ux, uy, p.gravity);
    const State k2 = deriv(axpy(s, 0.5 * h, k1), a_mid, ux, uy, p.gravity);
    const State k3 = deriv(axpy(s, 0.5 * h, k2), a_mid, ux, uy, p.gravity);
    const State k4 = deriv(axpy(s, h, k3), a1, ux, uy, p.gravity);
    State next{s.x + h / 6.0 * (k1.x + 2 * k2.x + 2 * k3.x + k4.x),
               s.y + h / 6.0 * (k1.y + 2 * k2.y + 2 * k3.y + k4.y),
               s.vx + h / 6.0 * (k1.vx + 2 * k2.vx + 2 * k3.vx + k4.vx),
               s.vy + h / 6.0 * (k1.vy + 2 * k2.vy + 2 * k3.vy + k4.vy)};
    if (next.vx * next.vx + next.vy * next.vy > escape2) return 0.0;
    if (next.y < 0.0) {
      // Ground crossing, linearly interpolated inside the step.
      if (s.y <= 0.0) return t;
      return t + h * s.y / (s.y - next.y);
    }
    s = next;
    t += h;
  }
  return 0.0;
}

Objective make_synthetic(const std::string& name, double noise_sd) {
  Objective o;
  o.name = name;
  o.noise_sd = noise_sd;
  if (name == "branin") {
    o.dim = 2;
    o.evaluate = [](const Vector& x) {
      check_point(x, 2, "branin");
      return branin(-5.0 + 15.0 * x[0], 15.0 * x[1]);
    };
    o.known_max = -0.39788735772973816;
    o.argmax = {vec({(-kPi + 5.0) / 15.0, 12.275 / 15.0}), vec({(kPi + 5.0) / 15.0, 2.275 / 15.0}),
                vec({(9.42478 + 5.0) / 15.0, 2.475 / 15.0})};
  } else if (name == "cosines") {
    o.dim = 2;
    o.evaluate = [](const Vector& x) {
      check_point(x, 2, "cosines");
      return cosines(x[0], x[1]);
    };
    o.known_max = 1.6;
    o.argmax = {vec({0.3125, 0.3125})};
  } else if (name == "shekel10") {
    o.dim = 2;
    o.evaluate = [](const Vector& x) {
      check_point(x, 2, "shekel10");
      return shekel10(vec({10.0 * x[0], 10.0 * x[1], kShekelFixed, kShekelFixed}));
    };
    static const Vector xs = refine_max(o.evaluate, vec({0.4, 0.4}));
    o.known_max = o.evaluate(xs);
    o.argmax = {xs};
  } else if (name == "hartmann6") {
    o.dim = 6;
    o.evaluate = [](const Vector& x) { return hartmann6(x); };
    static const Vector xs = refine_max(
        o.evaluate, vec({0.20168952, 0.15001069, 0.47687398, 0.27533243, 0.31165162, 0.65730054}));
    o.known_max = hartmann6(xs);
    o.argmax = {xs};
  } else {
    throw std::invalid_argument("make_synthetic: unknown objective '" + name + "'");
  }
  return o;
}

Objective make_objective(const std::string& name, double noise_sd) {
  if (name != "rocket") return make_synthetic(name, noise_sd);
  Objective o;
  o.name = name;
  o.dim = 3;
  o.noise_sd = noise_sd;
  o.evaluate = [](const Vector& x) { return rocket_flight_time(x); };
  static const double sup = rocket_sup(RocketParams{});
  o.known_max = sup;
  return o;
}

std::vector<std::string> objective_names() {
  return {"branin", "cosines", "shekel10", "hartmann6", "rocket"};
}

double observe(const Objective& obj, const Vector& x, Rng& rng) {
  const double f = obj.evaluate(x);
  if (obj.noise_sd <= 0.0) return f;
  std::normal_distribution<double> noise(0.0, obj.noise_sd);
  return f + noise(rng);
}

}  // namespace ppes
