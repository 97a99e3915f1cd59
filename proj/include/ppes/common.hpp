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

#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace ppes {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Every randomized operation takes its stream explicitly.
using Rng = std::mt19937_64;

// A factorization failed even after jitter escalation, or a quantity that must
// be finite was not.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Expectation propagation could not produce a valid approximation (persistent
// negative cavity variances or non-finite moments).
class EpFailure : public std::runtime_error {
 public:
  explicit EpFailure(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ppes
