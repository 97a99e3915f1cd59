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

#include <Eigen/Cholesky>

#include "ppes/common.hpp"

namespace ppes {

// Cholesky of a symmetric matrix with a small diagonal jitter. The jitter
// starts at 1e-10 times the mean diagonal and grows by 10x up to 1e-4 times
// the mean diagonal; past that a NumericalError is thrown.
struct JitteredCholesky {
  Eigen::LLT<Matrix> llt;
  double jitter = 0.0;

  double log_det() const;
};

JitteredCholesky jittered_cholesky(const Matrix& a);

// log det of a symmetric positive (semi-)definite matrix.
double log_det_spd(const Matrix& a);

}  // namespace ppes
