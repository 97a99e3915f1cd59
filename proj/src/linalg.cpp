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

#include "ppes/linalg.hpp"

#include <cmath>

namespace ppes {

double JitteredCholesky::log_det() const {
  const Matrix& l = llt.matrixLLT();
  return 2.0 * l.diagonal().array().log().sum();
}

JitteredCholesky jittered_cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("jittered_cholesky: matrix not square");
  if (a.rows() == 0) return {Eigen::LLT<Matrix>(a), 0.0};
  if (!a.allFinite()) throw NumericalError("jittered_cholesky: non-finite entries");
  const double mean_diag = std::max(a.diagonal().mean(), 1e-300);
  for (double rel = 1e-10; rel <= 1e-4 * 1.0000001; rel *= 10.0) {
    Matrix work = a;
    work.diagonal().array() += rel * mean_diag;
    JitteredCholesky out{Eigen::LLT<Matrix>(work), rel * mean_diag};
    if (out.llt.info() == Eigen::Success && out.llt.matrixLLT().diagonal().minCoeff() > 0.0) {
      return out;
    }
  }
  throw NumericalError("jittered_cholesky: matrix not positive definite after jitter escalation");
}

double log_det_spd(const Matrix& a) { return jittered_cholesky(a).log_det(); }

}  // namespace ppes
