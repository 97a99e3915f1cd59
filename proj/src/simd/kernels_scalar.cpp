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

#include "ppes/simd/kernels.hpp"

#include <cmath>

#include "simd/kernels_internal.hpp"

namespace ppes::simd {
namespace scalar {

void se_row(const double* x, const double* pts, std::size_t n, std::size_t ld,
            std::size_t dim, const double* inv_ls2, double amp, double* out) {
  se_row_range(x, pts, 0, n, ld, dim, inv_ls2, amp, out);
}

void cos_features(const double* x, const double* freq, const double* phase, std::size_t m,
                  std::size_t ld, std::size_t dim, double scale, double* out) {
  cos_features_range(x, freq, phase, 0, m, ld, dim, scale, out);
}

double cos_features_dot(const double* x, const double* freq, const double* phase,
                        const double* weights, std::size_t m, std::size_t ld, std::size_t dim,
                        double scale, double* grad) {
  if (grad != nullptr) {
    for (std::size_t d = 0; d < dim; ++d) grad[d] = 0.0;
  }
  return cos_features_dot_range(x, freq, phase, weights, 0, m, ld, dim, scale, grad);
}

}  // namespace scalar

void se_row_range(const double* x, const double* pts, std::size_t begin, std::size_t end,
                  std::size_t ld, std::size_t dim, const double* inv_ls2, double amp,
                  double* out) {
  for (std::size_t j = begin; j < end; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      const double diff = x[d] - pts[d * ld + j];
      acc += diff * diff * inv_ls2[d];
    }
    out[j] = amp * std::exp(-0.5 * acc);
  }
}

void cos_features_range(const double* x, const double* freq, const double* phase,
                        std::size_t begin, std::size_t end, std::size_t ld, std::size_t dim,
                        double scale, double* out) {
  for (std::size_t k = begin; k < end; ++k) {
    double z = phase[k];
    for (std::size_t d = 0; d < dim; ++d) z += freq[d * ld + k] * x[d];
    out[k] = scale * std::cos(z);
  }
}

double cos_features_dot_range(const double* x, const double* freq, const double* phase,
                              const double* weights, std::size_t begin, std::size_t end,
                              std::size_t ld, std::size_t dim, double scale, double* grad) {
  double value = 0.0;
  for (std::size_t k = begin; k < end; ++k) {
    double z = phase[k];
    for (std::size_t d = 0; d < dim; ++d) z += freq[d * ld + k] * x[d];
    value += weights[k] * std::cos(z);
    if (grad != nullptr) {
      const double s = weights[k] * std::sin(z);
      for (std::size_t d = 0; d < dim; ++d) grad[d] -= scale * s * freq[d * ld + k];
    }
  }
  return scale * value;
}

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::kScalar, &scalar::se_row, &scalar::cos_features,
                                 &scalar::cos_features_dot};
  return table;
}

}  // namespace ppes::simd
