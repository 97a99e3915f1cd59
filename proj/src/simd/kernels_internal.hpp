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

#include <cstddef>

#include "ppes/simd/kernels.hpp"

namespace ppes::simd {

// Scalar loops over [begin, end); vector variants use them for remainders.
void se_row_range(const double* x, const double* pts, std::size_t begin, std::size_t end,
                  std::size_t ld, std::size_t dim, const double* inv_ls2, double amp,
                  double* out);

void cos_features_range(const double* x, const double* freq, const double* phase,
                        std::size_t begin, std::size_t end, std::size_t ld, std::size_t dim,
                        double scale, double* out);

// Accumulates into grad (which must be initialised by the caller).
double cos_features_dot_range(const double* x, const double* freq, const double* phase,
                              const double* weights, std::size_t begin, std::size_t end,
                              std::size_t ld, std::size_t dim, double scale, double* grad);

#if defined(PPES_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace ppes::simd
