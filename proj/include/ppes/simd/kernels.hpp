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

// Data-parallel inner loops shared by the GP, random-feature and oracle code.
//
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variant is chosen once at startup from the CPU
// feature bits; PPES_SIMD=scalar in the environment forces the reference path.
//
// Point sets are passed dimension-major ("SoA"): coordinate d of point j lives
// at pts[d * ld + j]. This is exactly the storage of a column-major Eigen
// matrix with one point per row, so X.data() / X.rows() can be passed as-is.

#include <cstddef>
#include <span>
#include <string_view>

namespace ppes::simd {

enum class Isa { kScalar, kAvx2 };

std::string_view isa_name(Isa isa);

struct KernelTable {
  Isa isa;

  // out[j] = amp * exp(-0.5 * sum_d (x[d] - pts[d*ld + j])^2 * inv_ls2[d])
  void (*se_row)(const double* x, const double* pts, std::size_t n, std::size_t ld,
                 std::size_t dim, const double* inv_ls2, double amp, double* out);

  // out[k] = scale * cos(phase[k] + sum_d freq[d*ld + k] * x[d])
  void (*cos_features)(const double* x, const double* freq, const double* phase,
                       std::size_t m, std::size_t ld, std::size_t dim, double scale,
                       double* out);

  // Returns sum_k weights[k] * scale * cos(z_k). When grad is non-null it
  // receives grad[d] = -scale * sum_k weights[k] * sin(z_k) * freq[d*ld + k].
  double (*cos_features_dot)(const double* x, const double* freq, const double* phase,
                             const double* weights, std::size_t m, std::size_t ld,
                             std::size_t dim, double scale, double* grad);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks AVX2+FMA.
const KernelTable* avx2_kernels();

// The table used by the library.
const KernelTable& active_kernels();

// Overrides the runtime choice; returns false if the ISA is unavailable.
bool set_active_isa(Isa isa);

inline void se_row(std::span<const double> x, const double* pts, std::size_t n,
                   std::size_t ld, std::span<const double> inv_ls2, double amp,
                   std::span<double> out) {
  active_kernels().se_row(x.data(), pts, n, ld, x.size(), inv_ls2.data(), amp, out.data());
}

}  // namespace ppes::simd
