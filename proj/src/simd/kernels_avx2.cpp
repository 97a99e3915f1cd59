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

// AVX2/FMA variants. This translation unit is compiled with -mavx2 -mfma and
// is only entered after the dispatcher has checked the CPU feature bits.

#include <immintrin.h>

#include <cstdint>

#include "simd/kernels_internal.hpp"

namespace ppes::simd {
namespace avx2 {
namespace {

constexpr std::size_t kLanes = 4;

// 1.5 * 2^52: adding it to a double in [-2^51, 2^51] leaves the rounded
// integer in the low mantissa bits.
const __m256d kRoundMagic = _mm256_set1_pd(6755399441055744.0);

inline __m256d horner(__m256d x, const double* c, int n) {
  __m256d acc = _mm256_set1_pd(c[n - 1]);
  for (int i = n - 2; i >= 0; --i) acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
  return acc;
}

// exp(x) with Cody-Waite reduction and a degree-13 Taylor polynomial on
// |r| <= ln2/2. Inputs below -708 flush to zero; only non-positive arguments
// occur in the kernel code.
inline __m256d exp_pd(__m256d x) {
  static constexpr double kCoef[] = {1.0,
                                     1.0,
                                     1.0 / 2,
                                     1.0 / 6,
                                     1.0 / 24,
                                     1.0 / 120,
                                     1.0 / 720,
                                     1.0 / 5040,
                                     1.0 / 40320,
                                     1.0 / 362880,
                                     1.0 / 3628800,
                                     1.0 / 39916800,
                                     1.0 / 479001600,
                                     1.0 / 6227020800.0};
  const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-708.0), _CMP_LT_OQ);
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
  x = _mm256_min_pd(x, _mm256_set1_pd(709.0));

  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(1.90821492927058770002e-10), r);
  const __m256d p = horner(r, kCoef, 14);

  const __m256i ki = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, kRoundMagic)),
                                      _mm256_castpd_si256(kRoundMagic));
  const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(ki, _mm256_set1_epi64x(1023)), 52);
  const __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
  return _mm256_andnot_pd(underflow, result);
}

// sin and cos of z via reduction by pi/2 and Taylor polynomials on
// |r| <= pi/4 (truncation error below 1e-16 there).
inline void sincos_pd(__m256d z, __m256d* s_out, __m256d* c_out) {
  static constexpr double kSin[] = {-1.0 / 6,
                                    1.0 / 120,
                                    -1.0 / 5040,
                                    1.0 / 362880,
                                    -1.0 / 39916800,
                                    1.0 / 6227020800.0,
                                    -1.0 / 1307674368000.0,
                                    1.0 / 355687428096000.0};
  static constexpr double kCos[] = {-1.0 / 2,
                                    1.0 / 24,
                                    -1.0 / 720,
                                    1.0 / 40320,
                                    -1.0 / 3628800,
                                    1.0 / 479001600,
                                    -1.0 / 87178291200.0,
                                    1.0 / 20922789888000.0,
                                    -1.0 / 6402373705728000.0};
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(z, _mm256_set1_pd(0.63661977236758134308)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, _mm256_set1_pd(1.57079632679489655800e+00), z);
  r = _mm256_fnmadd_pd(k, _mm256_set1_pd(6.12323399573676603587e-17), r);
  const __m256d r2 = _mm256_mul_pd(r, r);

  const __m256d sin_r = _mm256_fmadd_pd(_mm256_mul_pd(r, r2), horner(r2, kSin, 8), r);
  const __m256d cos_r =
      _mm256_fmadd_pd(r2, horner(r2, kCos, 9), _mm256_set1_pd(1.0));

  const __m256i q = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(k, kRoundMagic)),
                                     _mm256_castpd_si256(kRoundMagic));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d neg_sin = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, two), two));
  const __m256d neg_cos = _mm256_castsi256_pd(
      _mm256_cmpeq_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), two));
  const __m256d sign = _mm256_set1_pd(-0.0);

  __m256d s = _mm256_blendv_pd(sin_r, cos_r, swap);
  __m256d c = _mm256_blendv_pd(cos_r, sin_r, swap);
  s = _mm256_xor_pd(s, _mm256_and_pd(neg_sin, sign));
  c = _mm256_xor_pd(c, _mm256_and_pd(neg_cos, sign));
  *s_out = s;
  *c_out = c;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d phase_arg(const double* x, const double* freq, const double* phase,
                         std::size_t k, std::size_t ld, std::size_t dim) {
  __m256d z = _mm256_loadu_pd(phase + k);
  for (std::size_t d = 0; d < dim; ++d) {
    z = _mm256_fmadd_pd(_mm256_loadu_pd(freq + d * ld + k), _mm256_set1_pd(x[d]), z);
  }
  return z;
}

void se_row(const double* x, const double* pts, std::size_t n, std::size_t ld,
            std::size_t dim, const double* inv_ls2, double amp, double* out) {
  const std::size_t body = n - n % kLanes;
  const __m256d amp_v = _mm256_set1_pd(amp);
  const __m256d half = _mm256_set1_pd(-0.5);
  for (std::size_t j = 0; j < body; j += kLanes) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t d = 0; d < dim; ++d) {
      const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(x[d]), _mm256_loadu_pd(pts + d * ld + j));
      acc = _mm256_fmadd_pd(_mm256_mul_pd(diff, diff), _mm256_set1_pd(inv_ls2[d]), acc);
    }
    _mm256_storeu_pd(out + j, _mm256_mul_pd(amp_v, exp_pd(_mm256_mul_pd(half, acc))));
  }
  se_row_range(x, pts, body, n, ld, dim, inv_ls2, amp, out);
}

void cos_features(const double* x, const double* freq, const double* phase, std::size_t m,
                  std::size_t ld, std::size_t dim, double scale, double* out) {
  const std::size_t body = m - m % kLanes;
  const __m256d scale_v = _mm256_set1_pd(scale);
  for (std::size_t k = 0; k < body; k += kLanes) {
    __m256d s, c;
    sincos_pd(phase_arg(x, freq, phase, k, ld, dim), &s, &c);
    _mm256_storeu_pd(out + k, _mm256_mul_pd(scale_v, c));
  }
  cos_features_range(x, freq, phase, body, m, ld, dim, scale, out);
}

double cos_features_dot(const double* x, const double* freq, const double* phase,
                        const double* weights, std::size_t m, std::size_t ld, std::size_t dim,
                        double scale, double* grad) {
  constexpr std::size_t kMaxDim = 16;
  const std::size_t body = (dim <= kMaxDim) ? m - m % kLanes : 0;
  __m256d value = _mm256_setzero_pd();
  __m256d gacc[kMaxDim];
  for (std::size_t d = 0; d < dim && d < kMaxDim; ++d) gacc[d] = _mm256_setzero_pd();
  for (std::size_t k = 0; k < body; k += kLanes) {
    __m256d s, c;
    sincos_pd(phase_arg(x, freq, phase, k, ld, dim), &s, &c);
    const __m256d w = _mm256_loadu_pd(weights + k);
    value = _mm256_fmadd_pd(w, c, value);
    if (grad != nullptr) {
      const __m256d ws = _mm256_mul_pd(w, s);
      for (std::size_t d = 0; d < dim; ++d) {
        gacc[d] = _mm256_fmadd_pd(ws, _mm256_loadu_pd(freq + d * ld + k), gacc[d]);
      }
    }
  }
  if (grad != nullptr) {
    for (std::size_t d = 0; d < dim; ++d) {
      grad[d] = (body > 0) ? -scale * hsum(gacc[d]) : 0.0;
    }
  }
  const double head = scale * hsum(value);
  return head + cos_features_dot_range(x, freq, phase, weights, body, m, ld, dim, scale, grad);
}

}  // namespace
}  // namespace avx2

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::kAvx2, &avx2::se_row, &avx2::cos_features,
                                 &avx2::cos_features_dot};
  return table;
}

}  // namespace ppes::simd
