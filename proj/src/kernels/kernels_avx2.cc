// Copyright 2026 The Duel Authors.
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

// AVX2 variants. Compiled with -mavx2 only (no FMA): every lane performs the
// same sequence of IEEE additions and multiplications as the scalar code.

#include <immintrin.h>

#include "duel/kernels.h"

namespace duel::kernels {
namespace {

// Four consecutive j columns per vector; each lane folds over k exactly like
// the scalar loop does for its own j.
void PsiRowFoldAvx2(const double *log_c, const double *log_m, std::size_t d,
                    std::size_t i, double *out) {
  for (std::size_t jb = i + 1; jb < d; jb += 4) {
    const __m256d jv = _mm256_setr_pd(static_cast<double>(jb),
                                      static_cast<double>(jb + 1),
                                      static_cast<double>(jb + 2),
                                      static_cast<double>(jb + 3));
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < i; ++k) {
      acc = _mm256_add_pd(acc, _mm256_set1_pd(log_c[k]));
    }
    for (std::size_t k = i; k < d; ++k) {
      const __m256d kv = _mm256_set1_pd(static_cast<double>(k));
      // Lane takes log_m while k <= j.
      const __m256d inside = _mm256_cmp_pd(kv, jv, _CMP_LE_OQ);
      const __m256d v = _mm256_blendv_pd(_mm256_set1_pd(log_c[k]),
                                         _mm256_set1_pd(log_m[k]), inside);
      acc = _mm256_add_pd(acc, v);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    for (std::size_t l = 0; l < 4 && jb + l < d; ++l) out[jb + l] = lanes[l];
  }
}

double DotAvx2(const double *a, const double *b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + k),
                                             _mm256_loadu_pd(b + k)));
    acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(_mm256_loadu_pd(a + k + 4),
                                             _mm256_loadu_pd(b + k + 4)));
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(_mm256_loadu_pd(a + k),
                                             _mm256_loadu_pd(b + k)));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, _mm256_add_pd(acc0, acc1));
  double sum = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; k < n; ++k) sum += a[k] * b[k];
  return sum;
}

void AxpyAvx2(double alpha, const double *x, double *y, std::size_t n) {
  const __m256d av = _mm256_set1_pd(alpha);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d prod = _mm256_mul_pd(av, _mm256_loadu_pd(x + k));
    _mm256_storeu_pd(y + k, _mm256_add_pd(_mm256_loadu_pd(y + k), prod));
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

}  // namespace

namespace internal {
const KernelTable kAvx2Table = {Isa::kAvx2, &PsiRowFoldAvx2, &DotAvx2,
                                &AxpyAvx2};
}  // namespace internal

}  // namespace duel::kernels
