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

// Arithmetic inner loops with a scalar reference and SIMD variants chosen at
// runtime. The scalar table is the definition; every other table must match
// it bit for bit on the fold kernels (psi_row_fold, axpy) and to rounding on
// reductions (dot).
//
// Set DUEL_KERNELS=scalar in the environment to force the reference path.

#ifndef DUEL_KERNELS_H_
#define DUEL_KERNELS_H_

#include <cstddef>
#include <span>

namespace duel::kernels {

enum class Isa { kScalar, kAvx2 };

struct KernelTable {
  Isa isa;

  // For every j in (i, d): out[j] = left fold, in k order starting at 0.0, of
  // log_m[k] when i <= k <= j and log_c[k] otherwise. out[0..i] untouched.
  void (*psi_row_fold)(const double *log_c, const double *log_m, std::size_t d,
                       std::size_t i, double *out);

  double (*dot)(const double *a, const double *b, std::size_t n);

  // y += alpha * x
  void (*axpy)(double alpha, const double *x, double *y, std::size_t n);
};

const KernelTable &ScalarKernels();
// nullptr when the build or the CPU lacks AVX2.
const KernelTable *Avx2Kernels();
// Selected once per process.
const KernelTable &ActiveKernels();
const char *IsaName(Isa isa);

inline void PsiRowFold(std::span<const double> log_c,
                       std::span<const double> log_m, std::size_t i,
                       std::span<double> out) {
  ActiveKernels().psi_row_fold(log_c.data(), log_m.data(), log_c.size(), i,
                               out.data());
}

inline double Dot(std::span<const double> a, std::span<const double> b) {
  return ActiveKernels().dot(a.data(), b.data(), a.size());
}

inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  ActiveKernels().axpy(alpha, x.data(), y.data(), x.size());
}

namespace internal {
extern const KernelTable kScalarTable;
#if defined(DUEL_HAVE_AVX2)
extern const KernelTable kAvx2Table;
#endif
}  // namespace internal

}  // namespace duel::kernels

#endif  // DUEL_KERNELS_H_
