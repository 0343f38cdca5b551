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

#include "duel/kernels.h"

namespace duel::kernels {
namespace {

void PsiRowFoldScalar(const double *log_c, const double *log_m, std::size_t d,
                      std::size_t i, double *out) {
  for (std::size_t j = i + 1; j < d; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      acc += (k >= i && k <= j) ? log_m[k] : log_c[k];
    }
    out[j] = acc;
  }
}

double DotScalar(const double *a, const double *b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void AxpyScalar(double alpha, const double *x, double *y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += alpha * x[k];
}

}  // namespace

namespace internal {
const KernelTable kScalarTable = {Isa::kScalar, &PsiRowFoldScalar, &DotScalar,
                                  &AxpyScalar};
}  // namespace internal

}  // namespace duel::kernels
