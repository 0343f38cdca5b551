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

#include <cstdlib>
#include <cstring>

#include "duel/kernels.h"

namespace duel::kernels {

const KernelTable &ScalarKernels() { return internal::kScalarTable; }

const KernelTable *Avx2Kernels() {
#if defined(DUEL_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &internal::kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable &ActiveKernels() {
  static const KernelTable *active = [] {
    const char *forced = std::getenv("DUEL_KERNELS");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) {
      return &ScalarKernels();
    }
    if (const KernelTable *avx2 = Avx2Kernels()) return avx2;
    return &ScalarKernels();
  }();
  return *active;
}

const char *IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar: return "scalar";
    case Isa::kAvx2: return "avx2";
  }
  return "?";
}

}  // namespace duel::kernels
