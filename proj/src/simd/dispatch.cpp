// Copyright 2026 The Metahunt Authors
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

#include "metahunt/simd/lane_kernels.hpp"

namespace metahunt::simd {

const LaneKernels* avx2_kernels_unchecked();

const LaneKernels* avx2_kernels() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok ? avx2_kernels_unchecked() : nullptr;
#else
  return nullptr;
#endif
}

const LaneKernels& active_kernels() {
  static const LaneKernels* chosen = [] {
    const char* env = std::getenv("METAHUNT_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) return &scalar_kernels();
    const LaneKernels* k = avx2_kernels();
    return k != nullptr ? k : &scalar_kernels();
  }();
  return *chosen;
}

}  // namespace metahunt::simd
