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

#pragma once

#include <cstddef>
#include <cstdint>

namespace metahunt::simd {

using u64 = std::uint64_t;

// Element-wise kernels over lane arrays. Every array holds `n` lanes.
// `wmask` truncates results to a signal width; lane masks are all-ones or
// all-zeros per lane. Shift counts of 64 or more yield 0.
struct LaneKernels {
  const char* name;
  void (*splat)(u64* d, u64 v, std::size_t n);
  void (*add)(u64* d, const u64* a, const u64* b, u64 wmask, std::size_t n);
  void (*sub)(u64* d, const u64* a, const u64* b, u64 wmask, std::size_t n);
  void (*and_)(u64* d, const u64* a, const u64* b, std::size_t n);
  void (*or_)(u64* d, const u64* a, const u64* b, std::size_t n);
  void (*xor_)(u64* d, const u64* a, const u64* b, std::size_t n);
  void (*not_)(u64* d, const u64* a, u64 wmask, std::size_t n);
  void (*neg)(u64* d, const u64* a, u64 wmask, std::size_t n);
  void (*lnot)(u64* d, const u64* a, std::size_t n);
  void (*shl)(u64* d, const u64* a, const u64* b, u64 wmask, std::size_t n);
  void (*shr)(u64* d, const u64* a, const u64* b, std::size_t n);
  void (*eq)(u64* d, const u64* a, const u64* b, std::size_t n);
  void (*ne)(u64* d, const u64* a, const u64* b, std::size_t n);
  void (*lt)(u64* d, const u64* a, const u64* b, std::size_t n);
  // d = c != 0 ? t : e
  void (*select)(u64* d, const u64* c, const u64* t, const u64* e, std::size_t n);
  // d = (v & wmask & m) | (d & ~m)
  void (*blend)(u64* d, const u64* m, const u64* v, u64 wmask, std::size_t n);
  // d = m & (c != 0 ? ~0 : 0)
  void (*mask_and)(u64* d, const u64* m, const u64* c, std::size_t n);
  // d = m & (c == 0 ? ~0 : 0)
  void (*mask_andnot)(u64* d, const u64* m, const u64* c, std::size_t n);
  // d = (a >> lsb) & wmask
  void (*bitselect)(u64* d, const u64* a, unsigned lsb, u64 wmask, std::size_t n);
  // d = (d << shift) | lo
  void (*concat)(u64* d, const u64* lo, unsigned shift, std::size_t n);
  // any lane with a[i] != b[i]
  bool (*differs)(const u64* a, const u64* b, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const LaneKernels& scalar_kernels();

// nullptr when the build or the CPU lacks AVX2.
const LaneKernels* avx2_kernels();

// AVX2 when supported, unless METAHUNT_SIMD=scalar is set.
const LaneKernels& active_kernels();

}  // namespace metahunt::simd
