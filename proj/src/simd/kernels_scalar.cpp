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

#include "metahunt/simd/lane_kernels.hpp"

namespace metahunt::simd {

namespace {

void splat(u64* d, u64 v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = v;
}
void add(u64* d, const u64* a, const u64* b, u64 w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = (a[i] + b[i]) & w;
}
void sub(u64* d, const u64* a, const u64* b, u64 w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = (a[i] - b[i]) & w;
}
void and_(u64* d, const u64* a, const u64* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] & b[i];
}
void or_(u64* d, const u64* a, const u64* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] | b[i];
}
void xor_(u64* d, const u64* a, const u64* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] ^ b[i];
}
void not_(u64* d, const u64* a, u64 w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = ~a[i] & w;
}
void neg(u64* d, const u64* a, u64 w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = (0 - a[i]) & w;
}
void lnot(u64* d, const u64* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] == 0;
}
void shl(u64* d, const u64* a, const u64* b, u64 w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] >= 64 ? 0 : (a[i] << b[i]) & w;
}
void shr(u64* d, const u64* a, const u64* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = b[i] >= 64 ? 0 : a[i] >> b[i];
}
void eq(u64* d, const u64* a, const u64* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] == b[i];
}
void ne(u64* d, const u64* a, const u64* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] != b[i];
}
void lt(u64* d, const u64* a, const u64* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] < b[i];
}
void select(u64* d, const u64* c, const u64* t, const u64* e, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = c[i] != 0 ? t[i] : e[i];
}
void blend(u64* d, const u64* m, const u64* v, u64 w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = (v[i] & w & m[i]) | (d[i] & ~m[i]);
}
void mask_and(u64* d, const u64* m, const u64* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = c[i] != 0 ? m[i] : 0;
}
void mask_andnot(u64* d, const u64* m, const u64* c, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = c[i] == 0 ? m[i] : 0;
}
void bitselect(u64* d, const u64* a, unsigned lsb, u64 w, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = (a[i] >> lsb) & w;
}
void concat(u64* d, const u64* lo, unsigned shift, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) d[i] = (shift >= 64 ? 0 : d[i] << shift) | lo[i];
}
bool differs(const u64* a, const u64* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] != b[i]) return true;
  }
  return false;
}
double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

const LaneKernels kScalar{"scalar", splat, add,    sub,  and_,   or_,      xor_,        not_,      neg,
                          lnot,     shl,   shr,    eq,   ne,     lt,       select,      blend,     mask_and,
                          mask_andnot,     bitselect, concat, differs, dot};

}  // namespace

const LaneKernels& scalar_kernels() { return kScalar; }

}  // namespace metahunt::simd
