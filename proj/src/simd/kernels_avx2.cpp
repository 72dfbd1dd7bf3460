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

#if defined(__AVX2__)
#include <immintrin.h>

namespace metahunt::simd {

namespace {

using V = __m256i;

inline V load(const u64* p) { return _mm256_loadu_si256(reinterpret_cast<const V*>(p)); }
inline void store(u64* p, V v) { _mm256_storeu_si256(reinterpret_cast<V*>(p), v); }
inline V set1(u64 v) { return _mm256_set1_epi64x(static_cast<long long>(v)); }
inline V one() { return _mm256_set1_epi64x(1); }
inline V is_zero(V a) { return _mm256_cmpeq_epi64(a, _mm256_setzero_si256()); }

template <typename Op, typename Tail>
inline void binary(u64* d, const u64* a, const u64* b, std::size_t n, Op op, Tail tail) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(d + i, op(load(a + i), load(b + i)));
  for (; i < n; ++i) d[i] = tail(a[i], b[i]);
}

template <typename Op, typename Tail>
inline void unary(u64* d, const u64* a, std::size_t n, Op op, Tail tail) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(d + i, op(load(a + i)));
  for (; i < n; ++i) d[i] = tail(a[i]);
}

void splat(u64* d, u64 v, std::size_t n) {
  V s = set1(v);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(d + i, s);
  for (; i < n; ++i) d[i] = v;
}

void add(u64* d, const u64* a, const u64* b, u64 w, std::size_t n) {
  V m = set1(w);
  binary(d, a, b, n, [&](V x, V y) { return _mm256_and_si256(_mm256_add_epi64(x, y), m); },
         [&](u64 x, u64 y) { return (x + y) & w; });
}
void sub(u64* d, const u64* a, const u64* b, u64 w, std::size_t n) {
  V m = set1(w);
  binary(d, a, b, n, [&](V x, V y) { return _mm256_and_si256(_mm256_sub_epi64(x, y), m); },
         [&](u64 x, u64 y) { return (x - y) & w; });
}
void and_(u64* d, const u64* a, const u64* b, std::size_t n) {
  binary(d, a, b, n, [](V x, V y) { return _mm256_and_si256(x, y); }, [](u64 x, u64 y) { return x & y; });
}
void or_(u64* d, const u64* a, const u64* b, std::size_t n) {
  binary(d, a, b, n, [](V x, V y) { return _mm256_or_si256(x, y); }, [](u64 x, u64 y) { return x | y; });
}
void xor_(u64* d, const u64* a, const u64* b, std::size_t n) {
  binary(d, a, b, n, [](V x, V y) { return _mm256_xor_si256(x, y); }, [](u64 x, u64 y) { return x ^ y; });
}
void not_(u64* d, const u64* a, u64 w, std::size_t n) {
  V m = set1(w);
  unary(d, a, n, [&](V x) { return _mm256_andnot_si256(x, m); }, [&](u64 x) { return ~x & w; });
}
void neg(u64* d, const u64* a, u64 w, std::size_t n) {
  V m = set1(w);
  unary(d, a, n, [&](V x) { return _mm256_and_si256(_mm256_sub_epi64(_mm256_setzero_si256(), x), m); },
        [&](u64 x) { return (0 - x) & w; });
}
void lnot(u64* d, const u64* a, std::size_t n) {
  unary(d, a, n, [](V x) { return _mm256_and_si256(is_zero(x), one()); }, [](u64 x) -> u64 { return x == 0; });
}
void shl(u64* d, const u64* a, const u64* b, u64 w, std::size_t n) {
  V m = set1(w);
  binary(d, a, b, n, [&](V x, V y) { return _mm256_and_si256(_mm256_sllv_epi64(x, y), m); },
         [&](u64 x, u64 y) { return y >= 64 ? 0 : (x << y) & w; });
}
void shr(u64* d, const u64* a, const u64* b, std::size_t n) {
  binary(d, a, b, n, [](V x, V y) { return _mm256_srlv_epi64(x, y); },
         [](u64 x, u64 y) { return y >= 64 ? 0 : x >> y; });
}
void eq(u64* d, const u64* a, const u64* b, std::size_t n) {
  binary(d, a, b, n, [](V x, V y) { return _mm256_and_si256(_mm256_cmpeq_epi64(x, y), one()); },
         [](u64 x, u64 y) -> u64 { return x == y; });
}
void ne(u64* d, const u64* a, const u64* b, std::size_t n) {
  binary(d, a, b, n, [](V x, V y) { return _mm256_andnot_si256(_mm256_cmpeq_epi64(x, y), one()); },
         [](u64 x, u64 y) -> u64 { return x != y; });
}
void lt(u64* d, const u64* a, const u64* b, std::size_t n) {
  V bias = set1(0x8000000000000000ULL);
  binary(d, a, b, n,
         [&](V x, V y) {
           return _mm256_and_si256(_mm256_cmpgt_epi64(_mm256_xor_si256(y, bias), _mm256_xor_si256(x, bias)), one());
         },
         [](u64 x, u64 y) -> u64 { return x < y; });
}
void select(u64* d, const u64* c, const u64* t, const u64* e, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    V z = is_zero(load(c + i));
    store(d + i, _mm256_blendv_epi8(load(t + i), load(e + i), z));
  }
  for (; i < n; ++i) d[i] = c[i] != 0 ? t[i] : e[i];
}
void blend(u64* d, const u64* m, const u64* v, u64 w, std::size_t n) {
  V wm = set1(w);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    V mm = load(m + i);
    V nv = _mm256_and_si256(_mm256_and_si256(load(v + i), wm), mm);
    store(d + i, _mm256_or_si256(nv, _mm256_andnot_si256(mm, load(d + i))));
  }
  for (; i < n; ++i) d[i] = (v[i] & w & m[i]) | (d[i] & ~m[i]);
}
void mask_and(u64* d, const u64* m, const u64* c, std::size_t n) {
  binary(d, m, c, n, [](V x, V y) { return _mm256_andnot_si256(is_zero(y), x); },
         [](u64 x, u64 y) { return y != 0 ? x : 0; });
}
void mask_andnot(u64* d, const u64* m, const u64* c, std::size_t n) {
  binary(d, m, c, n, [](V x, V y) { return _mm256_and_si256(is_zero(y), x); },
         [](u64 x, u64 y) { return y == 0 ? x : 0; });
}
void bitselect(u64* d, const u64* a, unsigned lsb, u64 w, std::size_t n) {
  V m = set1(w);
  __m128i cnt = _mm_cvtsi32_si128(static_cast<int>(lsb));
  unary(d, a, n, [&](V x) { return _mm256_and_si256(_mm256_srl_epi64(x, cnt), m); },
        [&](u64 x) { return lsb >= 64 ? 0 : (x >> lsb) & w; });
}
void concat(u64* d, const u64* lo, unsigned shift, std::size_t n) {
  __m128i cnt = _mm_cvtsi32_si128(static_cast<int>(shift));
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) store(d + i, _mm256_or_si256(_mm256_sll_epi64(load(d + i), cnt), load(lo + i)));
  for (; i < n; ++i) d[i] = (shift >= 64 ? 0 : d[i] << shift) | lo[i];
}
bool differs(const u64* a, const u64* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    V e = _mm256_cmpeq_epi64(load(a + i), load(b + i));
    if (_mm256_movemask_epi8(e) != -1) return true;
  }
  for (; i < n; ++i) {
    if (a[i] != b[i]) return true;
  }
  return false;
}
double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

const LaneKernels kAvx2{"avx2", splat, add,    sub,  and_,   or_,      xor_,        not_,      neg,
                        lnot,   shl,   shr,    eq,   ne,     lt,       select,      blend,     mask_and,
                        mask_andnot,   bitselect, concat, differs, dot};

}  // namespace

const LaneKernels* avx2_kernels_unchecked() { return &kAvx2; }

}  // namespace metahunt::simd

#else

namespace metahunt::simd {
const LaneKernels* avx2_kernels_unchecked() { return nullptr; }
}  // namespace metahunt::simd

#endif
