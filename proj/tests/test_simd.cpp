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

#include <gtest/gtest.h>

#include <vector>

#include "metahunt/rng.hpp"
#include "metahunt/simd/lane_kernels.hpp"

using namespace metahunt;
using namespace metahunt::simd;

namespace {

std::vector<u64> random_lanes(Rng& rng, std::size_t n) {
  std::vector<u64> v(n);
  for (auto& x : v) {
    switch (rng.below(4)) {
      case 0: x = 0; break;
      case 1: x = rng.below(80); break;
      case 2: x = ~u64{0}; break;
      default: x = rng.next(); break;
    }
  }
  return v;
}

std::vector<u64> random_masks(Rng& rng, std::size_t n) {
  std::vector<u64> v(n);
  for (auto& x : v) x = rng.chance(0.5) ? ~u64{0} : 0;
  return v;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    vec_ = avx2_kernels();
    if (vec_ == nullptr) GTEST_SKIP() << "no AVX2 on this host";
  }
  const LaneKernels& ref_ = scalar_kernels();
  const LaneKernels* vec_ = nullptr;
};

}  // namespace

TEST_F(KernelEquivalence, AllElementwiseKernels) {
  Rng rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = rng.below(70);
    auto a = random_lanes(rng, n), b = random_lanes(rng, n), c = random_lanes(rng, n);
    auto m = random_masks(rng, n);
    u64 w = rng.chance(0.2) ? ~u64{0} : (u64{1} << rng.range(1, 63)) - 1;
    unsigned sh = static_cast<unsigned>(rng.below(64));
    std::vector<u64> x(n), y(n);
    auto check = [&](const char* what) { ASSERT_EQ(x, y) << what << " n=" << n; };

    ref_.splat(x.data(), a.empty() ? 5 : a[0], n); vec_->splat(y.data(), a.empty() ? 5 : a[0], n); check("splat");
    ref_.add(x.data(), a.data(), b.data(), w, n); vec_->add(y.data(), a.data(), b.data(), w, n); check("add");
    ref_.sub(x.data(), a.data(), b.data(), w, n); vec_->sub(y.data(), a.data(), b.data(), w, n); check("sub");
    ref_.and_(x.data(), a.data(), b.data(), n); vec_->and_(y.data(), a.data(), b.data(), n); check("and");
    ref_.or_(x.data(), a.data(), b.data(), n); vec_->or_(y.data(), a.data(), b.data(), n); check("or");
    ref_.xor_(x.data(), a.data(), b.data(), n); vec_->xor_(y.data(), a.data(), b.data(), n); check("xor");
    ref_.not_(x.data(), a.data(), w, n); vec_->not_(y.data(), a.data(), w, n); check("not");
    ref_.neg(x.data(), a.data(), w, n); vec_->neg(y.data(), a.data(), w, n); check("neg");
    ref_.lnot(x.data(), a.data(), n); vec_->lnot(y.data(), a.data(), n); check("lnot");
    ref_.shl(x.data(), a.data(), b.data(), w, n); vec_->shl(y.data(), a.data(), b.data(), w, n); check("shl");
    ref_.shr(x.data(), a.data(), b.data(), n); vec_->shr(y.data(), a.data(), b.data(), n); check("shr");
    ref_.eq(x.data(), a.data(), b.data(), n); vec_->eq(y.data(), a.data(), b.data(), n); check("eq");
    ref_.ne(x.data(), a.data(), b.data(), n); vec_->ne(y.data(), a.data(), b.data(), n); check("ne");
    ref_.lt(x.data(), a.data(), b.data(), n); vec_->lt(y.data(), a.data(), b.data(), n); check("lt");
    ref_.select(x.data(), c.data(), a.data(), b.data(), n); vec_->select(y.data(), c.data(), a.data(), b.data(), n); check("select");
    x = c; y = c;
    ref_.blend(x.data(), m.data(), a.data(), w, n); vec_->blend(y.data(), m.data(), a.data(), w, n); check("blend");
    ref_.mask_and(x.data(), m.data(), c.data(), n); vec_->mask_and(y.data(), m.data(), c.data(), n); check("mask_and");
    ref_.mask_andnot(x.data(), m.data(), c.data(), n); vec_->mask_andnot(y.data(), m.data(), c.data(), n); check("mask_andnot");
    ref_.bitselect(x.data(), a.data(), sh, w, n); vec_->bitselect(y.data(), a.data(), sh, w, n); check("bitselect");
    x = c; y = c;
    ref_.concat(x.data(), a.data(), sh, n); vec_->concat(y.data(), a.data(), sh, n); check("concat");
    EXPECT_EQ(ref_.differs(a.data(), b.data(), n), vec_->differs(a.data(), b.data(), n));
    EXPECT_FALSE(vec_->differs(a.data(), a.data(), n));
  }
}

TEST_F(KernelEquivalence, DifferingLaneAnywhere) {
  for (std::size_t n = 1; n < 20; ++n) {
    for (std::size_t pos = 0; pos < n; ++pos) {
      std::vector<u64> a(n, 3), b(n, 3);
      b[pos] = 4;
      EXPECT_TRUE(vec_->differs(a.data(), b.data(), n)) << n << " " << pos;
    }
  }
}

TEST_F(KernelEquivalence, DotProduct) {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = rng.below(300);
    std::vector<double> a(n), b(n);
    double scale = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      b[i] = rng.normal();
      scale += std::abs(a[i] * b[i]);
    }
    EXPECT_NEAR(ref_.dot(a.data(), b.data(), n), vec_->dot(a.data(), b.data(), n), 1e-12 * (1.0 + scale));
  }
}

TEST(KernelDispatch, ActiveIsKnown) {
  std::string name = active_kernels().name;
  EXPECT_TRUE(name == "scalar" || name == "avx2");
}
