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

#include <Eigen/Dense>
#include <cmath>

#include "metahunt/bandit/linucb.hpp"
#include "metahunt/rng.hpp"

using namespace metahunt;
using namespace metahunt::bandit;

namespace {

Eigen::Matrix<double, 6, 6> to_eigen(const Mat& m) {
  Eigen::Matrix<double, 6, 6> e;
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) e(i, j) = m[i * 6 + j];
  return e;
}

Eigen::Matrix<double, 6, 1> to_eigen(const Vec& v) {
  Eigen::Matrix<double, 6, 1> e;
  for (int i = 0; i < 6; ++i) e(i) = v[i];
  return e;
}

Vec random_context(Rng& rng) {
  return context(static_cast<int>(rng.below(4)), rng.uniform(), rng.uniform());
}

}  // namespace

TEST(LinUCB, FreshThetaIsZero) {
  Vec t = theta(ArmState::fresh());
  for (double v : t) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(estimate(ArmState::fresh(), context(2, 0.3, 0.1)), 0.0);
}

TEST(LinUCB, SingleUpdateShermanMorrison) {
  Vec e1 = context(0, 0, 0);
  ArmState a = update(ArmState::fresh(), e1, 1.0);
  Vec t = theta(a);
  EXPECT_NEAR(t[0], 0.5, 1e-12);
  for (int i = 1; i < 6; ++i) EXPECT_NEAR(t[i], 0.0, 1e-12);
  EXPECT_NEAR(estimate(a, e1), 0.5, 1e-12);
  EXPECT_EQ(a.A[0], 2.0);
  EXPECT_EQ(a.b[0], 1.0);
  EXPECT_EQ(a.pulls, 1u);
}

TEST(LinUCB, EstimateIsLinear) {
  Rng rng(3);
  ArmState a = ArmState::fresh();
  for (int i = 0; i < 20; ++i) a = update(a, random_context(rng), rng.uniform());
  Vec x = random_context(rng), x2;
  for (int i = 0; i < 6; ++i) x2[i] = 2 * x[i];
  EXPECT_NEAR(estimate(a, x2), 2 * estimate(a, x), 1e-12);
}

TEST(LinUCB, AdjustValues) {
  EXPECT_EQ(adjust(1.0, 0.0, 0.5), 1.0);
  EXPECT_NEAR(adjust(1.0, 0.2, 0.5), std::exp(-0.1), 1e-9);
  EXPECT_NEAR(adjust(1.0, 0.2, 0.5), 0.904837418, 1e-9);
  EXPECT_EQ(adjust(0.0, 0.7, 0.5), 0.0);
  EXPECT_GT(adjust(1.0, 0.1, 0.5), adjust(1.0, 0.2, 0.5));
}

TEST(LinUCB, FreshArmUcbWorkedExample) {
  Vec x{1, 0, 0, 0, 0.7, 0.2};
  PolicyConfig cfg;
  EXPECT_NEAR(ucb(ArmState::fresh(), x, cfg, 0.2), std::sqrt(1.53), 1e-9);
}

TEST(LinUCB, ConfidenceShrinksWithPulls) {
  Vec x{0, 1, 0, 0, 0.4, 0.1};
  ArmState a = ArmState::fresh();
  double prev = confidence(a, x);
  for (int i = 0; i < 30; ++i) {
    a = update(a, x, 0.3);
    double c = confidence(a, x);
    EXPECT_LT(c, prev);
    prev = c;
  }
}

TEST(LinUCB, MatchesDenseOracle) {
  Rng rng(42);
  PolicyConfig cfg;
  for (int seq = 0; seq < 1000; ++seq) {
    ArmState a = ArmState::fresh();
    Eigen::Matrix<double, 6, 6> A = Eigen::Matrix<double, 6, 6>::Identity();
    Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();
    int n = rng.range(0, 40);
    for (int i = 0; i < n; ++i) {
      Vec x = random_context(rng);
      double r = rng.uniform() * 2 - 0.5;
      a = update(a, x, r);
      A += to_eigen(x) * to_eigen(x).transpose();
      b += r * to_eigen(x);
    }
    for (int i = 0; i < 36; ++i) ASSERT_NEAR(a.A[i], A(i / 6, i % 6), 1e-12);
    Eigen::Matrix<double, 6, 1> th = A.llt().solve(b);
    Vec t = theta(a);
    for (int i = 0; i < 6; ++i) ASSERT_NEAR(t[i], th(i), 1e-9);
    EXPECT_LT((to_eigen(a.A) * to_eigen(t) - to_eigen(a.b)).cwiseAbs().maxCoeff(), 1e-9);
    Vec x = random_context(rng);
    double f = rng.uniform();
    Eigen::Matrix<double, 6, 1> ex = to_eigen(x);
    double want_est = ex.dot(th);
    double want_ucb = want_est * std::exp(-cfg.beta * f) + cfg.alpha * std::sqrt(ex.dot(A.inverse() * ex));
    ASSERT_NEAR(estimate(a, x), want_est, 1e-9);
    ASSERT_NEAR(ucb(a, x, cfg, f), want_ucb, 1e-9);
  }
}

TEST(LinUCB, SymmetricPositiveDefinite) {
  Rng rng(8);
  ArmState a = ArmState::fresh();
  for (int i = 0; i < 200; ++i) {
    a = update(a, random_context(rng), rng.uniform());
    auto e = to_eigen(a.A);
    ASSERT_TRUE(e.isApprox(e.transpose(), 0.0));
    using Solver = Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 6, 6>>;
    ASSERT_GT(Solver(e).eigenvalues().minCoeff(), 0.0);
  }
}

TEST(LinUCB, SingularDetected) {
  ArmState a = ArmState::fresh();
  a.A[0] = 0.0;
  EXPECT_THROW(theta(a), SingularMatrix);
}

TEST(Select, FreshTieGoesToLowestIndex) {
  ArmState fresh = ArmState::fresh();
  std::vector<ArmView> arms;
  for (int i = 0; i < 4; ++i) arms.push_back(ArmView{i, &fresh, context(0, 0.5, 0.1), 0.1});
  Rng rng(1);
  EXPECT_EQ(select(arms, PolicyConfig{}, rng), 0u);
}

TEST(Select, DominantArmChosen) {
  std::vector<ArmState> states(4, ArmState::fresh());
  for (int k = 0; k < 50; ++k) {
    for (int i = 0; i < 4; ++i) states[i] = update(states[i], context(i, 0, 0), i == 2 ? 5.0 : 0.0);
  }
  std::vector<ArmView> arms;
  for (int i = 0; i < 4; ++i) arms.push_back(ArmView{i, &states[i], context(i, 0, 0), 0.0});
  Rng rng(1);
  EXPECT_EQ(select(arms, PolicyConfig{}, rng), 2u);
}

TEST(Select, ScaleInvariantArgmax) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ArmState> states(4, ArmState::fresh());
    for (int k = 0; k < 10; ++k) {
      int i = static_cast<int>(rng.below(4));
      states[i] = update(states[i], context(i, 0, 0), rng.uniform());
    }
    std::vector<ArmView> arms;
    for (int i = 0; i < 4; ++i) arms.push_back(ArmView{i, &states[i], context(i, 0, 0), 0.0});
    PolicyConfig c1;
    std::vector<double> s1;
    Rng r1(0);
    std::size_t a = select(arms, c1, r1, &s1);
    // Scale b and alpha together: every score scales by the same factor.
    std::vector<ArmState> scaled = states;
    for (auto& s : scaled)
      for (auto& v : s.b) v *= 3.0;
    std::vector<ArmView> arms2 = arms;
    for (int i = 0; i < 4; ++i) arms2[i].state = &scaled[i];
    PolicyConfig c2;
    c2.alpha = 3.0;
    std::vector<double> s2;
    Rng r2(0);
    EXPECT_EQ(select(arms2, c2, r2, &s2), a);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(s2[i], 3.0 * s1[i], 1e-9);
  }
}

TEST(Select, RandomPolicyReproducible) {
  ArmState fresh = ArmState::fresh();
  std::vector<ArmView> arms;
  for (int i = 0; i < 4; ++i) arms.push_back(ArmView{i, &fresh, context(i, 0, 0), 0.0});
  PolicyConfig cfg;
  cfg.policy = PolicyKind::Random;
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(select(arms, cfg, a), select(arms, cfg, b));
}

TEST(Select, PolicyNames) {
  for (auto k : {PolicyKind::LinUCB, PolicyKind::Random, PolicyKind::EpsilonGreedy, PolicyKind::Thompson}) {
    EXPECT_EQ(parse_policy(to_string(k)), k);
  }
  EXPECT_EQ(parse_policy("epsilon"), PolicyKind::EpsilonGreedy);
  EXPECT_FALSE(parse_policy("ucb1"));
}

TEST(Select, StateJsonRoundTripIsExact) {
  Rng rng(4);
  ArmState a = ArmState::fresh();
  for (int i = 0; i < 17; ++i) a = update(a, random_context(rng), rng.normal());
  nlohmann::json j = a;
  EXPECT_EQ(nlohmann::json::parse(j.dump()).get<ArmState>(), a);
}

// Synthetic linear environment: reward = theta*.x_a + N(0, 0.1).
TEST(Environment, LinUCBBeatsRandom) {
  int wins = 0;
  for (int trial = 0; trial < 10; ++trial) {
    Rng env(1000 + trial);
    Vec theta_star{};
    for (auto& v : theta_star) v = env.uniform();
    std::vector<Vec> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(context(i, env.uniform(), 0.0));
    auto run = [&](PolicyKind kind) {
      PolicyConfig cfg;
      cfg.policy = kind;
      std::vector<ArmState> states(4, ArmState::fresh());
      Rng rng(77 + trial), noise(99 + trial);
      double total = 0;
      for (int t = 0; t < 2000; ++t) {
        std::vector<ArmView> arms;
        for (int i = 0; i < 4; ++i) arms.push_back(ArmView{i, &states[i], xs[i], 0.0});
        std::size_t a = select(arms, cfg, rng);
        double mean = 0;
        for (int k = 0; k < 6; ++k) mean += theta_star[k] * xs[a][k];
        double r = mean + 0.1 * noise.normal();
        states[a] = update(states[a], xs[a], r);
        total += r;
      }
      return total;
    };
    if (run(PolicyKind::LinUCB) > run(PolicyKind::Random)) ++wins;
  }
  EXPECT_GE(wins, 9);
}
