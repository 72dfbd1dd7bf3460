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

#include "metahunt/bandit/linucb.hpp"

#include <cmath>

namespace metahunt::bandit {

namespace {

constexpr int N = kDim;

// Lower-triangular Cholesky factor of a, row-major.
Mat cholesky(const Mat& a) {
  Mat l{};
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i * N + j];
      for (int k = 0; k < j; ++k) s -= l[i * N + k] * l[j * N + k];
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) throw SingularMatrix("covariance matrix is not positive definite");
        l[i * N + i] = std::sqrt(s);
      } else {
        l[i * N + j] = s / l[j * N + j];
      }
    }
  }
  return l;
}

Vec solve(const Mat& a, const Vec& rhs) {
  Mat l = cholesky(a);
  Vec y{};
  for (int i = 0; i < N; ++i) {
    double s = rhs[i];
    for (int k = 0; k < i; ++k) s -= l[i * N + k] * y[k];
    y[i] = s / l[i * N + i];
  }
  Vec x{};
  for (int i = N - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < N; ++k) s -= l[k * N + i] * x[k];
    x[i] = s / l[i * N + i];
  }
  return x;
}

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (int i = 0; i < N; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

Vec context(int strategy, double h, double f) {
  Vec x{};
  x.at(static_cast<std::size_t>(strategy)) = 1.0;
  x[4] = h;
  x[5] = f;
  return x;
}

ArmState ArmState::fresh() {
  ArmState a;
  for (int i = 0; i < N; ++i) a.A[i * N + i] = 1.0;
  return a;
}

void to_json(nlohmann::json& j, const ArmState& a) {
  j = nlohmann::json{{"A", a.A}, {"b", a.b}, {"pulls", a.pulls}, {"reward_sum", a.reward_sum}};
}

void from_json(const nlohmann::json& j, ArmState& a) {
  a.A = j.at("A").get<Mat>();
  a.b = j.at("b").get<Vec>();
  a.pulls = j.at("pulls").get<std::uint64_t>();
  a.reward_sum = j.at("reward_sum").get<double>();
}

Vec theta(const ArmState& a) { return solve(a.A, a.b); }

double estimate(const ArmState& a, const Vec& x) { return dot(x, theta(a)); }

double adjust(double r_hat, double f, double beta) { return r_hat * std::exp(-beta * f); }

double confidence(const ArmState& a, const Vec& x) { return std::sqrt(std::max(0.0, dot(x, solve(a.A, x)))); }

const char* to_string(PolicyKind k) {
  switch (k) {
    case PolicyKind::LinUCB: return "linucb";
    case PolicyKind::Random: return "random";
    case PolicyKind::EpsilonGreedy: return "epsilon_greedy";
    case PolicyKind::Thompson: return "thompson";
  }
  return "?";
}

std::optional<PolicyKind> parse_policy(const std::string& name) {
  if (name == "linucb") return PolicyKind::LinUCB;
  if (name == "random") return PolicyKind::Random;
  if (name == "epsilon_greedy" || name == "epsilon") return PolicyKind::EpsilonGreedy;
  if (name == "thompson") return PolicyKind::Thompson;
  return std::nullopt;
}

double ucb(const ArmState& a, const Vec& x, const PolicyConfig& cfg, double f) {
  return adjust(estimate(a, x), f, cfg.beta) + cfg.alpha * confidence(a, x);
}

ArmState update(ArmState a, const Vec& x, double r) {
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) a.A[i * N + j] += x[i] * x[j];
    a.b[i] += r * x[i];
  }
  a.pulls += 1;
  a.reward_sum += r;
  return a;
}

namespace {

std::size_t argmax(const std::vector<double>& s) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < s.size(); ++i) {
    if (s[i] > s[best]) best = i;
  }
  return best;
}

}  // namespace

std::size_t select(const std::vector<ArmView>& arms, const PolicyConfig& cfg, Rng& rng, std::vector<double>* scores) {
  if (arms.empty()) throw Error("select over an empty arm set");
  std::vector<double> s(arms.size(), 0.0);
  std::size_t chosen = 0;
  switch (cfg.policy) {
    case PolicyKind::LinUCB:
      for (std::size_t i = 0; i < arms.size(); ++i) s[i] = ucb(*arms[i].state, arms[i].x, cfg, arms[i].f);
      chosen = argmax(s);
      break;
    case PolicyKind::Random:
      s.clear();
      chosen = rng.below(arms.size());
      break;
    case PolicyKind::EpsilonGreedy: {
      for (std::size_t i = 0; i < arms.size(); ++i) {
        const ArmState& a = *arms[i].state;
        s[i] = a.pulls == 0 ? 0.0 : a.reward_sum / static_cast<double>(a.pulls);
      }
      bool explore = rng.chance(cfg.epsilon);
      std::size_t pick = rng.below(arms.size());
      chosen = explore ? pick : argmax(s);
      break;
    }
    case PolicyKind::Thompson:
      for (std::size_t i = 0; i < arms.size(); ++i) {
        const ArmState& a = *arms[i].state;
        double n = static_cast<double>(a.pulls) + 1.0;
        s[i] = a.reward_sum / n + rng.normal() / std::sqrt(n);
      }
      chosen = argmax(s);
      break;
  }
  if (scores != nullptr) *scores = std::move(s);
  return chosen;
}

}  // namespace metahunt::bandit
