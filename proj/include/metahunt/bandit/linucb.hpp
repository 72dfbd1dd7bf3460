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

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metahunt/error.hpp"
#include "metahunt/rng.hpp"

namespace metahunt::bandit {

inline constexpr int kDim = 6;
using Vec = std::array<double, kDim>;
using Mat = std::array<double, kDim * kDim>;  // row-major

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

// one-hot(strategy) ++ [h, f]
Vec context(int strategy, double h, double f);

struct ArmState {
  Mat A{};
  Vec b{};
  std::uint64_t pulls = 0;
  // Scalar reward total; used by the epsilon-greedy and Thompson baselines.
  double reward_sum = 0.0;

  static ArmState fresh();
  bool operator==(const ArmState&) const = default;
};

void to_json(nlohmann::json& j, const ArmState& a);
void from_json(const nlohmann::json& j, ArmState& a);

// Solves A theta = b by Cholesky factorization.
Vec theta(const ArmState& a);
double estimate(const ArmState& a, const Vec& x);
double adjust(double r_hat, double f, double beta);
// sqrt(x' A^-1 x)
double confidence(const ArmState& a, const Vec& x);

enum class PolicyKind { LinUCB, Random, EpsilonGreedy, Thompson };
const char* to_string(PolicyKind k);
// Accepts linucb, random, epsilon_greedy (or epsilon), thompson.
std::optional<PolicyKind> parse_policy(const std::string& name);

struct PolicyConfig {
  double alpha = 1.0;
  double beta = 0.5;
  std::uint64_t total_rounds = 2000;
  PolicyKind policy = PolicyKind::LinUCB;
  double epsilon = 0.1;
};

double ucb(const ArmState& a, const Vec& x, const PolicyConfig& cfg, double f);

ArmState update(ArmState a, const Vec& x, double r);

struct ArmView {
  int id = 0;
  const ArmState* state = nullptr;
  Vec x{};
  double f = 0.0;
};

// Index into `arms` of the chosen arm. LinUCB and epsilon-greedy break ties
// toward the lowest position. `scores`, when given, receives the per-arm
// score the policy ranked by (empty for the random policy).
std::size_t select(const std::vector<ArmView>& arms, const PolicyConfig& cfg, Rng& rng,
                   std::vector<double>* scores = nullptr);

}  // namespace metahunt::bandit
