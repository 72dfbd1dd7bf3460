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
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metahunt/bandit/linucb.hpp"
#include "metahunt/difftest/difftest.hpp"
#include "metahunt/error.hpp"
#include "metahunt/hdl/ast.hpp"
#include "metahunt/hdl/generator.hpp"
#include "metahunt/metamorph/metamorph.hpp"
#include "metahunt/sim/sim.hpp"
#include "metahunt/triage/triage.hpp"

namespace metahunt::campaign {

// A fault in the framework itself (equivalence self-check, flaky mock).
class FrameworkError : public Error {
 public:
  using Error::Error;
};

struct CampaignConfig {
  std::uint64_t rounds = 2000;
  int chain_depth = 3;
  std::size_t seed_budget = 8;
  // Seeds come from `corpus_dir` (*.v) when set, else from the generator.
  std::string corpus_dir;
  hdl::SizeProfile corpus_profile = hdl::SizeProfile::Small;
  std::size_t corpus_size = 16;
  bandit::PolicyConfig policy;
  // External adapters (JSON file); the in-process mock runs when `use_mock`.
  std::string adapters_file;
  bool use_mock = true;
  difftest::MockBugProfile mock;
  int jobs = 1;
  std::uint64_t rng_seed = 1;
  // Empty: keep everything in memory (no files, no reduction).
  std::string output_dir;
  std::uint64_t checkpoint_every = 50;
  bool reduce = true;
  int max_input_bits = 10;
  std::size_t samples = 1024;
  std::size_t cycles = 8;

  // Throws ConfigError.
  void validate() const;
};

void to_json(nlohmann::json& j, const CampaignConfig& c);
void from_json(const nlohmann::json& j, CampaignConfig& c);
CampaignConfig load_config(const std::filesystem::path& file);

struct RoundLog {
  std::uint64_t round = 0;
  std::size_t seed = 0;
  std::vector<int> arms;
  std::string outcome;  // clean | new | duplicate
  std::string signature;
  double reward = 0.0;
  std::size_t unique_after = 0;
};
void to_json(nlohmann::json& j, const RoundLog& r);
void from_json(const nlohmann::json& j, RoundLog& r);

struct CampaignState {
  std::uint64_t round = 0;
  std::array<bandit::ArmState, metamorph::kStrategyCount> arms;
  std::array<std::uint64_t, metamorph::kStrategyCount> bugs_attributed{};
  std::array<std::uint64_t, metamorph::kStrategyCount> duplicates_attributed{};
  triage::ClusterRegistry clusters;
  triage::BugRegistry bugs;
  std::uint64_t crash_observations = 0;
  std::size_t seed_cursor = 0;
  std::size_t seed_uses = 0;
  std::vector<RoundLog> log;
  std::vector<std::string> warnings;

  CampaignState();
  nlohmann::json to_json() const;
  static CampaignState from_json(const nlohmann::json& j);
};

class Campaign {
 public:
  explicit Campaign(CampaignConfig cfg);
  ~Campaign();
  Campaign(Campaign&&) noexcept;

  // Restores a checkpoint written by an identical configuration.
  static Campaign resume(CampaignConfig cfg, const std::filesystem::path& state_file);

  // Runs rounds until cfg.rounds (or `stop_after` total rounds) are done,
  // or `done` returns true after a round. Throws FrameworkError.
  void run(std::optional<std::uint64_t> stop_after = std::nullopt,
           const std::function<bool(const CampaignState&)>& done = {});

  const CampaignConfig& config() const { return cfg_; }
  const CampaignState& state() const { return state_; }
  const std::vector<hdl::Design>& corpus() const;

  // Deterministic report.
  nlohmann::json report() const;
  std::string summary() const;
  // Round (1-based) at which the n-th unique bug appeared.
  std::optional<std::uint64_t> rounds_to_unique(std::size_t n) const;

  // Atomic write (temp file + rename).
  void checkpoint(const std::filesystem::path& file) const;
  // report.json, bugs.jsonl, decisions.jsonl, curve.csv, summary.txt.
  void write_outputs() const;

 private:
  struct Impl;

  void run_round();

  CampaignConfig cfg_;
  CampaignState state_;
  std::unique_ptr<Impl> impl_;
};

// Policy ablation: one campaign per (policy, rng seed), all else equal.
struct BenchRun {
  bandit::PolicyKind policy = bandit::PolicyKind::LinUCB;
  std::uint64_t rng_seed = 0;
  std::size_t unique = 0;
  // Rounds until `target` unique bugs; nullopt when never reached.
  std::optional<std::uint64_t> rounds_to_all;
};

std::vector<BenchRun> bench_policies(const CampaignConfig& base, const std::vector<bandit::PolicyKind>& policies,
                                     const std::vector<std::uint64_t>& rng_seeds, std::size_t target = 3);
// Censored time: rounds_to_all, or T + 1 when the target was never reached.
std::uint64_t censored_time(const BenchRun& r, std::uint64_t rounds);
nlohmann::json bench_report(const std::vector<BenchRun>& runs, std::uint64_t rounds);

}  // namespace metahunt::campaign
