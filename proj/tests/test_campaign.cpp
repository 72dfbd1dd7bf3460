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

#include <filesystem>
#include <fstream>

#include <fmt/format.h>

#include "metahunt/campaign/campaign.hpp"
#include "metahunt/difftest/difftest.hpp"
#include "metahunt/hdl/parser.hpp"

using namespace metahunt;
using namespace metahunt::campaign;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  fs::path p = fs::temp_directory_path() / fmt::format("mh_campaign_{}_{}", tag, ::getpid());
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST(CampaignConfig, JsonRoundTripAndValidation) {
  CampaignConfig c;
  c.rounds = 77;
  c.mock = difftest::MockBugProfile::parse("ShiftConstFold");
  c.policy.policy = bandit::PolicyKind::Thompson;
  nlohmann::json j = c;
  auto back = j.get<CampaignConfig>();
  EXPECT_EQ(nlohmann::json(back), j);

  CampaignConfig bad;
  bad.rounds = 0;
  EXPECT_THROW(bad.validate(), difftest::ConfigError);
  bad = {};
  bad.jobs = 0;
  EXPECT_THROW(bad.validate(), difftest::ConfigError);
  EXPECT_THROW((nlohmann::json{{"policy", "greedy"}}.get<CampaignConfig>()), difftest::ConfigError);
}

TEST(Campaign, FreshStateReportsZeros) {
  CampaignConfig c;
  c.rounds = 5;
  Campaign camp(c);
  auto r = camp.report();
  EXPECT_EQ(r["rounds_completed"], 0);
  EXPECT_EQ(r["decisions"], 0);
  EXPECT_EQ(r["unique_bugs"], 0);
  for (const auto& a : r["arms"]) EXPECT_EQ(a["pulls"], 0);
}

TEST(Campaign, SingleRoundSmoke) {
  CampaignConfig c;
  c.rounds = 1;
  c.chain_depth = 1;
  Campaign camp(c);
  camp.run();
  auto r = camp.report();
  EXPECT_EQ(r["unique_bugs"], 0);
  EXPECT_EQ(r["decisions"], 1);
}

TEST(Campaign, HonestMockFindsNothing) {
  CampaignConfig c;
  c.rounds = 300;
  c.corpus_profile = hdl::SizeProfile::Medium;
  Campaign camp(c);
  camp.run();
  EXPECT_EQ(camp.state().bugs.bugs().size(), 0u);
  std::uint64_t pulls = 0, links = 0;
  for (const auto& a : camp.state().arms) pulls += a.pulls;
  for (const auto& r : camp.state().log) links += r.arms.size();
  EXPECT_EQ(pulls, links);
}

TEST(Campaign, FindsAllThreeBugClassesWithReproducers) {
  fs::path out = temp_dir("bugs");
  CampaignConfig c;
  c.rounds = 600;
  c.mock = difftest::MockBugProfile::all();
  c.output_dir = out.string();
  Campaign camp(c);
  camp.run(std::nullopt, [](const CampaignState& s) { return s.bugs.bugs().size() >= 3; });
  const auto& bugs = camp.state().bugs.bugs();
  ASSERT_EQ(bugs.size(), 3u);
  std::set<std::string> kinds;
  for (const auto& b : bugs) {
    kinds.insert(b.kind);
    ASSERT_FALSE(b.reproducer_path.empty());
    fs::path repro = out / b.reproducer_path;
    ASSERT_TRUE(fs::exists(repro)) << repro;
    auto min = hdl::parse_file(repro);
    auto r = difftest::mock_synthesize(min, difftest::MockBugProfile::all());
    if (b.kind == "crash")
      EXPECT_EQ(r.outcome.kind, difftest::RunOutcome::Kind::Crash);
    else
      EXPECT_GT(r.rewrites, 0);
    EXPECT_FALSE(b.lineage.empty());
  }
  EXPECT_EQ(kinds.size(), 2u);
  // Curve is monotone and report files exist.
  auto rep = nlohmann::json::parse(slurp(out / "report.json"));
  std::size_t prev = 0;
  for (std::size_t v : rep["curve"].get<std::vector<std::size_t>>()) {
    EXPECT_GE(v, prev);
    prev = v;
  }
  for (const char* f : {"bugs.jsonl", "decisions.jsonl", "curve.csv", "summary.txt", "state.json"})
    EXPECT_TRUE(fs::exists(out / f)) << f;
  fs::remove_all(out);
}

TEST(Campaign, ResumeMatchesUninterruptedRun) {
  CampaignConfig c;
  c.rounds = 160;
  c.mock = difftest::MockBugProfile::all();
  c.checkpoint_every = 50;
  c.reduce = false;

  fs::path a = temp_dir("full");
  c.output_dir = a.string();
  Campaign full(c);
  full.run();

  fs::path b = temp_dir("resumed");
  c.output_dir = b.string();
  {
    Campaign first(c);
    first.run(75);  // last checkpoint on disk is round 75
  }
  auto resumed = Campaign::resume(c, b / "state.json");
  EXPECT_EQ(resumed.state().round, 75u);
  resumed.run();
  auto ra = full.report(), rb = resumed.report();
  ra["config"].erase("output_dir");
  rb["config"].erase("output_dir");
  EXPECT_EQ(ra.dump(), rb.dump());
  EXPECT_EQ(slurp(a / "decisions.jsonl"), slurp(b / "decisions.jsonl"));
  EXPECT_GT(full.state().bugs.bugs().size(), 0u);

  CampaignConfig other = c;
  other.rng_seed = 99;
  EXPECT_THROW(Campaign::resume(other, b / "state.json"), difftest::ConfigError);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Campaign, SameSeedSameReport) {
  CampaignConfig c;
  c.rounds = 120;
  c.mock = difftest::MockBugProfile::all();
  Campaign x(c), y(c);
  x.run();
  y.run();
  EXPECT_EQ(x.report().dump(), y.report().dump());
}

TEST(Campaign, CorpusDirectorySeeds) {
  fs::path dir = temp_dir("corpus");
  std::ofstream(dir / "a.v") << "module a(input [2:0] x, output [2:0] y); assign y = (x + 3'd1); endmodule\n";
  std::ofstream(dir / "b.v") << "module b(input clk, input [1:0] x, output [1:0] q); reg [1:0] r; assign q = r;"
                                " always @(posedge clk) begin r <= (r ^ x); end endmodule\n";
  CampaignConfig c;
  c.rounds = 40;
  c.corpus_dir = dir.string();
  c.seed_budget = 4;
  Campaign camp(c);
  ASSERT_EQ(camp.corpus().size(), 2u);
  camp.run();
  std::set<std::size_t> used;
  for (const auto& r : camp.state().log) used.insert(r.seed);
  EXPECT_EQ(used.size(), 2u);
  EXPECT_EQ(camp.state().log[3].seed, 0u);
  EXPECT_EQ(camp.state().log[4].seed, 1u);
  fs::remove_all(dir);
}

TEST(Campaign, MissingToolIsSkippedWithWarning) {
  fs::path dir = temp_dir("tools");
  std::ofstream(dir / "adapters.json")
      << R"([{"name":"ghost","cmd":"no-such-synth-tool","args":["{input}"],"timeout_s":5,"kind":"synthesizer"}])";
  CampaignConfig c;
  c.rounds = 3;
  c.adapters_file = (dir / "adapters.json").string();
  c.output_dir = (dir / "out").string();
  Campaign camp(c);
  camp.run();
  ASSERT_EQ(camp.state().warnings.size(), 1u);
  EXPECT_NE(camp.state().warnings[0].find("ghost"), std::string::npos);
  fs::remove_all(dir);
}
