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

#include "metahunt/difftest/difftest.hpp"
#include "metahunt/hdl/generator.hpp"
#include "metahunt/hdl/validate.hpp"
#include "metahunt/metamorph/metamorph.hpp"
#include "metahunt/hdl/parser.hpp"
#include "metahunt/hdl/printer.hpp"
#include "metahunt/sim/sim.hpp"
#include "metahunt/triage/triage.hpp"

using namespace metahunt;
using namespace metahunt::difftest;
namespace fs = std::filesystem;

namespace {

fs::path scratch_root() {
  fs::path p = fs::temp_directory_path() / fmt::format("mh_difftest_{}", ::getpid());
  fs::create_directories(p);
  return p;
}

// n single-use wires, each adding one ternary level on top of the previous.
std::string ternary_chain(int n, bool reuse_first = false) {
  std::string s = "module top(input [1:0] a, input b, output [1:0] y";
  if (reuse_first) s += ", output [1:0] z";
  s += ");\n";
  for (int i = 0; i < n; ++i) s += fmt::format("  wire [1:0] w{};\n", i);
  s += "  assign w0 = (b ? a : 2'd1);\n";
  for (int i = 1; i < n; ++i) s += fmt::format("  assign w{} = (a[0] ? w{} : 2'd2);\n", i, i - 1);
  s += fmt::format("  assign y = w{};\n", n - 1);
  if (reuse_first) s += "  assign z = w0;\n";
  s += "endmodule\n";
  return s;
}

const char* kXorTrigger =
    "module top(input [1:0] a, input [1:0] b, output reg [1:0] y);\n"
    "  reg [1:0] g;\n"
    "  always @(*) begin\n"
    "    if (((a ^ a) == 2'd0)) begin\n"
    "      y = (a + b);\n"
    "    end else begin\n"
    "      g = b;\n"
    "    end\n"
    "  end\n"
    "endmodule\n";

const char* kShiftTrigger =
    "module top(input [3:0] a, input [3:0] b, output [3:0] y);\n"
    "  assign y = (b | (a >> 8'd4));\n"
    "endmodule\n";

}  // namespace

TEST(Adapters, ParseAndValidate) {
  auto j = nlohmann::json::parse(R"([
    {"name":"mock","kind":"mock","args":["--bugs=ShiftConstFold"],"timeout_s":5},
    {"name":"yosys","cmd":"yosys","args":["-q","-p","read_verilog {input}; synth; write_verilog {outdir}/netlist.v"],"timeout_s":60,"kind":"synthesizer"}
  ])");
  auto ads = j.get<std::vector<ToolAdapter>>();
  ASSERT_EQ(ads.size(), 2u);
  EXPECT_EQ(ads[0].kind, ToolKind::Mock);
  EXPECT_EQ(ads[1].timeout_s, 60);
  nlohmann::json back = ads[1];
  EXPECT_EQ(back.get<ToolAdapter>().args, ads[1].args);

  EXPECT_THROW((nlohmann::json::parse(R"({"name":"x","cmd":"t","args":["a"]})").get<ToolAdapter>()), ConfigError);
  EXPECT_THROW((nlohmann::json::parse(R"({"name":"x","cmd":"t","args":["{input}"],"timeout_s":0})").get<ToolAdapter>()),
               ConfigError);
  EXPECT_THROW((nlohmann::json::parse(R"({"name":"x","cmd":"t","args":["{input}"],"kind":"fpga"})").get<ToolAdapter>()),
               ConfigError);
}

TEST(Mock, ProfileParsing) {
  EXPECT_TRUE(MockBugProfile::parse("").empty());
  EXPECT_TRUE(MockBugProfile::parse("none").empty());
  auto p = MockBugProfile::parse("DeepTernaryCrash,ShiftConstFold");
  EXPECT_TRUE(p.deep_ternary_crash && p.shift_const_fold && !p.zero_width_sign_ext);
  EXPECT_EQ(MockBugProfile::parse(p.to_string()), p);
  EXPECT_EQ(MockBugProfile::parse("all"), MockBugProfile::all());
  EXPECT_THROW(MockBugProfile::parse("Bogus"), ConfigError);
}

TEST(Mock, EffectiveDepthThroughSingleUseWires) {
  for (int n = 1; n <= 7; ++n) EXPECT_EQ(effective_ternary_depth(hdl::parse(ternary_chain(n))), n) << n;
  // w0 is read twice, so the chain restarts above it.
  EXPECT_EQ(effective_ternary_depth(hdl::parse(ternary_chain(6, true))), 5);
}

TEST(Mock, EmptyProfileIsIdentity) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto d = hdl::gen_seed(s, hdl::SizeProfile::Small);
    auto r = mock_synthesize(d, {});
    ASSERT_EQ(r.outcome.kind, RunOutcome::Kind::Success);
    ASSERT_TRUE(r.netlist);
    EXPECT_EQ(r.rewrites, 0);
    EXPECT_EQ(*r.netlist, d);
    EXPECT_TRUE(sim::exhaustive_equiv(d, *r.netlist).equivalent());
  }
}

TEST(Mock, AllBugsQuietOnGeneratedSeeds) {
  for (std::uint64_t s = 0; s < 60; ++s) {
    for (auto prof : {hdl::SizeProfile::Small, hdl::SizeProfile::Medium}) {
      auto d = hdl::gen_seed(s, prof);
      auto r = mock_synthesize(d, MockBugProfile::all());
      ASSERT_EQ(r.outcome.kind, RunOutcome::Kind::Success) << r.outcome.log;
      EXPECT_EQ(r.rewrites, 0);
    }
  }
}

TEST(Mock, DeepTernaryCrashIsStableAndClustersOnce) {
  auto d = hdl::parse(ternary_chain(5));
  MockBugProfile p;
  p.deep_ternary_crash = true;
  EXPECT_EQ(mock_synthesize(hdl::parse(ternary_chain(4)), p).outcome.kind, RunOutcome::Kind::Success);
  triage::ClusterRegistry reg;
  std::string first;
  for (int i = 0; i < 10; ++i) {
    auto r = mock_synthesize(d, p);
    ASSERT_EQ(r.outcome.kind, RunOutcome::Kind::Crash);
    EXPECT_NE(r.outcome.log.find("opt_muxtree_flatten"), std::string::npos);
    if (i == 0) first = r.outcome.log;
    EXPECT_EQ(r.outcome.log, first);
    reg.assign(triage::featurize(r.outcome.log), static_cast<std::uint64_t>(i));
  }
  EXPECT_EQ(reg.clusters().size(), 1u);
  // A different trigger design lands in the same cluster.
  auto other = mock_synthesize(hdl::parse(ternary_chain(7)), p);
  EXPECT_FALSE(reg.assign(triage::featurize(other.outcome.log), 99).is_new);
}

TEST(Mock, ZeroWidthSignExtDivergesOnPortY) {
  auto d = hdl::parse(kXorTrigger);
  MockBugProfile p;
  p.zero_width_sign_ext = true;
  auto r = mock_synthesize(d, p);
  ASSERT_EQ(r.rewrites, 1);
  sim::Simulator ref(d), net(*r.netlist);
  auto plan = sim::make_plan(ref.input_bits(), 10, 8);
  auto div = compare(sim::run_plan(ref, plan), sim::run_plan(net, plan), "mock");
  ASSERT_TRUE(div);
  EXPECT_EQ(div->port, "y");
  EXPECT_EQ(mock_synthesize(d, {}).rewrites, 0);
}

TEST(Mock, ShiftConstFoldMakesDeadShiftLive) {
  auto d = hdl::parse(kShiftTrigger);
  MockBugProfile p;
  p.shift_const_fold = true;
  auto r = mock_synthesize(d, p);
  ASSERT_EQ(r.rewrites, 1);
  sim::Stimulus st;
  st.ports = sim::Simulator(d).inputs();
  st.vectors = {{5, 2}};
  EXPECT_EQ(sim::simulate(d, st).values[0][0], 2u);
  EXPECT_EQ(sim::simulate(*r.netlist, st).values[0][0], 7u);
  // In-range shifts are left alone.
  EXPECT_EQ(mock_synthesize(hdl::parse("module t(input [3:0] a, output [3:0] y); assign y = (a >> 8'd3); endmodule"), p)
                .rewrites,
            0);
}

TEST(Compare, FirstDivergenceIsCycleThenPort) {
  sim::SimTrace ref{{{"a", 4}, {"b", 4}}, {{1, 2}, {3, 4}, {5, 6}}};
  auto same = ref;
  EXPECT_FALSE(compare(ref, {{"t1", same}}));
  auto bad = ref;
  bad.values[2][0] = 9;
  bad.values[1][1] = 8;
  auto div = compare(ref, {{"t1", same}, {"t2", bad}});
  ASSERT_TRUE(div);
  EXPECT_EQ(div->tool, "t2");
  EXPECT_EQ(div->cycle, 1u);
  EXPECT_EQ(div->port, "b");
  EXPECT_EQ(div->expected, 4u);
  EXPECT_EQ(div->got, 8u);
  auto wrong = ref;
  wrong.ports[1].width = 5;
  EXPECT_THROW(compare(ref, {{"t", wrong}}), InterfaceMismatch);
}

TEST(RunTool, SubprocessOutcomes) {
  fs::path root = scratch_root();
  auto d = hdl::parse(kShiftTrigger);
  auto c = materialize(d, root / "case");
  ASSERT_TRUE(fs::exists(c.main));

  ToolAdapter ok{"copy", "/bin/sh", {"-c", "cp \"$0\" netlist.v && echo done", "{input}"}, 5, ToolKind::Synthesizer};
  auto r = run_tool(ok, c, root / "work/0/copy");
  EXPECT_EQ(r.kind, RunOutcome::Kind::Success);
  EXPECT_EQ(r.log, "done\n");
  EXPECT_EQ(r.netlist, root / "work/0/copy/netlist.v");
  auto r2 = run_tool(ok, c, root / "work/1/copy");
  EXPECT_EQ(r.artifact_digest, r2.artifact_digest);

  ToolAdapter boom{"boom", "/bin/sh", {"-c", "echo 'fatal at 0x1f'; exit 3", "{input}"}, 5, ToolKind::Synthesizer};
  r = run_tool(boom, c, root / "work/0/boom");
  EXPECT_EQ(r.kind, RunOutcome::Kind::Crash);
  EXPECT_EQ(r.exit_code, 3);
  EXPECT_EQ(r.log, "fatal at 0x1f\n");

  ToolAdapter slow{"slow", "/bin/sh", {"-c", "sleep 10", "{input}"}, 1, ToolKind::Synthesizer};
  r = run_tool(slow, c, root / "work/0/slow");
  EXPECT_EQ(r.kind, RunOutcome::Kind::Timeout);

  ToolAdapter gone{"gone", "definitely-not-a-tool-xyz", {"{input}"}, 5, ToolKind::Synthesizer};
  EXPECT_EQ(run_tool(gone, c, root / "work/0/gone").kind, RunOutcome::Kind::ToolMissing);
  fs::remove_all(root);
}

TEST(RunTool, MockAdapterIsReproducible) {
  fs::path root = scratch_root();
  auto c = materialize(hdl::parse(ternary_chain(6)), root / "case");
  ToolAdapter mock{"mock", "", {"--bugs=DeepTernaryCrash"}, 5, ToolKind::Mock};
  auto a = run_tool(mock, c, root / "work/0/mock");
  auto b = run_tool(mock, c, root / "work/1/mock");
  EXPECT_EQ(a.kind, RunOutcome::Kind::Crash);
  EXPECT_EQ(a.log, b.log);
  std::ifstream in(root / "work/0/mock/tool.log", std::ios::binary);
  std::string on_disk((std::istreambuf_iterator<char>(in)), {});
  EXPECT_EQ(on_disk, a.log);

  ToolAdapter honest{"mock", "", {}, 5, ToolKind::Mock};
  auto h = run_tool(honest, c, root / "work/2/mock");
  EXPECT_EQ(h.kind, RunOutcome::Kind::Success);
  EXPECT_EQ(hdl::parse_file(h.netlist), hdl::parse_file(c.main));
  fs::remove_all(root);
}

TEST(Flatten, PreservesBehaviour) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    auto d = hdl::gen_seed(s, hdl::SizeProfile::Medium);
    hdl::Design flat;
    flat.modules.push_back(flatten(d));
    flat.top = flat.modules[0].name;
    ASSERT_TRUE(hdl::is_valid(flat)) << hdl::print(flat);
    EXPECT_TRUE(sim::exhaustive_equiv(d, flat, 10, 6).equivalent()) << s;
  }
}

TEST(Flatten, DepthInvariantUnderExtraction) {
  int checked = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    auto d = hdl::gen_seed(s, hdl::SizeProfile::Small);
    for (std::uint64_t k = 0; k < 3; ++k)
      d = metamorph::dead_region_insert(d, s * 7 + k).design;
    int before = effective_ternary_depth(d);
    for (auto sid : {metamorph::StrategyId::SubsystemPromote, metamorph::StrategyId::ModelTransfer}) {
      try {
        auto m = metamorph::apply(d, sid, s);
        EXPECT_EQ(effective_ternary_depth(m.design), before) << hdl::print(m.design);
        ++checked;
      } catch (const StrategyInapplicable&) {
      }
    }
  }
  EXPECT_GT(checked, 60);
}
