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

#include "metahunt/error.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/generator.hpp"
#include "metahunt/hdl/parser.hpp"
#include "metahunt/hdl/printer.hpp"
#include "metahunt/hdl/validate.hpp"
#include "metahunt/metamorph/metamorph.hpp"
#include "metahunt/rng.hpp"
#include "metahunt/sim/sim.hpp"

using namespace metahunt;
using namespace metahunt::hdl;
using namespace metahunt::metamorph;

namespace {

const char* kComb =
    "module m(input [3:0] a, input [3:0] b, output [3:0] y, output z);\n"
    "  reg [3:0] t;\n"
    "  wire [3:0] w;\n"
    "  assign w = a & b;\n"
    "  always @(*) begin\n"
    "    t = w + a;\n"
    "  end\n"
    "  assign y = t;\n"
    "  assign z = t < b;\n"
    "endmodule\n";

bool equivalent(const Design& a, const Design& b) { return sim::exhaustive_equiv(a, b).equivalent(); }

std::size_t item_index(const Module& m, Item::Kind kind) {
  for (std::size_t i = 0; i < m.items.size(); ++i) {
    if (m.items[i].kind == kind) return i;
  }
  return m.items.size();
}

// Reparse the printed files and compare with the in-memory variant.
void expect_reparses(const Design& d) {
  auto files = print_files(d);
  IncludeResolver r = [&](const std::string& name) -> std::optional<std::string> {
    for (const auto& f : files) {
      if (f.name == name) return f.text;
    }
    return std::nullopt;
  };
  Design back = parse(files[0].text, files[0].name, r);
  EXPECT_EQ(print(back), print(d));
}

}  // namespace

TEST(DeadRegion, EmptyPayloadIsIdentity) {
  Design d = parse(kComb);
  DeadRegionPlan p;
  p.item = item_index(d.top_module(), Item::Kind::AlwaysComb);
  EXPECT_EQ(apply_plan(d, p), d);
}

TEST(DeadRegion, FalseGuardInComb) {
  Design d = parse(kComb);
  DeadRegionPlan p;
  p.item = item_index(d.top_module(), Item::Kind::AlwaysComb);
  p.payload.push_back(Stmt::assign("t", Expr::unary(UnaryOp::Not, Expr::ref("t")), false));
  Design v = apply_plan(d, p);
  validate(v);
  EXPECT_GT(node_count(v), node_count(d));
  EXPECT_NE(print(v).find("if (1'b0) begin"), std::string::npos);
  EXPECT_TRUE(equivalent(d, v));
}

TEST(GuardedBranch, TrueCondEmptyElse) {
  Design d = parse(kComb);
  BranchPlan p;
  p.item = item_index(d.top_module(), Item::Kind::AlwaysComb);
  Design v = apply_plan(d, p);
  validate(v);
  EXPECT_EQ(node_count(v), node_count(d) + 2);  // If statement + its 1'b1 condition
  EXPECT_TRUE(equivalent(d, v));
}

TEST(GuardedBranch, SelfEqualityOverExistingNet) {
  Design d = parse(kComb);
  BranchPlan p;
  p.item = 0;  // assign w = a & b; converted to always @(*)
  p.cond = Expr::binary(BinaryOp::Eq, Expr::ref("a"), Expr::ref("a"));
  p.new_nets.push_back(Net{true, 4, "g0"});
  p.else_body.push_back(Stmt::assign("g0", Expr::ref("b"), false));
  Design v = apply_plan(d, p);
  validate(v);
  EXPECT_TRUE(v.top_module().signal("w")->is_reg);
  EXPECT_TRUE(equivalent(d, v));
}

TEST(GuardedBranch, ElseWritesOnlyFreshNets) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    Design d = gen_seed(s, SizeProfile::Small);
    Mutation m = guarded_branch_insert(d, s);
    const Module& before = d.top_module();
    const Module& after = m.design.top_module();
    std::set<std::string> old_names;
    for (const auto& op : before.nets) old_names.insert(op.name);
    for (const auto& n : after.nets) {
      if (!old_names.count(n.name)) EXPECT_EQ(n.name.rfind("mh_g", 0), 0u);
    }
    EXPECT_NO_THROW(validate(m.design));
  }
}

TEST(Promote, SingleAssign) {
  Design d = parse(kComb);
  RegionPlan p{0, 1, "sub0", "u0", ""};
  Design v = apply_plan(d, p);
  validate(v);
  EXPECT_EQ(v.modules.size(), d.modules.size() + 1);
  const Module* sub = v.find("sub0");
  ASSERT_NE(sub, nullptr);
  EXPECT_EQ(sub->items.size(), 1u);
  EXPECT_TRUE(equivalent(d, v));
}

TEST(Promote, WholeBody) {
  Design d = parse(kComb);
  RegionPlan p{0, d.top_module().items.size(), "sub0", "u0", ""};
  Design v = apply_plan(d, p);
  validate(v);
  ASSERT_EQ(v.top_module().items.size(), 1u);
  EXPECT_EQ(v.top_module().items[0].kind, Item::Kind::Instance);
  EXPECT_TRUE(equivalent(d, v));
  expect_reparses(v);
}

TEST(Promote, CutLists) {
  Design d = parse(kComb);
  Region r = region_cut(d, 1, 2);
  EXPECT_EQ(r.live_in, (std::vector<std::string>{"a", "w"}));
  EXPECT_EQ(r.live_out, (std::vector<std::string>{"t"}));
}

TEST(Transfer, AlwaysBlockToSidecar) {
  Design d = parse(
      "module m(input clk, input [2:0] a, output [2:0] q);\n"
      "  reg [2:0] r;\n"
      "  always @(posedge clk) begin\n"
      "    r <= r + a;\n"
      "  end\n"
      "  assign q = r;\n"
      "endmodule\n");
  RegionPlan p{0, 1, "mh_xfer_0", "u0", "mh_xfer_0.v"};
  Design v = apply_plan(d, p);
  validate(v);
  auto files = print_files(v);
  ASSERT_EQ(files.size(), 2u);
  EXPECT_EQ(files[1].name, "mh_xfer_0.v");
  Design alone = parse(files[1].text);
  EXPECT_EQ(alone.modules.size(), 1u);
  EXPECT_EQ(sim::exhaustive_equiv(d, v, 10, 6).kind, sim::EquivKind::Equivalent);
  expect_reparses(v);
}

TEST(Transfer, SidecarParsesStandAlone) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    Design d = gen_seed(s, SizeProfile::Small);
    Mutation m = model_transfer(d, s);
    ASSERT_TRUE(m.sidecar);
    EXPECT_NO_THROW(parse(m.sidecar->text)) << m.sidecar->text;
    EXPECT_EQ(print_files(m.design).size(), print_files(d).size() + 1);
  }
}

TEST(Apply, StrategyIdEncoding) {
  EXPECT_EQ(static_cast<int>(StrategyId::DeadRegionInsert), 0);
  EXPECT_EQ(static_cast<int>(StrategyId::ModelTransfer), 3);
  for (int i = 0; i < kStrategyCount; ++i) {
    EXPECT_EQ(parse_strategy(to_string(static_cast<StrategyId>(i))), static_cast<StrategyId>(i));
  }
}

TEST(Apply, ChainOfAllFourStaysEquivalent) {
  for (std::uint64_t s = 0; s < 25; ++s) {
    Design seed = gen_seed(s, SizeProfile::Small);
    Design d = seed;
    std::vector<MutationRecord> lineage;
    for (int k = 0; k < kStrategyCount; ++k) {
      Mutation m = apply(d, static_cast<StrategyId>(k), s * 10 + static_cast<std::uint64_t>(k));
      lineage.push_back(m.record);
      d = std::move(m.design);
    }
    EXPECT_TRUE(equivalent(seed, d)) << s;
    EXPECT_EQ(print(replay(seed, lineage)), print(d));
    expect_reparses(d);
  }
}

TEST(Apply, ReplayDeterministic) {
  Design d = gen_seed(4, SizeProfile::Small);
  for (int k = 0; k < kStrategyCount; ++k) {
    auto a = apply(d, static_cast<StrategyId>(k), 77);
    auto b = apply(d, static_cast<StrategyId>(k), 77);
    EXPECT_EQ(print(a.design), print(b.design));
    EXPECT_EQ(a.record, b.record);
  }
}

TEST(Apply, RecordJsonRoundTrip) {
  MutationRecord r{StrategyId::SubsystemPromote, "top/items[1:3]", 991, "form=promote module=mh_sub_0 in=a out=b"};
  nlohmann::json j = r;
  EXPECT_EQ(j.get<MutationRecord>(), r);
  EXPECT_EQ(summary_field(r.payload_summary, "form"), "promote");
  EXPECT_EQ(summary_field(r.payload_summary, "missing"), "");
}

TEST(Apply, InapplicableOnEmptyModule) {
  Design d = parse("module m(); endmodule");
  EXPECT_THROW(dead_region_insert(d, 1), StrategyInapplicable);
  EXPECT_THROW(guarded_branch_insert(d, 1), StrategyInapplicable);
  EXPECT_THROW(subsystem_promote(d, 1), StrategyInapplicable);
}

class Soundness : public ::testing::TestWithParam<int> {};

TEST_P(Soundness, HundredSmallSeeds) {
  auto s = static_cast<StrategyId>(GetParam());
  for (std::uint64_t k = 0; k < 100; ++k) {
    Design d = gen_seed(1000 + k, SizeProfile::Small);
    ASSERT_LE(stimulus_width(d), 10);
    Mutation m = apply(d, s, k);
    ASSERT_NO_THROW(validate(m.design));
    auto r = sim::exhaustive_equiv(d, m.design, 10, 4);
    ASSERT_EQ(r.kind, sim::EquivKind::Equivalent) << to_string(s) << " seed " << k << "\n"
                                                  << print(d) << "\n---\n"
                                                  << print(m.design);
    if (s == StrategyId::DeadRegionInsert || s == StrategyId::GuardedBranchInsert) {
      EXPECT_GT(node_count(m.design), node_count(d));
    } else {
      EXPECT_EQ(m.design.modules.size(), d.modules.size() + 1);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllStrategies, Soundness, ::testing::Range(0, kStrategyCount));

TEST(Apply, LongRandomChainsStayEquivalent) {
  Rng rng(5);
  for (std::uint64_t s = 0; s < 60; ++s) {
    Design seed = gen_seed(500 + s, SizeProfile::Small);
    Design d = seed;
    for (int k = 0; k < 10; ++k) {
      auto sid = static_cast<StrategyId>(rng.below(kStrategyCount));
      try {
        d = apply(d, sid, rng.next()).design;
      } catch (const StrategyInapplicable&) {
      }
    }
    ASSERT_NO_THROW(validate(d));
    EXPECT_TRUE(equivalent(seed, d)) << s << "\n" << print(d);
    expect_reparses(d);
  }
}
