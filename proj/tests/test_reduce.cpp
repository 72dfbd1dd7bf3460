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

#include <algorithm>
#include <bit>

#include "metahunt/difftest/difftest.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/generator.hpp"
#include "metahunt/hdl/parser.hpp"
#include "metahunt/hdl/validate.hpp"
#include "metahunt/metamorph/metamorph.hpp"
#include "metahunt/reduce/reduce.hpp"
#include "metahunt/rng.hpp"
#include "metahunt/triage/triage.hpp"

using namespace metahunt;
using namespace metahunt::reduce;
namespace rd = metahunt::reduce;
using hdl::Design;
using hdl::Item;

namespace {

bool contains_item(const Design& d, const Item& target) {
  const auto& items = d.top_module().items;
  return std::find(items.begin(), items.end(), target) != items.end();
}

Design keep_subset(const Design& d, std::uint32_t mask) {
  Design out = d;
  auto& items = out.top_module().items;
  std::vector<Item> kept;
  for (std::size_t i = 0; i < items.size(); ++i)
    if (mask & (1u << i)) kept.push_back(items[i]);
  items = std::move(kept);
  return out;
}

// Smallest failing subset of top items, by exhaustive enumeration.
int brute_force_min(const Design& d, const Predicate& p) {
  std::size_t n = d.top_module().items.size();
  int best = -1;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    int size = std::popcount(mask);
    if (best >= 0 && size >= best) continue;
    Design c = keep_subset(d, mask);
    if (hdl::is_valid(c) && p(c)) best = size;
  }
  return best;
}

}  // namespace

TEST(Reduce, KeepsOnlyTheCulpritOfThree) {
  Design d = hdl::parse(
      "module top(input [1:0] a, output [1:0] x, output [1:0] y, output [1:0] z);"
      " assign x = a; assign y = ~a; assign z = (a + 2'd1); endmodule");
  Item b = d.top_module().items[1];
  Predicate p = [&](const Design& c) { return contains_item(c, b); };
  EXPECT_EQ(brute_force_min(d, p), 1);
  auto r = rd::reduce(d, p);
  ASSERT_EQ(r.design.top_module().items.size(), 1u);
  EXPECT_EQ(r.design.top_module().items[0], b);
  EXPECT_FALSE(r.non_minimal);
  EXPECT_TRUE(is_one_minimal(r.design, p));
}

TEST(Reduce, MinimalInputIsUnchanged) {
  Design d = hdl::parse("module top(input a, output y); assign y = a; endmodule");
  Predicate p = [](const Design& c) { return !c.top_module().items.empty(); };
  auto r = rd::reduce(d, p);
  EXPECT_EQ(r.design, d);
}

TEST(Reduce, PassingInputRejected) {
  Design d = hdl::parse("module top(input a, output y); assign y = a; endmodule");
  EXPECT_THROW(rd::reduce(d, [](const Design&) { return false; }), NotFailing);
}

TEST(Reduce, FlakyPredicateDetected) {
  Design d = hdl::parse("module top(input a, output y); assign y = a; endmodule");
  int calls = 0;
  EXPECT_THROW(rd::reduce(d, [&](const Design&) { return (calls++ % 2) == 0; }), FlakyPredicate);
}

TEST(Reduce, EvaluationCapFlagsNonMinimal) {
  Design d = hdl::gen_seed(3, hdl::SizeProfile::Medium);
  ReduceOptions o;
  o.max_evaluations = 4;
  // Fails while at least half of the original items survive.
  std::size_t half = item_count(d) / 2;
  auto r = rd::reduce(d, [&](const Design& c) { return item_count(c) >= half; }, o);
  EXPECT_TRUE(r.non_minimal);
  EXPECT_LE(r.evaluations, 4u + 3u);
  EXPECT_TRUE(hdl::is_valid(r.design));
}

TEST(Reduce, StatementsInsideAlwaysBlocks) {
  Design d = hdl::parse(
      "module top(input [1:0] a, output reg [1:0] y, output reg [1:0] z);"
      " always @(*) begin y = a; if (a[0]) begin z = ~a; end else begin z = a; end end endmodule");
  // Fails while an assignment to z with rhs ~a exists.
  Predicate p = [](const Design& c) {
    bool found = false;
    for (const auto& it : c.top_module().items)
      hdl::for_each_expr(it, [&](const hdl::Expr& e) {
        if (e.kind == hdl::Expr::Kind::Unary && e.unary_op == hdl::UnaryOp::Not) found = true;
      });
    return found;
  };
  auto r = rd::reduce(d, p);
  ASSERT_EQ(r.design.top_module().items.size(), 1u);
  const auto& body = r.design.top_module().items[0].body;
  ASSERT_EQ(body.size(), 1u);
  EXPECT_EQ(body[0].kind, hdl::Stmt::Kind::If);
  EXPECT_EQ(body[0].then_body.size(), 1u);
  EXPECT_TRUE(body[0].else_body.empty());
}

TEST(Reduce, PlantedTriggersMatchBruteForce) {
  int cases = 0;
  int agree = 0;
  for (std::uint64_t s = 0; cases < 50; ++s) {
    ASSERT_LT(s, 2000u) << "generator rarely yields <= 12 items";
    Design d = hdl::gen_seed(s, hdl::SizeProfile::Small);
    if (d.modules.size() != 1) continue;
    std::size_t n = d.top_module().items.size();
    if (n < 3 || n > 12) continue;
    Rng rng(derive_seed(s, 7));
    Item planted = d.top_module().items[rng.below(n)];
    Predicate p = [&](const Design& c) { return contains_item(c, planted); };
    ++cases;
    auto r = rd::reduce(d, p);
    ASSERT_TRUE(hdl::is_valid(r.design));
    ASSERT_TRUE(p(r.design));
    EXPECT_TRUE(is_one_minimal(r.design, p));
    EXPECT_FALSE(r.non_minimal);
    EXPECT_LE(item_count(r.design), item_count(d));
    int oracle = brute_force_min(d, p);
    const auto& items = r.design.top_module().items;
    if (oracle == static_cast<int>(items.size()) && items.size() == 1 && items[0] == planted) ++agree;
  }
  EXPECT_EQ(agree, 50);
}

TEST(Reduce, MockCrashReducesToMinimalReproducer) {
  // Grow a dead-region chain until the mock crashes.
  Design d = hdl::gen_seed(11, hdl::SizeProfile::Small);
  difftest::MockBugProfile prof;
  prof.deep_ternary_crash = true;
  metamorph::PayloadOptions po;
  po.chain_dead = 1.0;
  po.guarded = 0.0;
  for (std::uint64_t k = 0; k < 40 && mock_synthesize(d, prof).outcome.kind != difftest::RunOutcome::Kind::Crash; ++k)
    d = metamorph::dead_region_insert(d, k, po).design;
  ASSERT_EQ(mock_synthesize(d, prof).outcome.kind, difftest::RunOutcome::Kind::Crash);

  triage::ClusterRegistry reg;
  auto cluster = reg.assign(triage::featurize(mock_synthesize(d, prof).outcome.log), 0).id;
  Predicate p = [&](const Design& c) {
    auto r = mock_synthesize(c, prof);
    if (r.outcome.kind != difftest::RunOutcome::Kind::Crash) return false;
    for (const auto& cl : reg.clusters())
      if (triage::cosine(cl.centroid, triage::featurize(r.outcome.log).vector) >= 0.85) return cl.id == cluster;
    return false;
  };
  auto a = rd::reduce(d, p);
  auto b = rd::reduce(d, p);
  EXPECT_EQ(a.design, b.design);
  EXPECT_TRUE(is_one_minimal(a.design, p));
  EXPECT_LT(item_count(a.design), item_count(d));
  EXPECT_GE(difftest::effective_ternary_depth(a.design), difftest::kCrashDepth);
  EXPECT_EQ(crash_signature(cluster), crash_signature(reg.assign(triage::featurize(mock_synthesize(a.design, prof).outcome.log), 1).id));
}

TEST(Signature, KindsAndClassesDiffer) {
  metamorph::MutationRecord shift{metamorph::StrategyId::DeadRegionInsert, "top/item[0]", 1, "form=guard:shift targets=y ternary_depth=0"};
  metamorph::MutationRecord xr{metamorph::StrategyId::GuardedBranchInsert, "top/item[1]", 2, "form=cond:xor wrapped=comb fresh=mh_g0"};
  EXPECT_NE(inconsistency_signature(shift), inconsistency_signature(xr));
  auto shift2 = shift;
  shift2.rng_seed = 77;
  shift2.site = "top/item[4]";
  EXPECT_EQ(inconsistency_signature(shift), inconsistency_signature(shift2));
  EXPECT_NE(crash_signature(0), inconsistency_signature(shift));
  EXPECT_EQ(crash_signature(3), crash_signature(3));
}

TEST(Signature, LineageBisectionFindsFirstCulprit) {
  Design seed = hdl::gen_seed(5, hdl::SizeProfile::Medium);
  std::vector<metamorph::MutationRecord> lineage;
  Design d = seed;
  for (std::uint64_t k = 0; lineage.size() < 4 && k < 50; ++k) {
    try {
      auto m = metamorph::subsystem_promote(d, k);
      d = m.design;
      lineage.push_back(m.record);
    } catch (const StrategyInapplicable&) {
    }
  }
  ASSERT_EQ(lineage.size(), 4u);
  std::size_t base = seed.modules.size();
  for (std::size_t want = 0; want < 4; ++want) {
    Predicate p = [&](const Design& c) { return c.modules.size() >= base + want + 1; };
    EXPECT_EQ(bisect_lineage(seed, lineage, p), want);
  }
  EXPECT_EQ(bisect_lineage(seed, lineage, [](const Design&) { return false; }), 4u);
}
