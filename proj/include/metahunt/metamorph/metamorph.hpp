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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "metahunt/hdl/ast.hpp"
#include "metahunt/hdl/printer.hpp"

namespace metahunt::metamorph {

enum class StrategyId : int { DeadRegionInsert = 0, GuardedBranchInsert = 1, SubsystemPromote = 2, ModelTransfer = 3 };
inline constexpr int kStrategyCount = 4;

const char* to_string(StrategyId s);
std::optional<StrategyId> parse_strategy(const std::string& name);

struct MutationRecord {
  StrategyId strategy = StrategyId::DeadRegionInsert;
  std::string site;
  std::uint64_t rng_seed = 0;
  // Space-separated key=value pairs; `form=` names the construct inserted.
  std::string payload_summary;

  bool operator==(const MutationRecord&) const = default;
};

void to_json(nlohmann::json& j, const MutationRecord& r);
void from_json(const nlohmann::json& j, MutationRecord& r);

// Value of `key=` in a payload summary, or "" when absent.
std::string summary_field(const std::string& summary, const std::string& key);

using SidecarFile = hdl::SourceFile;

struct Mutation {
  hdl::Design design;
  MutationRecord record;
  std::optional<SidecarFile> sidecar;
};

// Knobs for dead-region payloads.
struct PayloadOptions {
  // Probability of the in-block guarded form when the top has an always block.
  double guarded = 0.3;
  // Probability that a dangling net extends an earlier dead net.
  double chain_dead = 1.0;
  int max_depth = 6;
  int max_ternary_depth = 3;
};

// Plans: fully specified transformations. The random strategies below build
// a plan from an RNG and apply it.

// Guarded form (`item` set): appends `if (guard) begin payload end` to the
// top's always block `item`. Dangling form: declares `new_nets` and appends
// `new_items`, none of which is read anywhere. An empty payload with no new
// items leaves the design unchanged.
struct DeadRegionPlan {
  std::optional<std::size_t> item;
  hdl::Expr guard = hdl::Expr::constant(1, 0);
  std::vector<hdl::Stmt> payload;
  std::vector<hdl::Net> new_nets;
  std::vector<hdl::Item> new_items;
};

// Wraps the whole body of top item `item` (an always block, or a continuous
// assign which becomes `always @(*)`) as `if (cond) C1 else else_body`.
// `new_nets` are the fresh regs written by else_body.
struct BranchPlan {
  std::size_t item = 0;
  hdl::Expr cond = hdl::Expr::constant(1, 1);
  std::vector<hdl::Stmt> else_body;
  std::vector<hdl::Net> new_nets;
};

// Top items [begin, end) with their interface cut.
struct Region {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::vector<std::string> live_in;
  std::vector<std::string> live_out;
};

// Moves a region of the top into a new module. With `file` set the module
// gets that origin file and fresh port/internal names.
struct RegionPlan {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::string module_name;
  std::string instance_name;
  std::string file;
};

hdl::Design apply_plan(const hdl::Design& d, const DeadRegionPlan& p);
hdl::Design apply_plan(const hdl::Design& d, const BranchPlan& p);
hdl::Design apply_plan(const hdl::Design& d, const RegionPlan& p);

// Contiguous top-item runs whose cut is at most `max_cut` signals.
std::vector<Region> extractable_regions(const hdl::Design& d, std::size_t max_cut = 8, std::size_t max_len = 32);
Region region_cut(const hdl::Design& d, std::size_t begin, std::size_t end);

// `prefix` followed by the smallest unused index in `m` (signals) or `d` (modules).
std::string fresh_signal(const hdl::Module& m, const std::string& prefix);
std::string fresh_module(const hdl::Design& d, const std::string& prefix);

Mutation dead_region_insert(const hdl::Design& d, std::uint64_t seed, const PayloadOptions& opts = {});
Mutation guarded_branch_insert(const hdl::Design& d, std::uint64_t seed);
Mutation subsystem_promote(const hdl::Design& d, std::uint64_t seed);
Mutation model_transfer(const hdl::Design& d, std::uint64_t seed);

// Dispatches to a strategy. Throws StrategyInapplicable.
Mutation apply(const hdl::Design& d, StrategyId s, std::uint64_t seed, const PayloadOptions& opts = {});

// Re-applies a lineage to its seed design.
hdl::Design replay(const hdl::Design& seed, const std::vector<MutationRecord>& lineage, const PayloadOptions& opts = {});

}  // namespace metahunt::metamorph
