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

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "metahunt/error.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/generator.hpp"
#include "metahunt/hdl/printer.hpp"
#include "metahunt/hdl/validate.hpp"
#include "metahunt/metamorph/metamorph.hpp"
#include "metahunt/rng.hpp"

namespace metahunt::metamorph {

using hdl::BinaryOp;
using hdl::Design;
using hdl::Direction;
using hdl::Expr;
using hdl::ExprGenerator;
using hdl::ExprOptions;
using hdl::Item;
using hdl::Module;
using hdl::Net;
using hdl::Operand;
using hdl::Port;
using hdl::Stmt;

const char* to_string(StrategyId s) {
  switch (s) {
    case StrategyId::DeadRegionInsert: return "DeadRegionInsert";
    case StrategyId::GuardedBranchInsert: return "GuardedBranchInsert";
    case StrategyId::SubsystemPromote: return "SubsystemPromote";
    case StrategyId::ModelTransfer: return "ModelTransfer";
  }
  return "?";
}

std::optional<StrategyId> parse_strategy(const std::string& name) {
  for (int i = 0; i < kStrategyCount; ++i) {
    if (name == to_string(static_cast<StrategyId>(i))) return static_cast<StrategyId>(i);
  }
  return std::nullopt;
}

void to_json(nlohmann::json& j, const MutationRecord& r) {
  j = nlohmann::json{{"strategy", to_string(r.strategy)},
                     {"site", r.site},
                     {"rng_seed", r.rng_seed},
                     {"payload_summary", r.payload_summary}};
}

void from_json(const nlohmann::json& j, MutationRecord& r) {
  auto s = parse_strategy(j.at("strategy").get<std::string>());
  if (!s) throw Error("unknown strategy '" + j.at("strategy").get<std::string>() + "'");
  r.strategy = *s;
  r.site = j.at("site").get<std::string>();
  r.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  r.payload_summary = j.at("payload_summary").get<std::string>();
}

std::string summary_field(const std::string& summary, const std::string& key) {
  std::istringstream is(summary);
  std::string tok;
  while (is >> tok) {
    if (tok.size() > key.size() && tok.compare(0, key.size(), key) == 0 && tok[key.size()] == '=') {
      return tok.substr(key.size() + 1);
    }
  }
  return "";
}

std::string fresh_signal(const Module& m, const std::string& prefix) {
  for (int i = 0;; ++i) {
    std::string n = prefix + std::to_string(i);
    if (!m.declares(n)) return n;
  }
}

std::string fresh_module(const Design& d, const std::string& prefix) {
  for (int i = 0;; ++i) {
    std::string n = prefix + std::to_string(i);
    if (d.find(n) == nullptr) return n;
  }
}

namespace {

std::size_t top_index(const Design& d) {
  for (std::size_t i = 0; i < d.modules.size(); ++i) {
    if (d.modules[i].name == d.top) return i;
  }
  throw ElaborationError("top module '" + d.top + "' not found");
}

std::vector<Operand> signals_of(const Module& m, const std::set<std::string>& exclude = {}) {
  std::vector<Operand> out;
  for (const auto& p : m.ports) {
    if (!exclude.count(p.name)) out.push_back(Operand{p.name, p.width});
  }
  for (const auto& n : m.nets) {
    if (!exclude.count(n.name)) out.push_back(Operand{n.name, n.width});
  }
  return out;
}

std::size_t read_count(const Design& d, const Module& m, const std::string& name) {
  std::size_t n = 0;
  for (const auto& it : m.items) n += hdl::item_reads(it, d).count(name);
  return n;
}

// Wires introduced by dangling dead regions that nothing reads yet.
std::vector<Operand> dead_nets(const Design& d, const Module& m) {
  std::vector<Operand> out;
  for (const auto& n : m.nets) {
    if (!n.is_reg && n.name.rfind("mh_d", 0) == 0 && read_count(d, m, n.name) == 0) out.push_back(Operand{n.name, n.width});
  }
  return out;
}

void rename_expr(Expr& e, const std::map<std::string, std::string>& names) {
  hdl::for_each_expr(e, [&](Expr& x) {
    if (x.kind == Expr::Kind::Ref || x.kind == Expr::Kind::BitSelect) {
      auto it = names.find(x.name);
      if (it != names.end()) x.name = it->second;
    }
  });
}

void rename_body(std::vector<Stmt>& body, const std::map<std::string, std::string>& names) {
  for (auto& s : body) {
    if (s.kind == Stmt::Kind::Assign) {
      if (auto it = names.find(s.lhs); it != names.end()) s.lhs = it->second;
      rename_expr(s.rhs, names);
    } else {
      rename_expr(s.cond, names);
      rename_body(s.then_body, names);
      rename_body(s.else_body, names);
    }
  }
}

void rename_item(Item& it, const std::map<std::string, std::string>& names) {
  auto sub = [&](std::string& n) {
    if (auto f = names.find(n); f != names.end()) n = f->second;
  };
  switch (it.kind) {
    case Item::Kind::Assign:
      sub(it.lhs);
      rename_expr(it.rhs, names);
      break;
    case Item::Kind::AlwaysFF:
      sub(it.clock);
      rename_body(it.body, names);
      break;
    case Item::Kind::AlwaysComb:
      rename_body(it.body, names);
      break;
    case Item::Kind::Instance:
      for (auto& c : it.connections) sub(c.signal);
      break;
  }
}

Expr self_cmp(BinaryOp op, const std::string& x) { return Expr::binary(op, Expr::ref(x), Expr::ref(x)); }

std::string join(const std::vector<std::string>& v, char sep = ',') {
  std::string out;
  for (const auto& s : v) {
    if (!out.empty()) out += sep;
    out += s;
  }
  return out.empty() ? "-" : out;
}

void validate_or_bug(const Design& d, const char* what) {
  try {
    hdl::validate(d);
  } catch (const ValidationError& e) {
    throw Error(std::string("framework bug: ") + what + " produced an invalid design: " + e.what());
  }
}

}  // namespace

Design apply_plan(const Design& d, const DeadRegionPlan& p) {
  Design out = d;
  Module& top = out.top_module();
  for (const auto& n : p.new_nets) top.nets.push_back(n);
  if (p.item) {
    Item& it = top.items.at(*p.item);
    if (it.kind != Item::Kind::AlwaysComb && it.kind != Item::Kind::AlwaysFF) {
      throw StrategyInapplicable("NoInsertionSite", "dead region target is not an always block");
    }
    if (!p.payload.empty()) it.body.push_back(Stmt::if_else(p.guard, p.payload));
  }
  for (const auto& it : p.new_items) top.items.push_back(it);
  return out;
}

Design apply_plan(const Design& d, const BranchPlan& p) {
  Design out = d;
  Module& top = out.top_module();
  Item& it = top.items.at(p.item);
  for (const auto& n : p.new_nets) top.nets.push_back(n);
  switch (it.kind) {
    case Item::Kind::Assign: {
      std::string target = it.lhs;
      Item blk = Item::always_comb({Stmt::if_else(p.cond, {Stmt::assign(target, it.rhs, false)}, p.else_body)});
      blk.span = it.span;
      it = std::move(blk);
      top.set_reg(target, true);
      break;
    }
    case Item::Kind::AlwaysComb:
    case Item::Kind::AlwaysFF: {
      std::vector<Stmt> c1 = std::move(it.body);
      it.body.clear();
      it.body.push_back(Stmt::if_else(p.cond, std::move(c1), p.else_body));
      break;
    }
    case Item::Kind::Instance:
      throw StrategyInapplicable("NoWrappableRegion", "instances cannot be wrapped in a branch");
  }
  return out;
}

Region region_cut(const Design& d, std::size_t begin, std::size_t end) {
  const Module& top = d.top_module();
  std::set<std::string> reads, drives, outside_reads;
  for (std::size_t i = 0; i < top.items.size(); ++i) {
    auto r = hdl::item_reads(top.items[i], d);
    if (i >= begin && i < end) {
      reads.insert(r.begin(), r.end());
      auto w = hdl::item_drives(top.items[i], d);
      drives.insert(w.begin(), w.end());
    } else {
      outside_reads.insert(r.begin(), r.end());
    }
  }
  Region reg{begin, end, {}, {}};
  for (const auto& r : reads) {
    if (!drives.count(r)) reg.live_in.push_back(r);
  }
  for (const auto& w : drives) {
    const Port* p = top.port(w);
    if (outside_reads.count(w) || (p != nullptr && p->dir == Direction::Output)) reg.live_out.push_back(w);
  }
  return reg;
}

std::vector<Region> extractable_regions(const Design& d, std::size_t max_cut, std::size_t max_len) {
  const Module& top = d.top_module();
  std::size_t n = top.items.size();
  std::vector<std::set<std::string>> reads(n), drives(n);
  std::map<std::string, std::vector<std::size_t>> readers;
  for (std::size_t i = 0; i < n; ++i) {
    reads[i] = hdl::item_reads(top.items[i], d);
    drives[i] = hdl::item_drives(top.items[i], d);
    for (const auto& r : reads[i]) readers[r].push_back(i);
  }
  std::vector<Region> out;
  for (std::size_t b = 0; b < n; ++b) {
    std::set<std::string> rd, dr;
    for (std::size_t e = b + 1; e <= n && e - b <= max_len; ++e) {
      rd.insert(reads[e - 1].begin(), reads[e - 1].end());
      dr.insert(drives[e - 1].begin(), drives[e - 1].end());
      Region reg{b, e, {}, {}};
      for (const auto& r : rd) {
        if (!dr.count(r)) reg.live_in.push_back(r);
      }
      if (reg.live_in.size() > max_cut) continue;
      for (const auto& w : dr) {
        const Port* p = top.port(w);
        bool live = p != nullptr && p->dir == Direction::Output;
        if (!live) {
          for (auto i : readers[w]) {
            if (i < b || i >= e) {
              live = true;
              break;
            }
          }
        }
        if (live) reg.live_out.push_back(w);
      }
      if (reg.live_in.size() + reg.live_out.size() <= max_cut) out.push_back(std::move(reg));
    }
  }
  return out;
}

Design apply_plan(const Design& d, const RegionPlan& p) {
  const Module& old_top = d.top_module();
  if (p.begin >= p.end || p.end > old_top.items.size()) {
    throw StrategyInapplicable("NoExtractableRegion", "region out of range");
  }
  if (d.find(p.module_name) != nullptr) throw StrategyInapplicable("NoExtractableRegion", "module name taken");
  Region reg = region_cut(d, p.begin, p.end);

  std::set<std::string> drives;
  for (std::size_t i = p.begin; i < p.end; ++i) {
    auto w = hdl::item_drives(old_top.items[i], d);
    drives.insert(w.begin(), w.end());
  }
  std::set<std::string> live_out(reg.live_out.begin(), reg.live_out.end());

  Module sub;
  sub.name = p.module_name;
  sub.origin.file = p.file;
  for (const auto& n : reg.live_in) {
    sub.ports.push_back(Port{Direction::Input, false, old_top.signal(n)->width, n});
  }
  for (const auto& n : reg.live_out) {
    auto info = old_top.signal(n);
    sub.ports.push_back(Port{Direction::Output, info->is_reg, info->width, n});
  }
  for (const auto& net : old_top.nets) {
    if (drives.count(net.name) && !live_out.count(net.name)) sub.nets.push_back(net);
  }
  for (std::size_t i = p.begin; i < p.end; ++i) sub.items.push_back(old_top.items[i]);

  std::vector<hdl::Connection> conns;
  std::map<std::string, std::string> names;
  int pi = 0, ti = 0;
  for (auto& port : sub.ports) {
    std::string inner = p.file.empty() ? port.name : "p" + std::to_string(pi++);
    conns.push_back(hdl::Connection{inner, port.name});
    names[port.name] = inner;
  }
  if (!p.file.empty()) {
    for (auto& net : sub.nets) names[net.name] = "t" + std::to_string(ti++);
    for (auto& port : sub.ports) port.name = names[port.name];
    for (auto& net : sub.nets) net.name = names[net.name];
    for (auto& it : sub.items) rename_item(it, names);
  }

  Design out = d;
  Module& top = out.top_module();
  top.items.erase(top.items.begin() + static_cast<std::ptrdiff_t>(p.begin),
                  top.items.begin() + static_cast<std::ptrdiff_t>(p.end));
  top.items.insert(top.items.begin() + static_cast<std::ptrdiff_t>(p.begin),
                   Item::instance_of(p.module_name, p.instance_name, std::move(conns)));
  std::erase_if(top.nets, [&](const Net& n) { return drives.count(n.name) && !live_out.count(n.name); });
  for (const auto& n : reg.live_out) top.set_reg(n, false);

  if (p.file.empty()) {
    out.modules.insert(out.modules.begin() + static_cast<std::ptrdiff_t>(top_index(out)), std::move(sub));
  } else {
    out.modules.insert(out.modules.begin(), std::move(sub));
  }
  return out;
}

namespace {

ExprOptions payload_options(const PayloadOptions& o) {
  ExprOptions e;
  e.max_depth = o.max_depth;
  e.max_ternary_depth = o.max_ternary_depth;
  e.ternary_weight = 1.5;
  e.casts = true;
  e.max_width = 16;
  return e;
}

Expr guard_expr(Rng& rng, const std::vector<Operand>& readable, std::string& form) {
  int kind = readable.empty() ? 0 : static_cast<int>(rng.below(3));
  if (kind == 0) {
    form = "guard:zero";
    return Expr::constant(1, 0);
  }
  const Operand& x = rng.pick(readable);
  if (kind == 1) {
    form = "guard:ne";
    return self_cmp(BinaryOp::Ne, x.name);
  }
  form = "guard:shift";
  return Expr::binary(BinaryOp::Ne,
                      Expr::binary(BinaryOp::Shr, Expr::ref(x.name), Expr::constant(8, static_cast<std::uint64_t>(x.width))),
                      Expr::constant(1, 0));
}

Expr tautology(Rng& rng, const std::vector<Operand>& readable, std::string& form) {
  int kind = readable.empty() ? 0 : static_cast<int>(rng.below(4));
  if (kind == 0) {
    form = "cond:one";
    return Expr::constant(1, 1);
  }
  const std::string& x = rng.pick(readable).name;
  switch (kind) {
    case 1:
      form = "cond:eq";
      return self_cmp(BinaryOp::Eq, x);
    case 2:
      form = "cond:or";
      return Expr::binary(BinaryOp::Ne,
                          Expr::binary(BinaryOp::Or, Expr::ref(x), Expr::unary(hdl::UnaryOp::Not, Expr::ref(x))),
                          Expr::constant(1, 0));
    default:
      form = "cond:xor";
      return Expr::binary(BinaryOp::Eq, self_cmp(BinaryOp::Xor, x), Expr::constant(1, 0));
  }
}

}  // namespace

Mutation dead_region_insert(const Design& d, std::uint64_t seed, const PayloadOptions& opts) {
  Rng rng(derive_seed(seed, 0xd1));
  const Module& top = d.top_module();
  if (top.ports.empty() && top.items.empty()) throw StrategyInapplicable("NoInsertionSite", "empty top module");

  std::vector<std::size_t> blocks;
  for (std::size_t i = 0; i < top.items.size(); ++i) {
    auto k = top.items[i].kind;
    if (k == Item::Kind::AlwaysComb || k == Item::Kind::AlwaysFF) blocks.push_back(i);
  }

  DeadRegionPlan plan;
  MutationRecord rec{StrategyId::DeadRegionInsert, "", seed, ""};
  ExprOptions eopts = payload_options(opts);
  std::string form;
  std::vector<std::string> targets;
  Module scratch = top;

  if (!blocks.empty() && rng.chance(opts.guarded)) {
    std::size_t idx = rng.pick(blocks);
    const Item& blk = top.items[idx];
    bool ff = blk.kind == Item::Kind::AlwaysFF;
    std::set<std::string> fanout = ff ? std::set<std::string>{} : hdl::comb_fanout(d, top, idx);
    std::vector<Operand> readable = signals_of(top, fanout);
    plan.item = idx;
    plan.guard = guard_expr(rng, readable, form);

    std::set<std::string> own;
    hdl::collect_assigned(blk.body, own);
    std::vector<std::string> own_regs(own.begin(), own.end());
    int count = rng.range(1, 3);
    for (int k = 0; k < count; ++k) {
      std::string target;
      if (!own_regs.empty() && rng.chance(0.5)) {
        target = rng.pick(own_regs);
      } else {
        target = fresh_signal(scratch, "mh_d");
        Net n{true, rng.range(1, 8), target};
        scratch.nets.push_back(n);
        plan.new_nets.push_back(n);
      }
      targets.push_back(target);
      ExprGenerator gen(rng, readable, eopts);
      Stmt s = Stmt::assign(target, gen.generate().first, ff);
      if (rng.chance(0.3) && !readable.empty()) {
        ExprGenerator cg(rng, readable, eopts);
        s = Stmt::if_else(cg.generate(3, 1).first, {std::move(s)});
      }
      plan.payload.push_back(std::move(s));
    }
    rec.site = fmt::format("{}/item[{}]", top.name, idx);
  } else {
    form = "dangling";
    std::vector<Operand> readable = signals_of(top);
    ExprGenerator gen(rng, readable, eopts);
    Expr e = gen.generate().first;
    auto dead = dead_nets(d, top);
    if (!dead.empty() && rng.chance(opts.chain_dead)) {
      const Operand& prev = rng.pick(dead);
      ExprGenerator cg(rng, readable, eopts);
      Expr c = cg.generate(3, 0).first;
      e = rng.chance(0.5) ? Expr::ternary(std::move(c), std::move(e), Expr::ref(prev.name))
                          : Expr::ternary(std::move(c), Expr::ref(prev.name), std::move(e));
      form = "dangling:chain";
    }
    std::string name = fresh_signal(top, "mh_d");
    int w = std::clamp(hdl::expr_width(e, top), 1, 64);
    plan.new_nets.push_back(Net{false, w, name});
    plan.new_items.push_back(Item::assign(name, std::move(e)));
    targets.push_back(name);
    rec.site = top.name + "/dangling";
  }

  Mutation m{apply_plan(d, plan), rec, std::nullopt};
  int depth = 0;
  for (const auto& s : plan.payload) depth = std::max(depth, hdl::ternary_depth(s.kind == Stmt::Kind::Assign ? s.rhs : s.then_body[0].rhs));
  for (const auto& it : plan.new_items) depth = std::max(depth, hdl::ternary_depth(it.rhs));
  m.record.payload_summary = fmt::format("form={} targets={} ternary_depth={}", form, join(targets), depth);
  validate_or_bug(m.design, "DeadRegionInsert");
  return m;
}

Mutation guarded_branch_insert(const Design& d, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x9b));
  const Module& top = d.top_module();
  std::vector<std::size_t> sites;
  for (std::size_t i = 0; i < top.items.size(); ++i) {
    if (top.items[i].kind != Item::Kind::Instance) sites.push_back(i);
  }
  if (sites.empty()) throw StrategyInapplicable("NoWrappableRegion", "top has no always block or continuous assign");

  BranchPlan plan;
  plan.item = rng.pick(sites);
  const Item& it = top.items[plan.item];
  bool ff = it.kind == Item::Kind::AlwaysFF;
  std::set<std::string> fanout = ff ? std::set<std::string>{} : hdl::comb_fanout(d, top, plan.item);
  std::vector<Operand> readable = signals_of(top, fanout);
  std::string form;
  plan.cond = tautology(rng, readable, form);

  Module scratch = top;
  std::vector<std::string> fresh;
  ExprOptions eopts;
  int count = rng.range(1, 2);
  for (int k = 0; k < count; ++k) {
    std::string n = fresh_signal(scratch, "mh_g");
    Net net{true, rng.range(1, 8), n};
    scratch.nets.push_back(net);
    plan.new_nets.push_back(net);
    fresh.push_back(n);
    ExprGenerator gen(rng, readable, eopts);
    plan.else_body.push_back(Stmt::assign(n, gen.generate().first, ff));
  }

  Mutation m{apply_plan(d, plan), {StrategyId::GuardedBranchInsert, "", seed, ""}, std::nullopt};
  m.record.site = fmt::format("{}/item[{}]", top.name, plan.item);
  m.record.payload_summary =
      fmt::format("form={} wrapped={} fresh={}", form, it.kind == Item::Kind::Assign ? "assign" : (ff ? "ff" : "comb"),
                  join(fresh));
  validate_or_bug(m.design, "GuardedBranchInsert");
  return m;
}

namespace {

Mutation promote(const Design& d, std::uint64_t seed, bool transfer) {
  Rng rng(derive_seed(seed, transfer ? 0x7f : 0x5b));
  auto regions = extractable_regions(d);
  if (regions.empty()) throw StrategyInapplicable("NoExtractableRegion", "no region with a cut of at most 8 signals");
  StrategyId sid = transfer ? StrategyId::ModelTransfer : StrategyId::SubsystemPromote;
  for (int attempt = 0; attempt < 8 && !regions.empty(); ++attempt) {
    std::size_t pick = rng.below(regions.size());
    Region reg = regions[pick];
    regions.erase(regions.begin() + static_cast<std::ptrdiff_t>(pick));
    RegionPlan plan;
    plan.begin = reg.begin;
    plan.end = reg.end;
    plan.module_name = fresh_module(d, transfer ? "mh_xfer_" : "mh_sub_");
    plan.instance_name = fresh_signal(d.top_module(), "mh_u");
    if (transfer) plan.file = plan.module_name + ".v";
    Design out = apply_plan(d, plan);
    if (!hdl::is_valid(out)) continue;
    Mutation m{std::move(out), {sid, "", seed, ""}, std::nullopt};
    m.record.site = fmt::format("{}/items[{}:{}]", d.top, reg.begin, reg.end);
    m.record.payload_summary = fmt::format("form={} module={} in={} out={}", transfer ? "transfer" : "promote",
                                           plan.module_name, join(reg.live_in), join(reg.live_out));
    if (transfer) m.sidecar = SidecarFile{plan.file, hdl::print(*m.design.find(plan.module_name))};
    return m;
  }
  throw StrategyInapplicable("NoExtractableRegion", "no candidate region yields a valid design");
}

}  // namespace

Mutation subsystem_promote(const Design& d, std::uint64_t seed) { return promote(d, seed, false); }

Mutation model_transfer(const Design& d, std::uint64_t seed) { return promote(d, seed, true); }

Mutation apply(const Design& d, StrategyId s, std::uint64_t seed, const PayloadOptions& opts) {
  switch (s) {
    case StrategyId::DeadRegionInsert: return dead_region_insert(d, seed, opts);
    case StrategyId::GuardedBranchInsert: return guarded_branch_insert(d, seed);
    case StrategyId::SubsystemPromote: return subsystem_promote(d, seed);
    case StrategyId::ModelTransfer: return model_transfer(d, seed);
  }
  throw Error("unknown strategy");
}

Design replay(const Design& seed, const std::vector<MutationRecord>& lineage, const PayloadOptions& opts) {
  Design d = seed;
  for (const auto& r : lineage) d = apply(d, r.strategy, r.rng_seed, opts).design;
  return d;
}

}  // namespace metahunt::metamorph
