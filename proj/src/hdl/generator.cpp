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

#include "metahunt/hdl/generator.hpp"

#include <algorithm>
#include <stdexcept>

#include "metahunt/hdl/analysis.hpp"

namespace metahunt::hdl {

SizeProfile parse_size_profile(const std::string& name) {
  if (name == "small") return SizeProfile::Small;
  if (name == "medium") return SizeProfile::Medium;
  if (name == "large") return SizeProfile::Large;
  throw std::invalid_argument("unknown size profile '" + name + "' (small|medium|large)");
}

const char* to_string(SizeProfile p) {
  switch (p) {
    case SizeProfile::Small: return "small";
    case SizeProfile::Medium: return "medium";
    case SizeProfile::Large: return "large";
  }
  return "?";
}

std::size_t statement_budget(SizeProfile p) {
  switch (p) {
    case SizeProfile::Small: return 30;
    case SizeProfile::Medium: return 120;
    case SizeProfile::Large: return 400;
  }
  return 30;
}

ExprGenerator::ExprGenerator(Rng& rng, std::vector<Operand> operands, ExprOptions opts)
    : rng_(rng), operands_(std::move(operands)), opts_(opts) {}

std::pair<Expr, int> ExprGenerator::generate() { return generate(opts_.max_depth, opts_.max_ternary_depth); }

std::pair<Expr, int> ExprGenerator::leaf() {
  auto roll = rng_.below(10);
  if (operands_.empty() || roll >= 8) {
    int w = rng_.range(1, std::min(8, opts_.max_width));
    return {Expr::constant(w, rng_.below(std::uint64_t{1} << w)), w};
  }
  const Operand& op = rng_.pick(operands_);
  if (roll >= 6 && op.width > 1) {
    int lsb = static_cast<int>(rng_.below(static_cast<std::uint64_t>(op.width)));
    int msb = lsb + static_cast<int>(rng_.below(static_cast<std::uint64_t>(op.width - lsb)));
    return {Expr::select(op.name, msb, lsb), msb - lsb + 1};
  }
  return {Expr::ref(op.name), op.width};
}

std::pair<Expr, int> ExprGenerator::generate(int depth, int ternary_budget) {
  if (depth <= 1 || rng_.chance(0.25)) return leaf();
  return interior(depth, ternary_budget);
}

std::pair<Expr, int> ExprGenerator::interior(int depth, int ternary_budget) {
  double w_unary = 2.0, w_binary = 6.0, w_concat = 1.0;
  double w_ternary = ternary_budget > 0 ? 2.0 * opts_.ternary_weight : 0.0;
  double w_cast = opts_.casts ? 1.0 : 0.0;
  double total = w_unary + w_binary + w_concat + w_ternary + w_cast;
  double r = rng_.uniform() * total;

  if ((r -= w_ternary) < 0) {
    auto [c, cw] = generate(depth - 1, ternary_budget - 1);
    auto [t, tw] = generate(depth - 1, ternary_budget - 1);
    auto [e, ew] = generate(depth - 1, ternary_budget - 1);
    return {Expr::ternary(std::move(c), std::move(t), std::move(e)), std::max(tw, ew)};
  }
  if ((r -= w_cast) < 0) {
    auto [a, aw] = generate(depth - 1, ternary_budget);
    return {Expr::unary(rng_.chance(0.5) ? UnaryOp::Signed : UnaryOp::Unsigned, std::move(a)), aw};
  }
  if ((r -= w_unary) < 0) {
    static const UnaryOp ops[] = {UnaryOp::Not, UnaryOp::Neg, UnaryOp::LogicalNot};
    UnaryOp op = ops[rng_.below(3)];
    auto [a, aw] = generate(depth - 1, ternary_budget);
    return {Expr::unary(op, std::move(a)), op == UnaryOp::LogicalNot ? 1 : aw};
  }
  if ((r -= w_concat) < 0) {
    auto [a, aw] = generate(depth - 1, ternary_budget);
    auto [b, bw] = generate(depth - 1, ternary_budget);
    if (aw + bw > opts_.max_width) return {std::move(a), aw};
    std::vector<Expr> parts;
    parts.push_back(std::move(a));
    parts.push_back(std::move(b));
    return {Expr::concat(std::move(parts)), aw + bw};
  }

  static const BinaryOp ops[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::And, BinaryOp::Or, BinaryOp::Xor,
                                 BinaryOp::Shl, BinaryOp::Shr, BinaryOp::Eq,  BinaryOp::Ne, BinaryOp::Lt};
  BinaryOp op = ops[rng_.below(10)];
  auto [a, aw] = generate(depth - 1, ternary_budget);
  if (op == BinaryOp::Shl || op == BinaryOp::Shr) {
    Expr amount;
    std::vector<Operand> narrow;
    for (const auto& o : operands_) {
      if (o.width <= 3) narrow.push_back(o);
    }
    if (!narrow.empty() && rng_.chance(0.3)) {
      amount = Expr::ref(rng_.pick(narrow).name);
    } else {
      amount = Expr::constant(8, rng_.below(static_cast<std::uint64_t>(aw)));
    }
    return {Expr::binary(op, std::move(a), std::move(amount)), aw};
  }
  auto [b, bw] = generate(depth - 1, ternary_budget);
  if (op == BinaryOp::Xor && a == b) {
    b = Expr::constant(bw, width_mask(bw));
  }
  int w = (op == BinaryOp::Eq || op == BinaryOp::Ne || op == BinaryOp::Lt) ? 1 : std::max(aw, bw);
  return {Expr::binary(op, std::move(a), std::move(b)), w};
}

namespace {

struct Budget {
  std::size_t used = 0;
  std::size_t limit = 0;
  bool fits(std::size_t n) const { return used + n <= limit; }
};

class ModuleBuilder {
 public:
  ModuleBuilder(Rng& rng, std::string name, Budget& budget, int input_bits, bool sequential, int max_width)
      : rng_(rng), budget_(budget), sequential_(sequential) {
    m_.name = std::move(name);
    opts_.max_depth = 4;
    opts_.max_ternary_depth = 2;
    opts_.max_width = max_width;
    if (sequential_) m_.ports.push_back(Port{Direction::Input, false, 1, "clk"});
    int left = input_bits;
    int index = 0;
    while (left > 0) {
      int w = std::min(left, rng_.range(1, 4));
      std::string n = "i" + std::to_string(index++);
      m_.ports.push_back(Port{Direction::Input, false, w, n});
      avail_.push_back(Operand{n, w});
      left -= w;
      if (index >= 2 && rng_.chance(0.25)) break;
    }
  }

  void add_registers(int count) {
    for (int k = 0; k < count; ++k) {
      std::string n = "r" + std::to_string(regs_.size());
      int w = rng_.range(1, 4);
      m_.nets.push_back(Net{true, w, n});
      regs_.push_back(Operand{n, w});
      avail_.push_back(Operand{n, w});
    }
  }

  Expr expr() {
    ExprGenerator g(rng_, avail_, opts_);
    return g.generate().first;
  }

  Expr cond() {
    ExprGenerator g(rng_, avail_, opts_);
    auto [a, aw] = g.generate(2, 0);
    auto [b, bw] = g.generate(2, 0);
    static const BinaryOp ops[] = {BinaryOp::Eq, BinaryOp::Ne, BinaryOp::Lt};
    if (a == b) return Expr::binary(BinaryOp::Lt, std::move(a), Expr::constant(std::max(aw, 1), 1));
    return Expr::binary(ops[rng_.below(3)], std::move(a), std::move(b));
  }

  bool add_assign() {
    if (!budget_.fits(1 + reserve_)) return false;
    ExprGenerator g(rng_, avail_, opts_);
    auto [e, w] = g.generate();
    std::string n = "n" + std::to_string(wires_++);
    m_.nets.push_back(Net{false, w, n});
    m_.items.push_back(Item::assign(n, std::move(e)));
    avail_.push_back(Operand{n, w});
    budget_.used += 1;
    return true;
  }

  bool add_comb_block() {
    int nregs = rng_.range(1, 2);
    bool nested = rng_.chance(0.4);
    std::size_t stmts = 2 + static_cast<std::size_t>(nregs) * 3 + (nested ? 2 : 0);
    if (!budget_.fits(stmts + reserve_)) return false;
    std::vector<Operand> outs;
    for (int k = 0; k < nregs; ++k) {
      std::string n = "c" + std::to_string(comb_regs_++);
      outs.push_back(Operand{n, rng_.range(1, 4)});
      m_.nets.push_back(Net{true, outs.back().width, n});
    }
    std::vector<Stmt> body;
    for (const auto& o : outs) body.push_back(Stmt::assign(o.name, expr(), false));
    std::vector<Stmt> then_body, else_body;
    for (const auto& o : outs) then_body.push_back(Stmt::assign(o.name, expr(), false));
    if (nested) {
      then_body.push_back(Stmt::if_else(cond(), {Stmt::assign(outs[0].name, expr(), false)}));
    }
    for (const auto& o : outs) else_body.push_back(Stmt::assign(o.name, expr(), false));
    body.push_back(Stmt::if_else(cond(), std::move(then_body), std::move(else_body)));
    m_.items.push_back(Item::always_comb(std::move(body)));
    for (const auto& o : outs) avail_.push_back(o);
    budget_.used += stmts;
    return true;
  }

  void add_ff_block() {
    if (regs_.empty()) return;
    std::vector<Stmt> body;
    for (const auto& r : regs_) body.push_back(Stmt::assign(r.name, expr(), true));
    std::size_t stmts = 1 + regs_.size();
    if (rng_.chance(0.5) && budget_.fits(stmts + 2)) {
      body.push_back(Stmt::if_else(cond(), {Stmt::assign(regs_[0].name, expr(), true)}));
      stmts += 2;
    }
    m_.items.push_back(Item::always_ff("clk", std::move(body)));
    budget_.used += stmts;
  }

  void add_outputs(int count) {
    for (int k = 0; k < count; ++k) {
      std::string n = "o" + std::to_string(k);
      int w = rng_.range(1, 4);
      m_.ports.push_back(Port{Direction::Output, false, w, n});
      m_.items.push_back(Item::assign(n, expr()));
      budget_.used += 1;
    }
  }

  // Instantiates `sub`, binding inputs to existing signals of the same
  // width where possible and adapting through fresh wires otherwise.
  void add_instance(const Module& sub, int index) {
    std::vector<Connection> conns;
    for (const auto& p : sub.ports) {
      if (p.dir == Direction::Input && p.name == "clk") {
        conns.push_back(Connection{p.name, "clk"});
        continue;
      }
      if (p.dir == Direction::Input) {
        std::vector<Operand> same;
        for (const auto& o : avail_) {
          if (o.width == p.width) same.push_back(o);
        }
        if (!same.empty()) {
          conns.push_back(Connection{p.name, rng_.pick(same).name});
        } else {
          std::string n = "n" + std::to_string(wires_++);
          m_.nets.push_back(Net{false, p.width, n});
          m_.items.push_back(Item::assign(n, expr()));
          budget_.used += 1;
          conns.push_back(Connection{p.name, n});
        }
      } else {
        std::string n = "n" + std::to_string(wires_++);
        m_.nets.push_back(Net{false, p.width, n});
        conns.push_back(Connection{p.name, n});
        avail_.push_back(Operand{n, p.width});
      }
    }
    m_.items.push_back(Item::instance_of(sub.name, "u" + std::to_string(index), std::move(conns)));
    budget_.used += 1;
  }

  void fill(std::size_t target, std::size_t reserve) {
    reserve_ = reserve;
    int misses = 0;
    while (budget_.used + reserve < target && misses < 8) {
      bool ok = rng_.chance(0.6) ? add_assign() : add_comb_block();
      misses = ok ? 0 : misses + 1;
    }
  }

  bool sequential() const { return sequential_; }
  Module take() { return std::move(m_); }

 private:
  Rng& rng_;
  Budget& budget_;
  bool sequential_;
  Module m_;
  ExprOptions opts_;
  std::vector<Operand> avail_;
  std::vector<Operand> regs_;
  int wires_ = 0;
  int comb_regs_ = 0;
  std::size_t reserve_ = 0;
};

}  // namespace

Design gen_seed(std::uint64_t rng_seed, SizeProfile profile) {
  Rng rng(derive_seed(rng_seed, 0x5eed));
  Budget budget;
  budget.limit = statement_budget(profile);
  std::size_t target = rng.range(static_cast<int>(budget.limit / 3), static_cast<int>(budget.limit));

  int input_bits = 0;
  int max_width = 16;
  int submodules = 0;
  switch (profile) {
    case SizeProfile::Small:
      input_bits = rng.range(3, 10);
      break;
    case SizeProfile::Medium:
      input_bits = rng.range(12, 24);
      max_width = 24;
      submodules = rng.range(0, 2);
      break;
    case SizeProfile::Large:
      input_bits = rng.range(20, 40);
      max_width = 32;
      submodules = rng.range(1, 4);
      break;
  }

  Design d;
  bool sequential = rng.chance(0.6);
  std::vector<Module> subs;
  for (int k = 0; k < submodules; ++k) {
    bool sub_seq = sequential && rng.chance(0.5);
    ModuleBuilder sb(rng, "blk" + std::to_string(k), budget, rng.range(3, 8), sub_seq, max_width);
    if (sub_seq) sb.add_registers(rng.range(1, 2));
    std::size_t sub_target = budget.used + target / static_cast<std::size_t>(submodules + 2);
    sb.fill(sub_target, 2 + (sub_seq ? 5 : 0));
    if (sub_seq) sb.add_ff_block();
    sb.add_outputs(rng.range(1, 2));
    subs.push_back(sb.take());
  }

  ModuleBuilder top(rng, "top", budget, input_bits, sequential, max_width);
  int nregs = sequential ? rng.range(1, profile == SizeProfile::Small ? 2 : 4) : 0;
  top.add_registers(nregs);
  int nout = rng.range(1, profile == SizeProfile::Small ? 3 : 4);
  std::size_t reserve = static_cast<std::size_t>(nout) + (sequential ? static_cast<std::size_t>(nregs) + 3 : 0);
  for (std::size_t k = 0; k < subs.size(); ++k) {
    std::size_t pending = 0;
    for (std::size_t j = k; j < subs.size(); ++j) pending += subs[j].ports.size() + 1;
    top.fill(budget.used + (target - std::min(target, budget.used)) / (subs.size() + 1), reserve + pending);
    top.add_instance(subs[k], static_cast<int>(k));
  }
  top.fill(target, reserve);
  // The FF block may add a guarded update when room remains.
  if (sequential) top.add_ff_block();
  top.add_outputs(nout);

  for (auto& s : subs) d.modules.push_back(std::move(s));
  d.modules.push_back(top.take());
  d.top = "top";
  return d;
}

}  // namespace metahunt::hdl
