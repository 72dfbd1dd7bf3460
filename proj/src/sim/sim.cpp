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

#include "metahunt/sim/sim.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <ostream>
#include <queue>
#include <set>

#include <fmt/format.h>

#include "metahunt/error.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/rng.hpp"
#include "metahunt/simd/lane_kernels.hpp"

namespace metahunt::sim {

using hdl::BinaryOp;
using hdl::Design;
using hdl::Expr;
using hdl::Item;
using hdl::Module;
using hdl::Stmt;
using hdl::UnaryOp;

namespace {

enum class Op : std::uint8_t {
  Splat, Add, Sub, And, Or, Xor, Not, Neg, LNot, Shl, Shr, Eq, Ne, Lt,
  Select, Blend, MaskAnd, MaskAndNot, BitSelect, Concat, Copy,
};

// Operands are slot indices. Slots [0, signals) hold signal values; the
// rest are temporaries, constants and masks.
struct Instr {
  Op op;
  std::uint32_t d = 0, a = 0, b = 0, c = 0;
  u64 imm = 0;
  unsigned shift = 0;
};

struct Signal {
  std::string name;
  int width = 1;
};

struct Process {
  const std::vector<Stmt>* body = nullptr;
  const Item* item = nullptr;
  std::map<std::string, std::uint32_t> scope;
  std::set<std::uint32_t> reads, writes;
};

}  // namespace

struct Simulator::Program {
  std::vector<Signal> signals;
  std::vector<PortSpec> inputs, outputs;
  std::vector<std::uint32_t> input_slots, output_slots;
  std::uint32_t slots = 0;
  std::vector<std::pair<std::uint32_t, u64>> constants;
  std::uint32_t all_ones = 0;
  std::vector<Instr> comb, ff;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> shadows;  // signal, shadow
};

namespace {

class Compiler {
 public:
  explicit Compiler(Simulator::Program& p) : p_(p) {}

  void flatten(const Design& d) {
    const Module& top = d.top_module();
    std::map<std::string, std::uint32_t> bindings;
    std::set<std::string> clocks = hdl::clock_inputs(d, top);
    for (const auto& port : top.ports) {
      std::uint32_t s = new_signal(port.name, port.width);
      bindings[port.name] = s;
      if (port.dir == hdl::Direction::Input) {
        if (clocks.count(port.name)) continue;
        p_.inputs.push_back(PortSpec{port.name, port.width});
        p_.input_slots.push_back(s);
      } else {
        p_.outputs.push_back(PortSpec{port.name, port.width});
        p_.output_slots.push_back(s);
      }
    }
    flatten_module(d, top, "", bindings, 0);
  }

  void compile() {
    p_.slots = static_cast<std::uint32_t>(p_.signals.size());
    p_.all_ones = constant(~u64{0});
    for (std::size_t idx : comb_order()) emit_process(comb_[idx], false);
    for (auto& proc : ff_) emit_process(proc, true);
  }

 private:
  std::uint32_t new_signal(const std::string& name, int width) {
    p_.signals.push_back(Signal{name, width});
    return static_cast<std::uint32_t>(p_.signals.size() - 1);
  }

  void flatten_module(const Design& d, const Module& m, const std::string& prefix,
                      std::map<std::string, std::uint32_t> scope, int depth) {
    if (depth > 64) throw ElaborationError("instance nesting too deep");
    for (const auto& port : m.ports) {
      if (!scope.count(port.name)) throw ElaborationError("unbound port '" + port.name + "' in " + prefix + m.name);
    }
    for (const auto& n : m.nets) scope[n.name] = new_signal(prefix + n.name, n.width);
    for (const auto& it : m.items) {
      switch (it.kind) {
        case Item::Kind::Assign:
        case Item::Kind::AlwaysComb:
        case Item::Kind::AlwaysFF: {
          Process proc;
          proc.item = &it;
          proc.scope = scope;
          std::set<std::string> reads, writes;
          if (it.kind == Item::Kind::Assign) {
            hdl::collect_reads(it.rhs, reads);
            writes.insert(it.lhs);
          } else {
            hdl::collect_reads(it.body, reads);
            hdl::collect_assigned(it.body, writes);
          }
          for (const auto& r : reads) proc.reads.insert(lookup(scope, r));
          for (const auto& w : writes) proc.writes.insert(lookup(scope, w));
          (it.kind == Item::Kind::AlwaysFF ? ff_ : comb_).push_back(std::move(proc));
          break;
        }
        case Item::Kind::Instance: {
          const Module* sub = d.find(it.module);
          if (sub == nullptr) throw ElaborationError("unknown module '" + it.module + "'");
          std::map<std::string, std::uint32_t> inner;
          for (const auto& c : it.connections) inner[c.port] = lookup(scope, c.signal);
          flatten_module(d, *sub, prefix + it.instance + ".", std::move(inner), depth + 1);
          break;
        }
      }
    }
  }

  static std::uint32_t lookup(const std::map<std::string, std::uint32_t>& scope, const std::string& name) {
    auto it = scope.find(name);
    if (it == scope.end()) throw ElaborationError("unresolved signal '" + name + "'");
    return it->second;
  }

  std::vector<std::size_t> comb_order() {
    std::map<std::uint32_t, std::size_t> driver;
    for (std::size_t i = 0; i < comb_.size(); ++i) {
      for (auto w : comb_[i].writes) driver[w] = i;
    }
    std::vector<std::vector<std::size_t>> users(comb_.size());
    std::vector<std::size_t> indeg(comb_.size(), 0);
    for (std::size_t i = 0; i < comb_.size(); ++i) {
      std::set<std::size_t> deps;
      for (auto r : comb_[i].reads) {
        auto it = driver.find(r);
        if (it != driver.end() && it->second != i) deps.insert(it->second);
      }
      for (auto dep : deps) {
        users[dep].push_back(i);
        ++indeg[i];
      }
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < comb_.size(); ++i) {
      if (indeg[i] == 0) ready.push(i);
    }
    std::vector<std::size_t> order;
    while (!ready.empty()) {
      std::size_t i = ready.top();
      ready.pop();
      order.push_back(i);
      for (auto u : users[i]) {
        if (--indeg[u] == 0) ready.push(u);
      }
    }
    if (order.size() != comb_.size()) throw ElaborationError("combinational cycle after flattening");
    return order;
  }

  std::uint32_t temp() { return p_.slots++; }

  std::uint32_t constant(u64 v) {
    auto it = const_slots_.find(v);
    if (it != const_slots_.end()) return it->second;
    std::uint32_t s = temp();
    p_.constants.emplace_back(s, v);
    const_slots_[v] = s;
    return s;
  }

  struct Value {
    std::uint32_t slot;
    int width;
  };

  Value expr(const Expr& e, const Process& proc, std::vector<Instr>& out) {
    switch (e.kind) {
      case Expr::Kind::Const:
        return {constant(e.value & hdl::width_mask(e.width)), e.width};
      case Expr::Kind::Ref: {
        std::uint32_t s = lookup(proc.scope, e.name);
        return {s, p_.signals[s].width};
      }
      case Expr::Kind::BitSelect: {
        std::uint32_t s = lookup(proc.scope, e.name);
        int w = e.msb - e.lsb + 1;
        std::uint32_t d = temp();
        out.push_back(Instr{Op::BitSelect, d, s, 0, 0, hdl::width_mask(w), static_cast<unsigned>(e.lsb)});
        return {d, w};
      }
      case Expr::Kind::Concat: {
        std::vector<Value> parts;
        for (const auto& a : e.args) parts.push_back(expr(a, proc, out));
        std::uint32_t d = temp();
        out.push_back(Instr{Op::Splat, d, 0, 0, 0, 0, 0});
        int w = 0;
        for (const auto& part : parts) {
          out.push_back(Instr{Op::Concat, d, part.slot, 0, 0, 0, static_cast<unsigned>(part.width)});
          w += part.width;
        }
        if (w > 64) throw WidthError("concatenation wider than 64 bits");
        return {d, w};
      }
      case Expr::Kind::Unary: {
        Value a = expr(e.args[0], proc, out);
        if (e.unary_op == UnaryOp::Signed || e.unary_op == UnaryOp::Unsigned) return a;
        std::uint32_t d = temp();
        switch (e.unary_op) {
          case UnaryOp::Not: out.push_back(Instr{Op::Not, d, a.slot, 0, 0, hdl::width_mask(a.width), 0}); return {d, a.width};
          case UnaryOp::Neg: out.push_back(Instr{Op::Neg, d, a.slot, 0, 0, hdl::width_mask(a.width), 0}); return {d, a.width};
          default: out.push_back(Instr{Op::LNot, d, a.slot, 0, 0, 0, 0}); return {d, 1};
        }
      }
      case Expr::Kind::Binary: {
        Value a = expr(e.args[0], proc, out);
        Value b = expr(e.args[1], proc, out);
        std::uint32_t d = temp();
        int w = std::max(a.width, b.width);
        u64 m = hdl::width_mask(w);
        switch (e.binary_op) {
          case BinaryOp::Add: out.push_back(Instr{Op::Add, d, a.slot, b.slot, 0, m, 0}); return {d, w};
          case BinaryOp::Sub: out.push_back(Instr{Op::Sub, d, a.slot, b.slot, 0, m, 0}); return {d, w};
          case BinaryOp::And: out.push_back(Instr{Op::And, d, a.slot, b.slot, 0, 0, 0}); return {d, w};
          case BinaryOp::Or: out.push_back(Instr{Op::Or, d, a.slot, b.slot, 0, 0, 0}); return {d, w};
          case BinaryOp::Xor: out.push_back(Instr{Op::Xor, d, a.slot, b.slot, 0, 0, 0}); return {d, w};
          case BinaryOp::Shl:
            out.push_back(Instr{Op::Shl, d, a.slot, b.slot, 0, hdl::width_mask(a.width), 0});
            return {d, a.width};
          case BinaryOp::Shr: out.push_back(Instr{Op::Shr, d, a.slot, b.slot, 0, 0, 0}); return {d, a.width};
          case BinaryOp::Eq: out.push_back(Instr{Op::Eq, d, a.slot, b.slot, 0, 0, 0}); return {d, 1};
          case BinaryOp::Ne: out.push_back(Instr{Op::Ne, d, a.slot, b.slot, 0, 0, 0}); return {d, 1};
          case BinaryOp::Lt: out.push_back(Instr{Op::Lt, d, a.slot, b.slot, 0, 0, 0}); return {d, 1};
        }
        throw WidthError("unknown binary operator");
      }
      case Expr::Kind::Ternary: {
        Value c = expr(e.args[0], proc, out);
        Value t = expr(e.args[1], proc, out);
        Value f = expr(e.args[2], proc, out);
        std::uint32_t d = temp();
        out.push_back(Instr{Op::Select, d, c.slot, t.slot, f.slot, 0, 0});
        return {d, std::max(t.width, f.width)};
      }
    }
    throw WidthError("unknown expression kind");
  }

  std::uint32_t target(std::uint32_t sig, bool ff) {
    if (!ff) return sig;
    auto it = shadow_of_.find(sig);
    if (it != shadow_of_.end()) return it->second;
    std::uint32_t s = temp();
    shadow_of_[sig] = s;
    p_.shadows.emplace_back(sig, s);
    return s;
  }

  void stmts(const std::vector<Stmt>& body, const Process& proc, std::uint32_t mask, bool ff,
             std::vector<Instr>& out) {
    for (const auto& s : body) {
      if (s.kind == Stmt::Kind::Assign) {
        Value v = expr(s.rhs, proc, out);
        std::uint32_t sig = lookup(proc.scope, s.lhs);
        out.push_back(Instr{Op::Blend, target(sig, ff), mask, v.slot, 0, hdl::width_mask(p_.signals[sig].width), 0});
        continue;
      }
      Value c = expr(s.cond, proc, out);
      std::uint32_t then_mask = temp();
      out.push_back(Instr{Op::MaskAnd, then_mask, mask, c.slot, 0, 0, 0});
      stmts(s.then_body, proc, then_mask, ff, out);
      if (!s.else_body.empty()) {
        std::uint32_t else_mask = temp();
        out.push_back(Instr{Op::MaskAndNot, else_mask, mask, c.slot, 0, 0, 0});
        stmts(s.else_body, proc, else_mask, ff, out);
      }
    }
  }

  void emit_process(const Process& proc, bool ff) {
    auto& out = ff ? p_.ff : p_.comb;
    if (proc.item->kind == Item::Kind::Assign) {
      Value v = expr(proc.item->rhs, proc, out);
      std::uint32_t sig = lookup(proc.scope, proc.item->lhs);
      out.push_back(Instr{Op::Copy, sig, v.slot, 0, 0, hdl::width_mask(p_.signals[sig].width), 0});
      return;
    }
    stmts(proc.item->body, proc, p_.all_ones, ff, out);
  }

  Simulator::Program& p_;
  std::vector<Process> comb_, ff_;
  std::map<u64, std::uint32_t> const_slots_;
  std::map<std::uint32_t, std::uint32_t> shadow_of_;
};

void execute(const std::vector<Instr>& code, u64* buf, std::size_t lanes, const simd::LaneKernels& k) {
  auto at = [&](std::uint32_t s) { return buf + static_cast<std::size_t>(s) * lanes; };
  for (const auto& in : code) {
    switch (in.op) {
      case Op::Splat: k.splat(at(in.d), in.imm, lanes); break;
      case Op::Add: k.add(at(in.d), at(in.a), at(in.b), in.imm, lanes); break;
      case Op::Sub: k.sub(at(in.d), at(in.a), at(in.b), in.imm, lanes); break;
      case Op::And: k.and_(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::Or: k.or_(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::Xor: k.xor_(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::Not: k.not_(at(in.d), at(in.a), in.imm, lanes); break;
      case Op::Neg: k.neg(at(in.d), at(in.a), in.imm, lanes); break;
      case Op::LNot: k.lnot(at(in.d), at(in.a), lanes); break;
      case Op::Shl: k.shl(at(in.d), at(in.a), at(in.b), in.imm, lanes); break;
      case Op::Shr: k.shr(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::Eq: k.eq(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::Ne: k.ne(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::Lt: k.lt(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::Select: k.select(at(in.d), at(in.a), at(in.b), at(in.c), lanes); break;
      case Op::Blend: k.blend(at(in.d), at(in.a), at(in.b), in.imm, lanes); break;
      case Op::MaskAnd: k.mask_and(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::MaskAndNot: k.mask_andnot(at(in.d), at(in.a), at(in.b), lanes); break;
      case Op::BitSelect: k.bitselect(at(in.d), at(in.a), in.shift, in.imm, lanes); break;
      case Op::Concat: k.concat(at(in.d), at(in.a), in.shift, lanes); break;
      case Op::Copy: k.bitselect(at(in.d), at(in.a), 0, in.imm, lanes); break;
    }
  }
}

}  // namespace

Simulator::Simulator(const Design& d) : p_(std::make_unique<Program>()) {
  Compiler c(*p_);
  c.flatten(d);
  c.compile();
}

Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

const std::vector<PortSpec>& Simulator::inputs() const { return p_->inputs; }
const std::vector<PortSpec>& Simulator::outputs() const { return p_->outputs; }

int Simulator::input_bits() const {
  int bits = 0;
  for (const auto& p : p_->inputs) bits += p.width;
  return bits;
}

void Simulator::run_lanes(std::size_t lanes, std::size_t cycles, const Fill& fill, const Sink& sink) const {
  if (lanes == 0) return;
  const auto& k = simd::active_kernels();
  std::vector<u64> buf(static_cast<std::size_t>(p_->slots) * lanes, 0);
  auto at = [&](std::uint32_t s) { return buf.data() + static_cast<std::size_t>(s) * lanes; };
  for (const auto& [slot, v] : p_->constants) k.splat(at(slot), v, lanes);

  std::vector<u64*> in;
  for (auto s : p_->input_slots) in.push_back(at(s));
  std::vector<const u64*> out;
  for (auto s : p_->output_slots) out.push_back(at(s));

  for (std::size_t c = 0; c < cycles; ++c) {
    fill(c, in);
    for (std::size_t i = 0; i < in.size(); ++i) {
      k.bitselect(in[i], in[i], 0, hdl::width_mask(p_->inputs[i].width), lanes);
    }
    execute(p_->comb, buf.data(), lanes, k);
    sink(c, out);
    if (p_->ff.empty()) continue;
    for (const auto& [sig, sh] : p_->shadows) std::memcpy(at(sh), at(sig), lanes * sizeof(u64));
    execute(p_->ff, buf.data(), lanes, k);
    for (const auto& [sig, sh] : p_->shadows) std::memcpy(at(sig), at(sh), lanes * sizeof(u64));
  }
}

SimTrace Simulator::run(const Stimulus& s) const {
  if (s.ports != p_->inputs) throw InterfaceMismatch("stimulus ports do not match the top module inputs");
  SimTrace t;
  t.ports = p_->outputs;
  t.values.resize(s.cycles());
  run_lanes(
      1, s.cycles(),
      [&](std::size_t c, const std::vector<u64*>& in) {
        for (std::size_t i = 0; i < in.size(); ++i) in[i][0] = s.vectors.at(c).at(i);
      },
      [&](std::size_t c, const std::vector<const u64*>& out) {
        for (const auto* o : out) t.values[c].push_back(o[0]);
      });
  return t;
}

SimTrace simulate(const Design& d, const Stimulus& s) { return Simulator(d).run(s); }

u64 StimulusPlan::vector(std::size_t k, std::size_t cycle) const {
  u64 mask = hdl::width_mask(bits);
  if (bits == 0) return 0;
  if (exhaustive) {
    constexpr u64 kPhi = 0x9e3779b97f4a7c15ULL;
    return (static_cast<u64>(k) * (2 * cycle + 1) + cycle * kPhi) & mask;
  }
  return mix64(derive_seed(seed, k, cycle)) & mask;
}

StimulusPlan make_plan(int input_bits, int max_input_bits, std::size_t cycles, u64 seed, std::size_t samples) {
  StimulusPlan p;
  p.bits = input_bits;
  p.cycles = std::max<std::size_t>(cycles, 1);
  p.seed = seed;
  if (input_bits <= max_input_bits && input_bits < 63) {
    p.exhaustive = true;
    p.count = std::size_t{1} << input_bits;
  } else {
    p.exhaustive = false;
    p.count = samples;
  }
  return p;
}

std::vector<u64> unpack(u64 vector, const std::vector<PortSpec>& ports) {
  std::vector<u64> out;
  int shift = 0;
  for (const auto& p : ports) {
    out.push_back(shift >= 64 ? 0 : (vector >> shift) & hdl::width_mask(p.width));
    shift += p.width;
  }
  return out;
}

namespace {

// Wide inputs draw each port independently so no bits stay constant.
void fill_lane_inputs(const StimulusPlan& plan, const std::vector<PortSpec>& ports, std::size_t base,
                      std::size_t lanes, std::size_t c, const std::vector<u64*>& in) {
  if (plan.bits <= 64) {
    for (std::size_t l = 0; l < lanes; ++l) {
      u64 v = plan.vector(base + l, c);
      int shift = 0;
      for (std::size_t i = 0; i < ports.size(); ++i) {
        in[i][l] = shift >= 64 ? 0 : (v >> shift) & hdl::width_mask(ports[i].width);
        shift += ports[i].width;
      }
    }
    return;
  }
  for (std::size_t l = 0; l < lanes; ++l) {
    for (std::size_t i = 0; i < ports.size(); ++i) {
      in[i][l] = mix64(derive_seed(plan.seed, base + l, c, i + 1)) & hdl::width_mask(ports[i].width);
    }
  }
}

}  // namespace

Stimulus stimulus_at(const StimulusPlan& plan, const std::vector<PortSpec>& ports, std::size_t k) {
  Stimulus s;
  s.ports = ports;
  std::vector<u64*> ptrs;
  for (std::size_t c = 0; c < plan.cycles; ++c) {
    s.vectors.emplace_back(ports.size());
    ptrs.clear();
    for (auto& v : s.vectors.back()) ptrs.push_back(&v);
    fill_lane_inputs(plan, ports, k, 1, c, ptrs);
  }
  return s;
}

BatchTrace run_plan(const Simulator& sim, const StimulusPlan& plan) {
  constexpr std::size_t kChunk = 256;
  BatchTrace t;
  t.outputs = sim.outputs();
  t.count = plan.count;
  t.cycles = plan.cycles;
  std::size_t nout = t.outputs.size();
  t.values.assign(plan.count * plan.cycles * nout, 0);
  const auto& ports = sim.inputs();
  for (std::size_t base = 0; base < plan.count; base += kChunk) {
    std::size_t lanes = std::min(kChunk, plan.count - base);
    sim.run_lanes(
        lanes, plan.cycles,
        [&](std::size_t c, const std::vector<u64*>& in) { fill_lane_inputs(plan, ports, base, lanes, c, in); },
        [&](std::size_t c, const std::vector<const u64*>& out) {
          for (std::size_t p = 0; p < nout; ++p) {
            for (std::size_t l = 0; l < lanes; ++l) t.values[((base + l) * plan.cycles + c) * nout + p] = out[p][l];
          }
        });
  }
  return t;
}

std::optional<std::size_t> first_difference(const BatchTrace& a, const BatchTrace& b) {
  if (a.outputs != b.outputs || a.count != b.count || a.cycles != b.cycles) {
    throw InterfaceMismatch("traces come from different interfaces or plans");
  }
  std::size_t stride = a.cycles * a.outputs.size();
  const auto& k = simd::active_kernels();
  for (std::size_t i = 0; i < a.count; ++i) {
    if (k.differs(a.values.data() + i * stride, b.values.data() + i * stride, stride)) return i;
  }
  return std::nullopt;
}

const char* to_string(EquivKind k) {
  switch (k) {
    case EquivKind::Equivalent: return "equivalent";
    case EquivKind::EquivalentSampled: return "equivalent-sampled";
    case EquivKind::Counterexample: return "counterexample";
  }
  return "?";
}

void check_same_interface(const Design& a, const Design& b) {
  const Module& ta = a.top_module();
  const Module& tb = b.top_module();
  auto same = [](const hdl::Port& x, const hdl::Port& y) {
    return x.dir == y.dir && x.width == y.width && x.name == y.name;
  };
  if (!std::equal(ta.ports.begin(), ta.ports.end(), tb.ports.begin(), tb.ports.end(), same)) {
    throw InterfaceMismatch(fmt::format("top modules '{}' and '{}' have different port lists", ta.name, tb.name));
  }
}

EquivResult exhaustive_equiv(const Design& a, const Design& b, int max_input_bits, std::size_t cycles) {
  check_same_interface(a, b);
  Simulator sa(a), sb(b);
  StimulusPlan plan = make_plan(sa.input_bits(), max_input_bits, cycles);
  auto diff = first_difference(run_plan(sa, plan), run_plan(sb, plan));
  EquivResult r;
  r.stimuli = plan.count;
  if (diff) {
    r.kind = EquivKind::Counterexample;
    r.counterexample = stimulus_at(plan, sa.inputs(), *diff);
  } else {
    r.kind = plan.exhaustive ? EquivKind::Equivalent : EquivKind::EquivalentSampled;
  }
  return r;
}

void write_trace_csv(std::ostream& os, const SimTrace& t) {
  os << "cycle,port,value\n";
  for (std::size_t c = 0; c < t.values.size(); ++c) {
    for (std::size_t p = 0; p < t.ports.size(); ++p) {
      os << c << ',' << t.ports[p].name << ",0x" << fmt::format("{:x}", t.values[c][p]) << '\n';
    }
  }
}

}  // namespace metahunt::sim
