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

#include "metahunt/hdl/validate.hpp"

#include <functional>
#include <map>
#include <set>

#include "metahunt/error.hpp"
#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/comb_graph.hpp"

namespace metahunt::hdl {

namespace {

[[noreturn]] void fail(const std::string& rule, const std::string& where, const std::string& msg) {
  throw ValidationError(rule, where, where + ": " + msg + " [" + rule + "]");
}

void check_expr(const Expr& e, const Module& m) {
  switch (e.kind) {
    case Expr::Kind::Const:
      if (e.width < 1 || e.width > 64) fail("const-width", m.name, "constant width " + std::to_string(e.width) + " outside [1, 64]");
      if ((e.value & ~width_mask(e.width)) != 0) fail("const-width", m.name, "constant value does not fit its width");
      break;
    case Expr::Kind::Ref:
      if (!m.declares(e.name)) fail("declared", m.name, "undeclared identifier '" + e.name + "'");
      break;
    case Expr::Kind::BitSelect: {
      auto s = m.signal(e.name);
      if (!s) fail("declared", m.name, "undeclared identifier '" + e.name + "'");
      if (e.lsb < 0 || e.msb < e.lsb || e.msb >= s->width) {
        fail("bit-select", m.name, "select [" + std::to_string(e.msb) + ":" + std::to_string(e.lsb) + "] out of range for '" + e.name + "'");
      }
      break;
    }
    case Expr::Kind::Concat:
      if (e.args.empty()) fail("concat-width", m.name, "empty concatenation");
      break;
    default:
      break;
  }
  for (const auto& a : e.args) check_expr(a, m);
  if (e.kind == Expr::Kind::Concat && expr_width(e, m) > 64) fail("concat-width", m.name, "concatenation wider than 64 bits");
  if ((e.kind == Expr::Kind::Binary && e.args.size() != 2) || (e.kind == Expr::Kind::Unary && e.args.size() != 1) ||
      (e.kind == Expr::Kind::Ternary && e.args.size() != 3)) {
    fail("declared", m.name, "malformed expression node");
  }
}

void check_body(const std::vector<Stmt>& body, const Module& m, bool sequential) {
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::Assign) {
      auto sig = m.signal(s.lhs);
      if (!sig) fail("declared", m.name, "undeclared assignment target '" + s.lhs + "'");
      if (sig->kind == SignalInfo::Kind::Input) fail("always-target", m.name, "always block assigns input '" + s.lhs + "'");
      if (!sig->is_reg) fail("always-target", m.name, "always block assigns wire '" + s.lhs + "'");
      if (s.nonblocking != sequential) {
        fail("blocking-style", m.name, std::string(sequential ? "blocking" : "nonblocking") + " assignment to '" + s.lhs + "' in " +
                                           (sequential ? "always @(posedge)" : "always @(*)"));
      }
      check_expr(s.rhs, m);
    } else {
      check_expr(s.cond, m);
      check_body(s.then_body, m, sequential);
      check_body(s.else_body, m, sequential);
    }
  }
}

void check_module(const Design& d, const Module& m) {
  std::set<std::string> names;
  for (const auto& p : m.ports) {
    if (!names.insert(p.name).second) fail("unique-signals", m.name, "duplicate declaration of '" + p.name + "'");
    if (p.width < 1 || p.width > 64) fail("width-range", m.name, "width of '" + p.name + "' outside [1, 64]");
    if (p.dir == Direction::Input && p.is_reg) fail("always-target", m.name, "input '" + p.name + "' declared reg");
  }
  for (const auto& n : m.nets) {
    if (!names.insert(n.name).second) fail("unique-signals", m.name, "duplicate declaration of '" + n.name + "'");
    if (n.width < 1 || n.width > 64) fail("width-range", m.name, "width of '" + n.name + "' outside [1, 64]");
  }

  std::map<std::string, std::size_t> driver;
  auto drive = [&](const std::string& sig, std::size_t item) {
    auto [it, fresh] = driver.emplace(sig, item);
    if (!fresh && it->second != item) fail("single-driver", m.name, "'" + sig + "' has more than one driver");
  };

  std::set<std::string> instance_names;
  for (std::size_t i = 0; i < m.items.size(); ++i) {
    const Item& it = m.items[i];
    switch (it.kind) {
      case Item::Kind::Assign: {
        auto sig = m.signal(it.lhs);
        if (!sig) fail("declared", m.name, "undeclared assignment target '" + it.lhs + "'");
        if (sig->kind == SignalInfo::Kind::Input) fail("assign-target", m.name, "continuous assign to input '" + it.lhs + "'");
        if (sig->is_reg) fail("assign-target", m.name, "continuous assign to reg '" + it.lhs + "'");
        check_expr(it.rhs, m);
        drive(it.lhs, i);
        break;
      }
      case Item::Kind::AlwaysComb:
      case Item::Kind::AlwaysFF: {
        bool seq = it.kind == Item::Kind::AlwaysFF;
        if (seq) {
          const Port* clk = m.port(it.clock);
          if (clk == nullptr || clk->dir != Direction::Input || clk->width != 1) {
            fail("clock-port", m.name, "clock '" + it.clock + "' is not a 1-bit input port");
          }
        }
        check_body(it.body, m, seq);
        std::set<std::string> assigned;
        collect_assigned(it.body, assigned);
        for (const auto& a : assigned) drive(a, i);
        break;
      }
      case Item::Kind::Instance: {
        if (!instance_names.insert(it.instance).second) fail("unique-signals", m.name, "duplicate instance name '" + it.instance + "'");
        const Module* sub = d.find(it.module);
        if (sub == nullptr) fail("instance-module", m.name, "instantiates unknown module '" + it.module + "'");
        std::set<std::string> bound;
        for (const auto& c : it.connections) {
          const Port* p = sub->port(c.port);
          if (p == nullptr) fail("instance-ports", m.name, "'" + it.module + "' has no port '" + c.port + "'");
          if (!bound.insert(c.port).second) fail("instance-ports", m.name, "port '" + c.port + "' connected twice");
          auto sig = m.signal(c.signal);
          if (!sig) fail("declared", m.name, "undeclared connection signal '" + c.signal + "'");
          if (sig->width != p->width) fail("instance-ports", m.name, "width mismatch on port '" + c.port + "' of " + it.instance);
          if (p->dir == Direction::Output) {
            if (sig->kind == SignalInfo::Kind::Input || sig->is_reg) {
              fail("instance-ports", m.name, "output port '" + c.port + "' must drive a wire");
            }
            drive(c.signal, i);
          }
        }
        if (bound.size() != sub->ports.size()) fail("instance-ports", m.name, "instance " + it.instance + " leaves ports unconnected");
        break;
      }
    }
  }
}

void check_instance_graph(const Design& d) {
  enum class Mark { White, Grey, Black };
  std::map<std::string, Mark> mark;
  std::function<void(const Module&)> visit = [&](const Module& m) {
    mark[m.name] = Mark::Grey;
    for (const auto& it : m.items) {
      if (it.kind != Item::Kind::Instance) continue;
      const Module* sub = d.find(it.module);
      if (sub == nullptr) continue;
      Mark mk = mark.count(sub->name) ? mark[sub->name] : Mark::White;
      if (mk == Mark::Grey) fail("acyclic-instances", m.name, "instantiation cycle through '" + sub->name + "'");
      if (mk == Mark::White) visit(*sub);
    }
    mark[m.name] = Mark::Black;
  };
  for (const auto& m : d.modules) {
    if (!mark.count(m.name)) visit(m);
  }
}

}  // namespace

void validate(const Design& d) {
  std::set<std::string> names;
  for (const auto& m : d.modules) {
    if (!names.insert(m.name).second) fail("unique-modules", m.name, "module defined twice");
  }
  if (d.find(d.top) == nullptr) fail("top-exists", d.top, "top module not found");
  for (const auto& m : d.modules) check_module(d, m);
  check_instance_graph(d);
  for (const auto& m : d.modules) {
    if (auto cycle = find_comb_cycle(build_comb_graph(d, m))) {
      std::string path;
      for (const auto& s : *cycle) path += s + " -> ";
      fail("comb-loop", m.name, "combinational loop " + path + cycle->front());
    }
  }
}

bool is_valid(const Design& d) {
  try {
    validate(d);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::vector<std::string> undriven_reads(const Design& d, const Module& m) {
  std::set<std::string> driven, read;
  for (const auto& p : m.ports) {
    if (p.dir == Direction::Input) driven.insert(p.name);
  }
  for (const auto& it : m.items) {
    auto dr = item_drives(it, d);
    driven.insert(dr.begin(), dr.end());
    auto rd = item_reads(it, d);
    read.insert(rd.begin(), rd.end());
  }
  for (const auto& p : m.ports) {
    if (p.dir == Direction::Output) read.insert(p.name);
  }
  std::vector<std::string> out;
  for (const auto& r : read) {
    if (!driven.count(r)) out.push_back(r);
  }
  return out;
}

}  // namespace metahunt::hdl
