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

// Tree-walking interpreter used as an independent oracle for the compiled
// simulator: map-based state, comb logic settled by fixpoint iteration.

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "metahunt/hdl/analysis.hpp"
#include "metahunt/hdl/ast.hpp"

namespace oracle {

using metahunt::hdl::BinaryOp;
using metahunt::hdl::Design;
using metahunt::hdl::Expr;
using metahunt::hdl::Item;
using metahunt::hdl::Module;
using metahunt::hdl::Stmt;
using metahunt::hdl::UnaryOp;
using u64 = std::uint64_t;

class Interp {
 public:
  explicit Interp(const Design& d) : d_(d) {
    const Module& top = d.top_module();
    for (const auto& p : top.ports) alias_[p.name] = p.name;
    bind(top, "");
  }

  // inputs[c] lists non-clock top inputs in port order; returns outputs per cycle.
  std::vector<std::vector<u64>> run(const std::vector<std::vector<u64>>& inputs) {
    const Module& top = d_.top_module();
    auto clocks = metahunt::hdl::clock_inputs(d_, top);
    std::vector<std::vector<u64>> out;
    for (const auto& vec : inputs) {
      std::size_t i = 0;
      for (const auto& p : top.ports) {
        if (p.dir == metahunt::hdl::Direction::Input && !clocks.count(p.name)) {
          env_[p.name] = vec.at(i++) & metahunt::hdl::width_mask(p.width);
        }
      }
      settle();
      std::vector<u64> o;
      for (const auto& p : top.ports) {
        if (p.dir == metahunt::hdl::Direction::Output) o.push_back(env_[p.name]);
      }
      out.push_back(o);
      clock();
    }
    return out;
  }

 private:
  struct Scoped {
    const Module* m;
    std::string prefix;
    const Item* item;
  };

  void bind(const Module& m, const std::string& prefix) {
    for (const auto& n : m.nets) alias_[prefix + n.name] = prefix + n.name;
    for (const auto& it : m.items) {
      if (it.kind == Item::Kind::Instance) {
        const Module& sub = *d_.find(it.module);
        std::string inner = prefix + it.instance + ".";
        for (const auto& c : it.connections) alias_[inner + c.port] = key(prefix, c.signal);
        bind(sub, inner);
      } else {
        items_.push_back(Scoped{&m, prefix, &it});
      }
    }
  }

  std::string key(const std::string& prefix, const std::string& name) const { return alias_.at(prefix + name); }

  int width_of(const Scoped& s, const std::string& name) const { return s.m->signal(name)->width; }

  u64 eval(const Expr& e, const Scoped& s, const std::map<std::string, u64>& locals) const {
    auto read = [&](const std::string& n) -> u64 {
      auto it = locals.find(n);
      if (it != locals.end()) return it->second;
      auto jt = env_.find(key(s.prefix, n));
      return jt == env_.end() ? 0 : jt->second;
    };
    int w = metahunt::hdl::expr_width(e, *s.m);
    u64 mask = metahunt::hdl::width_mask(w);
    switch (e.kind) {
      case Expr::Kind::Const: return e.value & mask;
      case Expr::Kind::Ref: return read(e.name);
      case Expr::Kind::BitSelect: return (read(e.name) >> e.lsb) & mask;
      case Expr::Kind::Concat: {
        u64 v = 0;
        for (const auto& a : e.args) {
          int aw = metahunt::hdl::expr_width(a, *s.m);
          v = (aw >= 64 ? 0 : v << aw) | eval(a, s, locals);
        }
        return v;
      }
      case Expr::Kind::Unary: {
        u64 a = eval(e.args[0], s, locals);
        switch (e.unary_op) {
          case UnaryOp::Not: return ~a & mask;
          case UnaryOp::Neg: return (~a + 1) & mask;
          case UnaryOp::LogicalNot: return a == 0 ? 1 : 0;
          default: return a;
        }
      }
      case Expr::Kind::Binary: {
        u64 a = eval(e.args[0], s, locals);
        u64 b = eval(e.args[1], s, locals);
        switch (e.binary_op) {
          case BinaryOp::Add: return (a + b) & mask;
          case BinaryOp::Sub: return (a + (~b + 1)) & mask;
          case BinaryOp::And: return a & b;
          case BinaryOp::Or: return a | b;
          case BinaryOp::Xor: return a ^ b;
          case BinaryOp::Shl: {
            u64 v = a;
            for (u64 k = 0; k < b && v != 0; ++k) v = (v << 1) & mask;
            return v;
          }
          case BinaryOp::Shr: {
            u64 v = a;
            for (u64 k = 0; k < b && v != 0; ++k) v >>= 1;
            return v;
          }
          case BinaryOp::Eq: return a == b;
          case BinaryOp::Ne: return a != b;
          case BinaryOp::Lt: return a < b;
        }
        throw std::logic_error("op");
      }
      case Expr::Kind::Ternary:
        return eval(e.args[0], s, locals) != 0 ? eval(e.args[1], s, locals) : eval(e.args[2], s, locals);
    }
    throw std::logic_error("kind");
  }

  void exec(const std::vector<Stmt>& body, const Scoped& s, std::map<std::string, u64>& locals) const {
    for (const auto& st : body) {
      if (st.kind == Stmt::Kind::Assign) {
        locals[st.lhs] = eval(st.rhs, s, locals) & metahunt::hdl::width_mask(width_of(s, st.lhs));
      } else if (eval(st.cond, s, locals) != 0) {
        exec(st.then_body, s, locals);
      } else {
        exec(st.else_body, s, locals);
      }
    }
  }

  void settle() {
    std::map<std::string, u64> start = env_;
    for (int iter = 0; iter < 10000; ++iter) {
      bool changed = false;
      for (const auto& s : items_) {
        const Item& it = *s.item;
        if (it.kind == Item::Kind::Assign) {
          u64 v = eval(it.rhs, s, {}) & metahunt::hdl::width_mask(width_of(s, it.lhs));
          std::string k = key(s.prefix, it.lhs);
          if (env_[k] != v) changed = true;
          env_[k] = v;
        } else if (it.kind == Item::Kind::AlwaysComb) {
          std::set<std::string> targets;
          metahunt::hdl::collect_assigned(it.body, targets);
          std::map<std::string, u64> locals;
          for (const auto& t : targets) locals[t] = start[key(s.prefix, t)];
          exec(it.body, s, locals);
          for (const auto& [n, v] : locals) {
            std::string k = key(s.prefix, n);
            if (env_[k] != v) changed = true;
            env_[k] = v;
          }
        }
      }
      if (!changed) return;
    }
    throw std::runtime_error("no fixpoint");
  }

  void clock() {
    std::map<std::string, u64> next;
    for (const auto& s : items_) {
      if (s.item->kind != Item::Kind::AlwaysFF) continue;
      std::set<std::string> targets;
      metahunt::hdl::collect_assigned(s.item->body, targets);
      std::map<std::string, u64> locals;
      for (const auto& t : targets) locals[t] = env_[key(s.prefix, t)];
      // Nonblocking: reads see pre-edge values.
      exec_nb(s.item->body, s, locals);
      for (const auto& [n, v] : locals) next[key(s.prefix, n)] = v;
    }
    for (const auto& [k, v] : next) env_[k] = v;
  }

  void exec_nb(const std::vector<Stmt>& body, const Scoped& s, std::map<std::string, u64>& pending) const {
    for (const auto& st : body) {
      if (st.kind == Stmt::Kind::Assign) {
        pending[st.lhs] = eval(st.rhs, s, {}) & metahunt::hdl::width_mask(width_of(s, st.lhs));
      } else if (eval(st.cond, s, {}) != 0) {
        exec_nb(st.then_body, s, pending);
      } else {
        exec_nb(st.else_body, s, pending);
      }
    }
  }

  const Design& d_;
  std::map<std::string, std::string> alias_;
  std::vector<Scoped> items_;
  std::map<std::string, u64> env_;
};

}  // namespace oracle
