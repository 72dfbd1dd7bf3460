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

#include "metahunt/hdl/analysis.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "metahunt/error.hpp"
#include "metahunt/hdl/comb_graph.hpp"

namespace metahunt::hdl {

int expr_width(const Expr& e, const Module& m) {
  switch (e.kind) {
    case Expr::Kind::Const:
      return e.width;
    case Expr::Kind::Ref: {
      auto s = m.signal(e.name);
      if (!s) throw WidthError("undeclared identifier '" + e.name + "' in module " + m.name);
      return s->width;
    }
    case Expr::Kind::BitSelect:
      return e.msb - e.lsb + 1;
    case Expr::Kind::Concat: {
      int w = 0;
      for (const auto& a : e.args) w += expr_width(a, m);
      return w;
    }
    case Expr::Kind::Unary:
      if (e.unary_op == UnaryOp::LogicalNot) return 1;
      return expr_width(e.args[0], m);
    case Expr::Kind::Binary:
      switch (e.binary_op) {
        case BinaryOp::Eq:
        case BinaryOp::Ne:
        case BinaryOp::Lt:
          return 1;
        case BinaryOp::Shl:
        case BinaryOp::Shr:
          return expr_width(e.args[0], m);
        default:
          return std::max(expr_width(e.args[0], m), expr_width(e.args[1], m));
      }
    case Expr::Kind::Ternary:
      return std::max(expr_width(e.args[1], m), expr_width(e.args[2], m));
  }
  throw WidthError("unknown expression kind");
}

void collect_reads(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Ref || e.kind == Expr::Kind::BitSelect) out.insert(e.name);
  for (const auto& a : e.args) collect_reads(a, out);
}

void collect_reads(const std::vector<Stmt>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::Assign) {
      collect_reads(s.rhs, out);
    } else {
      collect_reads(s.cond, out);
      collect_reads(s.then_body, out);
      collect_reads(s.else_body, out);
    }
  }
}

void collect_assigned(const std::vector<Stmt>& body, std::set<std::string>& out) {
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::Assign) {
      out.insert(s.lhs);
    } else {
      collect_assigned(s.then_body, out);
      collect_assigned(s.else_body, out);
    }
  }
}

std::set<std::string> item_reads(const Item& item, const Design& d) {
  std::set<std::string> out;
  switch (item.kind) {
    case Item::Kind::Assign:
      collect_reads(item.rhs, out);
      break;
    case Item::Kind::AlwaysComb:
      collect_reads(item.body, out);
      break;
    case Item::Kind::AlwaysFF:
      collect_reads(item.body, out);
      out.insert(item.clock);
      break;
    case Item::Kind::Instance: {
      const Module* sub = d.find(item.module);
      for (const auto& c : item.connections) {
        const Port* p = sub ? sub->port(c.port) : nullptr;
        if (p == nullptr || p->dir == Direction::Input) out.insert(c.signal);
      }
      break;
    }
  }
  return out;
}

std::set<std::string> item_drives(const Item& item, const Design& d) {
  std::set<std::string> out;
  switch (item.kind) {
    case Item::Kind::Assign:
      out.insert(item.lhs);
      break;
    case Item::Kind::AlwaysComb:
    case Item::Kind::AlwaysFF:
      collect_assigned(item.body, out);
      break;
    case Item::Kind::Instance: {
      const Module* sub = d.find(item.module);
      for (const auto& c : item.connections) {
        const Port* p = sub ? sub->port(c.port) : nullptr;
        if (p != nullptr && p->dir == Direction::Output) out.insert(c.signal);
      }
      break;
    }
  }
  return out;
}

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& a : e.args) n += node_count(a);
  return n;
}

namespace {

std::size_t body_nodes(const std::vector<Stmt>& body) {
  std::size_t n = 0;
  for (const auto& s : body) {
    n += 1;
    if (s.kind == Stmt::Kind::Assign) {
      n += node_count(s.rhs);
    } else {
      n += node_count(s.cond) + body_nodes(s.then_body) + body_nodes(s.else_body);
    }
  }
  return n;
}

std::size_t body_statements(const std::vector<Stmt>& body) {
  std::size_t n = 0;
  for (const auto& s : body) {
    n += 1;
    if (s.kind == Stmt::Kind::If) n += body_statements(s.then_body) + body_statements(s.else_body);
  }
  return n;
}

int body_ternary_depth(const std::vector<Stmt>& body) {
  int depth = 0;
  for_each_expr(body, [&](const Expr& e) { depth = std::max(depth, ternary_depth(e)); });
  return depth;
}

}  // namespace

std::size_t node_count(const Module& m) {
  std::size_t n = 1 + m.ports.size() + m.nets.size();
  for (const auto& it : m.items) {
    n += 1;
    switch (it.kind) {
      case Item::Kind::Assign: n += node_count(it.rhs); break;
      case Item::Kind::AlwaysComb:
      case Item::Kind::AlwaysFF: n += body_nodes(it.body); break;
      case Item::Kind::Instance: n += it.connections.size(); break;
    }
  }
  return n;
}

std::size_t node_count(const Design& d) {
  std::size_t n = 0;
  for (const auto& m : d.modules) n += node_count(m);
  return n;
}

std::size_t statement_count(const Module& m) {
  std::size_t n = 0;
  for (const auto& it : m.items) {
    n += 1;
    if (it.kind == Item::Kind::AlwaysComb || it.kind == Item::Kind::AlwaysFF) n += body_statements(it.body);
  }
  return n;
}

std::size_t statement_count(const Design& d) {
  std::size_t n = 0;
  for (const auto& m : d.modules) n += statement_count(m);
  return n;
}

int ternary_depth(const Expr& e) {
  int child = 0;
  for (const auto& a : e.args) child = std::max(child, ternary_depth(a));
  return child + (e.kind == Expr::Kind::Ternary ? 1 : 0);
}

int max_ternary_depth(const Design& d) {
  int depth = 0;
  for (const auto& m : d.modules) {
    for (const auto& it : m.items) {
      if (it.kind == Item::Kind::Assign) {
        depth = std::max(depth, ternary_depth(it.rhs));
      } else if (it.kind != Item::Kind::Instance) {
        depth = std::max(depth, body_ternary_depth(it.body));
      }
    }
  }
  return depth;
}

std::set<std::string> clock_inputs(const Design& d, const Module& m) {
  std::set<std::string> out;
  for (const auto& it : m.items) {
    if (it.kind == Item::Kind::AlwaysFF) out.insert(it.clock);
    if (it.kind != Item::Kind::Instance) continue;
    const Module* sub = d.find(it.module);
    if (sub == nullptr || sub == &m) continue;
    auto inner = clock_inputs(d, *sub);
    for (const auto& c : it.connections) {
      if (inner.count(c.port)) out.insert(c.signal);
    }
  }
  std::erase_if(out, [&](const std::string& n) {
    const Port* p = m.port(n);
    return p == nullptr || p->dir != Direction::Input;
  });
  return out;
}

int stimulus_width(const Design& d) {
  const Module& top = d.top_module();
  auto clocks = clock_inputs(d, top);
  int w = 0;
  for (const auto& p : top.ports) {
    if (p.dir == Direction::Input && !clocks.count(p.name)) w += p.width;
  }
  return w;
}

std::set<std::string> comb_fanout(const Design& d, const Module& m, std::size_t item_index) {
  CombGraph g = build_comb_graph(d, m);
  std::set<std::string> seen = item_drives(m.items.at(item_index), d);
  std::deque<std::string> work(seen.begin(), seen.end());
  while (!work.empty()) {
    std::string s = work.front();
    work.pop_front();
    auto it = g.users.find(s);
    if (it == g.users.end()) continue;
    for (const auto& u : it->second) {
      if (seen.insert(u).second) work.push_back(u);
    }
  }
  return seen;
}

}  // namespace metahunt::hdl
