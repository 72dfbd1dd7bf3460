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

#include "metahunt/hdl/ast.hpp"

#include "metahunt/error.hpp"

namespace metahunt::hdl {

const char* to_string(UnaryOp op) {
  switch (op) {
    case UnaryOp::Not: return "~";
    case UnaryOp::Neg: return "-";
    case UnaryOp::LogicalNot: return "!";
    case UnaryOp::Signed: return "$signed";
    case UnaryOp::Unsigned: return "$unsigned";
  }
  return "?";
}

const char* to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::And: return "&";
    case BinaryOp::Or: return "|";
    case BinaryOp::Xor: return "^";
    case BinaryOp::Shl: return "<<";
    case BinaryOp::Shr: return ">>";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
  }
  return "?";
}

Expr Expr::constant(int width, std::uint64_t value) {
  Expr e;
  e.kind = Kind::Const;
  e.width = width;
  e.value = value;
  return e;
}

Expr Expr::ref(std::string name) {
  Expr e;
  e.kind = Kind::Ref;
  e.name = std::move(name);
  return e;
}

Expr Expr::select(std::string name, int msb, int lsb) {
  Expr e;
  e.kind = Kind::BitSelect;
  e.name = std::move(name);
  e.msb = msb;
  e.lsb = lsb;
  return e;
}

Expr Expr::concat(std::vector<Expr> parts) {
  Expr e;
  e.kind = Kind::Concat;
  e.args = std::move(parts);
  return e;
}

Expr Expr::unary(UnaryOp op, Expr arg) {
  Expr e;
  e.kind = Kind::Unary;
  e.unary_op = op;
  e.args.push_back(std::move(arg));
  return e;
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::Binary;
  e.binary_op = op;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

Expr Expr::ternary(Expr cond, Expr then_value, Expr else_value) {
  Expr e;
  e.kind = Kind::Ternary;
  e.args.push_back(std::move(cond));
  e.args.push_back(std::move(then_value));
  e.args.push_back(std::move(else_value));
  return e;
}

Stmt Stmt::assign(std::string lhs, Expr rhs, bool nonblocking) {
  Stmt s;
  s.kind = Kind::Assign;
  s.lhs = std::move(lhs);
  s.rhs = std::move(rhs);
  s.nonblocking = nonblocking;
  return s;
}

Stmt Stmt::if_else(Expr cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body) {
  Stmt s;
  s.kind = Kind::If;
  s.cond = std::move(cond);
  s.then_body = std::move(then_body);
  s.else_body = std::move(else_body);
  return s;
}

Item Item::assign(std::string lhs, Expr rhs) {
  Item it;
  it.kind = Kind::Assign;
  it.lhs = std::move(lhs);
  it.rhs = std::move(rhs);
  return it;
}

Item Item::always_comb(std::vector<Stmt> body) {
  Item it;
  it.kind = Kind::AlwaysComb;
  it.body = std::move(body);
  return it;
}

Item Item::always_ff(std::string clock, std::vector<Stmt> body) {
  Item it;
  it.kind = Kind::AlwaysFF;
  it.clock = std::move(clock);
  it.body = std::move(body);
  return it;
}

Item Item::instance_of(std::string module, std::string instance, std::vector<Connection> connections) {
  Item it;
  it.kind = Kind::Instance;
  it.module = std::move(module);
  it.instance = std::move(instance);
  it.connections = std::move(connections);
  return it;
}

std::optional<SignalInfo> Module::signal(const std::string& name) const {
  for (const auto& p : ports) {
    if (p.name == name) {
      return SignalInfo{p.dir == Direction::Input ? SignalInfo::Kind::Input : SignalInfo::Kind::Output,
                        p.is_reg, p.width};
    }
  }
  for (const auto& n : nets) {
    if (n.name == name) return SignalInfo{SignalInfo::Kind::Net, n.is_reg, n.width};
  }
  return std::nullopt;
}

const Port* Module::port(const std::string& name) const {
  for (const auto& p : ports) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Port* Module::port(const std::string& name) {
  for (auto& p : ports) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

Net* Module::net(const std::string& name) {
  for (auto& n : nets) {
    if (n.name == name) return &n;
  }
  return nullptr;
}

void Module::set_reg(const std::string& name, bool is_reg) {
  if (auto* p = port(name)) {
    p->is_reg = is_reg;
  } else if (auto* n = net(name)) {
    n->is_reg = is_reg;
  }
}

const Module* Design::find(const std::string& name) const {
  for (const auto& m : modules) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

Module* Design::find(const std::string& name) {
  for (auto& m : modules) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

const Module& Design::top_module() const {
  const Module* m = find(top);
  if (m == nullptr) throw ElaborationError("top module '" + top + "' not found");
  return *m;
}

Module& Design::top_module() {
  Module* m = find(top);
  if (m == nullptr) throw ElaborationError("top module '" + top + "' not found");
  return *m;
}

}  // namespace metahunt::hdl
