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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace metahunt::hdl {

// Byte range into the text a node was parsed from. Spans never participate
// in structural equality.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const Span&, const Span&) { return true; }
};

// Where a module came from: source file plus span. Like Span, provenance is
// ignored by structural equality.
struct Origin {
  std::string file;
  Span span;

  friend bool operator==(const Origin&, const Origin&) { return true; }
};

enum class UnaryOp : std::uint8_t { Not, Neg, LogicalNot, Signed, Unsigned };
enum class BinaryOp : std::uint8_t { Add, Sub, And, Or, Xor, Shl, Shr, Eq, Ne, Lt };

const char* to_string(UnaryOp op);
const char* to_string(BinaryOp op);

struct Expr {
  enum class Kind : std::uint8_t { Const, Ref, BitSelect, Concat, Unary, Binary, Ternary };

  Kind kind = Kind::Const;
  int width = 0;            // Const
  std::uint64_t value = 0;  // Const
  std::string name;         // Ref, BitSelect
  int msb = 0;              // BitSelect
  int lsb = 0;              // BitSelect
  UnaryOp unary_op = UnaryOp::Not;
  BinaryOp binary_op = BinaryOp::Add;
  std::vector<Expr> args;   // Concat (msb first), Unary (1), Binary (2), Ternary (cond, then, else)

  bool operator==(const Expr&) const = default;

  static Expr constant(int width, std::uint64_t value);
  static Expr ref(std::string name);
  static Expr select(std::string name, int msb, int lsb);
  static Expr concat(std::vector<Expr> parts);
  static Expr unary(UnaryOp op, Expr arg);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr ternary(Expr cond, Expr then_value, Expr else_value);
};

struct Stmt {
  enum class Kind : std::uint8_t { Assign, If };

  Kind kind = Kind::Assign;
  std::string lhs;          // Assign
  Expr rhs;                 // Assign
  bool nonblocking = false; // Assign
  Expr cond;                // If
  std::vector<Stmt> then_body;
  std::vector<Stmt> else_body;
  Span span;

  bool operator==(const Stmt&) const = default;

  static Stmt assign(std::string lhs, Expr rhs, bool nonblocking);
  static Stmt if_else(Expr cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body = {});
};

struct Connection {
  std::string port;
  std::string signal;

  bool operator==(const Connection&) const = default;
};

struct Item {
  enum class Kind : std::uint8_t { Assign, AlwaysComb, AlwaysFF, Instance };

  Kind kind = Kind::Assign;
  std::string lhs;                      // Assign
  Expr rhs;                             // Assign
  std::string clock;                    // AlwaysFF
  std::vector<Stmt> body;               // AlwaysComb, AlwaysFF
  std::string module;                   // Instance
  std::string instance;                 // Instance
  std::vector<Connection> connections;  // Instance
  Span span;

  bool operator==(const Item&) const = default;

  static Item assign(std::string lhs, Expr rhs);
  static Item always_comb(std::vector<Stmt> body);
  static Item always_ff(std::string clock, std::vector<Stmt> body);
  static Item instance_of(std::string module, std::string instance, std::vector<Connection> connections);
};

enum class Direction : std::uint8_t { Input, Output };

struct Port {
  Direction dir = Direction::Input;
  bool is_reg = false;
  int width = 1;
  std::string name;

  bool operator==(const Port&) const = default;
};

struct Net {
  bool is_reg = false;
  int width = 1;
  std::string name;

  bool operator==(const Net&) const = default;
};

// Resolved view of one declared signal.
struct SignalInfo {
  enum class Kind : std::uint8_t { Input, Output, Net };
  Kind kind = Kind::Net;
  bool is_reg = false;
  int width = 1;
};

struct Module {
  std::string name;
  std::vector<Port> ports;
  std::vector<Net> nets;
  std::vector<Item> items;
  Origin origin;

  bool operator==(const Module&) const = default;

  std::optional<SignalInfo> signal(const std::string& name) const;
  const Port* port(const std::string& name) const;
  Port* port(const std::string& name);
  Net* net(const std::string& name);
  bool declares(const std::string& name) const { return signal(name).has_value(); }
  // Flip a declared signal between wire and reg (ports and nets alike).
  void set_reg(const std::string& name, bool is_reg);
};

struct Design {
  std::vector<Module> modules;
  std::string top;

  bool operator==(const Design&) const = default;

  const Module* find(const std::string& name) const;
  Module* find(const std::string& name);
  const Module& top_module() const;
  Module& top_module();
};

}  // namespace metahunt::hdl
