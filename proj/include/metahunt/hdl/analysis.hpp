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
#include <set>
#include <string>
#include <vector>

#include "metahunt/hdl/ast.hpp"

namespace metahunt::hdl {

// Self-determined width of `e` in the context of module `m`. Operands are
// zero-extended to the widest operand; shifts keep the left operand's width;
// comparisons and `!` are 1 bit. Throws WidthError on undeclared names.
int expr_width(const Expr& e, const Module& m);

inline std::uint64_t width_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

void collect_reads(const Expr& e, std::set<std::string>& out);
void collect_reads(const std::vector<Stmt>& body, std::set<std::string>& out);
void collect_assigned(const std::vector<Stmt>& body, std::set<std::string>& out);

// Signals an item reads (including instance inputs and the FF clock).
std::set<std::string> item_reads(const Item& item, const Design& d);
// Signals an item drives (assign target, always-block regs, instance outputs).
std::set<std::string> item_drives(const Item& item, const Design& d);

// Count of AST nodes (declarations, items, statements, expression nodes).
std::size_t node_count(const Expr& e);
std::size_t node_count(const Module& m);
std::size_t node_count(const Design& d);

// Items plus statements nested inside always blocks.
std::size_t statement_count(const Module& m);
std::size_t statement_count(const Design& d);

// Deepest chain of nested ternaries in `e` (0 when there is none).
int ternary_depth(const Expr& e);
int max_ternary_depth(const Design& d);

// Total bit width of the top module's non-clock inputs.
int stimulus_width(const Design& d);
// Inputs of `m` used as an always_ff clock, directly or through instances.
std::set<std::string> clock_inputs(const Design& d, const Module& m);

// Signals of `m` whose value combinationally depends on what item
// `item_index` drives (transitively, through assigns, comb blocks and
// instances), including the item's own driven signals.
std::set<std::string> comb_fanout(const Design& d, const Module& m, std::size_t item_index);

// Visit every expression in a statement list / item (pre-order, mutable).
template <typename Fn>
void for_each_expr(Expr& e, Fn&& fn) {
  fn(e);
  for (auto& a : e.args) for_each_expr(a, fn);
}

template <typename Fn>
void for_each_expr(std::vector<Stmt>& body, Fn&& fn) {
  for (auto& s : body) {
    if (s.kind == Stmt::Kind::Assign) {
      for_each_expr(s.rhs, fn);
    } else {
      for_each_expr(s.cond, fn);
      for_each_expr(s.then_body, fn);
      for_each_expr(s.else_body, fn);
    }
  }
}

template <typename Fn>
void for_each_expr(Item& item, Fn&& fn) {
  if (item.kind == Item::Kind::Assign) {
    for_each_expr(item.rhs, fn);
  } else if (item.kind != Item::Kind::Instance) {
    for_each_expr(item.body, fn);
  }
}

template <typename Fn>
void for_each_expr(const Expr& e, Fn&& fn) {
  fn(e);
  for (const auto& a : e.args) for_each_expr(a, fn);
}

template <typename Fn>
void for_each_expr(const std::vector<Stmt>& body, Fn&& fn) {
  for (const auto& s : body) {
    if (s.kind == Stmt::Kind::Assign) {
      for_each_expr(s.rhs, fn);
    } else {
      for_each_expr(s.cond, fn);
      for_each_expr(s.then_body, fn);
      for_each_expr(s.else_body, fn);
    }
  }
}

template <typename Fn>
void for_each_expr(const Item& item, Fn&& fn) {
  if (item.kind == Item::Kind::Assign) {
    for_each_expr(item.rhs, fn);
  } else if (item.kind != Item::Kind::Instance) {
    for_each_expr(item.body, fn);
  }
}

}  // namespace metahunt::hdl
