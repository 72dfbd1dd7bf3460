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

#include "metahunt/hdl/printer.hpp"

#include <map>
#include <sstream>

namespace metahunt::hdl {

namespace {

void print_expr(std::ostringstream& os, const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Const:
      if (e.width == 1) {
        os << "1'b" << (e.value & 1);
      } else {
        os << e.width << "'d" << e.value;
      }
      return;
    case Expr::Kind::Ref:
      os << e.name;
      return;
    case Expr::Kind::BitSelect:
      os << e.name << '[' << e.msb;
      if (e.lsb != e.msb) os << ':' << e.lsb;
      os << ']';
      return;
    case Expr::Kind::Concat:
      os << '{';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) os << ", ";
        print_expr(os, e.args[i]);
      }
      os << '}';
      return;
    case Expr::Kind::Unary:
      if (e.unary_op == UnaryOp::Signed || e.unary_op == UnaryOp::Unsigned) {
        os << to_string(e.unary_op) << '(';
        print_expr(os, e.args[0]);
        os << ')';
      } else {
        os << '(' << to_string(e.unary_op);
        print_expr(os, e.args[0]);
        os << ')';
      }
      return;
    case Expr::Kind::Binary:
      os << '(';
      print_expr(os, e.args[0]);
      os << ' ' << to_string(e.binary_op) << ' ';
      print_expr(os, e.args[1]);
      os << ')';
      return;
    case Expr::Kind::Ternary:
      os << '(';
      print_expr(os, e.args[0]);
      os << " ? ";
      print_expr(os, e.args[1]);
      os << " : ";
      print_expr(os, e.args[2]);
      os << ')';
      return;
  }
}

void indent(std::ostringstream& os, int level) {
  for (int i = 0; i < level; ++i) os << "  ";
}

void print_body(std::ostringstream& os, const std::vector<Stmt>& body, int level) {
  for (const auto& s : body) {
    indent(os, level);
    if (s.kind == Stmt::Kind::Assign) {
      os << s.lhs << (s.nonblocking ? " <= " : " = ");
      print_expr(os, s.rhs);
      os << ";\n";
      continue;
    }
    os << "if (";
    print_expr(os, s.cond);
    os << ") begin\n";
    print_body(os, s.then_body, level + 1);
    indent(os, level);
    if (s.else_body.empty()) {
      os << "end\n";
    } else {
      os << "end else begin\n";
      print_body(os, s.else_body, level + 1);
      indent(os, level);
      os << "end\n";
    }
  }
}

void print_range(std::ostringstream& os, int width) {
  if (width > 1) os << '[' << width - 1 << ":0] ";
}

void print_module(std::ostringstream& os, const Module& m) {
  os << "module " << m.name << '(';
  if (m.ports.empty()) {
    os << ");\n";
  } else {
    os << '\n';
    for (std::size_t i = 0; i < m.ports.size(); ++i) {
      const Port& p = m.ports[i];
      os << "  " << (p.dir == Direction::Input ? "input " : "output ");
      if (p.is_reg) os << "reg ";
      print_range(os, p.width);
      os << p.name << (i + 1 < m.ports.size() ? ",\n" : "\n");
    }
    os << ");\n";
  }
  for (const auto& n : m.nets) {
    os << "  " << (n.is_reg ? "reg " : "wire ");
    print_range(os, n.width);
    os << n.name << ";\n";
  }
  for (const auto& it : m.items) {
    switch (it.kind) {
      case Item::Kind::Assign:
        os << "  assign " << it.lhs << " = ";
        print_expr(os, it.rhs);
        os << ";\n";
        break;
      case Item::Kind::AlwaysComb:
        os << "  always @(*) begin\n";
        print_body(os, it.body, 2);
        os << "  end\n";
        break;
      case Item::Kind::AlwaysFF:
        os << "  always @(posedge " << it.clock << ") begin\n";
        print_body(os, it.body, 2);
        os << "  end\n";
        break;
      case Item::Kind::Instance:
        os << "  " << it.module << ' ' << it.instance << " (";
        for (std::size_t i = 0; i < it.connections.size(); ++i) {
          if (i) os << ", ";
          os << '.' << it.connections[i].port << '(' << it.connections[i].signal << ')';
        }
        os << ");\n";
        break;
    }
  }
  os << "endmodule\n";
}

}  // namespace

std::string print(const Expr& e) {
  std::ostringstream os;
  print_expr(os, e);
  return os.str();
}

std::string print(const Module& m) {
  std::ostringstream os;
  print_module(os, m);
  return os.str();
}

std::string print(const Design& d) {
  std::ostringstream os;
  for (std::size_t i = 0; i < d.modules.size(); ++i) {
    if (i) os << '\n';
    print_module(os, d.modules[i]);
  }
  return os.str();
}

std::vector<SourceFile> print_files(const Design& d, const std::string& main_name) {
  const Module* top = d.find(d.top);
  std::string main_file = top != nullptr && !top->origin.file.empty() ? top->origin.file : main_name;
  auto file_of = [&](const Module& m) { return m.origin.file.empty() ? main_file : m.origin.file; };

  std::vector<std::string> order;
  std::map<std::string, std::ostringstream> bodies;
  for (const auto& m : d.modules) {
    std::string f = file_of(m);
    if (!bodies.count(f)) order.push_back(f);
    auto& os = bodies[f];
    if (os.tellp() > 0) os << '\n';
    print_module(os, m);
  }

  std::vector<SourceFile> out;
  std::ostringstream main_text;
  for (const auto& f : order) {
    if (f != main_file) main_text << "`include \"" << f << "\"\n";
  }
  if (main_text.tellp() > 0) main_text << '\n';
  main_text << bodies[main_file].str();
  out.push_back(SourceFile{main_file, main_text.str()});
  for (const auto& f : order) {
    if (f != main_file) out.push_back(SourceFile{f, bodies[f].str()});
  }
  return out;
}

}  // namespace metahunt::hdl
