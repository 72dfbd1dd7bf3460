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

#include "metahunt/hdl/parser.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "metahunt/hdl/validate.hpp"

namespace metahunt::hdl {

namespace {

constexpr int kMaxNesting = 200;

enum class Tok {
  End,
  Ident,
  SysIdent,
  Number,
  String,
  Directive,
  Punct,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t offset = 0;
  // Number payload.
  int width = 0;
  std::uint64_t value = 0;
};

const std::set<std::string> kKeywords = {"module", "endmodule", "input", "output", "wire", "reg", "assign",
                                         "always", "posedge", "begin", "end", "if", "else"};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.offset = pos_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' || src_[pos_] == '$')) ++pos_;
        t.text = std::string(src_.substr(t.offset, pos_ - t.offset));
      } else if (c == '$') {
        t.kind = Tok::SysIdent;
        ++pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        t.text = std::string(src_.substr(t.offset, pos_ - t.offset));
      } else if (c == '`') {
        t.kind = Tok::Directive;
        ++pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
        t.text = std::string(src_.substr(t.offset, pos_ - t.offset));
      } else if (c == '"') {
        t.kind = Tok::String;
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < src_.size() && src_[pos_] != '"' && src_[pos_] != '\n') ++pos_;
        if (pos_ >= src_.size() || src_[pos_] != '"') error(t.offset, "closing '\"'", "unterminated string");
        t.text = std::string(src_.substr(start, pos_ - start));
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
        lex_number(t);
      } else {
        t.kind = Tok::Punct;
        static const char* two[] = {"<<", ">>", "==", "!=", "<="};
        for (const char* op : two) {
          if (src_.substr(pos_, 2) == op) {
            t.text = op;
            pos_ += 2;
            break;
          }
        }
        if (t.text.empty()) {
          static const std::string singles = "()[]{};:,.=@*#+-&|^~!<>?";
          if (singles.find(c) == std::string::npos) error(pos_, "token", std::string("unexpected character '") + printable(c) + "'");
          t.text = std::string(1, c);
          ++pos_;
        }
      }
      out.push_back(std::move(t));
    }
  }

  [[noreturn]] void error(std::size_t offset, const std::string& expected, const std::string& msg) const {
    throw SyntaxError(position(src_, offset), expected, msg);
  }

  static SourcePos position(std::string_view src, std::size_t offset) {
    SourcePos p;
    p.offset = offset;
    for (std::size_t i = 0; i < offset && i < src.size(); ++i) {
      if (src[i] == '\n') {
        ++p.line;
        p.column = 1;
      } else {
        ++p.column;
      }
    }
    return p;
  }

 private:
  static std::string printable(char c) {
    if (std::isprint(static_cast<unsigned char>(c))) return std::string(1, c);
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
    return buf;
  }

  void skip_space() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (src_.substr(pos_, 2) == "//") {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else if (src_.substr(pos_, 2) == "/*") {
        std::size_t start = pos_;
        std::size_t close = src_.find("*/", pos_ + 2);
        if (close == std::string_view::npos) error(start, "'*/'", "unterminated block comment");
        pos_ = close + 2;
      } else {
        return;
      }
    }
  }

  static int digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return 99;
  }

  std::uint64_t digits(int base, std::size_t start) {
    std::uint64_t v = 0;
    bool any = false;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '_') {
        ++pos_;
        continue;
      }
      int d = digit_value(c);
      if (d >= base) {
        if (std::isalnum(static_cast<unsigned char>(c))) error(pos_, "digit", std::string("invalid digit '") + c + "' in number");
        break;
      }
      if (v > (~std::uint64_t{0} - static_cast<std::uint64_t>(d)) / static_cast<std::uint64_t>(base)) {
        error(start, "number", "numeric literal exceeds 64 bits");
      }
      v = v * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(d);
      any = true;
      ++pos_;
    }
    if (!any) error(pos_, "digit", "missing digits in number");
    return v;
  }

  void lex_number(Token& t) {
    t.kind = Tok::Number;
    std::size_t start = pos_;
    std::uint64_t size = 0;
    bool sized = false;
    if (src_[pos_] != '\'') {
      size = digits(10, start);
      if (pos_ >= src_.size() || src_[pos_] != '\'') {
        t.width = 32;
        t.value = size;
        if (size > 0xffffffffULL) error(start, "number", "unsized literal exceeds 32 bits");
        t.text = std::string(src_.substr(start, pos_ - start));
        return;
      }
      sized = true;
    }
    ++pos_;  // '
    if (pos_ >= src_.size()) error(pos_, "base", "missing base in number");
    char b = static_cast<char>(std::tolower(static_cast<unsigned char>(src_[pos_])));
    int base = b == 'b' ? 2 : b == 'o' ? 8 : b == 'd' ? 10 : b == 'h' ? 16 : 0;
    if (base == 0) error(pos_, "base", "invalid base in number");
    ++pos_;
    std::uint64_t v = digits(base, start);
    if (sized && size > 64) error(start, "number", "literal width exceeds 64 bits");
    t.width = sized ? static_cast<int>(size) : 32;
    t.value = v;
    t.text = std::string(src_.substr(start, pos_ - start));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

class Parser {
 public:
  Parser(std::string_view src, std::string file, const IncludeResolver& resolver, std::set<std::string>& open_files)
      : src_(src), file_(std::move(file)), resolver_(resolver), open_files_(open_files), toks_(Lexer(src).run()) {}

  void parse_into(std::vector<Module>& modules) {
    while (peek().kind != Tok::End) {
      if (peek().kind == Tok::Directive) {
        parse_directive(modules);
      } else {
        modules.push_back(parse_module());
      }
    }
  }

 private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(i_ + ahead, toks_.size() - 1)]; }

  const Token& next() {
    const Token& t = toks_[i_];
    if (i_ + 1 < toks_.size()) ++i_;
    return t;
  }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Tok::End: return "end of input";
      case Tok::String: return "string \"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  [[noreturn]] void error(const Token& at, const std::string& expected) const {
    throw SyntaxError(Lexer::position(src_, at.offset), expected, "expected " + expected + ", found " + describe(at));
  }

  bool is_punct(const char* p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Tok::Punct && t.text == p;
  }

  bool is_keyword(const char* k) const {
    const Token& t = peek();
    return t.kind == Tok::Ident && t.text == k;
  }

  void expect_punct(const char* p) {
    if (!is_punct(p)) error(peek(), std::string("'") + p + "'");
    next();
  }

  void expect_keyword(const char* k) {
    if (!is_keyword(k)) error(peek(), std::string("'") + k + "'");
    next();
  }

  std::string expect_ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text)) error(t, "identifier");
    return next().text;
  }

  std::uint64_t expect_number() {
    const Token& t = peek();
    if (t.kind != Tok::Number) error(t, "number");
    return next().value;
  }

  void parse_directive(std::vector<Module>& modules) {
    const Token& d = next();
    if (d.text != "`include") error(d, "`include");
    const Token& name = peek();
    if (name.kind != Tok::String) error(name, "file name string");
    std::string file = next().text;
    if (!resolver_) throw SyntaxError(Lexer::position(src_, d.offset), "resolvable include", "cannot resolve include \"" + file + "\" without a file context");
    if (!open_files_.insert(file).second) throw SyntaxError(Lexer::position(src_, d.offset), "non-recursive include", "recursive include of \"" + file + "\"");
    auto text = resolver_(file);
    if (!text) throw SyntaxError(Lexer::position(src_, d.offset), "existing file", "cannot open include \"" + file + "\"");
    try {
      Parser sub(*text, file, resolver_, open_files_);
      sub.parse_into(modules);
    } catch (const SyntaxError& e) {
      throw SyntaxError(e.pos(), e.expected(), "in \"" + file + "\": " + e.what());
    }
    open_files_.erase(file);
  }

  int parse_range() {
    if (!is_punct("[")) return 1;
    next();
    std::uint64_t msb = expect_number();
    expect_punct(":");
    std::uint64_t lsb = expect_number();
    expect_punct("]");
    if (lsb != 0) error(peek(), "range of the form [N:0]");
    if (msb > 1000) error(peek(), "range width at most 64");
    return static_cast<int>(msb) + 1;
  }

  Module parse_module() {
    std::size_t begin = peek().offset;
    expect_keyword("module");
    Module m;
    m.name = expect_ident();
    m.origin.file = file_;
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        Port p;
        if (is_keyword("input")) {
          p.dir = Direction::Input;
        } else if (is_keyword("output")) {
          p.dir = Direction::Output;
        } else {
          error(peek(), "'input' or 'output'");
        }
        next();
        if (is_keyword("wire")) {
          next();
        } else if (is_keyword("reg")) {
          next();
          p.is_reg = true;
        }
        p.width = parse_range();
        p.name = expect_ident();
        m.ports.push_back(std::move(p));
        if (is_punct(",")) {
          next();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct(";");
    while (!is_keyword("endmodule")) {
      if (peek().kind == Tok::End) error(peek(), "'endmodule'");
      parse_module_item(m);
    }
    m.origin.span = Span{begin, peek().offset + 9};
    next();
    return m;
  }

  void parse_module_item(Module& m) {
    std::size_t begin = peek().offset;
    if (is_keyword("wire") || is_keyword("reg")) {
      bool is_reg = next().text == "reg";
      int width = parse_range();
      for (;;) {
        m.nets.push_back(Net{is_reg, width, expect_ident()});
        if (!is_punct(",")) break;
        next();
      }
      expect_punct(";");
      return;
    }
    Item item;
    if (is_keyword("assign")) {
      next();
      std::string lhs = expect_ident();
      expect_punct("=");
      Expr rhs = parse_expr(0);
      expect_punct(";");
      item = Item::assign(std::move(lhs), std::move(rhs));
    } else if (is_keyword("always")) {
      next();
      expect_punct("@");
      bool seq = false;
      std::string clock;
      if (is_punct("*")) {
        next();
      } else {
        expect_punct("(");
        if (is_punct("*")) {
          next();
        } else {
          expect_keyword("posedge");
          clock = expect_ident();
          seq = true;
        }
        expect_punct(")");
      }
      std::vector<Stmt> body;
      parse_stmt(body, 0);
      item = seq ? Item::always_ff(std::move(clock), std::move(body)) : Item::always_comb(std::move(body));
    } else if (peek().kind == Tok::Ident && !kKeywords.count(peek().text)) {
      std::string module = expect_ident();
      std::string instance = expect_ident();
      expect_punct("(");
      std::vector<Connection> conns;
      if (!is_punct(")")) {
        for (;;) {
          expect_punct(".");
          Connection c;
          c.port = expect_ident();
          expect_punct("(");
          c.signal = expect_ident();
          expect_punct(")");
          conns.push_back(std::move(c));
          if (!is_punct(",")) break;
          next();
        }
      }
      expect_punct(")");
      expect_punct(";");
      item = Item::instance_of(std::move(module), std::move(instance), std::move(conns));
    } else {
      error(peek(), "module item");
    }
    item.span = Span{begin, peek().offset};
    m.items.push_back(std::move(item));
  }

  // Appends the statement(s) at the cursor to `out`; begin/end blocks are
  // flattened into the enclosing list.
  void parse_stmt(std::vector<Stmt>& out, int depth) {
    if (depth > kMaxNesting) error(peek(), "shallower statement nesting");
    std::size_t begin = peek().offset;
    if (is_keyword("begin")) {
      next();
      while (!is_keyword("end")) {
        if (peek().kind == Tok::End) error(peek(), "'end'");
        parse_stmt(out, depth + 1);
      }
      next();
      return;
    }
    if (is_keyword("if")) {
      next();
      expect_punct("(");
      Expr cond = parse_expr(depth + 1);
      expect_punct(")");
      std::vector<Stmt> then_body, else_body;
      parse_stmt(then_body, depth + 1);
      if (is_keyword("else")) {
        next();
        parse_stmt(else_body, depth + 1);
      }
      Stmt s = Stmt::if_else(std::move(cond), std::move(then_body), std::move(else_body));
      s.span = Span{begin, peek().offset};
      out.push_back(std::move(s));
      return;
    }
    std::string lhs = expect_ident();
    bool nonblocking = false;
    if (is_punct("<=")) {
      nonblocking = true;
      next();
    } else {
      expect_punct("=");
    }
    Expr rhs = parse_expr(depth + 1);
    expect_punct(";");
    Stmt s = Stmt::assign(std::move(lhs), std::move(rhs), nonblocking);
    s.span = Span{begin, peek().offset};
    out.push_back(std::move(s));
  }

  // Precedence climbing, lowest to highest:
  //   ?:  |  ^  &  == !=  <  << >>  + -  unary
  Expr parse_expr(int depth) {
    if (depth > kMaxNesting) error(peek(), "shallower expression nesting");
    Expr cond = parse_binary(0, depth);
    if (!is_punct("?")) return cond;
    next();
    Expr then_value = parse_expr(depth + 1);
    expect_punct(":");
    Expr else_value = parse_expr(depth + 1);
    return Expr::ternary(std::move(cond), std::move(then_value), std::move(else_value));
  }

  struct Level {
    std::vector<std::pair<const char*, BinaryOp>> ops;
  };

  static const std::vector<Level>& levels() {
    static const std::vector<Level> table = {
        {{{"|", BinaryOp::Or}}},
        {{{"^", BinaryOp::Xor}}},
        {{{"&", BinaryOp::And}}},
        {{{"==", BinaryOp::Eq}, {"!=", BinaryOp::Ne}}},
        {{{"<", BinaryOp::Lt}}},
        {{{"<<", BinaryOp::Shl}, {">>", BinaryOp::Shr}}},
        {{{"+", BinaryOp::Add}, {"-", BinaryOp::Sub}}},
    };
    return table;
  }

  Expr parse_binary(std::size_t level, int depth) {
    if (level == levels().size()) return parse_unary(depth);
    Expr lhs = parse_binary(level + 1, depth);
    for (;;) {
      const BinaryOp* match = nullptr;
      for (const auto& [text, op] : levels()[level].ops) {
        if (is_punct(text)) match = &op;
      }
      if (match == nullptr) return lhs;
      BinaryOp op = *match;
      next();
      Expr rhs = parse_binary(level + 1, depth);
      lhs = Expr::binary(op, std::move(lhs), std::move(rhs));
    }
  }

  Expr parse_unary(int depth) {
    if (depth > kMaxNesting) error(peek(), "shallower expression nesting");
    if (is_punct("~") || is_punct("-") || is_punct("!")) {
      std::string op = next().text;
      Expr arg = parse_unary(depth + 1);
      UnaryOp u = op == "~" ? UnaryOp::Not : op == "-" ? UnaryOp::Neg : UnaryOp::LogicalNot;
      return Expr::unary(u, std::move(arg));
    }
    return parse_primary(depth);
  }

  Expr parse_primary(int depth) {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      next();
      return Expr::constant(t.width, t.value);
    }
    if (t.kind == Tok::SysIdent) {
      UnaryOp op;
      if (t.text == "$signed") {
        op = UnaryOp::Signed;
      } else if (t.text == "$unsigned") {
        op = UnaryOp::Unsigned;
      } else {
        error(t, "$signed or $unsigned");
      }
      next();
      expect_punct("(");
      Expr arg = parse_expr(depth + 1);
      expect_punct(")");
      return Expr::unary(op, std::move(arg));
    }
    if (is_punct("(")) {
      next();
      Expr e = parse_expr(depth + 1);
      expect_punct(")");
      return e;
    }
    if (is_punct("{")) {
      next();
      std::vector<Expr> parts;
      for (;;) {
        parts.push_back(parse_expr(depth + 1));
        if (!is_punct(",")) break;
        next();
      }
      expect_punct("}");
      return Expr::concat(std::move(parts));
    }
    std::string name = expect_ident();
    if (!is_punct("[")) return Expr::ref(std::move(name));
    next();
    std::uint64_t msb = expect_number();
    std::uint64_t lsb = msb;
    if (is_punct(":")) {
      next();
      lsb = expect_number();
    }
    expect_punct("]");
    if (msb > 1000 || lsb > 1000) error(peek(), "bit index below 64");
    return Expr::select(std::move(name), static_cast<int>(msb), static_cast<int>(lsb));
  }

  std::string_view src_;
  std::string file_;
  const IncludeResolver& resolver_;
  std::set<std::string>& open_files_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

std::string pick_top(const std::vector<Module>& modules) {
  std::set<std::string> instantiated;
  for (const auto& m : modules) {
    for (const auto& it : m.items) {
      if (it.kind == Item::Kind::Instance) instantiated.insert(it.module);
    }
  }
  for (auto it = modules.rbegin(); it != modules.rend(); ++it) {
    if (!instantiated.count(it->name)) return it->name;
  }
  return modules.empty() ? std::string{} : modules.back().name;
}

}  // namespace

Design parse_unchecked(std::string_view source, const std::string& file, const IncludeResolver& resolver) {
  std::set<std::string> open_files{file};
  Parser p(source, file, resolver, open_files);
  Design d;
  p.parse_into(d.modules);
  if (d.modules.empty()) throw SyntaxError(SourcePos{source.size(), 1, 1}, "'module'", "no module in input");
  d.top = pick_top(d.modules);
  return d;
}

Design parse(std::string_view source, const std::string& file, const IncludeResolver& resolver) {
  Design d = parse_unchecked(source, file, resolver);
  validate(d);
  return d;
}

Design parse_file(const std::filesystem::path& path) {
  auto read = [](const std::filesystem::path& p) -> std::optional<std::string> {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  auto text = read(path);
  if (!text) throw Error("cannot open " + path.string());
  auto dir = path.parent_path();
  IncludeResolver resolver = [dir, read](const std::string& name) { return read(dir / name); };
  return parse(*text, path.filename().string(), resolver);
}

std::string format_diagnostic(const std::string& file, const SyntaxError& e) {
  return file + ":" + std::to_string(e.pos().line) + ":" + std::to_string(e.pos().column) + ": " + e.what();
}

}  // namespace metahunt::hdl
