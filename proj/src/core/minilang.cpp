// Copyright 2026 The Seedsmith Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/minilang.hpp"

#include <cassert>
#include <map>
#include <unordered_map>
#include <variant>

#include "core/errors.hpp"

namespace seedsmith::minilang {

namespace {

// Arrays above this size are treated as an index-domain error rather than an
// allocation attempt; fuzzed sizes must not be able to exhaust host memory.
constexpr int64_t kMaxArrayLen = 1'000'000;

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

/// Strict 64-bit integer syntax: optional sign, one or more digits, nothing
/// else, value within int64 range.
std::optional<int64_t> parse_int64(std::string_view s) {
  if (s.empty()) return std::nullopt;
  bool neg = false;
  size_t i = 0;
  if (s[0] == '+' || s[0] == '-') {
    neg = s[0] == '-';
    i = 1;
  }
  if (i >= s.size()) return std::nullopt;
  uint64_t magnitude = 0;
  const uint64_t limit = neg ? (1ull << 63) : (1ull << 63) - 1;
  for (; i < s.size(); ++i) {
    if (!is_digit(s[i])) return std::nullopt;
    uint64_t digit = static_cast<uint64_t>(s[i] - '0');
    if (magnitude > (limit - digit) / 10) return std::nullopt;
    magnitude = magnitude * 10 + digit;
  }
  if (neg) return -static_cast<int64_t>(magnitude - 1) - 1;
  return static_cast<int64_t>(magnitude);
}

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class Kind { ident, integer, string, sym, eol };
  Kind kind = Kind::eol;
  std::string text;        // ident name, string value, or symbol spelling
  uint64_t magnitude = 0;  // integer literals (sign handled by the parser)
};

std::vector<Token> lex_line(std::string_view line, int line_no) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (c == '#') break;  // trailing comment-free grammar: '#' only ever starts a comment
    if (is_ident_start(c)) {
      size_t j = i;
      while (j < line.size() && is_ident_char(line[j])) ++j;
      out.push_back({Token::Kind::ident, std::string(line.substr(i, j - i)), 0});
      i = j;
      continue;
    }
    if (is_digit(c)) {
      uint64_t magnitude = 0;
      size_t j = i;
      while (j < line.size() && is_digit(line[j])) {
        uint64_t digit = static_cast<uint64_t>(line[j] - '0');
        if (magnitude > ((1ull << 63) - digit) / 10) {
          throw ParseError(line_no, "integer literal out of range");
        }
        magnitude = magnitude * 10 + digit;
        ++j;
      }
      Token t{Token::Kind::integer, std::string(line.substr(i, j - i)), magnitude};
      out.push_back(std::move(t));
      i = j;
      continue;
    }
    if (c == '"') {
      std::string value;
      size_t j = i + 1;
      bool closed = false;
      while (j < line.size()) {
        char d = line[j];
        if (d == '"') {
          closed = true;
          ++j;
          break;
        }
        if (d == '\\') {
          if (j + 1 >= line.size()) throw ParseError(line_no, "dangling escape in string literal");
          char e = line[j + 1];
          switch (e) {
            case '\\': value += '\\'; break;
            case '"': value += '"'; break;
            case 'n': value += '\n'; break;
            case 't': value += '\t'; break;
            default: throw ParseError(line_no, std::string("unknown escape '\\") + e + "'");
          }
          j += 2;
          continue;
        }
        value += d;
        ++j;
      }
      if (!closed) throw ParseError(line_no, "unterminated string literal");
      out.push_back({Token::Kind::string, std::move(value), 0});
      i = j;
      continue;
    }
    // multi-char operators first
    auto two = line.substr(i, 2);
    if (two == "==" || two == "!=" || two == "<=" || two == ">=") {
      out.push_back({Token::Kind::sym, std::string(two), 0});
      i += 2;
      continue;
    }
    if (std::string_view("+-*/%<>=()[]").find(c) != std::string_view::npos) {
      out.push_back({Token::Kind::sym, std::string(1, c), 0});
      ++i;
      continue;
    }
    throw ParseError(line_no, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Token::Kind::eol, "", 0});
  return out;
}

// ---------------------------------------------------------------------------
// Expression parser (recursive descent over one line's tokens)

class ExprParser {
 public:
  ExprParser(const std::vector<Token>& tokens, size_t pos, int line)
      : tokens_(tokens), pos_(pos), line_(line) {}

  ExprPtr parse() { return parse_or(); }
  size_t pos() const { return pos_; }

  void expect_sym(const char* sym) {
    if (!at_sym(sym)) throw ParseError(line_, std::string("expected '") + sym + "'");
    ++pos_;
  }
  void expect_eol() {
    if (peek().kind != Token::Kind::eol) {
      throw ParseError(line_, "unexpected trailing tokens");
    }
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool at_sym(std::string_view s) const {
    return peek().kind == Token::Kind::sym && peek().text == s;
  }
  bool at_kw(std::string_view k) const {
    return peek().kind == Token::Kind::ident && peek().text == k;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at_kw("or")) {
      ++pos_;
      lhs = make_binary(BinOp::logic_or, std::move(lhs), parse_and());
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (at_kw("and")) {
      ++pos_;
      lhs = make_binary(BinOp::logic_and, std::move(lhs), parse_not());
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at_kw("not")) {
      ++pos_;
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::unary;
      e->un = UnOp::logic_not;
      e->lhs = parse_not();
      return e;
    }
    return parse_cmp();
  }

  ExprPtr parse_cmp() {
    ExprPtr lhs = parse_add();
    for (;;) {
      BinOp op;
      if (at_sym("==")) op = BinOp::eq;
      else if (at_sym("!=")) op = BinOp::ne;
      else if (at_sym("<=")) op = BinOp::le;
      else if (at_sym(">=")) op = BinOp::ge;
      else if (at_sym("<")) op = BinOp::lt;
      else if (at_sym(">")) op = BinOp::gt;
      else break;
      ++pos_;
      lhs = make_binary(op, std::move(lhs), parse_add());
    }
    return lhs;
  }

  ExprPtr parse_add() {
    ExprPtr lhs = parse_mul();
    for (;;) {
      BinOp op;
      if (at_sym("+")) op = BinOp::add;
      else if (at_sym("-")) op = BinOp::sub;
      else break;
      ++pos_;
      lhs = make_binary(op, std::move(lhs), parse_mul());
    }
    return lhs;
  }

  ExprPtr parse_mul() {
    ExprPtr lhs = parse_unary();
    for (;;) {
      BinOp op;
      if (at_sym("*")) op = BinOp::mul;
      else if (at_sym("/")) op = BinOp::div;
      else if (at_sym("%")) op = BinOp::mod;
      else break;
      ++pos_;
      lhs = make_binary(op, std::move(lhs), parse_unary());
    }
    return lhs;
  }

  ExprPtr parse_unary() {
    if (at_sym("-")) {
      ++pos_;
      // Fold "-<literal>" so INT64_MIN is expressible.
      if (peek().kind == Token::Kind::integer) {
        uint64_t magnitude = peek().magnitude;
        ++pos_;
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::int_lit;
        e->int_value = -static_cast<int64_t>(magnitude - 1) - 1;
        if (magnitude == 0) e->int_value = 0;
        return e;
      }
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::unary;
      e->un = UnOp::neg;
      e->lhs = parse_unary();
      return e;
    }
    return parse_primary();
  }

  ExprPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Token::Kind::integer) {
      if (t.magnitude > static_cast<uint64_t>(INT64_MAX)) {
        throw ParseError(line_, "integer literal out of range");
      }
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::int_lit;
      e->int_value = static_cast<int64_t>(t.magnitude);
      ++pos_;
      return e;
    }
    if (t.kind == Token::Kind::string) {
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::str_lit;
      e->text = t.text;
      ++pos_;
      return e;
    }
    if (t.kind == Token::Kind::ident) {
      if (t.text == "to_int" || t.text == "len") {
        std::string fn = t.text;
        ++pos_;
        expect_sym("(");
        ExprPtr arg = parse_or();
        expect_sym(")");
        auto e = std::make_unique<Expr>();
        e->kind = fn == "to_int" ? Expr::Kind::to_int : Expr::Kind::len;
        e->lhs = std::move(arg);
        return e;
      }
      if (t.text == "and" || t.text == "or" || t.text == "not" || t.text == "if" ||
          t.text == "else" || t.text == "while" || t.text == "end" || t.text == "print" ||
          t.text == "arr" || t.text == "read_int" || t.text == "read_str") {
        throw ParseError(line_, "keyword '" + t.text + "' cannot be used in an expression");
      }
      std::string name = t.text;
      ++pos_;
      if (at_sym("[")) {
        ++pos_;
        ExprPtr idx = parse_or();
        expect_sym("]");
        auto e = std::make_unique<Expr>();
        e->kind = Expr::Kind::index;
        e->text = name;
        e->lhs = std::move(idx);
        return e;
      }
      auto e = std::make_unique<Expr>();
      e->kind = Expr::Kind::var;
      e->text = name;
      return e;
    }
    if (t.kind == Token::Kind::sym && t.text == "(") {
      ++pos_;
      ExprPtr inner = parse_or();
      expect_sym(")");
      return inner;
    }
    throw ParseError(line_, "expected an expression");
  }

  ExprPtr make_binary(BinOp op, ExprPtr lhs, ExprPtr rhs) {
    auto e = std::make_unique<Expr>();
    e->kind = Expr::Kind::binary;
    e->bin = op;
    e->lhs = std::move(lhs);
    e->rhs = std::move(rhs);
    return e;
  }

  const std::vector<Token>& tokens_;
  size_t pos_;
  int line_;
};

// ---------------------------------------------------------------------------
// Name resolution

struct NameInfo {
  bool scalar = false;
  bool array = false;
  int first_line = 0;
};

class NameChecker {
 public:
  void collect(const std::vector<StmtPtr>& stmts) {
    for (const auto& s : stmts) {
      switch (s->kind) {
        case Stmt::Kind::read_int:
        case Stmt::Kind::read_str:
        case Stmt::Kind::assign_var:
          mark_scalar(s->name, s->line);
          break;
        case Stmt::Kind::arr_decl:
          mark_array(s->name, s->line);
          break;
        default:
          break;
      }
      collect(s->body);
      collect(s->else_body);
    }
  }

  void check(const std::vector<StmtPtr>& stmts) {
    for (const auto& s : stmts) {
      switch (s->kind) {
        case Stmt::Kind::arr_decl:
          check_expr(*s->expr_a, s->line);
          break;
        case Stmt::Kind::assign_var:
        case Stmt::Kind::print:
        case Stmt::Kind::if_stmt:
        case Stmt::Kind::while_stmt:
          check_expr(*s->expr_a, s->line);
          break;
        case Stmt::Kind::assign_index:
          require_array(s->name, s->line);
          check_expr(*s->expr_a, s->line);
          check_expr(*s->expr_b, s->line);
          break;
        default:
          break;
      }
      check(s->body);
      check(s->else_body);
    }
  }

 private:
  void mark_scalar(const std::string& name, int line) {
    auto& info = names_[name];
    if (info.array) {
      throw ParseError(line, "'" + name + "' is used as both an array and a variable");
    }
    info.scalar = true;
    if (!info.first_line) info.first_line = line;
  }

  void mark_array(const std::string& name, int line) {
    auto& info = names_[name];
    if (info.scalar) {
      throw ParseError(line, "'" + name + "' is used as both an array and a variable");
    }
    info.array = true;
    if (!info.first_line) info.first_line = line;
  }

  void require_array(const std::string& name, int line) const {
    auto it = names_.find(name);
    if (it == names_.end() || !it->second.array) {
      throw ParseError(line, "undeclared array '" + name + "'");
    }
  }

  void check_expr(const Expr& e, int line) {
    switch (e.kind) {
      case Expr::Kind::var: {
        auto it = names_.find(e.text);
        if (it == names_.end()) throw ParseError(line, "undefined variable '" + e.text + "'");
        if (it->second.array) {
          throw ParseError(line, "array '" + e.text + "' used as a variable");
        }
        break;
      }
      case Expr::Kind::index:
        require_array(e.text, line);
        check_expr(*e.lhs, line);
        break;
      case Expr::Kind::len:
        // len() accepts either an array name or a string-valued expression.
        if (e.lhs->kind == Expr::Kind::var) {
          auto it = names_.find(e.lhs->text);
          if (it == names_.end()) {
            throw ParseError(line, "undefined variable '" + e.lhs->text + "'");
          }
          break;  // array or scalar: both resolvable at runtime
        }
        check_expr(*e.lhs, line);
        break;
      case Expr::Kind::binary:
        check_expr(*e.lhs, line);
        check_expr(*e.rhs, line);
        break;
      case Expr::Kind::unary:
      case Expr::Kind::to_int:
        check_expr(*e.lhs, line);
        break;
      default:
        break;
    }
  }

  std::map<std::string, NameInfo> names_;
};

}  // namespace

// ---------------------------------------------------------------------------
// Program parser

MiniProgram parse_program(std::string_view text, std::string program_id) {
  MiniProgram prog;
  prog.view.program_id = std::move(program_id);
  prog.view.language_tag = LanguageTag::minilang;

  // Split into physical lines. A trailing newline does not create a line.
  {
    size_t start = 0;
    while (start <= text.size()) {
      size_t nl = text.find('\n', start);
      if (nl == std::string_view::npos) {
        if (start < text.size()) prog.view.source_lines.emplace_back(text.substr(start));
        break;
      }
      std::string_view line = text.substr(start, nl - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      prog.view.source_lines.emplace_back(line);
      start = nl + 1;
    }
  }

  struct OpenBlock {
    Stmt* stmt;
    bool in_else;
  };
  std::vector<OpenBlock> stack;

  auto current_list = [&]() -> std::vector<StmtPtr>& {
    if (stack.empty()) return prog.statements;
    OpenBlock& top = stack.back();
    return top.in_else ? top.stmt->else_body : top.stmt->body;
  };

  for (int line_no = 1; line_no <= prog.view.line_count(); ++line_no) {
    const std::string& raw = prog.view.source_lines[static_cast<size_t>(line_no - 1)];
    std::vector<Token> tokens = lex_line(raw, line_no);
    if (tokens.front().kind == Token::Kind::eol) continue;  // blank or comment

    const Token& head = tokens.front();
    if (head.kind != Token::Kind::ident) {
      throw ParseError(line_no, "a statement must start with a keyword or a name");
    }

    auto make_stmt = [&](Stmt::Kind kind) {
      auto s = std::make_unique<Stmt>();
      s->kind = kind;
      s->line = line_no;
      return s;
    };

    auto expect_name = [&](size_t pos) -> std::string {
      if (tokens[pos].kind != Token::Kind::ident) {
        throw ParseError(line_no, "expected a name");
      }
      return tokens[pos].text;
    };

    if (head.text == "read_int" || head.text == "read_str") {
      auto s = make_stmt(head.text == "read_int" ? Stmt::Kind::read_int : Stmt::Kind::read_str);
      s->name = expect_name(1);
      if (tokens[2].kind != Token::Kind::eol) throw ParseError(line_no, "unexpected trailing tokens");
      current_list().push_back(std::move(s));
      prog.view.executable.insert(line_no);
      continue;
    }
    if (head.text == "arr") {
      auto s = make_stmt(Stmt::Kind::arr_decl);
      s->name = expect_name(1);
      ExprParser ep(tokens, 2, line_no);
      ep.expect_sym("[");
      s->expr_a = ep.parse();
      ep.expect_sym("]");
      ep.expect_eol();
      current_list().push_back(std::move(s));
      prog.view.executable.insert(line_no);
      continue;
    }
    if (head.text == "if" || head.text == "while") {
      auto s = make_stmt(head.text == "if" ? Stmt::Kind::if_stmt : Stmt::Kind::while_stmt);
      ExprParser ep(tokens, 1, line_no);
      s->expr_a = ep.parse();
      ep.expect_eol();
      Stmt* opened = s.get();
      current_list().push_back(std::move(s));
      prog.view.executable.insert(line_no);
      stack.push_back({opened, false});
      continue;
    }
    if (head.text == "else") {
      if (tokens[1].kind != Token::Kind::eol) throw ParseError(line_no, "unexpected tokens after 'else'");
      if (stack.empty() || stack.back().stmt->kind != Stmt::Kind::if_stmt || stack.back().in_else) {
        throw ParseError(line_no, "'else' without a matching 'if'");
      }
      stack.back().in_else = true;
      continue;
    }
    if (head.text == "end") {
      if (tokens[1].kind != Token::Kind::eol) throw ParseError(line_no, "unexpected tokens after 'end'");
      if (stack.empty()) throw ParseError(line_no, "'end' without an open block");
      stack.pop_back();
      continue;
    }
    if (head.text == "print") {
      auto s = make_stmt(Stmt::Kind::print);
      ExprParser ep(tokens, 1, line_no);
      s->expr_a = ep.parse();
      ep.expect_eol();
      current_list().push_back(std::move(s));
      prog.view.executable.insert(line_no);
      continue;
    }

    // Assignment: `x = expr` or `a[expr] = expr`.
    std::string name = head.text;
    if (tokens[1].kind == Token::Kind::sym && tokens[1].text == "=") {
      auto s = make_stmt(Stmt::Kind::assign_var);
      s->name = name;
      ExprParser ep(tokens, 2, line_no);
      s->expr_a = ep.parse();
      ep.expect_eol();
      current_list().push_back(std::move(s));
      prog.view.executable.insert(line_no);
      continue;
    }
    if (tokens[1].kind == Token::Kind::sym && tokens[1].text == "[") {
      auto s = make_stmt(Stmt::Kind::assign_index);
      s->name = name;
      ExprParser ep(tokens, 2, line_no);
      s->expr_a = ep.parse();
      ep.expect_sym("]");
      ep.expect_sym("=");
      s->expr_b = ep.parse();
      ep.expect_eol();
      current_list().push_back(std::move(s));
      prog.view.executable.insert(line_no);
      continue;
    }
    throw ParseError(line_no, "unrecognized statement");
  }

  if (!stack.empty()) {
    throw ParseError(stack.back().stmt->line, "missing 'end' for this block");
  }

  NameChecker names;
  names.collect(prog.statements);
  names.check(prog.statements);
  prog.view.validate();
  return prog;
}

// ---------------------------------------------------------------------------
// Serializer

namespace {

std::string render_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::int_lit:
      return std::to_string(e.int_value);
    case Expr::Kind::str_lit: {
      std::string out = "\"";
      for (char c : e.text) {
        switch (c) {
          case '\\': out += "\\\\"; break;
          case '"': out += "\\\""; break;
          case '\n': out += "\\n"; break;
          case '\t': out += "\\t"; break;
          default: out += c;
        }
      }
      out += '"';
      return out;
    }
    case Expr::Kind::var:
      return e.text;
    case Expr::Kind::index:
      return e.text + "[" + render_expr(*e.lhs) + "]";
    case Expr::Kind::to_int:
      return "to_int(" + render_expr(*e.lhs) + ")";
    case Expr::Kind::len:
      return "len(" + render_expr(*e.lhs) + ")";
    case Expr::Kind::unary:
      if (e.un == UnOp::neg) return "(-" + render_expr(*e.lhs) + ")";
      return "(not " + render_expr(*e.lhs) + ")";
    case Expr::Kind::binary: {
      const char* op = "?";
      switch (e.bin) {
        case BinOp::add: op = "+"; break;
        case BinOp::sub: op = "-"; break;
        case BinOp::mul: op = "*"; break;
        case BinOp::div: op = "/"; break;
        case BinOp::mod: op = "%"; break;
        case BinOp::eq: op = "=="; break;
        case BinOp::ne: op = "!="; break;
        case BinOp::lt: op = "<"; break;
        case BinOp::le: op = "<="; break;
        case BinOp::gt: op = ">"; break;
        case BinOp::ge: op = ">="; break;
        case BinOp::logic_and: op = "and"; break;
        case BinOp::logic_or: op = "or"; break;
      }
      return "(" + render_expr(*e.lhs) + " " + op + " " + render_expr(*e.rhs) + ")";
    }
  }
  return "?";
}

class Serializer {
 public:
  std::string run(const MiniProgram& p) {
    emit_block(p.statements, 0);
    std::string out;
    for (const auto& line : lines_) {
      out += line;
      out += '\n';
    }
    return out;
  }

 private:
  void put(int line_no, std::string text) {
    if (line_no <= static_cast<int>(lines_.size())) {
      throw Error("serialize: statement at line " + std::to_string(line_no) +
                  " overlaps an already-emitted line");
    }
    while (static_cast<int>(lines_.size()) < line_no - 1) lines_.emplace_back("");
    lines_.push_back(std::move(text));
  }

  void put_next(std::string text) { lines_.push_back(std::move(text)); }

  static std::string indent(int depth) { return std::string(static_cast<size_t>(depth) * 2, ' '); }

  void emit_block(const std::vector<StmtPtr>& stmts, int depth) {
    for (const auto& s : stmts) emit_stmt(*s, depth);
  }

  void emit_stmt(const Stmt& s, int depth) {
    std::string pad = indent(depth);
    switch (s.kind) {
      case Stmt::Kind::read_int:
        put(s.line, pad + "read_int " + s.name);
        break;
      case Stmt::Kind::read_str:
        put(s.line, pad + "read_str " + s.name);
        break;
      case Stmt::Kind::arr_decl:
        put(s.line, pad + "arr " + s.name + "[" + render_expr(*s.expr_a) + "]");
        break;
      case Stmt::Kind::assign_var:
        put(s.line, pad + s.name + " = " + render_expr(*s.expr_a));
        break;
      case Stmt::Kind::assign_index:
        put(s.line, pad + s.name + "[" + render_expr(*s.expr_a) + "] = " + render_expr(*s.expr_b));
        break;
      case Stmt::Kind::print:
        put(s.line, pad + "print " + render_expr(*s.expr_a));
        break;
      case Stmt::Kind::while_stmt:
        put(s.line, pad + "while " + render_expr(*s.expr_a));
        emit_block(s.body, depth + 1);
        put_next(pad + "end");
        break;
      case Stmt::Kind::if_stmt:
        put(s.line, pad + "if " + render_expr(*s.expr_a));
        emit_block(s.body, depth + 1);
        if (!s.else_body.empty()) {
          put_next(pad + "else");
          emit_block(s.else_body, depth + 1);
        }
        put_next(pad + "end");
        break;
    }
  }

  std::vector<std::string> lines_;
};

bool expr_equal(const Expr* a, const Expr* b) {
  if (a == nullptr || b == nullptr) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::int_lit:
      return a->int_value == b->int_value;
    case Expr::Kind::str_lit:
    case Expr::Kind::var:
      return a->text == b->text;
    case Expr::Kind::index:
      return a->text == b->text && expr_equal(a->lhs.get(), b->lhs.get());
    case Expr::Kind::binary:
      return a->bin == b->bin && expr_equal(a->lhs.get(), b->lhs.get()) &&
             expr_equal(a->rhs.get(), b->rhs.get());
    case Expr::Kind::unary:
      return a->un == b->un && expr_equal(a->lhs.get(), b->lhs.get());
    case Expr::Kind::to_int:
    case Expr::Kind::len:
      return expr_equal(a->lhs.get(), b->lhs.get());
  }
  return false;
}

bool block_equal(const std::vector<StmtPtr>& a, const std::vector<StmtPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    const Stmt& x = *a[i];
    const Stmt& y = *b[i];
    if (x.kind != y.kind || x.line != y.line || x.name != y.name) return false;
    if (!expr_equal(x.expr_a.get(), y.expr_a.get())) return false;
    if (!expr_equal(x.expr_b.get(), y.expr_b.get())) return false;
    if (!block_equal(x.body, y.body) || !block_equal(x.else_body, y.else_body)) return false;
  }
  return true;
}

}  // namespace

std::string serialize(const MiniProgram& p) {
  return Serializer().run(p);
}

bool ast_equal(const MiniProgram& a, const MiniProgram& b) {
  return block_equal(a.statements, b.statements);
}

// ---------------------------------------------------------------------------
// Interpreter

const char* error_kind_name(RuntimeErrorKind kind) {
  switch (kind) {
    case RuntimeErrorKind::input_mismatch: return "input_mismatch";
    case RuntimeErrorKind::input_exhausted: return "input_exhausted";
    case RuntimeErrorKind::arithmetic: return "arithmetic";
    case RuntimeErrorKind::number_format: return "number_format";
    case RuntimeErrorKind::index_out_of_bounds: return "index_out_of_bounds";
  }
  return "unknown";
}

std::optional<RuntimeErrorKind> error_kind_from_name(std::string_view name) {
  if (name == "input_mismatch") return RuntimeErrorKind::input_mismatch;
  if (name == "input_exhausted") return RuntimeErrorKind::input_exhausted;
  if (name == "arithmetic") return RuntimeErrorKind::arithmetic;
  if (name == "number_format") return RuntimeErrorKind::number_format;
  if (name == "index_out_of_bounds") return RuntimeErrorKind::index_out_of_bounds;
  return std::nullopt;
}

const char* status_name(ExecutionOutcome::Status status) {
  switch (status) {
    case ExecutionOutcome::Status::normal: return "normal";
    case ExecutionOutcome::Status::runtime_error: return "runtime_error";
    case ExecutionOutcome::Status::step_limit_exceeded: return "step_limit_exceeded";
  }
  return "unknown";
}

namespace {

using Value = std::variant<int64_t, std::string>;

struct ErrorSignal {
  RuntimeError err;
};
struct StepLimitSignal {};

class Interp {
 public:
  Interp(const MiniProgram& prog, const TestCase& input, uint64_t limit)
      : prog_(prog), input_(input), limit_(limit) {}

  ExecutionOutcome run() {
    ExecutionOutcome out;
    out.status = ExecutionOutcome::Status::normal;
    try {
      exec_block(prog_.statements);
    } catch (const ErrorSignal& sig) {
      out.status = ExecutionOutcome::Status::runtime_error;
      out.error = sig.err;
    } catch (const StepLimitSignal&) {
      out.status = ExecutionOutcome::Status::step_limit_exceeded;
    }
    out.covered = CoverageMap::for_program(prog_.view, std::move(covered_));
    out.output = std::move(output_);
    out.steps = steps_;
    out.tokens_consumed = cursor_;
    return out;
  }

 private:
  [[noreturn]] void fail(RuntimeErrorKind kind) { throw ErrorSignal{{kind, line_}}; }

  void begin_statement(const Stmt& s) {
    if (steps_ >= limit_) throw StepLimitSignal{};
    ++steps_;
    covered_.insert(s.line);
    line_ = s.line;
  }

  void exec_block(const std::vector<StmtPtr>& stmts) {
    for (const auto& s : stmts) exec_stmt(*s);
  }

  void exec_stmt(const Stmt& s) {
    begin_statement(s);
    switch (s.kind) {
      case Stmt::Kind::read_int: {
        const std::string& token = next_token();
        auto v = parse_int64(token);
        if (!v) fail(RuntimeErrorKind::input_mismatch);
        scalars_[s.name] = *v;
        break;
      }
      case Stmt::Kind::read_str:
        scalars_[s.name] = next_token();
        break;
      case Stmt::Kind::arr_decl: {
        int64_t n = eval_int(*s.expr_a);
        if (n < 0 || n > kMaxArrayLen) fail(RuntimeErrorKind::index_out_of_bounds);
        arrays_[s.name].assign(static_cast<size_t>(n), Value(int64_t{0}));
        break;
      }
      case Stmt::Kind::assign_var:
        scalars_[s.name] = eval(*s.expr_a);
        break;
      case Stmt::Kind::assign_index: {
        int64_t idx = eval_int(*s.expr_a);
        Value v = eval(*s.expr_b);
        auto& arr = arrays_[s.name];
        if (idx < 0 || static_cast<size_t>(idx) >= arr.size()) {
          fail(RuntimeErrorKind::index_out_of_bounds);
        }
        arr[static_cast<size_t>(idx)] = std::move(v);
        break;
      }
      case Stmt::Kind::print:
        output_ += to_text(eval(*s.expr_a));
        output_ += '\n';
        break;
      case Stmt::Kind::if_stmt:
        if (truthy(eval(*s.expr_a))) {
          exec_block(s.body);
        } else {
          exec_block(s.else_body);
        }
        break;
      case Stmt::Kind::while_stmt:
        for (;;) {
          if (!truthy(eval(*s.expr_a))) break;
          exec_block(s.body);
          // Each re-test of the condition is an evaluation of this statement.
          if (steps_ >= limit_) throw StepLimitSignal{};
          ++steps_;
          line_ = s.line;
        }
        break;
    }
  }

  const std::string& next_token() {
    if (cursor_ >= input_.tokens.size()) fail(RuntimeErrorKind::input_exhausted);
    return input_.tokens[cursor_++];
  }

  static bool truthy(const Value& v) {
    if (std::holds_alternative<int64_t>(v)) return std::get<int64_t>(v) != 0;
    return !std::get<std::string>(v).empty();
  }

  static std::string to_text(const Value& v) {
    if (std::holds_alternative<int64_t>(v)) return std::to_string(std::get<int64_t>(v));
    return std::get<std::string>(v);
  }

  int64_t eval_int(const Expr& e) {
    Value v = eval(e);
    if (!std::holds_alternative<int64_t>(v)) fail(RuntimeErrorKind::arithmetic);
    return std::get<int64_t>(v);
  }

  int64_t checked(int64_t a, int64_t b, BinOp op) {
    int64_t r = 0;
    bool overflow = false;
    switch (op) {
      case BinOp::add: overflow = __builtin_add_overflow(a, b, &r); break;
      case BinOp::sub: overflow = __builtin_sub_overflow(a, b, &r); break;
      case BinOp::mul: overflow = __builtin_mul_overflow(a, b, &r); break;
      case BinOp::div:
        if (b == 0 || (a == INT64_MIN && b == -1)) overflow = true;
        else r = a / b;
        break;
      case BinOp::mod:
        if (b == 0) overflow = true;
        else if (b == -1) r = 0;  // INT64_MIN % -1 is mathematically 0
        else r = a % b;
        break;
      default:
        assert(false);
    }
    if (overflow) fail(RuntimeErrorKind::arithmetic);
    return r;
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::int_lit:
        return e.int_value;
      case Expr::Kind::str_lit:
        return e.text;
      case Expr::Kind::var: {
        auto it = scalars_.find(e.text);
        if (it == scalars_.end()) return int64_t{0};  // declared but not yet assigned
        return it->second;
      }
      case Expr::Kind::index: {
        int64_t idx = eval_int(*e.lhs);
        auto it = arrays_.find(e.text);
        size_t len = it == arrays_.end() ? 0 : it->second.size();
        if (idx < 0 || static_cast<size_t>(idx) >= len) {
          fail(RuntimeErrorKind::index_out_of_bounds);
        }
        return it->second[static_cast<size_t>(idx)];
      }
      case Expr::Kind::to_int: {
        Value v = eval(*e.lhs);
        if (std::holds_alternative<int64_t>(v)) return v;
        auto parsed = parse_int64(std::get<std::string>(v));
        if (!parsed) fail(RuntimeErrorKind::number_format);
        return *parsed;
      }
      case Expr::Kind::len: {
        // An array name is resolved directly; anything else is evaluated and
        // must be a string.
        if (e.lhs->kind == Expr::Kind::var) {
          auto it = arrays_.find(e.lhs->text);
          if (it != arrays_.end()) return static_cast<int64_t>(it->second.size());
        }
        Value v = eval(*e.lhs);
        if (!std::holds_alternative<std::string>(v)) fail(RuntimeErrorKind::arithmetic);
        return static_cast<int64_t>(std::get<std::string>(v).size());
      }
      case Expr::Kind::unary: {
        if (e.un == UnOp::logic_not) return static_cast<int64_t>(!truthy(eval(*e.lhs)));
        int64_t v = eval_int(*e.lhs);
        if (v == INT64_MIN) fail(RuntimeErrorKind::arithmetic);
        return -v;
      }
      case Expr::Kind::binary:
        return eval_binary(e);
    }
    assert(false);
    return int64_t{0};
  }

  Value eval_binary(const Expr& e) {
    if (e.bin == BinOp::logic_and) {
      if (!truthy(eval(*e.lhs))) return int64_t{0};
      return static_cast<int64_t>(truthy(eval(*e.rhs)));
    }
    if (e.bin == BinOp::logic_or) {
      if (truthy(eval(*e.lhs))) return int64_t{1};
      return static_cast<int64_t>(truthy(eval(*e.rhs)));
    }

    Value a = eval(*e.lhs);
    Value b = eval(*e.rhs);
    bool a_int = std::holds_alternative<int64_t>(a);
    bool b_int = std::holds_alternative<int64_t>(b);

    switch (e.bin) {
      case BinOp::eq:
      case BinOp::ne: {
        bool equal = a_int == b_int &&
                     (a_int ? std::get<int64_t>(a) == std::get<int64_t>(b)
                            : std::get<std::string>(a) == std::get<std::string>(b));
        return static_cast<int64_t>(e.bin == BinOp::eq ? equal : !equal);
      }
      case BinOp::lt:
      case BinOp::le:
      case BinOp::gt:
      case BinOp::ge: {
        if (a_int != b_int) fail(RuntimeErrorKind::arithmetic);
        int cmp;
        if (a_int) {
          int64_t x = std::get<int64_t>(a), y = std::get<int64_t>(b);
          cmp = x < y ? -1 : (x == y ? 0 : 1);
        } else {
          const auto& x = std::get<std::string>(a);
          const auto& y = std::get<std::string>(b);
          cmp = x < y ? -1 : (x == y ? 0 : 1);
        }
        bool r = false;
        if (e.bin == BinOp::lt) r = cmp < 0;
        else if (e.bin == BinOp::le) r = cmp <= 0;
        else if (e.bin == BinOp::gt) r = cmp > 0;
        else r = cmp >= 0;
        return static_cast<int64_t>(r);
      }
      case BinOp::add:
        if (a_int && b_int) return checked(std::get<int64_t>(a), std::get<int64_t>(b), BinOp::add);
        return to_text(a) + to_text(b);  // '+' concatenates when a string is involved
      case BinOp::sub:
      case BinOp::mul:
      case BinOp::div:
      case BinOp::mod:
        if (!a_int || !b_int) fail(RuntimeErrorKind::arithmetic);
        return checked(std::get<int64_t>(a), std::get<int64_t>(b), e.bin);
      default:
        assert(false);
        return int64_t{0};
    }
  }

  const MiniProgram& prog_;
  const TestCase& input_;
  uint64_t limit_;
  uint64_t steps_ = 0;
  size_t cursor_ = 0;
  int line_ = 0;
  std::set<int> covered_;
  std::string output_;
  std::unordered_map<std::string, Value> scalars_;
  std::unordered_map<std::string, std::vector<Value>> arrays_;
};

}  // namespace

ExecutionOutcome execute(const MiniProgram& p, const TestCase& input, uint64_t step_limit) {
  return Interp(p, input, step_limit).run();
}

// ---------------------------------------------------------------------------
// Input shape

namespace {

void collect_reads(const std::vector<StmtPtr>& stmts, int loop_depth, InputSpec& out) {
  for (const auto& s : stmts) {
    if (s->kind == Stmt::Kind::read_int || s->kind == Stmt::Kind::read_str) {
      out.push_back({s->kind == Stmt::Kind::read_int ? TokenKind::integer : TokenKind::text,
                     s->name, s->line, loop_depth > 0});
    }
    int next_depth = loop_depth + (s->kind == Stmt::Kind::while_stmt ? 1 : 0);
    collect_reads(s->body, next_depth, out);
    collect_reads(s->else_body, loop_depth, out);
  }
}

}  // namespace

InputSpec derive_input_spec(const MiniProgram& p) {
  InputSpec spec;
  collect_reads(p.statements, 0, spec);
  return spec;
}

std::string describe_input_format(const InputSpec& spec) {
  if (spec.empty()) return "The program reads no input.";
  std::string out =
      "The program consumes whitespace-separated tokens from a single input "
      "stream, in this order:\n";
  int n = 1;
  for (const auto& slot : spec) {
    out += std::to_string(n++);
    out += ". ";
    out += slot.kind == TokenKind::integer ? "integer" : "string";
    out += " for `" + slot.var + "` (line " + std::to_string(slot.line);
    if (slot.in_loop) out += ", read repeatedly inside a loop";
    out += ")\n";
  }
  out += "Provide one token per line.";
  return out;
}

}  // namespace seedsmith::minilang
