// Copyright 2026 The RTLSeek Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Recursive-descent parser for the Verilog subset, single-token lookahead,
// no error recovery (the first error aborts). parse() runs the grammar and
// then a resolution pass that checks identifier references and assigns the
// implementation-defined width 32 to unsized literals.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rtlseek/ast.hpp"
#include "rtlseek/lexer.hpp"

namespace rtlseek {

class ParseError : public std::runtime_error {
public:
  ParseError(std::string message, Span span)
      : std::runtime_error(std::move(message)), span_(span) {}
  Span span() const { return span_; }

private:
  Span span_;
};

/// Recognized Verilog construct that lies outside the supported subset
/// (generate, function, task, initial, delays, events, ...). Kept distinct
/// from ParseError so callers can report "valid Verilog, unsupported here".
class UnsupportedError : public std::runtime_error {
public:
  UnsupportedError(std::string what, Span span)
      : std::runtime_error(std::move(what)), span_(span) {}
  Span span() const { return span_; }

private:
  Span span_;
};

class ResolveError : public std::runtime_error {
public:
  ResolveError(std::string message, std::string identifier, Span span)
      : std::runtime_error(std::move(message)),
        identifier_(std::move(identifier)), span_(span) {}
  const std::string& identifier() const { return identifier_; }
  Span span() const { return span_; }

private:
  std::string identifier_;
  Span span_;
};

namespace detail {

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  SyntaxTree parse_source_unit() {
    SyntaxTree tree;
    tree.root.kind = NodeKind::source_unit;
    while (!at_end()) {
      if (is_keyword("module")) {
        tree.root.children.push_back(parse_module());
      } else {
        fail("expected 'module'");
      }
    }
    if (tree.root.children.empty()) fail("expected at least one module");
    tree.root.span = {0, toks_.empty() ? 0 : toks_.back().span.end};
    return tree;
  }

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  // -- token plumbing ------------------------------------------------------

  bool at_end() const { return pos_ >= toks_.size(); }

  const Token& peek() const {
    if (at_end())
      throw ParseError("unexpected end of input", end_span());
    return toks_[pos_];
  }

  Span end_span() const {
    std::uint32_t e = toks_.empty() ? 0 : toks_.back().span.end;
    return {e, e};
  }

  Span here() const { return at_end() ? end_span() : toks_[pos_].span; }

  const Token& advance() {
    const Token& t = peek();
    ++pos_;
    return t;
  }

  bool is_keyword(std::string_view kw) const {
    return !at_end() && toks_[pos_].kind == TokenKind::keyword &&
           toks_[pos_].lexeme == kw;
  }

  bool is_punct(std::string_view p) const {
    return !at_end() && toks_[pos_].kind == TokenKind::punct &&
           toks_[pos_].lexeme == p;
  }

  bool is_op(std::string_view o) const {
    return !at_end() && toks_[pos_].kind == TokenKind::op &&
           toks_[pos_].lexeme == o;
  }

  bool accept_keyword(std::string_view kw) {
    if (!is_keyword(kw)) return false;
    ++pos_;
    return true;
  }

  bool accept_punct(std::string_view p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }

  bool accept_op(std::string_view o) {
    if (!is_op(o)) return false;
    ++pos_;
    return true;
  }

  Token expect_keyword(std::string_view kw) {
    if (!is_keyword(kw)) fail(std::string("expected '") + std::string(kw) + "'");
    return advance();
  }

  Token expect_punct(std::string_view p) {
    if (!is_punct(p)) fail(std::string("expected '") + std::string(p) + "'");
    return advance();
  }

  Token expect_op(std::string_view o) {
    if (!is_op(o)) fail(std::string("expected '") + std::string(o) + "'");
    return advance();
  }

  Token expect_identifier(std::string_view what) {
    if (at_end() || peek().kind != TokenKind::identifier)
      fail(std::string("expected ") + std::string(what));
    return advance();
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found =
        at_end() ? "end of input" : "'" + toks_[pos_].lexeme + "'";
    throw ParseError(expected + ", found " + found, here());
  }

  [[noreturn]] void unsupported(const std::string& what) const {
    throw UnsupportedError(what, here());
  }

  static Span join(Span a, Span b) { return {a.begin, b.end}; }

  // -- literals ------------------------------------------------------------

  AstNode decode_literal(const Token& tok) {
    AstNode lit{NodeKind::literal, tok.lexeme, 0, 0, tok.span, {}};
    const std::string& s = tok.lexeme;
    auto overflow = [&] {
      throw ParseError("literal value exceeds 64 bits", tok.span);
    };

    if (tok.kind == TokenKind::unsized_literal) {
      std::uint64_t v = 0;
      for (char c : s) {
        if (c == '_') continue;
        if (v > (UINT64_MAX - static_cast<std::uint64_t>(c - '0')) / 10)
          overflow();
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
      }
      if (v >> 32)
        throw UnsupportedError("unsized literal wider than 32 bits", tok.span);
      lit.a = static_cast<std::int64_t>(v);
      lit.b = 0; // sentinel, resolution assigns 32
      return lit;
    }

    // based literal: [size]'[s]base digits
    std::size_t i = 0;
    std::uint64_t width = 0;
    bool sized = false;
    while (i < s.size() && s[i] != '\'') {
      if (s[i] != '_') {
        width = width * 10 + static_cast<std::uint64_t>(s[i] - '0');
        sized = true;
        if (width > 10000) throw ParseError("absurd literal width", tok.span);
      }
      ++i;
    }
    ++i; // apostrophe
    if (i < s.size() && (s[i] == 's' || s[i] == 'S'))
      throw UnsupportedError("signed literal", tok.span);
    char base = static_cast<char>(std::tolower(s[i]));
    ++i;
    std::uint64_t v = 0;
    unsigned radix = base == 'b' ? 2 : base == 'o' ? 8 : base == 'd' ? 10 : 16;
    for (; i < s.size(); ++i) {
      char c = s[i];
      if (c == '_') continue;
      std::uint64_t d;
      if (c >= '0' && c <= '9') d = static_cast<std::uint64_t>(c - '0');
      else d = static_cast<std::uint64_t>(std::tolower(c) - 'a' + 10);
      if (v > (UINT64_MAX - d) / radix) overflow();
      v = v * radix + d;
    }
    if (sized) {
      if (width == 0) throw ParseError("zero-width literal", tok.span);
      if (width > 64)
        throw UnsupportedError("literal wider than 64 bits", tok.span);
      if (width < 64 && (v >> width) != 0)
        throw ParseError("literal value does not fit in " +
                             std::to_string(width) + " bits",
                         tok.span);
      lit.b = static_cast<std::int64_t>(width);
    } else {
      if (v >> 32)
        throw UnsupportedError("unsized literal wider than 32 bits", tok.span);
      lit.b = 0;
    }
    lit.a = static_cast<std::int64_t>(v);
    return lit;
  }

  // -- module structure ----------------------------------------------------

  AstNode parse_module() {
    Token kw = expect_keyword("module");
    AstNode mod{NodeKind::module, "", 0, 0, kw.span, {}};
    mod.text = expect_identifier("module name").lexeme;

    std::vector<AstNode> ports, params, items;

    if (accept_punct("#")) {
      expect_punct("(");
      expect_keyword("parameter");
      do {
        accept_keyword("parameter"); // optional on repeats
        params.push_back(parse_parameter_binding());
      } while (accept_punct(","));
      expect_punct(")");
    }

    if (accept_punct("(")) {
      if (!is_punct(")")) parse_port_list(ports);
      expect_punct(")");
    }
    expect_punct(";");

    while (!is_keyword("endmodule")) {
      if (at_end()) fail("expected 'endmodule'");
      parse_item(ports, params, items);
    }
    Token endkw = expect_keyword("endmodule");

    // header order: parameters bind first, then ports, then body items
    for (auto& p : params) mod.children.push_back(std::move(p));
    for (auto& p : ports) mod.children.push_back(std::move(p));
    for (auto& it : items) mod.children.push_back(std::move(it));
    mod.span = join(kw.span, endkw.span);
    return mod;
  }

  AstNode parse_parameter_binding() {
    Token name = expect_identifier("parameter name");
    AstNode param{NodeKind::parameter, name.lexeme, 0, 0, name.span, {}};
    expect_op("=");
    AstNode def = parse_expr();
    param.span = join(name.span, def.span);
    param.children.push_back(std::move(def));
    return param;
  }

  void parse_port_list(std::vector<AstNode>& ports) {
    std::optional<Direction> dir;
    bool is_reg = false;
    std::optional<AstNode> range;
    do {
      Span start = here();
      bool fresh = false;
      if (is_keyword("input") || is_keyword("output") || is_keyword("inout")) {
        std::string d = advance().lexeme;
        dir = d == "input"    ? Direction::input
              : d == "output" ? Direction::output
                              : Direction::inout;
        fresh = true;
        is_reg = false;
        range.reset();
      }
      if (fresh) {
        if (accept_keyword("wire")) { /* default net type, nothing to record */
        } else if (accept_keyword("reg")) {
          is_reg = true;
        }
        if (is_keyword("signed")) unsupported("'signed' is out of subset");
        if (is_punct("[")) range = parse_range();
      }
      if (!dir)
        unsupported("non-ANSI port list (port without direction)");
      Token name = expect_identifier("port name");
      AstNode port{NodeKind::port, name.lexeme,
                   static_cast<std::int64_t>(*dir), is_reg ? 1 : 0,
                   join(fresh ? start : name.span, name.span), {}};
      if (range) port.children.push_back(*range);
      ports.push_back(std::move(port));
    } while (accept_punct(","));
  }

  AstNode parse_range() {
    Token lb = expect_punct("[");
    AstNode range{NodeKind::range, "", 0, 0, lb.span, {}};
    range.children.push_back(parse_expr());
    expect_punct(":");
    range.children.push_back(parse_expr());
    Token rb = expect_punct("]");
    range.span = join(lb.span, rb.span);
    return range;
  }

  void parse_item(std::vector<AstNode>&, std::vector<AstNode>& params,
                  std::vector<AstNode>& items) {
    if (at_end()) fail("expected module item");
    const Token& t = peek();

    if (t.kind == TokenKind::keyword) {
      if (t.lexeme == "wire" || t.lexeme == "reg") {
        items.push_back(parse_net_decl());
        return;
      }
      if (t.lexeme == "assign") {
        items.push_back(parse_cont_assign());
        return;
      }
      if (t.lexeme == "always") {
        items.push_back(parse_always());
        return;
      }
      if (t.lexeme == "parameter" || t.lexeme == "localparam") {
        advance();
        do {
          params.push_back(parse_parameter_binding());
        } while (accept_punct(","));
        expect_punct(";");
        return;
      }
      if (t.lexeme == "input" || t.lexeme == "output" || t.lexeme == "inout")
        unsupported("non-ANSI port declaration inside module body");
      // recognized constructs outside the subset
      static const char* const outside[] = {
          "initial", "generate", "genvar", "function", "task", "integer",
          "real", "time", "event", "casez", "casex", "for", "while",
          "repeat", "forever", "wait", "fork", "specify", "defparam",
          "primitive", "deassign", "force", "release", "disable", "signed",
          "and", "nand", "not", "nor", "xor", "xnor", "buf", "bufif0",
          "bufif1", "notif0", "notif1", "tri", "supply0", "supply1"};
      for (const char* kw : outside)
        if (t.lexeme == kw) unsupported("'" + t.lexeme + "' is out of subset");
      fail("expected module item");
    }
    if (t.kind == TokenKind::identifier) {
      items.push_back(parse_instantiation());
      return;
    }
    fail("expected module item");
  }

  AstNode parse_net_decl() {
    Token kw = advance(); // wire | reg
    AstNode decl{NodeKind::net_decl, "", kw.lexeme == "reg" ? 1 : 0, 0,
                 kw.span, {}};
    if (is_punct("[")) decl.children.push_back(parse_range());
    Span last = kw.span;
    do {
      Token name = expect_identifier("net name");
      if (is_op("=")) unsupported("net declaration assignment");
      decl.children.push_back(
          {NodeKind::declarator, name.lexeme, 0, 0, name.span, {}});
      last = name.span;
    } while (accept_punct(","));
    Token semi = expect_punct(";");
    decl.span = join(kw.span, semi.span);
    return decl;
  }

  AstNode parse_cont_assign() {
    Token kw = expect_keyword("assign");
    if (is_punct("#")) unsupported("delay control");
    AstNode assign{NodeKind::cont_assign, "", 0, 0, kw.span, {}};
    assign.children.push_back(parse_lvalue());
    expect_op("=");
    assign.children.push_back(parse_expr());
    Token semi = expect_punct(";");
    assign.span = join(kw.span, semi.span);
    return assign;
  }

  AstNode parse_always() {
    Token kw = expect_keyword("always");
    if (!is_punct("@"))
      unsupported("always block without event control");
    advance();
    AstNode always{NodeKind::always_block, "", 0, 0, kw.span, {}};
    std::vector<AstNode> events;
    Sensitivity sens;
    if (accept_op("*")) {
      sens = Sensitivity::star;
    } else {
      expect_punct("(");
      if (accept_op("*")) {
        sens = Sensitivity::star;
        expect_punct(")");
      } else {
        bool edges = is_keyword("posedge") || is_keyword("negedge");
        sens = edges ? Sensitivity::edges : Sensitivity::signals;
        do {
          Span estart = here();
          EdgeKind ek = EdgeKind::level;
          if (accept_keyword("posedge")) ek = EdgeKind::posedge;
          else if (accept_keyword("negedge")) ek = EdgeKind::negedge;
          if ((ek == EdgeKind::level) == edges)
            throw ParseError("mixed edge and level sensitivity", here());
          Token sig = expect_identifier("signal name");
          AstNode ev{NodeKind::event_ctrl, "", static_cast<std::int64_t>(ek),
                     0, join(estart, sig.span), {}};
          ev.children.push_back(
              {NodeKind::identifier, sig.lexeme, 0, 0, sig.span, {}});
          events.push_back(std::move(ev));
        } while (accept_keyword("or") || accept_punct(","));
        expect_punct(")");
      }
    }
    always.a = static_cast<std::int64_t>(sens);
    for (auto& e : events) always.children.push_back(std::move(e));
    AstNode body = parse_stmt();
    always.span = join(kw.span, body.span);
    always.children.push_back(std::move(body));
    return always;
  }

  AstNode parse_instantiation() {
    Token target = expect_identifier("module name");
    if (is_punct("#")) unsupported("parameterized instantiation");
    Token inst = expect_identifier("instance name");
    if (is_punct("[")) unsupported("instance array");
    AstNode node{NodeKind::instantiation, target.lexeme, 0, 0, target.span, {}};
    node.children.push_back(
        {NodeKind::declarator, inst.lexeme, 0, 0, inst.span, {}});
    expect_punct("(");
    if (!is_punct(")")) {
      bool named = is_punct(".");
      do {
        if (is_punct(".") != named)
          throw ParseError("mixed named and positional connections", here());
        if (named) {
          Token dot = expect_punct(".");
          Token port = expect_identifier("port name");
          expect_punct("(");
          AstNode conn{NodeKind::connection, port.lexeme, 0, 0,
                       join(dot.span, port.span), {}};
          if (!is_punct(")")) conn.children.push_back(parse_expr());
          Token rp = expect_punct(")");
          conn.span = join(dot.span, rp.span);
          node.children.push_back(std::move(conn));
        } else if (is_punct(",") || is_punct(")")) {
          // empty positional slot: the port is left unconnected
          node.children.push_back({NodeKind::connection, "", 0, 0, here(), {}});
        } else {
          AstNode expr = parse_expr();
          AstNode conn{NodeKind::connection, "", 0, 0, expr.span, {}};
          conn.children.push_back(std::move(expr));
          node.children.push_back(std::move(conn));
        }
      } while (accept_punct(","));
    }
    expect_punct(")");
    Token semi = expect_punct(";");
    node.span = join(target.span, semi.span);
    return node;
  }

  // -- statements ----------------------------------------------------------

  AstNode parse_stmt() {
    if (at_end()) fail("expected statement");
    const Token& t = peek();
    if (t.kind == TokenKind::punct && t.lexeme == "#")
      unsupported("delay control");
    if (t.kind == TokenKind::punct && t.lexeme == "@")
      unsupported("event control inside statement");
    if (t.kind == TokenKind::keyword) {
      if (t.lexeme == "begin") return parse_begin_block();
      if (t.lexeme == "if") return parse_if();
      if (t.lexeme == "case") return parse_case();
      if (t.lexeme == "casez" || t.lexeme == "casex")
        unsupported("'" + t.lexeme + "' is out of subset");
      static const char* const outside[] = {"for",     "while", "repeat",
                                            "forever", "wait",  "fork",
                                            "disable", "force", "release"};
      for (const char* kw : outside)
        if (t.lexeme == kw) unsupported("'" + t.lexeme + "' is out of subset");
      fail("expected statement");
    }
    if (t.kind == TokenKind::identifier ||
        (t.kind == TokenKind::punct && t.lexeme == "{"))
      return parse_assignment_stmt();
    fail("expected statement");
  }

  AstNode parse_begin_block() {
    Token kw = expect_keyword("begin");
    if (is_punct(":")) unsupported("named begin block");
    AstNode block{NodeKind::begin_block, "", 0, 0, kw.span, {}};
    while (!is_keyword("end")) {
      if (at_end()) fail("expected 'end'");
      block.children.push_back(parse_stmt());
    }
    Token endkw = expect_keyword("end");
    block.span = join(kw.span, endkw.span);
    return block;
  }

  AstNode parse_if() {
    Token kw = expect_keyword("if");
    AstNode node{NodeKind::if_stmt, "", 0, 0, kw.span, {}};
    expect_punct("(");
    node.children.push_back(parse_expr());
    expect_punct(")");
    AstNode then = parse_stmt();
    Span last = then.span;
    node.children.push_back(std::move(then));
    if (accept_keyword("else")) {
      AstNode els = parse_stmt();
      last = els.span;
      node.children.push_back(std::move(els));
    }
    node.span = join(kw.span, last);
    return node;
  }

  AstNode parse_case() {
    Token kw = expect_keyword("case");
    AstNode node{NodeKind::case_stmt, "", 0, 0, kw.span, {}};
    expect_punct("(");
    node.children.push_back(parse_expr());
    expect_punct(")");
    bool saw_default = false;
    bool saw_arm = false;
    while (!is_keyword("endcase")) {
      if (at_end()) fail("expected 'endcase'");
      if (accept_keyword("default")) {
        if (saw_default)
          throw ParseError("multiple default arms in case statement", here());
        saw_default = true;
        accept_punct(":");
        AstNode arm{NodeKind::case_default, "", 0, 0, here(), {}};
        AstNode body = parse_stmt();
        arm.span = body.span;
        arm.children.push_back(std::move(body));
        node.children.push_back(std::move(arm));
      } else {
        AstNode arm{NodeKind::case_arm, "", 0, 0, here(), {}};
        Span first = here();
        do {
          arm.children.push_back(parse_expr());
        } while (accept_punct(","));
        expect_punct(":");
        AstNode body = parse_stmt();
        arm.span = join(first, body.span);
        arm.children.push_back(std::move(body));
        node.children.push_back(std::move(arm));
      }
      saw_arm = true;
    }
    if (!saw_arm) throw ParseError("case statement has no arms", here());
    Token endkw = expect_keyword("endcase");
    node.span = join(kw.span, endkw.span);
    return node;
  }

  AstNode parse_assignment_stmt() {
    AstNode lhs = parse_lvalue();
    NodeKind kind;
    if (accept_op("=")) kind = NodeKind::blocking_assign;
    else if (accept_op("<=")) kind = NodeKind::nonblocking_assign;
    else { fail("expected '=' or '<='"); }
    if (is_punct("#")) unsupported("delay control");
    AstNode node{kind, "", 0, 0, lhs.span, {}};
    node.children.push_back(std::move(lhs));
    node.children.push_back(parse_expr());
    Token semi = expect_punct(";");
    node.span = join(node.children[0].span, semi.span);
    return node;
  }

  AstNode parse_lvalue() {
    if (is_punct("{")) {
      Token lb = advance();
      AstNode cat{NodeKind::concat, "", 0, 0, lb.span, {}};
      do {
        cat.children.push_back(parse_lvalue());
      } while (accept_punct(","));
      Token rb = expect_punct("}");
      cat.span = join(lb.span, rb.span);
      return cat;
    }
    Token name = expect_identifier("lvalue");
    AstNode id{NodeKind::identifier, name.lexeme, 0, 0, name.span, {}};
    if (is_punct("[")) return parse_select(std::move(id));
    return id;
  }

  AstNode parse_select(AstNode base) {
    Token lb = expect_punct("[");
    AstNode first = parse_expr();
    if (accept_punct(":")) {
      AstNode second = parse_expr();
      Token rb = expect_punct("]");
      AstNode sel{NodeKind::part_select, "", 0, 0,
                  join(base.span, rb.span), {}};
      sel.children.push_back(std::move(base));
      sel.children.push_back(std::move(first));
      sel.children.push_back(std::move(second));
      return sel;
    }
    Token rb = expect_punct("]");
    AstNode sel{NodeKind::bit_select, "", 0, 0, join(base.span, rb.span), {}};
    sel.children.push_back(std::move(base));
    sel.children.push_back(std::move(first));
    return sel;
  }

  // -- expressions ---------------------------------------------------------

  AstNode parse_expr() { return parse_ternary(); }

  AstNode parse_ternary() {
    AstNode cond = parse_binary(0);
    if (!accept_op("?")) return cond;
    AstNode then = parse_expr();
    expect_punct(":");
    AstNode els = parse_expr();
    AstNode node{NodeKind::ternary, "", 0, 0, join(cond.span, els.span), {}};
    node.children.push_back(std::move(cond));
    node.children.push_back(std::move(then));
    node.children.push_back(std::move(els));
    return node;
  }

  // precedence levels, loosest first
  static const std::vector<std::vector<std::string_view>>& levels() {
    static const std::vector<std::vector<std::string_view>> tbl = {
        {"||"},
        {"&&"},
        {"|"},
        {"^", "^~", "~^"},
        {"&"},
        {"==", "!="},
        {"<", "<=", ">", ">="},
        {"<<", ">>"},
        {"+", "-"},
        {"*", "/", "%"},
    };
    return tbl;
  }

  AstNode parse_binary(std::size_t level) {
    if (level >= levels().size()) return parse_unary();
    AstNode lhs = parse_binary(level + 1);
    for (;;) {
      if (!at_end() && peek().kind == TokenKind::op) {
        const std::string& op = peek().lexeme;
        if (op == "===" || op == "!==" || op == "<<<" || op == ">>>" ||
            op == "**")
          unsupported("operator '" + op + "' is out of subset");
      }
      bool matched = false;
      for (auto cand : levels()[level]) {
        if (is_op(cand)) {
          Token op = advance();
          AstNode rhs = parse_binary(level + 1);
          AstNode node{NodeKind::binary, op.lexeme, 0, 0,
                       join(lhs.span, rhs.span), {}};
          node.children.push_back(std::move(lhs));
          node.children.push_back(std::move(rhs));
          lhs = std::move(node);
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
    }
  }

  AstNode parse_unary() {
    static const char* const ops[] = {"!",  "~",  "+",  "-",  "&", "~&",
                                      "|",  "~|", "^",  "~^", "^~"};
    if (!at_end() && peek().kind == TokenKind::op) {
      for (const char* o : ops) {
        if (peek().lexeme == o) {
          Token op = advance();
          AstNode operand = parse_unary();
          AstNode node{NodeKind::unary, op.lexeme, 0, 0,
                       join(op.span, operand.span), {}};
          node.children.push_back(std::move(operand));
          return node;
        }
      }
    }
    return parse_primary();
  }

  AstNode parse_primary() {
    if (at_end()) fail("expected expression");
    const Token& t = peek();
    if (t.kind == TokenKind::sized_literal ||
        t.kind == TokenKind::unsized_literal) {
      return decode_literal(advance());
    }
    if (t.kind == TokenKind::string_literal)
      unsupported("string literal in expression");
    if (t.kind == TokenKind::identifier) {
      Token name = advance();
      AstNode id{NodeKind::identifier, name.lexeme, 0, 0, name.span, {}};
      if (is_punct("[")) return parse_select(std::move(id));
      return id;
    }
    if (is_punct("(")) {
      advance();
      AstNode inner = parse_expr();
      expect_punct(")");
      return inner;
    }
    if (is_punct("{")) {
      Token lb = advance();
      AstNode first = parse_expr();
      if (is_punct("{")) {
        // replication {count{expr, ...}}
        advance();
        AstNode rep{NodeKind::replication, "", 0, 0, lb.span, {}};
        rep.children.push_back(std::move(first));
        do {
          rep.children.push_back(parse_expr());
        } while (accept_punct(","));
        expect_punct("}");
        Token rb = expect_punct("}");
        rep.span = join(lb.span, rb.span);
        return rep;
      }
      AstNode cat{NodeKind::concat, "", 0, 0, lb.span, {}};
      cat.children.push_back(std::move(first));
      while (accept_punct(",")) cat.children.push_back(parse_expr());
      Token rb = expect_punct("}");
      cat.span = join(lb.span, rb.span);
      return cat;
    }
    fail("expected expression");
  }
};

// -- resolution -------------------------------------------------------------

struct SymbolInfo {
  const char* what;
  Span span;
};

inline void collect_identifiers(
    const AstNode& node,
    const std::unordered_map<std::string, SymbolInfo>& symbols) {
  if (node.kind == NodeKind::identifier) {
    if (!symbols.contains(node.text))
      throw ResolveError("undeclared identifier '" + node.text + "'",
                         node.text, node.span);
  }
  for (const AstNode& c : node.children) collect_identifiers(c, symbols);
}

inline void assign_unsized_widths(AstNode& node) {
  if (node.kind == NodeKind::literal && node.b == 0) node.b = 32;
  for (AstNode& c : node.children) assign_unsized_widths(c);
}

inline void resolve_module(AstNode& mod) {
  std::unordered_map<std::string, SymbolInfo> symbols;
  auto declare = [&](const std::string& name, const char* what, Span span) {
    auto [it, inserted] = symbols.emplace(name, SymbolInfo{what, span});
    if (!inserted)
      throw ResolveError("redeclaration of '" + name + "' (previously a " +
                             std::string(it->second.what) + ")",
                         name, span);
  };

  for (const AstNode& c : mod.children) {
    switch (c.kind) {
    case NodeKind::port: declare(c.text, "port", c.span); break;
    case NodeKind::parameter: declare(c.text, "parameter", c.span); break;
    case NodeKind::net_decl:
      for (const AstNode& d : c.children)
        if (d.kind == NodeKind::declarator) declare(d.text, "net", d.span);
      break;
    case NodeKind::instantiation:
      declare(c.children[0].text, "instance", c.children[0].span);
      break;
    default: break;
    }
  }

  for (const AstNode& c : mod.children) {
    switch (c.kind) {
    case NodeKind::port:
    case NodeKind::parameter:
      for (const AstNode& sub : c.children)
        collect_identifiers(sub, symbols);
      break;
    case NodeKind::net_decl:
      for (const AstNode& sub : c.children)
        if (sub.kind == NodeKind::range) collect_identifiers(sub, symbols);
      break;
    case NodeKind::cont_assign:
    case NodeKind::always_block:
      for (const AstNode& sub : c.children) collect_identifiers(sub, symbols);
      break;
    case NodeKind::instantiation:
      // connection expressions resolve locally; port names resolve against
      // the target module at elaboration time
      for (std::size_t i = 1; i < c.children.size(); ++i)
        for (const AstNode& sub : c.children[i].children)
          collect_identifiers(sub, symbols);
      break;
    default: break;
    }
  }
}

} // namespace detail

/// Grammar plus resolution. Throws ParseError, UnsupportedError or
/// ResolveError; on success every identifier reference is validated and
/// unsized literals carry width 32.
inline SyntaxTree parse(std::vector<Token> tokens) {
  detail::Parser p(std::move(tokens));
  SyntaxTree tree = p.parse_source_unit();
  for (AstNode& mod : tree.modules()) {
    detail::resolve_module(mod);
    detail::assign_unsized_widths(mod);
  }
  return tree;
}

inline SyntaxTree parse_source(std::string_view source) {
  return parse(tokenize(source));
}

// -- syntax verdict -----------------------------------------------------------

struct Diagnostic {
  std::string kind; // "lex" | "parse" | "unsupported" | "resolve"
  std::string message;
  Span span;
};

struct SyntaxVerdict {
  bool pass = false;
  std::optional<SyntaxTree> tree;
  std::vector<Diagnostic> diagnostics;
};

/// Tokenize + parse + resolve; failures are encoded in the verdict rather
/// than thrown.
inline SyntaxVerdict check_syntax(std::string_view source) {
  SyntaxVerdict v;
  try {
    v.tree = parse_source(source);
    v.pass = true;
  } catch (const LexError& e) {
    v.diagnostics.push_back({"lex", e.what(), e.span()});
  } catch (const UnsupportedError& e) {
    v.diagnostics.push_back({"unsupported", e.what(), e.span()});
  } catch (const ParseError& e) {
    v.diagnostics.push_back({"parse", e.what(), e.span()});
  } catch (const ResolveError& e) {
    v.diagnostics.push_back({"resolve", e.what(), e.span()});
  }
  return v;
}

} // namespace rtlseek
