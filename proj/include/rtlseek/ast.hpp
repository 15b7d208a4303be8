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

// Syntax tree for the Verilog subset. One generic node type carries the
// whole grammar: kind tag, a text payload (identifier, operator spelling,
// literal lexeme), two integer attributes, a source span, and children.
// Every structural pass (printing, canonicalization, hashing, comparison,
// JSON encoding) is a walk over this shape.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "rtlseek/lexer.hpp"

namespace rtlseek {

enum class NodeKind {
  source_unit,    // children: module*
  module,         // text: name; children: port* parameter* item*
  port,           // text: name; a: Direction; b: 1 if reg; children: [range]
  parameter,      // text: name; children: [default expr]
  range,          // children: msb expr, lsb expr
  net_decl,       // a: 1 if reg; children: [range] declarator+
  declarator,     // text: declared name
  cont_assign,    // children: lvalue, rhs
  always_block,   // a: Sensitivity; children: event* stmt
  event_ctrl,     // a: EdgeKind; children: identifier
  instantiation,  // text: target module name; children: declarator conn*
  connection,     // text: port name ("" = positional); children: [expr]
  begin_block,    // children: stmt*
  blocking_assign,    // children: lvalue, rhs
  nonblocking_assign, // children: lvalue, rhs
  if_stmt,        // children: cond, then, [else]
  case_stmt,      // children: subject, (case_arm|case_default)+
  case_arm,       // children: label-expr+ stmt (stmt is last child)
  case_default,   // children: stmt
  identifier,     // text: name
  literal,        // text: original lexeme ("" after canonicalization);
                  // a: value; b: width (0 until resolution for unsized)
  unary,          // text: op; children: operand
  binary,         // text: op; children: lhs, rhs
  ternary,        // children: cond, then, else
  concat,         // children: expr+
  replication,    // children: count expr, expr+
  bit_select,     // children: identifier, index expr
  part_select,    // children: identifier, msb expr, lsb expr
};

enum class Direction { input = 0, output = 1, inout = 2 };
enum class Sensitivity { star = 0, edges = 1, signals = 2 };
enum class EdgeKind { posedge = 0, negedge = 1, level = 2 };

struct AstNode {
  NodeKind kind;
  std::string text;
  std::int64_t a = 0;
  std::int64_t b = 0;
  Span span;
  std::vector<AstNode> children;
};

struct SyntaxTree {
  AstNode root; // kind == source_unit

  const std::vector<AstNode>& modules() const { return root.children; }
  std::vector<AstNode>& modules() { return root.children; }
};

inline std::string_view node_kind_name(NodeKind k) {
  switch (k) {
  case NodeKind::source_unit: return "source_unit";
  case NodeKind::module: return "module";
  case NodeKind::port: return "port";
  case NodeKind::parameter: return "parameter";
  case NodeKind::range: return "range";
  case NodeKind::net_decl: return "net_decl";
  case NodeKind::declarator: return "declarator";
  case NodeKind::cont_assign: return "cont_assign";
  case NodeKind::always_block: return "always_block";
  case NodeKind::event_ctrl: return "event_ctrl";
  case NodeKind::instantiation: return "instantiation";
  case NodeKind::connection: return "connection";
  case NodeKind::begin_block: return "begin_block";
  case NodeKind::blocking_assign: return "blocking_assign";
  case NodeKind::nonblocking_assign: return "nonblocking_assign";
  case NodeKind::if_stmt: return "if_stmt";
  case NodeKind::case_stmt: return "case_stmt";
  case NodeKind::case_arm: return "case_arm";
  case NodeKind::case_default: return "case_default";
  case NodeKind::identifier: return "identifier";
  case NodeKind::literal: return "literal";
  case NodeKind::unary: return "unary";
  case NodeKind::binary: return "binary";
  case NodeKind::ternary: return "ternary";
  case NodeKind::concat: return "concat";
  case NodeKind::replication: return "replication";
  case NodeKind::bit_select: return "bit_select";
  case NodeKind::part_select: return "part_select";
  }
  return "unknown";
}

/// Structural equality, ignoring spans. Literal lexemes are compared (two
/// trees that spell the same value differently are distinct at this level;
/// canonicalization erases the spelling first).
inline bool same_tree(const AstNode& x, const AstNode& y) {
  if (x.kind != y.kind || x.text != y.text || x.a != y.a || x.b != y.b ||
      x.children.size() != y.children.size())
    return false;
  for (std::size_t i = 0; i < x.children.size(); ++i)
    if (!same_tree(x.children[i], y.children[i])) return false;
  return true;
}

inline bool same_tree(const SyntaxTree& x, const SyntaxTree& y) {
  return same_tree(x.root, y.root);
}

} // namespace rtlseek
