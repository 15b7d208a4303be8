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

// Pretty printer. Emits parseable source with minimal parentheses; literal
// lexemes are reproduced verbatim so parse(print(parse(s))) rebuilds the
// same tree. A then-branch that ends in an open `if` is wrapped in
// begin/end to keep a following `else` bound to the right statement.

#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "rtlseek/ast.hpp"

namespace rtlseek {
namespace detail {

// precedence: 0 ternary, 1..10 binary levels, 11 unary, 12 primary
inline int binary_prec(const std::string& op) {
  if (op == "||") return 1;
  if (op == "&&") return 2;
  if (op == "|") return 3;
  if (op == "^" || op == "^~" || op == "~^") return 4;
  if (op == "&") return 5;
  if (op == "==" || op == "!=") return 6;
  if (op == "<" || op == "<=" || op == ">" || op == ">=") return 7;
  if (op == "<<" || op == ">>") return 8;
  if (op == "+" || op == "-") return 9;
  return 10; // * / %
}

inline int expr_prec(const AstNode& e) {
  switch (e.kind) {
  case NodeKind::ternary: return 0;
  case NodeKind::binary: return binary_prec(e.text);
  case NodeKind::unary: return 11;
  default: return 12;
  }
}

inline std::string format_literal(const AstNode& lit) {
  if (!lit.text.empty()) return lit.text;
  // canonical spelling for literals whose original lexeme was erased
  char buf[32];
  std::snprintf(buf, sizeof buf, "%lld'h%llx",
                static_cast<long long>(lit.b),
                static_cast<unsigned long long>(lit.a));
  return buf;
}

inline std::string print_expr_min(const AstNode& e, int min_prec);

inline std::string print_expr_child(const AstNode& e, int min_prec) {
  std::string s = print_expr_min(e, 0);
  if (expr_prec(e) < min_prec) return "(" + s + ")";
  return s;
}

inline std::string print_expr_min(const AstNode& e, int /*min_prec*/) {
  switch (e.kind) {
  case NodeKind::identifier:
    return e.text;
  case NodeKind::literal:
    return format_literal(e);
  case NodeKind::unary:
    // parenthesize a unary operand so `~ &a` never re-lexes as `~&a`
    return e.text + print_expr_child(e.children[0], 12);
  case NodeKind::binary: {
    int p = binary_prec(e.text);
    return print_expr_child(e.children[0], p) + " " + e.text + " " +
           print_expr_child(e.children[1], p + 1);
  }
  case NodeKind::ternary:
    return print_expr_child(e.children[0], 1) + " ? " +
           print_expr_child(e.children[1], 0) + " : " +
           print_expr_child(e.children[2], 0);
  case NodeKind::concat: {
    std::string s = "{";
    for (std::size_t i = 0; i < e.children.size(); ++i) {
      if (i) s += ", ";
      s += print_expr_child(e.children[i], 0);
    }
    return s + "}";
  }
  case NodeKind::replication: {
    std::string s = "{" + print_expr_child(e.children[0], 0) + "{";
    for (std::size_t i = 1; i < e.children.size(); ++i) {
      if (i > 1) s += ", ";
      s += print_expr_child(e.children[i], 0);
    }
    return s + "}}";
  }
  case NodeKind::bit_select:
    return print_expr_child(e.children[0], 12) + "[" +
           print_expr_child(e.children[1], 0) + "]";
  case NodeKind::part_select:
    return print_expr_child(e.children[0], 12) + "[" +
           print_expr_child(e.children[1], 0) + ":" +
           print_expr_child(e.children[2], 0) + "]";
  default:
    return "<?expr>";
  }
}

inline std::string print_range(const AstNode& r) {
  return "[" + print_expr_child(r.children[0], 0) + ":" +
         print_expr_child(r.children[1], 0) + "]";
}

// does this statement end in an `if` that could capture a following `else`?
inline bool ends_in_open_if(const AstNode& stmt) {
  if (stmt.kind != NodeKind::if_stmt) return false;
  if (stmt.children.size() == 2) return true;
  return ends_in_open_if(stmt.children[2]);
}

inline void print_stmt(const AstNode& stmt, int indent, std::string& out);

inline std::string pad(int indent) {
  return std::string(static_cast<std::size_t>(indent) * 2, ' ');
}

// print a statement as the body of `head` ("if (...)", "always @(...)", ...);
// begin blocks open on the same line, other statements go on the next line.
inline void print_body(const std::string& head, const AstNode& body,
                       int indent, std::string& out, bool force_block) {
  if (body.kind == NodeKind::begin_block || force_block) {
    out += pad(indent) + head + " begin\n";
    if (body.kind == NodeKind::begin_block) {
      for (const AstNode& s : body.children) print_stmt(s, indent + 1, out);
    } else {
      print_stmt(body, indent + 1, out);
    }
    out += pad(indent) + "end";
  } else {
    out += pad(indent) + head + "\n";
    print_stmt(body, indent + 1, out);
    // strip trailing newline so callers can append `else`
    if (!out.empty() && out.back() == '\n') out.pop_back();
  }
  out += "\n";
}

inline void print_stmt(const AstNode& stmt, int indent, std::string& out) {
  switch (stmt.kind) {
  case NodeKind::begin_block:
    out += pad(indent) + "begin\n";
    for (const AstNode& s : stmt.children) print_stmt(s, indent + 1, out);
    out += pad(indent) + "end\n";
    break;
  case NodeKind::blocking_assign:
  case NodeKind::nonblocking_assign:
    out += pad(indent) + print_expr_child(stmt.children[0], 0) +
           (stmt.kind == NodeKind::blocking_assign ? " = " : " <= ") +
           print_expr_child(stmt.children[1], 0) + ";\n";
    break;
  case NodeKind::if_stmt: {
    bool has_else = stmt.children.size() == 3;
    bool wrap = has_else && ends_in_open_if(stmt.children[1]);
    print_body("if (" + print_expr_child(stmt.children[0], 0) + ")",
               stmt.children[1], indent, out, wrap);
    if (has_else) {
      const AstNode& els = stmt.children[2];
      if (els.kind == NodeKind::if_stmt) {
        // `else if` chain continues on one line
        out += pad(indent) + "else ";
        std::string rest;
        print_stmt(els, indent, rest);
        out += rest.substr(pad(indent).size());
      } else {
        print_body("else", els, indent, out, false);
      }
    }
    break;
  }
  case NodeKind::case_stmt: {
    out += pad(indent) + "case (" +
           print_expr_child(stmt.children[0], 0) + ")\n";
    for (std::size_t i = 1; i < stmt.children.size(); ++i) {
      const AstNode& arm = stmt.children[i];
      std::string head;
      if (arm.kind == NodeKind::case_default) {
        head = "default:";
      } else {
        for (std::size_t j = 0; j + 1 < arm.children.size(); ++j) {
          if (j) head += ", ";
          head += print_expr_child(arm.children[j], 0);
        }
        head += ":";
      }
      print_body(head, arm.children.back(), indent + 1, out, false);
    }
    out += pad(indent) + "endcase\n";
    break;
  }
  default:
    out += pad(indent) + "<?stmt>\n";
    break;
  }
}

inline std::string direction_name(Direction d) {
  switch (d) {
  case Direction::input: return "input";
  case Direction::output: return "output";
  default: return "inout";
  }
}

inline void print_item(const AstNode& item, int indent, std::string& out) {
  switch (item.kind) {
  case NodeKind::net_decl: {
    out += pad(indent) + (item.a ? "reg" : "wire");
    std::size_t first = 0;
    if (!item.children.empty() && item.children[0].kind == NodeKind::range) {
      out += " " + print_range(item.children[0]);
      first = 1;
    }
    for (std::size_t i = first; i < item.children.size(); ++i)
      out += (i == first ? " " : ", ") + item.children[i].text;
    out += ";\n";
    break;
  }
  case NodeKind::cont_assign:
    out += pad(indent) + "assign " + print_expr_child(item.children[0], 0) +
           " = " + print_expr_child(item.children[1], 0) + ";\n";
    break;
  case NodeKind::always_block: {
    std::string head = "always @";
    auto sens = static_cast<Sensitivity>(item.a);
    if (sens == Sensitivity::star) {
      head += "(*)";
    } else {
      head += "(";
      for (std::size_t i = 0; i + 1 < item.children.size(); ++i) {
        const AstNode& ev = item.children[i];
        if (i) head += " or ";
        auto ek = static_cast<EdgeKind>(ev.a);
        if (ek == EdgeKind::posedge) head += "posedge ";
        else if (ek == EdgeKind::negedge) head += "negedge ";
        head += ev.children[0].text;
      }
      head += ")";
    }
    print_body(head, item.children.back(), indent, out, false);
    break;
  }
  case NodeKind::instantiation: {
    out += pad(indent) + item.text + " " + item.children[0].text + " (";
    for (std::size_t i = 1; i < item.children.size(); ++i) {
      const AstNode& conn = item.children[i];
      if (i > 1) out += ", ";
      if (!conn.text.empty()) {
        out += "." + conn.text + "(";
        if (!conn.children.empty())
          out += print_expr_child(conn.children[0], 0);
        out += ")";
      } else if (!conn.children.empty()) {
        out += print_expr_child(conn.children[0], 0);
      }
    }
    out += ");\n";
    break;
  }
  default:
    out += pad(indent) + "<?item>\n";
    break;
  }
}

} // namespace detail

inline std::string print_expr(const AstNode& expr) {
  return detail::print_expr_child(expr, 0);
}

inline std::string print_module(const AstNode& mod) {
  std::string out = "module " + mod.text;
  std::vector<const AstNode*> ports, params, items;
  for (const AstNode& c : mod.children) {
    if (c.kind == NodeKind::port) ports.push_back(&c);
    else if (c.kind == NodeKind::parameter) params.push_back(&c);
    else items.push_back(&c);
  }
  if (!params.empty()) {
    out += " #(\n";
    for (std::size_t i = 0; i < params.size(); ++i) {
      out += "  parameter " + params[i]->text + " = " +
             detail::print_expr_child(params[i]->children[0], 0);
      out += i + 1 < params.size() ? ",\n" : "\n";
    }
    out += ")";
  }
  if (!ports.empty()) {
    out += " (\n";
    for (std::size_t i = 0; i < ports.size(); ++i) {
      const AstNode& p = *ports[i];
      out += "  " + detail::direction_name(static_cast<Direction>(p.a));
      if (p.b) out += " reg";
      if (!p.children.empty()) out += " " + detail::print_range(p.children[0]);
      out += " " + p.text;
      out += i + 1 < ports.size() ? ",\n" : "\n";
    }
    out += ")";
  } else {
    out += " ()";
  }
  out += ";\n";
  for (const AstNode* item : items) detail::print_item(*item, 1, out);
  out += "endmodule\n";
  return out;
}

inline std::string print(const SyntaxTree& tree) {
  std::string out;
  for (const AstNode& mod : tree.root.children) {
    if (!out.empty()) out += "\n";
    out += print_module(mod);
  }
  return out;
}

} // namespace rtlseek
