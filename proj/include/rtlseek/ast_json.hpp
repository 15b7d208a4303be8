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

// JSON encoding of syntax trees (schema tag "ast/1"). Key order is fixed so
// serialized output is byte-stable across runs.

#pragma once

#include <json.hpp>

#include "rtlseek/ast.hpp"

namespace rtlseek {

using ojson = nlohmann::ordered_json;

namespace detail {

inline ojson span_json(Span s) { return ojson::array({s.begin, s.end}); }

inline ojson node_json(const AstNode& n);

inline ojson stmt_list_json(const AstNode& n) {
  ojson arr = ojson::array();
  for (const AstNode& c : n.children) arr.push_back(node_json(c));
  return arr;
}

inline ojson node_json(const AstNode& n) {
  ojson j;
  j["kind"] = node_kind_name(n.kind);
  switch (n.kind) {
  case NodeKind::module: {
    j["name"] = n.text;
    ojson ports = ojson::array(), params = ojson::array(),
          items = ojson::array();
    for (const AstNode& c : n.children) {
      if (c.kind == NodeKind::port) ports.push_back(node_json(c));
      else if (c.kind == NodeKind::parameter) params.push_back(node_json(c));
      else items.push_back(node_json(c));
    }
    j["ports"] = std::move(ports);
    j["parameters"] = std::move(params);
    j["items"] = std::move(items);
    break;
  }
  case NodeKind::port: {
    j["name"] = n.text;
    switch (static_cast<Direction>(n.a)) {
    case Direction::input: j["direction"] = "input"; break;
    case Direction::output: j["direction"] = "output"; break;
    default: j["direction"] = "inout"; break;
    }
    j["reg"] = n.b != 0;
    if (!n.children.empty()) j["range"] = node_json(n.children[0]);
    break;
  }
  case NodeKind::parameter:
    j["name"] = n.text;
    j["default"] = node_json(n.children[0]);
    break;
  case NodeKind::range:
    j["msb"] = node_json(n.children[0]);
    j["lsb"] = node_json(n.children[1]);
    break;
  case NodeKind::net_decl: {
    j["net"] = n.a ? "reg" : "wire";
    std::size_t first = 0;
    if (!n.children.empty() && n.children[0].kind == NodeKind::range) {
      j["range"] = node_json(n.children[0]);
      first = 1;
    }
    ojson names = ojson::array();
    for (std::size_t i = first; i < n.children.size(); ++i)
      names.push_back(n.children[i].text);
    j["names"] = std::move(names);
    break;
  }
  case NodeKind::cont_assign:
    j["lhs"] = node_json(n.children[0]);
    j["rhs"] = node_json(n.children[1]);
    break;
  case NodeKind::always_block: {
    switch (static_cast<Sensitivity>(n.a)) {
    case Sensitivity::star: j["sensitivity"] = "star"; break;
    case Sensitivity::edges: j["sensitivity"] = "edges"; break;
    default: j["sensitivity"] = "signals"; break;
    }
    ojson events = ojson::array();
    for (std::size_t i = 0; i + 1 < n.children.size(); ++i) {
      const AstNode& ev = n.children[i];
      ojson e;
      switch (static_cast<EdgeKind>(ev.a)) {
      case EdgeKind::posedge: e["edge"] = "posedge"; break;
      case EdgeKind::negedge: e["edge"] = "negedge"; break;
      default: e["edge"] = "level"; break;
      }
      e["signal"] = ev.children[0].text;
      events.push_back(std::move(e));
    }
    j["events"] = std::move(events);
    j["body"] = node_json(n.children.back());
    break;
  }
  case NodeKind::instantiation: {
    j["target"] = n.text;
    j["instance"] = n.children[0].text;
    ojson conns = ojson::array();
    for (std::size_t i = 1; i < n.children.size(); ++i) {
      const AstNode& c = n.children[i];
      ojson o;
      if (c.text.empty()) o["port"] = nullptr;
      else o["port"] = c.text;
      if (c.children.empty()) o["expr"] = nullptr;
      else o["expr"] = node_json(c.children[0]);
      conns.push_back(std::move(o));
    }
    j["connections"] = std::move(conns);
    break;
  }
  case NodeKind::begin_block:
    j["stmts"] = stmt_list_json(n);
    break;
  case NodeKind::blocking_assign:
  case NodeKind::nonblocking_assign:
    j["lhs"] = node_json(n.children[0]);
    j["rhs"] = node_json(n.children[1]);
    break;
  case NodeKind::if_stmt:
    j["cond"] = node_json(n.children[0]);
    j["then"] = node_json(n.children[1]);
    if (n.children.size() == 3) j["else"] = node_json(n.children[2]);
    break;
  case NodeKind::case_stmt: {
    j["subject"] = node_json(n.children[0]);
    ojson arms = ojson::array();
    for (std::size_t i = 1; i < n.children.size(); ++i)
      arms.push_back(node_json(n.children[i]));
    j["arms"] = std::move(arms);
    break;
  }
  case NodeKind::case_arm: {
    ojson labels = ojson::array();
    for (std::size_t i = 0; i + 1 < n.children.size(); ++i)
      labels.push_back(node_json(n.children[i]));
    j["labels"] = std::move(labels);
    j["body"] = node_json(n.children.back());
    break;
  }
  case NodeKind::case_default:
    j["body"] = node_json(n.children[0]);
    break;
  case NodeKind::identifier:
    j["name"] = n.text;
    break;
  case NodeKind::literal:
    j["value"] = static_cast<std::uint64_t>(n.a);
    j["width"] = n.b;
    j["lexeme"] = n.text;
    break;
  case NodeKind::unary:
    j["op"] = n.text;
    j["operand"] = node_json(n.children[0]);
    break;
  case NodeKind::binary:
    j["op"] = n.text;
    j["lhs"] = node_json(n.children[0]);
    j["rhs"] = node_json(n.children[1]);
    break;
  case NodeKind::ternary:
    j["cond"] = node_json(n.children[0]);
    j["then"] = node_json(n.children[1]);
    j["else"] = node_json(n.children[2]);
    break;
  case NodeKind::concat:
    j["parts"] = stmt_list_json(n);
    break;
  case NodeKind::replication: {
    j["count"] = node_json(n.children[0]);
    ojson parts = ojson::array();
    for (std::size_t i = 1; i < n.children.size(); ++i)
      parts.push_back(node_json(n.children[i]));
    j["parts"] = std::move(parts);
    break;
  }
  case NodeKind::bit_select:
    j["base"] = node_json(n.children[0]);
    j["index"] = node_json(n.children[1]);
    break;
  case NodeKind::part_select:
    j["base"] = node_json(n.children[0]);
    j["msb"] = node_json(n.children[1]);
    j["lsb"] = node_json(n.children[2]);
    break;
  default:
    break;
  }
  j["span"] = span_json(n.span);
  return j;
}

} // namespace detail

inline ojson to_json(const SyntaxTree& tree) {
  ojson j;
  j["schema"] = "ast/1";
  j["kind"] = node_kind_name(tree.root.kind); // "source_unit"
  ojson mods = ojson::array();
  for (const AstNode& m : tree.root.children)
    mods.push_back(detail::node_json(m));
  j["modules"] = std::move(mods);
  j["span"] = detail::span_json(tree.root.span);
  return j;
}

} // namespace rtlseek
