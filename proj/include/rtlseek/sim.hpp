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

// Cycle-based two-state simulator.
//
// elaborate() flattens instantiations, allocates one uint64 slot per net
// (widths capped at 64 bits), resolves every identifier to a parameter
// value or net slot, and topologically orders combinational logic; a cycle
// in that order is an elaboration error. run() executes a vector suite:
// per step, apply inputs -> settle -> fire edge processes on input edges ->
// clock posedge with two-phase non-blocking commit -> settle -> compare
// expected outputs -> clock negedge. All state starts at 0; level-sensitive
// always blocks are treated as fully combinational.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rtlseek/ast.hpp"
#include "rtlseek/value_ops.hpp"

namespace rtlseek::sim {

class ElaborationError : public std::runtime_error {
public:
  explicit ElaborationError(std::string message, Span span = {0, 0})
      : std::runtime_error(std::move(message)), span_(span) {}
  Span span() const { return span_; }

private:
  Span span_;
};

// -- design -------------------------------------------------------------------

struct SimDesign {
  struct Net {
    std::string name; // hierarchical ("u0.sum"), top-level ports unprefixed
    int width = 1;
    int lsb = 0; // declared range offset for select arithmetic
    bool is_input = false;
    bool is_output = false;
  };

  struct Binding {
    bool is_param = false;
    Value param{};
    int net = -1;
  };

  struct Scope {
    std::string prefix;
    std::unordered_map<std::string, Binding> bindings;
  };

  struct CombUnit {
    AstNode node; // cont_assign or always_block (level/star)
    int scope = 0;
  };

  struct ClockedUnit {
    AstNode body;
    int scope = 0;
    std::vector<std::pair<EdgeKind, int>> events; // (edge, net)
  };

  std::vector<Net> nets;
  std::unordered_map<std::string, int> net_index;
  std::vector<Scope> scopes;
  std::vector<CombUnit> comb;       // already in topological order
  std::vector<ClockedUnit> clocked; // declaration order
  std::vector<int> top_inputs;
  std::vector<int> top_outputs;
};

// -- vectors ------------------------------------------------------------------

struct ResetSpec {
  std::string signal;
  int active = 1;
  int cycles = 1;
};

struct VectorStep {
  std::map<std::string, std::uint64_t> in;
  std::map<std::string, std::uint64_t> out;
  bool settle_only = false;
};

struct VectorSuite {
  std::optional<std::string> clock;
  std::optional<ResetSpec> reset;
  std::vector<VectorStep> steps;
};

// -- outcome ------------------------------------------------------------------

enum class Verdict { pass, fail, sim_error };

struct FirstFailure {
  std::size_t step = 0;
  std::string signal;
  std::uint64_t expected = 0;
  std::uint64_t actual = 0;
};

struct SimOutcome {
  Verdict verdict = Verdict::sim_error;
  std::optional<FirstFailure> first_failure;
  std::string message;
  // one snapshot per completed step, values indexed like SimDesign::nets
  std::vector<std::vector<std::uint64_t>> trace;
};

inline const char* verdict_name(Verdict v) {
  switch (v) {
  case Verdict::pass: return "pass";
  case Verdict::fail: return "fail";
  default: return "sim_error";
  }
}

namespace detail {

// -- elaboration ---------------------------------------------------------------

class Elaborator {
public:
  explicit Elaborator(const SyntaxTree& tree) {
    for (const AstNode& m : tree.modules()) {
      if (!modules_.emplace(m.text, &m).second)
        throw ElaborationError("duplicate module '" + m.text + "'", m.span);
    }
  }

  SimDesign elaborate(const std::string& top_name) {
    const AstNode* top = pick_top(top_name);
    instantiate(*top, "", 0);
    finish();
    return std::move(design_);
  }

private:
  // (net, bit mask) in storage space: mask bit 0 is the net's declared lsb
  using BitRef = std::pair<int, std::uint64_t>;

  struct ClockedWrite {
    int net;
    std::uint64_t mask;
    Span span;
  };

  std::unordered_map<std::string, const AstNode*> modules_;
  SimDesign design_;
  // per comb unit: bits read / written, for drivers and topological order
  std::vector<std::vector<BitRef>> unit_reads_, unit_writes_;
  std::vector<ClockedWrite> clocked_writes_;

  const AstNode* pick_top(const std::string& name) {
    if (!name.empty()) {
      auto it = modules_.find(name);
      if (it == modules_.end())
        throw ElaborationError("top module '" + name + "' not found");
      return it->second;
    }
    if (modules_.size() == 1) return modules_.begin()->second;
    // unique module not instantiated by any other
    std::unordered_set<std::string> instantiated;
    for (auto& [_, mod] : modules_)
      for (const AstNode& c : mod->children)
        if (c.kind == NodeKind::instantiation && modules_.contains(c.text))
          instantiated.insert(c.text);
    const AstNode* top = nullptr;
    for (auto& [name2, mod] : modules_) {
      if (instantiated.contains(name2)) continue;
      if (top)
        throw ElaborationError(
            "multiple top candidates ('" + top->text + "', '" + name2 +
            "'); pick one with --top");
      top = mod;
    }
    if (!top) throw ElaborationError("no top module (instantiation cycle?)");
    return top;
  }

  // constant expression over parameters only
  Value const_eval(const AstNode& e, const SimDesign::Scope& scope) {
    switch (e.kind) {
    case NodeKind::literal:
      return {static_cast<std::uint64_t>(e.a), static_cast<int>(e.b)};
    case NodeKind::identifier: {
      auto it = scope.bindings.find(e.text);
      if (it == scope.bindings.end() || !it->second.is_param)
        throw ElaborationError(
            "'" + e.text + "' is not a constant in this context", e.span);
      return it->second.param;
    }
    case NodeKind::unary:
      return apply_unary(e.text, const_eval(e.children[0], scope));
    case NodeKind::binary:
      return apply_binary(e.text, const_eval(e.children[0], scope),
                          const_eval(e.children[1], scope));
    case NodeKind::ternary: {
      Value c = const_eval(e.children[0], scope);
      Value t = const_eval(e.children[1], scope);
      Value f = const_eval(e.children[2], scope);
      return make_value(truthy(c) ? t.v : f.v, t.w > f.w ? t.w : f.w);
    }
    default:
      throw ElaborationError("expression is not constant here", e.span);
    }
  }

  int declare_net(const std::string& prefix, const std::string& local,
                  const AstNode* range, const SimDesign::Scope& scope,
                  bool is_input, bool is_output, Span span) {
    SimDesign::Net net;
    net.name = prefix + local;
    net.is_input = is_input;
    net.is_output = is_output;
    if (range) {
      Value msb = const_eval(range->children[0], scope);
      Value lsb = const_eval(range->children[1], scope);
      if (msb.v < lsb.v)
        throw ElaborationError("ascending bit range unsupported", span);
      std::uint64_t w = msb.v - lsb.v + 1;
      if (w > 64)
        throw ElaborationError("net '" + net.name + "' wider than 64 bits",
                               span);
      net.width = static_cast<int>(w);
      net.lsb = static_cast<int>(lsb.v);
    }
    int idx = static_cast<int>(design_.nets.size());
    design_.nets.push_back(std::move(net));
    design_.net_index[design_.nets.back().name] = idx;
    return idx;
  }

  // width & reference validation; fills reads and resolves bindings lazily
  struct Analysis {
    std::vector<BitRef>* reads = nullptr;
    std::vector<BitRef>* writes = nullptr;
    // inside an always block partial writes re-read the target's bits
    // (unwritten bits hold state); continuous assignments to constant
    // selects are unconditional drives and take no such feedback edge
    bool inside_always = false;
  };

  std::optional<Value> try_const(const AstNode& e, int scope_id) {
    try {
      return const_eval(e, design_.scopes[scope_id]);
    } catch (const ElaborationError&) {
      return std::nullopt;
    }
  }

  const SimDesign::Binding& binding_of(const AstNode& id, int scope_id) {
    SimDesign::Scope& scope = design_.scopes[scope_id];
    auto it = scope.bindings.find(id.text);
    if (it != scope.bindings.end()) return it->second;
    auto nit = design_.net_index.find(scope.prefix + id.text);
    if (nit == design_.net_index.end())
      throw ElaborationError("unknown net '" + id.text + "'", id.span);
    SimDesign::Binding b;
    b.net = nit->second;
    return scope.bindings.emplace(id.text, b).first->second;
  }

  int expr_width(const AstNode& e, int scope_id, Analysis a) {
    switch (e.kind) {
    case NodeKind::literal:
      return static_cast<int>(e.b);
    case NodeKind::identifier: {
      const SimDesign::Binding& b = binding_of(e, scope_id);
      if (b.is_param) return b.param.w;
      if (a.reads)
        a.reads->push_back({b.net, mask_width(design_.nets[b.net].width)});
      return design_.nets[b.net].width;
    }
    case NodeKind::unary: {
      int w = expr_width(e.children[0], scope_id, a);
      return (e.text == "~" || e.text == "-" || e.text == "+") ? w : 1;
    }
    case NodeKind::binary: {
      int l = expr_width(e.children[0], scope_id, a);
      int r = expr_width(e.children[1], scope_id, a);
      static const char* const bitwise[] = {"+", "-", "*", "/", "%",
                                            "&", "|", "^", "^~", "~^"};
      for (const char* op : bitwise)
        if (e.text == op) return l > r ? l : r;
      if (e.text == "<<" || e.text == ">>") return l;
      return 1;
    }
    case NodeKind::ternary: {
      expr_width(e.children[0], scope_id, a);
      int t = expr_width(e.children[1], scope_id, a);
      int f = expr_width(e.children[2], scope_id, a);
      return t > f ? t : f;
    }
    case NodeKind::concat: {
      int total = 0;
      for (const AstNode& c : e.children) {
        total += expr_width(c, scope_id, a);
        if (total > 64)
          throw ElaborationError("concatenation wider than 64 bits", e.span);
      }
      return total;
    }
    case NodeKind::replication: {
      Value count = const_eval(e.children[0], design_.scopes[scope_id]);
      int inner = 0;
      for (std::size_t i = 1; i < e.children.size(); ++i)
        inner += expr_width(e.children[i], scope_id, a);
      std::uint64_t total = count.v * static_cast<std::uint64_t>(inner);
      if (count.v == 0 || total > 64)
        throw ElaborationError("replication wider than 64 bits (or zero)",
                               e.span);
      return static_cast<int>(total);
    }
    case NodeKind::bit_select: {
      const SimDesign::Binding& b = binding_of(e.children[0], scope_id);
      if (b.is_param) {
        expr_width(e.children[1], scope_id, a);
        return 1;
      }
      const SimDesign::Net& net = design_.nets[b.net];
      std::uint64_t m = mask_width(net.width); // dynamic index: any bit
      if (std::optional<Value> idx = try_const(e.children[1], scope_id)) {
        std::int64_t phys = static_cast<std::int64_t>(idx->v) - net.lsb;
        // out of range reads a constant 0, touching no bits
        m = (phys >= 0 && phys < net.width) ? (1ull << phys) : 0;
      } else {
        expr_width(e.children[1], scope_id, a); // index reads nets
      }
      if (a.reads && m) a.reads->push_back({b.net, m});
      return 1;
    }
    case NodeKind::part_select: {
      const SimDesign::Binding& b = binding_of(e.children[0], scope_id);
      if (b.is_param)
        throw ElaborationError("part select on a parameter", e.span);
      const SimDesign::Net& net = design_.nets[b.net];
      Value msb = const_eval(e.children[1], design_.scopes[scope_id]);
      Value lsb = const_eval(e.children[2], design_.scopes[scope_id]);
      if (msb.v < lsb.v)
        throw ElaborationError("reversed part select", e.span);
      if (lsb.v < static_cast<std::uint64_t>(net.lsb) ||
          msb.v >= static_cast<std::uint64_t>(net.lsb) + net.width)
        throw ElaborationError("part select out of declared range", e.span);
      int w = static_cast<int>(msb.v - lsb.v + 1);
      if (a.reads)
        a.reads->push_back(
            {b.net, mask_width(w) << (lsb.v - static_cast<std::uint64_t>(
                                                  net.lsb))});
      return w;
    }
    default:
      throw ElaborationError("invalid expression", e.span);
    }
  }

  // lvalue: identifier, bit/part select on identifier, or concat of those
  int analyze_lvalue(const AstNode& lv, int scope_id, Analysis a) {
    switch (lv.kind) {
    case NodeKind::identifier: {
      const SimDesign::Binding& b = binding_of(lv, scope_id);
      if (b.is_param)
        throw ElaborationError("assignment to parameter '" + lv.text + "'",
                               lv.span);
      if (design_.nets[b.net].is_input && scope_id == 0)
        throw ElaborationError("assignment drives input port '" + lv.text +
                                   "'",
                               lv.span);
      if (a.writes)
        a.writes->push_back({b.net, mask_width(design_.nets[b.net].width)});
      return design_.nets[b.net].width;
    }
    case NodeKind::bit_select: {
      const SimDesign::Binding& b = binding_of(lv.children[0], scope_id);
      if (b.is_param)
        throw ElaborationError(
            "assignment to parameter '" + lv.children[0].text + "'", lv.span);
      const SimDesign::Net& net = design_.nets[b.net];
      if (net.is_input && scope_id == 0)
        throw ElaborationError("assignment drives input port '" +
                                   lv.children[0].text + "'",
                               lv.span);
      std::uint64_t m = mask_width(net.width); // dynamic index: any bit
      bool constant_index = false;
      if (std::optional<Value> idx = try_const(lv.children[1], scope_id)) {
        constant_index = true;
        std::int64_t phys = static_cast<std::int64_t>(idx->v) - net.lsb;
        // out-of-range write is a runtime no-op, touching no bits
        m = (phys >= 0 && phys < net.width) ? (1ull << phys) : 0;
      } else {
        expr_width(lv.children[1], scope_id, a); // index reads nets
      }
      if (a.writes) a.writes->push_back({b.net, m});
      // a partial write inside an always block, or one whose bit set is
      // not statically known, leaves the target feeding back on itself
      if (a.reads && m != 0 &&
          (!constant_index ||
           (a.inside_always && m != mask_width(net.width))))
        a.reads->push_back({b.net, m});
      return 1;
    }
    case NodeKind::part_select: {
      const SimDesign::Binding& b = binding_of(lv.children[0], scope_id);
      if (b.is_param)
        throw ElaborationError("assignment to parameter", lv.span);
      const SimDesign::Net& net = design_.nets[b.net];
      if (net.is_input && scope_id == 0)
        throw ElaborationError("assignment drives input port '" +
                                   lv.children[0].text + "'",
                               lv.span);
      Value msb = const_eval(lv.children[1], design_.scopes[scope_id]);
      Value lsb = const_eval(lv.children[2], design_.scopes[scope_id]);
      if (msb.v < lsb.v)
        throw ElaborationError("reversed part select", lv.span);
      if (lsb.v < static_cast<std::uint64_t>(net.lsb) ||
          msb.v >= static_cast<std::uint64_t>(net.lsb) + net.width)
        throw ElaborationError("part select out of declared range", lv.span);
      int w = static_cast<int>(msb.v - lsb.v + 1);
      std::uint64_t m = mask_width(w)
                        << (lsb.v - static_cast<std::uint64_t>(net.lsb));
      if (a.writes) a.writes->push_back({b.net, m});
      if (a.reads && a.inside_always && w != net.width)
        a.reads->push_back({b.net, m});
      return w;
    }
    case NodeKind::concat: {
      int total = 0;
      for (const AstNode& c : lv.children)
        total += analyze_lvalue(c, scope_id, a);
      if (total > 64)
        throw ElaborationError("concatenated lvalue wider than 64 bits",
                               lv.span);
      return total;
    }
    default:
      throw ElaborationError("invalid assignment target", lv.span);
    }
  }

  void analyze_stmt(const AstNode& s, int scope_id, Analysis a) {
    switch (s.kind) {
    case NodeKind::begin_block:
      for (const AstNode& c : s.children) analyze_stmt(c, scope_id, a);
      break;
    case NodeKind::blocking_assign:
    case NodeKind::nonblocking_assign:
      analyze_lvalue(s.children[0], scope_id, a);
      expr_width(s.children[1], scope_id, a);
      break;
    case NodeKind::if_stmt:
      expr_width(s.children[0], scope_id, a);
      analyze_stmt(s.children[1], scope_id, a);
      if (s.children.size() == 3) analyze_stmt(s.children[2], scope_id, a);
      break;
    case NodeKind::case_stmt:
      expr_width(s.children[0], scope_id, a);
      for (std::size_t i = 1; i < s.children.size(); ++i) {
        const AstNode& arm = s.children[i];
        for (std::size_t j = 0; j + 1 < arm.children.size(); ++j)
          expr_width(arm.children[j], scope_id, a);
        analyze_stmt(arm.children.back(), scope_id, a);
      }
      break;
    default:
      throw ElaborationError("invalid statement", s.span);
    }
  }

  void add_comb_unit(AstNode node, int scope_id) {
    std::vector<BitRef> reads, writes;
    Analysis a{&reads, &writes, node.kind != NodeKind::cont_assign};
    if (node.kind == NodeKind::cont_assign) {
      analyze_lvalue(node.children[0], scope_id, a);
      expr_width(node.children[1], scope_id, a);
    } else {
      analyze_stmt(node.children.back(), scope_id, a);
    }
    design_.comb.push_back({std::move(node), scope_id});
    unit_reads_.push_back(std::move(reads));
    unit_writes_.push_back(std::move(writes));
  }

  void add_clocked_unit(const AstNode& node, int scope_id) {
    SimDesign::ClockedUnit unit;
    unit.scope = scope_id;
    unit.body = node.children.back();
    for (std::size_t i = 0; i + 1 < node.children.size(); ++i) {
      const AstNode& ev = node.children[i];
      const SimDesign::Binding& b = binding_of(ev.children[0], scope_id);
      if (b.is_param)
        throw ElaborationError("edge event on a parameter", ev.span);
      unit.events.push_back({static_cast<EdgeKind>(ev.a), b.net});
    }
    std::vector<BitRef> reads, writes;
    Analysis a{&reads, &writes, false};
    analyze_stmt(unit.body, scope_id, a);
    for (auto& [n, m] : writes) clocked_writes_.push_back({n, m, node.span});
    design_.clocked.push_back(std::move(unit));
  }

  void instantiate(const AstNode& mod, const std::string& prefix, int depth) {
    if (depth > 32)
      throw ElaborationError("instantiation depth exceeds 32 (recursive?)",
                             mod.span);
    int scope_id = static_cast<int>(design_.scopes.size());
    design_.scopes.push_back({prefix, {}});

    // parameters: fold defaults, allowing references to other parameters
    for (const AstNode& c : mod.children) {
      if (c.kind != NodeKind::parameter) continue;
      Value v = const_eval(c.children[0], design_.scopes[scope_id]);
      SimDesign::Binding b;
      b.is_param = true;
      b.param = v;
      if (!design_.scopes[scope_id].bindings.emplace(c.text, b).second)
        throw ElaborationError("duplicate parameter '" + c.text + "'",
                               c.span);
    }

    // nets for ports and declarations
    for (const AstNode& c : mod.children) {
      if (c.kind == NodeKind::port) {
        auto dir = static_cast<Direction>(c.a);
        if (dir == Direction::inout)
          throw ElaborationError("inout ports are not simulatable", c.span);
        bool top = prefix.empty();
        int idx = declare_net(
            prefix, c.text,
            c.children.empty() ? nullptr : &c.children[0],
            design_.scopes[scope_id], top && dir == Direction::input,
            top && dir == Direction::output, c.span);
        if (top && dir == Direction::input)
          design_.top_inputs.push_back(idx);
        if (top && dir == Direction::output)
          design_.top_outputs.push_back(idx);
      } else if (c.kind == NodeKind::net_decl) {
        const AstNode* range = nullptr;
        std::size_t first = 0;
        if (!c.children.empty() && c.children[0].kind == NodeKind::range) {
          range = &c.children[0];
          first = 1;
        }
        for (std::size_t i = first; i < c.children.size(); ++i)
          declare_net(prefix, c.children[i].text, range,
                      design_.scopes[scope_id], false, false, c.span);
      }
    }

    // items
    for (const AstNode& c : mod.children) {
      switch (c.kind) {
      case NodeKind::cont_assign:
        add_comb_unit(c, scope_id);
        break;
      case NodeKind::always_block:
        if (static_cast<Sensitivity>(c.a) == Sensitivity::edges)
          add_clocked_unit(c, scope_id);
        else
          add_comb_unit(c, scope_id);
        break;
      case NodeKind::instantiation:
        bind_instance(c, scope_id, prefix, depth);
        break;
      default:
        break;
      }
    }
  }

  void bind_instance(const AstNode& inst, int parent_scope,
                     const std::string& prefix, int depth) {
    auto target = modules_.find(inst.text);
    if (target == modules_.end())
      throw ElaborationError(
          "unresolved instantiation target '" + inst.text + "'", inst.span);
    const std::string& inst_name = inst.children[0].text;
    std::string child_prefix = prefix + inst_name + ".";
    instantiate(*target->second, child_prefix, depth + 1);

    std::vector<const AstNode*> ports;
    for (const AstNode& c : target->second->children)
      if (c.kind == NodeKind::port) ports.push_back(&c);

    // port -> connection expression (nullptr = unconnected)
    std::vector<const AstNode*> bound(ports.size(), nullptr);
    std::vector<bool> has_conn(ports.size(), false);
    std::size_t conn_count = inst.children.size() - 1;
    bool named = conn_count > 0 && !inst.children[1].text.empty();
    if (named) {
      for (std::size_t i = 1; i < inst.children.size(); ++i) {
        const AstNode& conn = inst.children[i];
        std::size_t pi = 0;
        for (; pi < ports.size(); ++pi)
          if (ports[pi]->text == conn.text) break;
        if (pi == ports.size())
          throw ElaborationError("no port '" + conn.text + "' on module '" +
                                     inst.text + "'",
                                 conn.span);
        if (has_conn[pi])
          throw ElaborationError("port '" + conn.text + "' connected twice",
                                 conn.span);
        has_conn[pi] = true;
        if (!conn.children.empty()) bound[pi] = &conn.children[0];
      }
    } else {
      if (conn_count > ports.size())
        throw ElaborationError("too many connections for module '" +
                                   inst.text + "'",
                               inst.span);
      for (std::size_t i = 0; i < conn_count; ++i) {
        has_conn[i] = true;
        if (!inst.children[i + 1].children.empty())
          bound[i] = &inst.children[i + 1].children[0];
      }
    }

    for (std::size_t pi = 0; pi < ports.size(); ++pi) {
      auto dir = static_cast<Direction>(ports[pi]->a);
      AstNode port_ref{NodeKind::identifier, inst_name + "." + ports[pi]->text,
                       0, 0, inst.span, {}};
      if (dir == Direction::input) {
        AstNode rhs = bound[pi]
                          ? *bound[pi]
                          : AstNode{NodeKind::literal, "", 0, 1, inst.span, {}};
        AstNode assign{NodeKind::cont_assign, "", 0, 0, inst.span, {}};
        assign.children.push_back(std::move(port_ref));
        assign.children.push_back(std::move(rhs));
        add_comb_unit(std::move(assign), parent_scope);
      } else if (bound[pi]) {
        AstNode assign{NodeKind::cont_assign, "", 0, 0, inst.span, {}};
        assign.children.push_back(*bound[pi]); // validated as lvalue
        assign.children.push_back(std::move(port_ref));
        add_comb_unit(std::move(assign), parent_scope);
      }
    }
  }

  void finish() {
    std::size_t n_units = design_.comb.size();
    // per-unit per-net union of bits written / read
    std::vector<std::unordered_map<int, std::uint64_t>> wmask(n_units);
    std::vector<std::unordered_map<int, std::uint64_t>> rmask(n_units);
    for (std::size_t u = 0; u < n_units; ++u) {
      for (auto& [n, m] : unit_writes_[u]) wmask[u][n] |= m;
      for (auto& [n, m] : unit_reads_[u]) rmask[u][n] |= m;
    }

    // driver discipline: every bit has at most one combinational driver
    // (distinct units may drive disjoint bits of the same net)
    std::unordered_map<int, std::uint64_t> comb_mask; // net -> driven bits
    for (std::size_t u = 0; u < n_units; ++u) {
      for (auto& [n, m] : wmask[u]) {
        std::uint64_t& seen = comb_mask[n];
        if (seen & m)
          throw ElaborationError("multiple drivers for net '" +
                                 design_.nets[n].name + "'");
        seen |= m;
      }
    }
    for (const ClockedWrite& cw : clocked_writes_) {
      auto it = comb_mask.find(cw.net);
      if (it != comb_mask.end() && (it->second & cw.mask))
        throw ElaborationError("net '" + design_.nets[cw.net].name +
                                   "' driven both combinationally and from a "
                                   "clocked block",
                               cw.span);
    }
    for (const ClockedWrite& cw : clocked_writes_)
      if (design_.nets[cw.net].is_input)
        throw ElaborationError("clocked block drives input port '" +
                                   design_.nets[cw.net].name + "'",
                               cw.span);

    // topological order of comb units (Kahn); a unit writing bits feeds
    // every unit that reads any of the same bits
    std::vector<std::vector<int>> consumers(n_units);
    std::vector<int> indegree(n_units, 0);
    std::unordered_map<int, std::vector<int>> readers; // net -> units
    for (std::size_t u = 0; u < n_units; ++u)
      for (auto& [n, m] : rmask[u])
        if (m) readers[n].push_back(static_cast<int>(u));
    for (std::size_t u = 0; u < n_units; ++u) {
      for (auto& [n, wm] : wmask[u]) {
        auto it = readers.find(n);
        if (it == readers.end()) continue;
        for (int v : it->second) {
          if (!(rmask[v][n] & wm)) continue;
          consumers[u].push_back(v);
          ++indegree[v];
        }
      }
    }
    std::vector<int> queue, order;
    for (std::size_t u = 0; u < n_units; ++u)
      if (indegree[u] == 0) queue.push_back(static_cast<int>(u));
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int u = queue[qi];
      order.push_back(u);
      for (int v : consumers[u])
        if (--indegree[v] == 0) queue.push_back(v);
    }
    if (order.size() != n_units)
      throw ElaborationError("combinational cycle");
    std::vector<SimDesign::CombUnit> sorted;
    sorted.reserve(n_units);
    for (int u : order) sorted.push_back(std::move(design_.comb[u]));
    design_.comb = std::move(sorted);
  }
};

} // namespace detail

inline SimDesign elaborate(const SyntaxTree& tree,
                           const std::string& top = "") {
  detail::Elaborator e(tree);
  return e.elaborate(top);
}

namespace detail {

// -- execution -----------------------------------------------------------------

struct PendingWrite {
  int net;
  std::uint64_t mask;
  std::uint64_t value;
};

class Runner {
public:
  Runner(const SimDesign& d, const VectorSuite& v, bool want_trace)
      : d_(d), v_(v), want_trace_(want_trace),
        state_(d.nets.size(), 0) {}

  SimOutcome run() {
    SimOutcome out;
    if (!bind(out)) return out;
    if (!preroll(out)) return out;
    for (std::size_t k = 0; k < v_.steps.size(); ++k) {
      const VectorStep& step = v_.steps[k];
      std::vector<std::pair<EdgeKind, int>> edges;
      for (auto& [name, value] : step.in)
        apply_input(d_.net_index.at(name), value, &edges);
      if (!settle(out)) return out;
      if (!fire_matching(edges, out)) return out;
      bool tick = clock_net_ >= 0 && !step.settle_only;
      if (tick && !edge(clock_net_, 1, out)) return out;
      for (auto& [name, expected] : step.out) {
        std::uint64_t actual = state_[d_.net_index.at(name)];
        if (actual != expected) {
          out.verdict = Verdict::fail;
          out.first_failure = FirstFailure{k, name, expected, actual};
          out.message = "step " + std::to_string(k) + ": " + name +
                        " expected " + std::to_string(expected) + ", got " +
                        std::to_string(actual);
          return out;
        }
      }
      if (want_trace_) out.trace.push_back(state_);
      if (tick && !edge(clock_net_, 0, out)) return out;
    }
    out.verdict = Verdict::pass;
    return out;
  }

private:
  const SimDesign& d_;
  const VectorSuite& v_;
  bool want_trace_;
  std::vector<std::uint64_t> state_;
  int clock_net_ = -1;

  bool bind_fail(SimOutcome& out, const std::string& msg) {
    out.verdict = Verdict::sim_error;
    out.message = msg;
    return false;
  }

  bool bind(SimOutcome& out) {
    auto top_port = [&](const std::string& name, bool input) -> int {
      auto it = d_.net_index.find(name);
      if (it == d_.net_index.end()) return -1;
      const SimDesign::Net& n = d_.nets[it->second];
      if (input ? !n.is_input : !n.is_output) return -1;
      return it->second;
    };
    if (v_.clock) {
      clock_net_ = top_port(*v_.clock, true);
      if (clock_net_ < 0)
        return bind_fail(out, "clock '" + *v_.clock +
                                  "' is not an input port");
    }
    if (v_.reset) {
      int rn = top_port(v_.reset->signal, true);
      if (rn < 0)
        return bind_fail(out, "reset '" + v_.reset->signal +
                                  "' is not an input port");
      if (v_.reset->active != 0 && v_.reset->active != 1)
        return bind_fail(out, "reset active level must be 0 or 1");
    }
    for (std::size_t k = 0; k < v_.steps.size(); ++k) {
      for (auto& [name, value] : v_.steps[k].in) {
        int n = top_port(name, true);
        if (n < 0)
          return bind_fail(out, "step " + std::to_string(k) + ": '" + name +
                                    "' is not an input port");
        if (n == clock_net_)
          return bind_fail(out, "step " + std::to_string(k) +
                                    " drives the clock signal");
        if (value > mask_width(d_.nets[n].width))
          return bind_fail(out, "step " + std::to_string(k) + ": value for '" +
                                    name + "' exceeds " +
                                    std::to_string(d_.nets[n].width) +
                                    " bits");
      }
      for (auto& [name, value] : v_.steps[k].out) {
        int n = top_port(name, false);
        if (n < 0)
          return bind_fail(out, "step " + std::to_string(k) + ": '" + name +
                                    "' is not an output port");
        if (value > mask_width(d_.nets[n].width))
          return bind_fail(out, "step " + std::to_string(k) +
                                    ": expected value for '" + name +
                                    "' exceeds " +
                                    std::to_string(d_.nets[n].width) +
                                    " bits");
      }
    }
    return true;
  }

  void apply_input(int net, std::uint64_t value,
                   std::vector<std::pair<EdgeKind, int>>* edges) {
    std::uint64_t old = state_[net];
    std::uint64_t neu = value & mask_width(d_.nets[net].width);
    state_[net] = neu;
    if (!edges) return;
    bool was = old & 1, is = neu & 1;
    if (!was && is) edges->push_back({EdgeKind::posedge, net});
    if (was && !is) edges->push_back({EdgeKind::negedge, net});
  }

  bool preroll(SimOutcome& out) {
    if (!settle(out)) return false; // initial combinational settle
    if (!v_.reset) return true;
    int rn = d_.net_index.at(v_.reset->signal);
    std::uint64_t active = static_cast<std::uint64_t>(v_.reset->active);
    std::vector<std::pair<EdgeKind, int>> edges;
    apply_input(rn, active, &edges);
    if (!settle(out)) return false;
    if (!fire_matching(edges, out)) return false;
    if (clock_net_ >= 0) {
      for (int c = 0; c < v_.reset->cycles; ++c) {
        if (!edge(clock_net_, 1, out)) return false;
        if (!edge(clock_net_, 0, out)) return false;
      }
    }
    edges.clear();
    apply_input(rn, active ^ 1, &edges);
    if (!settle(out)) return false;
    return fire_matching(edges, out);
  }

  // drive a net to level and fire clocked blocks on the resulting edge
  bool edge(int net, std::uint64_t level, SimOutcome& out) {
    std::vector<std::pair<EdgeKind, int>> edges;
    apply_input(net, level, &edges);
    if (!settle(out)) return false; // logic may read the toggled net
    return fire_matching(edges, out);
  }

  bool fire_matching(const std::vector<std::pair<EdgeKind, int>>& edges,
                     SimOutcome& out) {
    if (edges.empty()) return true;
    std::vector<const SimDesign::ClockedUnit*> fire;
    for (const auto& unit : d_.clocked) {
      bool match = false;
      for (auto& [kind, net] : unit.events)
        for (auto& [ekind, enet] : edges)
          if (kind == ekind && net == enet) match = true;
      if (match) fire.push_back(&unit);
    }
    if (fire.empty()) return true;
    std::vector<PendingWrite> pending;
    for (const SimDesign::ClockedUnit* u : fire)
      exec_stmt(u->body, d_.scopes[u->scope], &pending);
    for (const PendingWrite& p : pending)
      state_[p.net] = (state_[p.net] & ~p.mask) | (p.value & p.mask);
    return settle(out);
  }

  bool settle(SimOutcome& out) {
    std::size_t cap = d_.nets.size() + 1;
    std::vector<std::uint64_t> before;
    for (std::size_t sweep = 0; sweep <= cap; ++sweep) {
      bool changed = false;
      for (const SimDesign::CombUnit& u : d_.comb) {
        const SimDesign::Scope& scope = d_.scopes[u.scope];
        if (u.node.kind == NodeKind::cont_assign) {
          Value v = eval(u.node.children[1], scope);
          changed |= assign_now(u.node.children[0], v, scope);
        } else {
          // blocking writes may flip a net several times inside one block;
          // convergence is judged on the block's net effect on state
          before = state_;
          exec_stmt(u.node.children.back(), scope, nullptr);
          changed |= state_ != before;
        }
      }
      if (!changed) return true;
    }
    out.verdict = Verdict::sim_error;
    out.message = "combinational settle did not converge";
    return false;
  }

  Value eval(const AstNode& e, const SimDesign::Scope& scope) const {
    switch (e.kind) {
    case NodeKind::literal:
      return {static_cast<std::uint64_t>(e.a), static_cast<int>(e.b)};
    case NodeKind::identifier: {
      const SimDesign::Binding& b = scope.bindings.at(e.text);
      if (b.is_param) return b.param;
      return {state_[b.net], d_.nets[b.net].width};
    }
    case NodeKind::unary:
      return apply_unary(e.text, eval(e.children[0], scope));
    case NodeKind::binary:
      return apply_binary(e.text, eval(e.children[0], scope),
                          eval(e.children[1], scope));
    case NodeKind::ternary: {
      Value c = eval(e.children[0], scope);
      Value t = eval(e.children[1], scope);
      Value f = eval(e.children[2], scope);
      return make_value(truthy(c) ? t.v : f.v, t.w > f.w ? t.w : f.w);
    }
    case NodeKind::concat: {
      std::uint64_t v = 0;
      int w = 0;
      for (const AstNode& c : e.children) {
        Value p = eval(c, scope);
        v = p.w >= 64 ? p.v : ((v << p.w) | p.v);
        w += p.w;
      }
      return {v, w};
    }
    case NodeKind::replication: {
      Value count = eval(e.children[0], scope);
      std::uint64_t v = 0;
      int w = 0;
      for (std::size_t i = 1; i < e.children.size(); ++i) {
        Value p = eval(e.children[i], scope);
        v = p.w >= 64 ? p.v : ((v << p.w) | p.v);
        w += p.w;
      }
      std::uint64_t rv = 0;
      for (std::uint64_t i = 0; i < count.v; ++i)
        rv = w >= 64 ? v : ((rv << w) | v);
      return {rv, static_cast<int>(w * count.v)};
    }
    case NodeKind::bit_select: {
      const SimDesign::Binding& b = scope.bindings.at(e.children[0].text);
      Value base = b.is_param ? b.param
                              : Value{state_[b.net], d_.nets[b.net].width};
      int lsb = b.is_param ? 0 : d_.nets[b.net].lsb;
      Value idx = eval(e.children[1], scope);
      std::int64_t phys = static_cast<std::int64_t>(idx.v) - lsb;
      if (phys < 0 || phys >= base.w) return {0, 1};
      return {(base.v >> phys) & 1, 1};
    }
    case NodeKind::part_select: {
      const SimDesign::Binding& b = scope.bindings.at(e.children[0].text);
      const SimDesign::Net& net = d_.nets[b.net];
      Value msb = eval(e.children[1], scope);
      Value lsb = eval(e.children[2], scope);
      int w = static_cast<int>(msb.v - lsb.v + 1);
      int shift = static_cast<int>(lsb.v) - net.lsb;
      return {(state_[b.net] >> shift) & mask_width(w), w};
    }
    default:
      return {0, 1};
    }
  }

  int lvalue_width(const AstNode& lv, const SimDesign::Scope& scope) const {
    switch (lv.kind) {
    case NodeKind::identifier:
      return d_.nets[scope.bindings.at(lv.text).net].width;
    case NodeKind::bit_select:
      return 1;
    case NodeKind::part_select: {
      Value msb = eval(lv.children[1], scope);
      Value lsb = eval(lv.children[2], scope);
      return static_cast<int>(msb.v - lsb.v + 1);
    }
    case NodeKind::concat: {
      int total = 0;
      for (const AstNode& c : lv.children) total += lvalue_width(c, scope);
      return total;
    }
    default:
      return 1;
    }
  }

  // immediate assignment; returns whether any bit changed
  bool assign_now(const AstNode& lv, Value v, const SimDesign::Scope& scope) {
    return assign_impl(lv, v, scope, nullptr);
  }

  void assign_deferred(const AstNode& lv, Value v,
                       const SimDesign::Scope& scope,
                       std::vector<PendingWrite>& pending) {
    assign_impl(lv, v, scope, &pending);
  }

  bool assign_impl(const AstNode& lv, Value v, const SimDesign::Scope& scope,
                   std::vector<PendingWrite>* pending) {
    switch (lv.kind) {
    case NodeKind::identifier: {
      int net = scope.bindings.at(lv.text).net;
      std::uint64_t m = mask_width(d_.nets[net].width);
      return write_bits(net, m, v.v & m, pending);
    }
    case NodeKind::bit_select: {
      const SimDesign::Binding& b = scope.bindings.at(lv.children[0].text);
      const SimDesign::Net& net = d_.nets[b.net];
      Value idx = eval(lv.children[1], scope);
      std::int64_t phys = static_cast<std::int64_t>(idx.v) - net.lsb;
      if (phys < 0 || phys >= net.width) return false; // out of range: no-op
      std::uint64_t m = 1ull << phys;
      return write_bits(b.net, m, (v.v & 1) << phys, pending);
    }
    case NodeKind::part_select: {
      const SimDesign::Binding& b = scope.bindings.at(lv.children[0].text);
      const SimDesign::Net& net = d_.nets[b.net];
      Value msb = eval(lv.children[1], scope);
      Value lsb = eval(lv.children[2], scope);
      int w = static_cast<int>(msb.v - lsb.v + 1);
      int shift = static_cast<int>(lsb.v) - net.lsb;
      std::uint64_t m = mask_width(w) << shift;
      return write_bits(b.net, m, (v.v & mask_width(w)) << shift, pending);
    }
    case NodeKind::concat: {
      // leftmost part takes the most significant bits
      bool changed = false;
      int off = lvalue_width(lv, scope);
      for (const AstNode& part : lv.children) {
        int w = lvalue_width(part, scope);
        off -= w;
        Value slice{(v.v >> off) & mask_width(w), w};
        changed |= assign_impl(part, slice, scope, pending);
      }
      return changed;
    }
    default:
      return false;
    }
  }

  bool write_bits(int net, std::uint64_t mask, std::uint64_t value,
                  std::vector<PendingWrite>* pending) {
    if (pending) {
      pending->push_back({net, mask, value});
      return false;
    }
    std::uint64_t old = state_[net];
    std::uint64_t neu = (old & ~mask) | (value & mask);
    state_[net] = neu;
    return neu != old;
  }

  // returns whether any immediate write changed state
  bool exec_stmt(const AstNode& s, const SimDesign::Scope& scope,
                 std::vector<PendingWrite>* pending) {
    switch (s.kind) {
    case NodeKind::begin_block: {
      bool changed = false;
      for (const AstNode& c : s.children)
        changed |= exec_stmt(c, scope, pending);
      return changed;
    }
    case NodeKind::blocking_assign:
      return assign_now(s.children[0], eval(s.children[1], scope), scope);
    case NodeKind::nonblocking_assign: {
      Value v = eval(s.children[1], scope);
      if (pending) {
        assign_deferred(s.children[0], v, scope, *pending);
        return false;
      }
      return assign_now(s.children[0], v, scope);
    }
    case NodeKind::if_stmt: {
      if (truthy(eval(s.children[0], scope)))
        return exec_stmt(s.children[1], scope, pending);
      if (s.children.size() == 3)
        return exec_stmt(s.children[2], scope, pending);
      return false;
    }
    case NodeKind::case_stmt: {
      Value subj = eval(s.children[0], scope);
      const AstNode* deflt = nullptr;
      for (std::size_t i = 1; i < s.children.size(); ++i) {
        const AstNode& arm = s.children[i];
        if (arm.kind == NodeKind::case_default) {
          deflt = &arm.children[0];
          continue;
        }
        for (std::size_t j = 0; j + 1 < arm.children.size(); ++j)
          if (eval(arm.children[j], scope).v == subj.v)
            return exec_stmt(arm.children.back(), scope, pending);
      }
      if (deflt) return exec_stmt(*deflt, scope, pending);
      return false;
    }
    default:
      return false;
    }
  }
};

} // namespace detail

/// Execute a vector suite. Pure with respect to the design: all mutable
/// state is local to the call, so one elaborated design can serve
/// concurrent runs.
inline SimOutcome run(const SimDesign& design, const VectorSuite& vectors,
                      bool want_trace = false) {
  detail::Runner r(design, vectors, want_trace);
  return r.run();
}

} // namespace rtlseek::sim
