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

// Canonicalization and structural equivalence.
//
// canonicalize() erases superficial variation: literal spelling, identifier
// names (including module names), and module-level item order. Statement
// order inside always/begin blocks, port order, and parameter order are
// semantically significant and preserved.
//
// Item reordering uses iterative hash refinement: round 0 hashes every item
// with identifiers replaced by a single placeholder; identifier classes are
// then refined from their occurrence contexts and items re-hashed with the
// refined classes until a fixpoint. Remaining ties break by round-0 hash,
// then original index. Since the transform is a permutation plus injective
// renaming, two inequivalent designs can never canonicalize to the same
// tree; residual ties can at worst keep two symmetric designs apart.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rtlseek/ast.hpp"
#include "rtlseek/sha256.hpp"
#include "rtlseek/value_ops.hpp"

namespace rtlseek {

struct CanonicalForm {
  SyntaxTree tree;
  std::string digest; // sha256 hex of the tree's stable serialization
};

struct EquivClassPartition {
  std::vector<std::vector<std::size_t>> classes; // by first-appearing index
  std::vector<std::size_t> representative;       // lowest index per class
};

namespace detail {

// -- small deterministic 64-bit hash (ordering only; sha256 is the digest) --

struct Fnv64 {
  std::uint64_t h = 1469598103934665603ull;
  void byte(std::uint8_t b) {
    h ^= b;
    h *= 1099511628211ull;
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) byte(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void str(std::string_view s) {
    u64(s.size());
    for (char c : s) byte(static_cast<std::uint8_t>(c));
  }
};

// -- tree passes -------------------------------------------------------------

inline void zero_spans(AstNode& n) {
  n.span = {0, 0};
  for (AstNode& c : n.children) zero_spans(c);
}

inline void erase_literal_spelling(AstNode& n) {
  if (n.kind == NodeKind::literal) n.text.clear();
  for (AstNode& c : n.children) erase_literal_spelling(c);
}

// `wire a, b;` becomes two singleton declarations so that declaration
// grouping is itself a superficial difference.
inline void split_net_decls(AstNode& mod) {
  std::vector<AstNode> out;
  out.reserve(mod.children.size());
  for (AstNode& c : mod.children) {
    if (c.kind != NodeKind::net_decl) {
      out.push_back(std::move(c));
      continue;
    }
    std::size_t first = 0;
    const AstNode* range = nullptr;
    if (!c.children.empty() && c.children[0].kind == NodeKind::range) {
      range = &c.children[0];
      first = 1;
    }
    for (std::size_t i = first; i < c.children.size(); ++i) {
      AstNode single{NodeKind::net_decl, "", c.a, 0, c.span, {}};
      if (range) single.children.push_back(*range);
      single.children.push_back(std::move(c.children[i]));
      out.push_back(std::move(single));
    }
  }
  mod.children = std::move(out);
}

// -- literal-only constant folding (parameter defaults) ----------------------

inline std::optional<Value> fold_const(const AstNode& e) {
  switch (e.kind) {
  case NodeKind::literal:
    return Value{static_cast<std::uint64_t>(e.a), static_cast<int>(e.b)};
  case NodeKind::unary: {
    auto x = fold_const(e.children[0]);
    if (!x) return std::nullopt;
    return apply_unary(e.text, *x);
  }
  case NodeKind::binary: {
    auto l = fold_const(e.children[0]);
    auto r = fold_const(e.children[1]);
    if (!l || !r) return std::nullopt;
    return apply_binary(e.text, *l, *r);
  }
  case NodeKind::ternary: {
    auto c = fold_const(e.children[0]);
    auto t = fold_const(e.children[1]);
    auto f = fold_const(e.children[2]);
    if (!c || !t || !f) return std::nullopt;
    int w = t->w > f->w ? t->w : f->w;
    return make_value(truthy(*c) ? t->v : f->v, w);
  }
  case NodeKind::concat: {
    std::uint64_t v = 0;
    int w = 0;
    for (const AstNode& part : e.children) {
      auto p = fold_const(part);
      if (!p) return std::nullopt;
      if (w + p->w > 64) return std::nullopt;
      v = p->w >= 64 ? p->v : ((v << p->w) | p->v);
      w += p->w;
    }
    return Value{v, w};
  }
  case NodeKind::replication: {
    auto count = fold_const(e.children[0]);
    if (!count) return std::nullopt;
    std::uint64_t v = 0;
    int w = 0;
    for (std::size_t i = 1; i < e.children.size(); ++i) {
      auto p = fold_const(e.children[i]);
      if (!p) return std::nullopt;
      if (w + p->w > 64) return std::nullopt;
      v = p->w >= 64 ? p->v : ((v << p->w) | p->v);
      w += p->w;
    }
    if (count->v == 0 || count->v > 64 ||
        static_cast<std::uint64_t>(w) * count->v > 64)
      return std::nullopt;
    std::uint64_t out = 0;
    for (std::uint64_t i = 0; i < count->v; ++i)
      out = w >= 64 ? v : ((out << w) | v);
    return Value{out, static_cast<int>(w * count->v)};
  }
  default:
    return std::nullopt;
  }
}

inline void fold_parameter_defaults(AstNode& mod) {
  for (AstNode& c : mod.children) {
    if (c.kind != NodeKind::parameter) continue;
    if (auto v = fold_const(c.children[0])) {
      c.children[0] = AstNode{NodeKind::literal,
                              "",
                              static_cast<std::int64_t>(v->v),
                              v->w,
                              c.children[0].span,
                              {}};
    }
  }
}

// -- item-order refinement ----------------------------------------------------

struct UnitContext {
  // original module name -> port names in declaration order
  std::unordered_map<std::string, std::vector<std::string>> ports;

  bool resolved(const std::string& target) const {
    return ports.contains(target);
  }
  int port_index(const std::string& target, const std::string& port) const {
    auto it = ports.find(target);
    if (it == ports.end()) return -1;
    for (std::size_t i = 0; i < it->second.size(); ++i)
      if (it->second[i] == port) return static_cast<int>(i);
    return -1;
  }
};

struct Occurrence {
  std::uint64_t container; // current round hash of the containing item
  std::uint64_t path;      // structural path from the container root
};

class ItemRefiner {
public:
  ItemRefiner(const AstNode& mod, const UnitContext& unit) : unit_(unit) {
    for (const AstNode& c : mod.children) {
      if (c.kind == NodeKind::port || c.kind == NodeKind::parameter)
        fixed_.push_back(&c);
      else
        items_.push_back(&c);
    }
    // seed identifier colors by declaration role; port/parameter position is
    // interface-significant, everything local starts uniform
    std::size_t port_idx = 0, param_idx = 0;
    for (const AstNode* f : fixed_) {
      Fnv64 fn;
      if (f->kind == NodeKind::port) {
        fn.str("port");
        fn.u64(port_idx++);
      } else {
        fn.str("param");
        fn.u64(param_idx++);
      }
      color_[f->text] = fn.h;
    }
  }

  // final ordering of items_ indices
  std::vector<std::size_t> order() {
    std::size_t rounds = items_.size() + color_.size() + 4;
    if (rounds > 64) rounds = 64;
    std::vector<std::uint64_t> hash0 = round_hashes();
    std::vector<std::uint64_t> prev = hash0;
    for (std::size_t r = 0; r < rounds; ++r) {
      refine_colors(prev);
      std::vector<std::uint64_t> cur = round_hashes();
      if (cur == prev) break;
      prev = std::move(cur);
    }
    std::vector<std::size_t> idx(items_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (prev[a] != prev[b]) return prev[a] < prev[b];
      if (hash0[a] != hash0[b]) return hash0[a] < hash0[b];
      return a < b;
    });
    return idx;
  }

private:
  const UnitContext& unit_;
  std::vector<const AstNode*> items_;
  std::vector<const AstNode*> fixed_;
  std::unordered_map<std::string, std::uint64_t> color_;

  std::uint64_t color_of(const std::string& ident) const {
    auto it = color_.find(ident);
    if (it != color_.end()) return it->second;
    Fnv64 fn;
    fn.str("local");
    return fn.h;
  }

  // structure hash of one item with identifiers contributing their color;
  // optionally records identifier occurrences with their path hashes
  void walk(const AstNode& n, Fnv64& fn, std::uint64_t path,
            const AstNode* inst,
            std::vector<std::pair<const std::string*, std::uint64_t>>* occ)
      const {
    fn.u64(static_cast<std::uint64_t>(n.kind));
    fn.u64(static_cast<std::uint64_t>(n.a));
    fn.u64(static_cast<std::uint64_t>(n.b));
    bool ident_like = n.kind == NodeKind::identifier ||
                      n.kind == NodeKind::declarator ||
                      n.kind == NodeKind::port || n.kind == NodeKind::parameter;
    if (ident_like) {
      fn.u64(color_of(n.text));
      if (occ) occ->push_back({&n.text, path});
    } else if (n.kind == NodeKind::instantiation) {
      if (unit_.resolved(n.text)) fn.str("<target>");
      else fn.str(n.text);
    } else if (n.kind == NodeKind::connection && !n.text.empty()) {
      int pi = inst ? unit_.port_index(inst->text, n.text) : -1;
      if (inst && unit_.resolved(inst->text) && pi >= 0) {
        fn.str("<conn>");
        fn.u64(static_cast<std::uint64_t>(pi));
      } else {
        fn.str(n.text);
      }
    } else {
      fn.str(n.text);
    }
    fn.u64(n.children.size());
    const AstNode* inst_ctx =
        n.kind == NodeKind::instantiation ? &n : inst;
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      Fnv64 pf;
      pf.u64(path);
      pf.u64(static_cast<std::uint64_t>(n.kind));
      pf.str(ident_like || n.kind == NodeKind::instantiation ? "" : n.text);
      pf.u64(i);
      walk(n.children[i], fn, pf.h, inst_ctx, occ);
    }
  }

  std::vector<std::uint64_t> round_hashes() const {
    std::vector<std::uint64_t> out(items_.size());
    for (std::size_t i = 0; i < items_.size(); ++i) {
      Fnv64 fn;
      walk(*items_[i], fn, 0, nullptr, nullptr);
      out[i] = fn.h;
    }
    return out;
  }

  void refine_colors(const std::vector<std::uint64_t>& item_hash) {
    // occurrence contexts: (container hash, path) per identifier
    std::unordered_map<std::string, std::vector<std::uint64_t>> ctx;
    auto record = [&](const AstNode& root, std::uint64_t container) {
      std::vector<std::pair<const std::string*, std::uint64_t>> occ;
      Fnv64 dummy;
      walk(root, dummy, 0, nullptr, &occ);
      for (auto& [name, path] : occ) {
        Fnv64 fn;
        fn.u64(container);
        fn.u64(path);
        ctx[*name].push_back(fn.h);
      }
    };
    for (std::size_t i = 0; i < items_.size(); ++i)
      record(*items_[i], item_hash[i]);
    std::size_t fixed_idx = 0;
    for (const AstNode* f : fixed_) {
      Fnv64 fn;
      fn.str("fixed");
      fn.u64(fixed_idx++);
      record(*f, fn.h);
    }
    std::unordered_map<std::string, std::uint64_t> next;
    for (auto& [name, contexts] : ctx) {
      std::sort(contexts.begin(), contexts.end());
      Fnv64 fn;
      fn.u64(color_of(name));
      for (std::uint64_t c : contexts) fn.u64(c);
      next[name] = fn.h;
    }
    color_ = std::move(next);
  }
};

inline void reorder_items(AstNode& mod, const UnitContext& unit) {
  std::vector<AstNode> head, items;
  for (AstNode& c : mod.children) {
    if (c.kind == NodeKind::port || c.kind == NodeKind::parameter)
      head.push_back(std::move(c));
    else
      items.push_back(std::move(c));
  }
  // refinement inspects the original layout, so rebuild it view-only
  AstNode view{NodeKind::module, mod.text, 0, 0, {}, {}};
  for (const AstNode& h : head) view.children.push_back(h);
  for (const AstNode& it : items) view.children.push_back(it);
  ItemRefiner refiner(view, unit);
  std::vector<std::size_t> order = refiner.order();
  mod.children = std::move(head);
  for (std::size_t i : order) mod.children.push_back(std::move(items[i]));
}

// -- renaming -----------------------------------------------------------------

inline void map_named_connections(AstNode& mod, const UnitContext& unit) {
  for (AstNode& c : mod.children) {
    if (c.kind != NodeKind::instantiation || !unit.resolved(c.text)) continue;
    for (std::size_t i = 1; i < c.children.size(); ++i) {
      AstNode& conn = c.children[i];
      if (conn.text.empty()) continue;
      int pi = unit.port_index(c.text, conn.text);
      if (pi >= 0) conn.text = "_" + std::to_string(pi);
    }
  }
}

class Renamer {
public:
  std::string canon(const std::string& name) {
    auto it = map_.find(name);
    if (it != map_.end()) return it->second;
    std::string fresh = "_" + std::to_string(map_.size());
    map_.emplace(name, fresh);
    return fresh;
  }

  void rename(AstNode& n) {
    switch (n.kind) {
    case NodeKind::port:
    case NodeKind::parameter:
    case NodeKind::declarator:
    case NodeKind::identifier:
      n.text = canon(n.text);
      break;
    case NodeKind::instantiation:
      // target name is module-level; named connection texts were already
      // mapped to the target's port positions
      for (AstNode& c : n.children)
        if (c.kind != NodeKind::connection) rename(c);
        else
          for (AstNode& e : c.children) rename(e);
      return;
    default:
      break;
    }
    for (AstNode& c : n.children) rename(c);
  }

private:
  std::unordered_map<std::string, std::string> map_;
};

// -- module-name canonicalization ----------------------------------------------

inline void hash_for_module_order(const AstNode& n, Fnv64& fn,
                                  const UnitContext& unit,
                                  const std::unordered_map<std::string,
                                                           std::uint64_t>&
                                      module_color,
                                  bool is_root) {
  fn.u64(static_cast<std::uint64_t>(n.kind));
  fn.u64(static_cast<std::uint64_t>(n.a));
  fn.u64(static_cast<std::uint64_t>(n.b));
  if (is_root) {
    fn.str(""); // module name is being canonicalized away
  } else if (n.kind == NodeKind::instantiation && unit.resolved(n.text)) {
    auto it = module_color.find(n.text);
    fn.str("<module>");
    fn.u64(it == module_color.end() ? 0 : it->second);
  } else {
    fn.str(n.text);
  }
  fn.u64(n.children.size());
  for (const AstNode& c : n.children)
    hash_for_module_order(c, fn, unit, module_color, false);
}

inline void canonicalize_module_names(SyntaxTree& tree,
                                      const UnitContext& unit) {
  auto mods = tree.modules();
  std::size_t count = mods.size();
  std::unordered_map<std::string, std::uint64_t> color;
  std::vector<std::uint64_t> digest(count, 0);
  for (std::size_t round = 0; round <= count; ++round) {
    for (std::size_t i = 0; i < count; ++i) {
      Fnv64 fn;
      hash_for_module_order(mods[i], fn, unit, color, true);
      digest[i] = fn.h;
    }
    color.clear();
    for (std::size_t i = 0; i < count; ++i) color[mods[i].text] = digest[i];
  }
  std::vector<std::size_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (digest[a] != digest[b]) return digest[a] < digest[b];
    return a < b;
  });
  std::unordered_map<std::string, std::string> rename;
  for (std::size_t pos = 0; pos < count; ++pos)
    rename[mods[order[pos]].text] = "_m" + std::to_string(pos);
  std::vector<AstNode> reordered;
  reordered.reserve(count);
  for (std::size_t pos = 0; pos < count; ++pos)
    reordered.push_back(std::move(tree.root.children[order[pos]]));
  tree.root.children = std::move(reordered);
  for (AstNode& mod : tree.root.children) {
    mod.text = rename[mod.text];
    for (AstNode& c : mod.children)
      if (c.kind == NodeKind::instantiation && unit.resolved(c.text))
        c.text = rename[c.text];
  }
}

// -- stable serialization -------------------------------------------------------

inline void serialize_node(const AstNode& n, std::string& out) {
  out += std::to_string(static_cast<int>(n.kind));
  out += '\x1f';
  out += n.text;
  out += '\x1f';
  out += std::to_string(n.a);
  out += '\x1f';
  out += std::to_string(n.b);
  out += '\x1d';
  out += std::to_string(n.children.size());
  out += '\x1e';
  for (const AstNode& c : n.children) serialize_node(c, out);
}

// first structural difference between two trees, as a readable path
inline bool first_difference_at(const AstNode& a, const AstNode& b,
                                std::string path, std::string& out) {
  auto leaf = [&](const std::string& what) {
    out = path + ": " + what;
    return true;
  };
  if (a.kind != b.kind)
    return leaf("kind " + std::string(node_kind_name(a.kind)) + " vs " +
                std::string(node_kind_name(b.kind)));
  if (a.text != b.text)
    return leaf("text '" + a.text + "' vs '" + b.text + "'");
  if (a.a != b.a)
    return leaf("attr " + std::to_string(a.a) + " vs " + std::to_string(b.a));
  if (a.b != b.b)
    return leaf("attr " + std::to_string(a.b) + " vs " + std::to_string(b.b));
  if (a.children.size() != b.children.size())
    return leaf("child count " + std::to_string(a.children.size()) + " vs " +
                std::to_string(b.children.size()));
  for (std::size_t i = 0; i < a.children.size(); ++i) {
    std::string sub = path + "/" +
                      std::string(node_kind_name(a.children[i].kind)) + "[" +
                      std::to_string(i) + "]";
    if (first_difference_at(a.children[i], b.children[i], sub, out))
      return true;
  }
  return false;
}

} // namespace detail

/// Erase superficial variation; the result is the design's identity.
inline CanonicalForm canonicalize(const SyntaxTree& input) {
  SyntaxTree t = input;
  detail::UnitContext unit;
  for (const AstNode& mod : t.modules()) {
    std::vector<std::string> ports;
    for (const AstNode& c : mod.children)
      if (c.kind == NodeKind::port) ports.push_back(c.text);
    unit.ports[mod.text] = std::move(ports);
  }
  for (AstNode& mod : t.modules()) {
    detail::split_net_decls(mod);
    detail::erase_literal_spelling(mod);
    detail::fold_parameter_defaults(mod);
    detail::reorder_items(mod, unit);
    detail::map_named_connections(mod, unit);
    detail::Renamer renamer;
    for (AstNode& c : mod.children) renamer.rename(c);
  }
  detail::canonicalize_module_names(t, unit);
  detail::zero_spans(t.root);
  std::string serial;
  detail::serialize_node(t.root, serial);
  CanonicalForm form{std::move(t), sha256_hex(serial)};
  return form;
}

/// Depth-first comparison of canonical forms; digest equality is the fast
/// path, node-for-node comparison the ground truth.
inline bool structurally_equivalent(const SyntaxTree& a, const SyntaxTree& b) {
  CanonicalForm ca = canonicalize(a);
  CanonicalForm cb = canonicalize(b);
  if (ca.digest != cb.digest) return false;
  return same_tree(ca.tree, cb.tree);
}

/// Path of the first mismatching canonical node, or nullopt when equal.
inline std::optional<std::string> first_difference(const CanonicalForm& a,
                                                   const CanonicalForm& b) {
  std::string out;
  if (detail::first_difference_at(a.tree.root, b.tree.root, "", out))
    return out;
  return std::nullopt;
}

/// Group candidates into structural equivalence classes. Classes are ordered
/// by their first-appearing candidate; the representative is the lowest
/// index. Digest buckets are confirmed by node comparison.
inline EquivClassPartition partition(const std::vector<SyntaxTree>& trees) {
  EquivClassPartition part;
  std::vector<CanonicalForm> forms;
  forms.reserve(trees.size());
  for (const SyntaxTree& t : trees) forms.push_back(canonicalize(t));
  for (std::size_t i = 0; i < forms.size(); ++i) {
    bool placed = false;
    for (std::size_t c = 0; c < part.classes.size() && !placed; ++c) {
      const CanonicalForm& rep = forms[part.representative[c]];
      if (rep.digest == forms[i].digest &&
          same_tree(rep.tree, forms[i].tree)) {
        part.classes[c].push_back(i);
        placed = true;
      }
    }
    if (!placed) {
      part.classes.push_back({i});
      part.representative.push_back(i);
    }
  }
  return part;
}

} // namespace rtlseek
