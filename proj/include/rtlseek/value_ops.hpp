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

// Two-state value arithmetic shared by constant folding and simulation.
// Values are unsigned, at most 64 bits wide, always masked to their width.
// Width combination: arithmetic/bitwise take max of operand widths,
// comparisons/logical/reduction produce 1 bit, shifts keep the left width,
// division or modulo by zero yields 0.

#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace rtlseek {

struct Value {
  std::uint64_t v = 0;
  int w = 1;
};

inline std::uint64_t mask_width(int w) {
  return w >= 64 ? ~0ull : (1ull << w) - 1;
}

inline Value make_value(std::uint64_t v, int w) {
  return {v & mask_width(w), w};
}

inline bool truthy(Value x) { return x.v != 0; }

inline Value apply_unary(const std::string& op, Value x) {
  if (op == "~") return make_value(~x.v, x.w);
  if (op == "-") return make_value(0 - x.v, x.w);
  if (op == "+") return x;
  if (op == "!") return {x.v == 0 ? 1ull : 0ull, 1};
  if (op == "&") return {x.v == mask_width(x.w) ? 1ull : 0ull, 1};
  if (op == "~&") return {x.v == mask_width(x.w) ? 0ull : 1ull, 1};
  if (op == "|") return {x.v != 0 ? 1ull : 0ull, 1};
  if (op == "~|") return {x.v != 0 ? 0ull : 1ull, 1};
  std::uint64_t parity = static_cast<std::uint64_t>(std::popcount(x.v) & 1);
  if (op == "^") return {parity, 1};
  return {parity ^ 1, 1}; // ~^ and ^~
}

inline Value apply_binary(const std::string& op, Value l, Value r) {
  int w = l.w > r.w ? l.w : r.w;
  if (op == "+") return make_value(l.v + r.v, w);
  if (op == "-") return make_value(l.v - r.v, w);
  if (op == "*") return make_value(l.v * r.v, w);
  if (op == "/") return make_value(r.v == 0 ? 0 : l.v / r.v, w);
  if (op == "%") return make_value(r.v == 0 ? 0 : l.v % r.v, w);
  if (op == "&") return make_value(l.v & r.v, w);
  if (op == "|") return make_value(l.v | r.v, w);
  if (op == "^") return make_value(l.v ^ r.v, w);
  if (op == "^~" || op == "~^") return make_value(~(l.v ^ r.v), w);
  if (op == "==") return {l.v == r.v ? 1ull : 0ull, 1};
  if (op == "!=") return {l.v != r.v ? 1ull : 0ull, 1};
  if (op == "<") return {l.v < r.v ? 1ull : 0ull, 1};
  if (op == "<=") return {l.v <= r.v ? 1ull : 0ull, 1};
  if (op == ">") return {l.v > r.v ? 1ull : 0ull, 1};
  if (op == ">=") return {l.v >= r.v ? 1ull : 0ull, 1};
  if (op == "&&") return {(l.v != 0 && r.v != 0) ? 1ull : 0ull, 1};
  if (op == "||") return {(l.v != 0 || r.v != 0) ? 1ull : 0ull, 1};
  if (op == "<<") return make_value(r.v >= 64 ? 0 : l.v << r.v, l.w);
  /* >> */ return make_value(r.v >= 64 ? 0 : l.v >> r.v, l.w);
}

} // namespace rtlseek
