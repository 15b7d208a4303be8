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

// Model-response decomposition: the reasoning span between the first
// <think></think> pair, the design span between the first
// <total_design></total_design> pair after it, and the RTL candidates —
// top-level module..endmodule blocks found in the design span (or the whole
// text when the span is absent). Malformed structure never throws; missing
// spans simply stay absent and the format indicator picks that up later.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace rtlseek::reward {

struct ModelResponse {
  std::string raw_text;
  std::optional<std::string> think_span;
  std::optional<std::string> design_span;
  std::vector<std::string> candidates;
};

namespace detail {

inline bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '$';
}

// balanced module/endmodule blocks at nesting depth 0, skipping strings and
// comments so that keywords inside them are not split points
inline std::vector<std::string> extract_module_blocks(const std::string& s) {
  std::vector<std::string> out;
  std::size_t i = 0, n = s.size(), start = 0;
  int depth = 0;
  while (i < n) {
    char c = s[i];
    if (c == '/' && i + 1 < n && s[i + 1] == '/') {
      while (i < n && s[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && s[i + 1] == '*') {
      i += 2;
      while (i + 1 < n && !(s[i] == '*' && s[i + 1] == '/')) ++i;
      i = i + 2 <= n ? i + 2 : n;
      continue;
    }
    if (c == '"') {
      ++i;
      while (i < n && s[i] != '"') {
        if (s[i] == '\\' && i + 1 < n) ++i;
        ++i;
      }
      if (i < n) ++i;
      continue;
    }
    if (ident_char(c)) {
      std::size_t ws = i;
      while (i < n && ident_char(s[i])) ++i;
      std::string_view word(s.data() + ws, i - ws);
      if (word == "module") {
        if (depth == 0) start = ws;
        ++depth;
      } else if (word == "endmodule" && depth > 0) {
        --depth;
        if (depth == 0) out.push_back(s.substr(start, i - start));
      }
      continue;
    }
    ++i;
  }
  return out;
}

inline std::optional<std::pair<std::size_t, std::size_t>>
tag_span(const std::string& s, const std::string& open,
         const std::string& close, std::size_t from) {
  std::size_t o = s.find(open, from);
  if (o == std::string::npos) return std::nullopt;
  std::size_t c = s.find(close, o + open.size());
  if (c == std::string::npos) return std::nullopt;
  return std::make_pair(o + open.size(), c); // content range
}

} // namespace detail

inline ModelResponse parse_response(const std::string& raw) {
  ModelResponse r;
  r.raw_text = raw;
  auto think = detail::tag_span(raw, "<think>", "</think>", 0);
  std::size_t design_from = 0;
  if (think) {
    r.think_span = raw.substr(think->first, think->second - think->first);
    design_from = think->second + 8; // past "</think>"
  }
  // searching after the think span keeps the two spans disjoint
  auto design =
      detail::tag_span(raw, "<total_design>", "</total_design>", design_from);
  if (design)
    r.design_span = raw.substr(design->first, design->second - design->first);
  r.candidates =
      detail::extract_module_blocks(design ? *r.design_span : raw);
  return r;
}

} // namespace rtlseek::reward
