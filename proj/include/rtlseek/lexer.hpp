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

// Tokenizer for the synthesizable Verilog subset. Comments, whitespace and
// `timescale directives are stripped; everything else becomes a token with
// a byte-offset span into the original source.

#pragma once

#include <cctype>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace rtlseek {

struct Span {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;

  friend bool operator==(const Span&, const Span&) = default;
};

enum class TokenKind {
  keyword,
  identifier,
  sized_literal,
  unsized_literal,
  string_literal,
  op,
  punct,
};

struct Token {
  TokenKind kind;
  std::string lexeme;
  Span span;
};

/// Lexical error with the byte span of the offending input.
class LexError : public std::runtime_error {
public:
  LexError(std::string message, Span span)
      : std::runtime_error(std::move(message)), span_(span) {}
  Span span() const { return span_; }

private:
  Span span_;
};

namespace detail {

inline const std::unordered_set<std::string_view>& keyword_table() {
  // Core subset keywords plus recognized-but-unsupported ones so the parser
  // can report them as out of subset instead of "unexpected identifier".
  static const std::unordered_set<std::string_view> kw = {
      "module", "endmodule", "input", "output", "inout", "wire", "reg",
      "assign", "always", "begin", "end", "if", "else", "case", "endcase",
      "default", "posedge", "negedge", "or", "parameter", "localparam",
      // out of subset, recognized for diagnostics
      "initial", "generate", "endgenerate", "genvar", "function",
      "endfunction", "task", "endtask", "integer", "real", "time", "event",
      "signed", "casez", "casex", "for", "while", "repeat", "forever",
      "wait", "fork", "join", "specify", "endspecify", "defparam",
      "primitive", "endprimitive", "deassign", "force", "release",
      "disable", "and", "nand", "not", "nor", "xor", "xnor", "buf",
      "bufif0", "bufif1", "notif0", "notif1", "tri", "supply0", "supply1",
  };
  return kw;
}

inline bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$'; // system task/function names lex as plain identifiers
}

inline bool is_ident_char(char c) {
  return is_ident_start(c) || (c >= '0' && c <= '9');
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_base_digit(char base, char c) {
  switch (base) {
  case 'b': return c == '0' || c == '1';
  case 'o': return c >= '0' && c <= '7';
  case 'd': return is_digit(c);
  case 'h':
    return is_digit(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
  default: return false;
  }
}

inline bool valid_utf8(std::string_view s, std::size_t& bad) {
  std::size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t n;
    if (c < 0x80) n = 0;
    else if ((c & 0xE0) == 0xC0) n = 1;
    else if ((c & 0xF0) == 0xE0) n = 2;
    else if ((c & 0xF8) == 0xF0) n = 3;
    else { bad = i; return false; }
    for (std::size_t k = 1; k <= n; ++k) {
      if (i + k >= s.size() ||
          (static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
        bad = i;
        return false;
      }
    }
    i += n + 1;
  }
  return true;
}

} // namespace detail

/// Splits `source` into tokens. Throws LexError on invalid UTF-8,
/// unterminated comments/strings, illegal characters, and unsupported
/// compiler directives (anything but `timescale).
inline std::vector<Token> tokenize(std::string_view source) {
  std::size_t bad = 0;
  if (!detail::valid_utf8(source, bad)) {
    throw LexError("invalid UTF-8 byte in source",
                   {static_cast<std::uint32_t>(bad),
                    static_cast<std::uint32_t>(bad + 1)});
  }

  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = source.size();

  auto span_from = [](std::size_t b, std::size_t e) {
    return Span{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(e)};
  };
  auto push = [&](TokenKind k, std::size_t b, std::size_t e) {
    out.push_back({k, std::string(source.substr(b, e - b)), span_from(b, e)});
  };

  while (i < n) {
    char c = source[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' ||
        c == '\v') {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '/') {
      while (i < n && source[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && source[i + 1] == '*') {
      std::size_t start = i;
      i += 2;
      while (i + 1 < n && !(source[i] == '*' && source[i + 1] == '/')) ++i;
      if (i + 1 >= n)
        throw LexError("unterminated block comment", span_from(start, n));
      i += 2;
      continue;
    }
    if (c == '`') {
      std::size_t start = i++;
      std::size_t wb = i;
      while (i < n && detail::is_ident_char(source[i])) ++i;
      std::string_view word = source.substr(wb, i - wb);
      if (word == "timescale") {
        while (i < n && source[i] != '\n') ++i;
        continue;
      }
      throw LexError("unsupported compiler directive `" + std::string(word),
                     span_from(start, i));
    }
    if (c == '"') {
      std::size_t start = i++;
      while (i < n && source[i] != '"' && source[i] != '\n') {
        if (source[i] == '\\' && i + 1 < n) ++i;
        ++i;
      }
      if (i >= n || source[i] != '"')
        throw LexError("unterminated string literal", span_from(start, n));
      ++i;
      push(TokenKind::string_literal, start, i);
      continue;
    }
    if (detail::is_ident_start(c)) {
      std::size_t start = i;
      while (i < n && detail::is_ident_char(source[i])) ++i;
      std::string_view word = source.substr(start, i - start);
      push(detail::keyword_table().contains(word) ? TokenKind::keyword
                                                  : TokenKind::identifier,
           start, i);
      continue;
    }
    if (detail::is_digit(c) || c == '\'') {
      std::size_t start = i;
      bool saw_size = false;
      while (i < n && (detail::is_digit(source[i]) || source[i] == '_')) {
        saw_size = true;
        ++i;
      }
      if (i < n && source[i] == '\'') {
        ++i;
        if (i < n && (source[i] == 's' || source[i] == 'S')) ++i;
        if (i >= n)
          throw LexError("truncated based literal", span_from(start, n));
        char base = static_cast<char>(std::tolower(source[i]));
        if (base != 'b' && base != 'o' && base != 'd' && base != 'h')
          throw LexError("invalid literal base", span_from(start, i + 1));
        ++i;
        std::size_t vb = i;
        while (i < n &&
               (detail::is_base_digit(base, source[i]) || source[i] == '_'))
          ++i;
        if (i == vb)
          throw LexError("based literal has no digits", span_from(start, i));
        push(TokenKind::sized_literal, start, i);
        continue;
      }
      if (!saw_size)
        throw LexError("stray apostrophe", span_from(start, start + 1));
      push(TokenKind::unsized_literal, start, i);
      continue;
    }

    // operators, maximal munch
    static const std::string_view three[] = {"===", "!==", "<<<", ">>>"};
    static const std::string_view two[] = {"==", "!=", "<=", ">=", "<<",
                                           ">>", "&&", "||", "~&", "~|",
                                           "~^", "^~", "**"};
    std::string_view rest = source.substr(i);
    bool matched = false;
    for (auto t : three) {
      if (rest.starts_with(t)) {
        push(TokenKind::op, i, i + 3);
        i += 3;
        matched = true;
        break;
      }
    }
    if (matched) continue;
    for (auto t : two) {
      if (rest.starts_with(t)) {
        push(TokenKind::op, i, i + 2);
        i += 2;
        matched = true;
        break;
      }
    }
    if (matched) continue;

    switch (c) {
    case '+': case '-': case '*': case '/': case '%':
    case '<': case '>': case '!': case '~': case '&':
    case '|': case '^': case '?': case '=':
      push(TokenKind::op, i, i + 1);
      ++i;
      continue;
    case '(': case ')': case '[': case ']': case '{': case '}':
    case ';': case ',': case ':': case '.': case '#': case '@':
      push(TokenKind::punct, i, i + 1);
      ++i;
      continue;
    default:
      throw LexError(std::string("illegal character '") + c + "'",
                     span_from(i, i + 1));
    }
  }
  return out;
}

} // namespace rtlseek
