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

#include <catch2/catch_amalgamated.hpp>

#include "rtlseek/parser.hpp"
#include "rtlseek/printer.hpp"

using namespace rtlseek;

namespace {

void check_round_trip(const char* src) {
  INFO(src);
  SyntaxTree first = parse_source(src);
  std::string printed = print(first);
  INFO(printed);
  SyntaxTree second = parse_source(printed);
  CHECK(same_tree(first, second));
  // printing is a fixpoint: print(parse(print(t))) == print(t)
  CHECK(print(second) == printed);
}

} // namespace

TEST_CASE("round trip: module shapes") {
  check_round_trip("module m; endmodule");
  check_round_trip("module m(); endmodule");
  check_round_trip("module m(input a, output reg [7:0] q); endmodule");
  check_round_trip(
      "module m #(parameter W = 8, D = 2) (input [W-1:0] a); endmodule");
  check_round_trip(
      "module a(input x, output y); assign y = x; endmodule "
      "module b(input x, output y); a u(.x(x), .y(y)); endmodule");
}

TEST_CASE("round trip: expressions needing parentheses") {
  check_round_trip(
      "module m(input [7:0] a, b, c, output [7:0] x, y, z, w); "
      "assign x = a & (b | c); "
      "assign y = (a + b) * c; "
      "assign z = a - (b - c); "
      "assign w = (a >> 1) << 2; "
      "endmodule");
  check_round_trip(
      "module m(input [7:0] a, output y, z); "
      "assign y = ~(&a); "
      "assign z = &(~a); "
      "endmodule");
  check_round_trip(
      "module m(input s, t, input [3:0] a, b, c, d, output [3:0] y); "
      "assign y = s ? (t ? a : b) : (t ? c : d); "
      "endmodule");
  check_round_trip(
      "module m(input s, input [3:0] a, b, output [3:0] y); "
      "assign y = (s ? a : b) + 4'd1; "
      "endmodule");
  check_round_trip(
      "module m(input [7:0] a, b, output [15:0] y, output [23:0] z); "
      "assign y = {a, b}; "
      "assign z = {3{a}}; "
      "endmodule");
  check_round_trip(
      "module m(input [7:0] a, input [2:0] i, output y, output [3:0] p); "
      "assign y = a[i]; "
      "assign p = a[6:3]; "
      "endmodule");
}

TEST_CASE("round trip: statements") {
  check_round_trip(
      "module m(input clk, rst, input [3:0] d, output reg [3:0] q); "
      "always @(posedge clk or posedge rst) begin "
      "  if (rst) q <= 4'd0; "
      "  else if (d == 4'hF) q <= 4'd1; "
      "  else q <= d; "
      "end "
      "endmodule");
  check_round_trip(
      "module m(input a, b, output reg y); "
      "always @(a or b) begin y = a; y = y ^ b; end "
      "endmodule");
  check_round_trip(
      "module m(input [1:0] s, output reg [3:0] y); "
      "always @(*) case (s) "
      "2'd0, 2'd1: y = 4'h1; "
      "2'd2: begin y = 4'h2; y = y + 4'h1; end "
      "default: y = 4'h0; "
      "endcase "
      "endmodule");
  check_round_trip(
      "module m(input a, output reg y); "
      "always @(*) if (a) y = 1'b1; "
      "endmodule");
  check_round_trip(
      "module m(input a, b, output reg y); "
      "always @(*) if (a) if (b) y = 1'b1; "
      "endmodule");
}

TEST_CASE("literal lexemes survive printing verbatim") {
  SyntaxTree t = parse_source(
      "module m(output [15:0] y); assign y = 16'b1010_1010_0000_1111; "
      "endmodule");
  std::string printed = print(t);
  CHECK(printed.find("16'b1010_1010_0000_1111") != std::string::npos);
}

TEST_CASE("unary operand of reduction gets parentheses to avoid re-lexing") {
  SyntaxTree t = parse_source(
      "module m(input [7:0] a, output y); assign y = ~(&a); endmodule");
  std::string printed = print(t);
  // "~&a" would re-lex as the single nand-reduction operator
  CHECK(printed.find("~(&a)") != std::string::npos);
}
