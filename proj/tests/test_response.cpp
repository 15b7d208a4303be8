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

#include <string>

#include "rtlseek/response.hpp"

using rtlseek::reward::ModelResponse;
using rtlseek::reward::parse_response;

TEST_CASE("well-formed response splits into think, design, candidates") {
  ModelResponse r = parse_response(
      "<think>plan the adder</think>\n"
      "<total_design>\n"
      "module a(input x, output y); assign y = x; endmodule\n"
      "module b(input x, output y); assign y = ~x; endmodule\n"
      "</total_design>\n");
  REQUIRE(r.think_span);
  CHECK(*r.think_span == "plan the adder");
  REQUIRE(r.design_span);
  REQUIRE(r.candidates.size() == 2);
  CHECK(r.candidates[0] ==
        "module a(input x, output y); assign y = x; endmodule");
  CHECK(r.candidates[1] ==
        "module b(input x, output y); assign y = ~x; endmodule");
}

TEST_CASE("missing tags leave spans absent and scan the raw text") {
  ModelResponse r = parse_response(
      "module only(input x, output y); assign y = x; endmodule");
  CHECK_FALSE(r.think_span);
  CHECK_FALSE(r.design_span);
  REQUIRE(r.candidates.size() == 1);

  ModelResponse none = parse_response("no hardware here");
  CHECK(none.candidates.empty());

  ModelResponse open_only = parse_response("<think>never closed");
  CHECK_FALSE(open_only.think_span);
}

TEST_CASE("design tags inside the think span do not count") {
  ModelResponse r = parse_response(
      "<think>I could emit <total_design>module x; endmodule</total_design>"
      "</think>"
      "<total_design>module real_one(input a, output b); assign b = a; "
      "endmodule</total_design>");
  REQUIRE(r.design_span);
  CHECK(r.design_span->find("real_one") != std::string::npos);
  REQUIRE(r.candidates.size() == 1);
  CHECK(r.candidates[0].find("real_one") != std::string::npos);
}

TEST_CASE("only the first think pair is used") {
  ModelResponse r = parse_response(
      "<think>first</think><think>second</think>"
      "<total_design>module m; endmodule</total_design>");
  REQUIRE(r.think_span);
  CHECK(*r.think_span == "first");
}

TEST_CASE("module keywords in comments and strings are not split points") {
  ModelResponse r = parse_response(
      "<total_design>\n"
      "module a; // endmodule in a comment\n"
      "/* module b; */\n"
      "endmodule\n"
      "module c; endmodule\n"
      "</total_design>");
  REQUIRE(r.candidates.size() == 2);
  CHECK(r.candidates[0].find("module a") == 0);
  CHECK(r.candidates[1] == "module c; endmodule");
}

TEST_CASE("identifier prefixes do not trigger block boundaries") {
  ModelResponse r = parse_response(
      "<total_design>module m(input module_like, output y); "
      "assign y = module_like; endmodule</total_design>");
  REQUIRE(r.candidates.size() == 1);
}

TEST_CASE("unbalanced endmodule leaves the open block unterminated") {
  ModelResponse r = parse_response(
      "<total_design>endmodule module broken(input a);"
      "</total_design>");
  CHECK(r.candidates.empty());
}

TEST_CASE("think length fallback uses full raw text when tags missing") {
  // no tags: the reward engine measures reasoning length on raw_text,
  // so the parse result must keep the text verbatim
  std::string raw = "some raw reply without any tags";
  ModelResponse r = parse_response(raw);
  CHECK(r.raw_text == raw);
}
