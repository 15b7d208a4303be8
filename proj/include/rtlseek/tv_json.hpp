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

// Vector suite JSON (schema tag "tv/1"):
//   {"schema":"tv/1","clock":"clk",
//    "reset":{"signal":"rst","active":1,"cycles":2},
//    "steps":[{"in":{"a":1},"out":{"y":1}},
//             {"in":{"a":"0x2"},"out":{"y":3},"settle":true}]}
// Values are decimal integers or "0x.." strings.

#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rtlseek/sim.hpp"

namespace rtlseek::sim {

namespace detail {

inline std::uint64_t json_value(const nlohmann::json& j,
                                const std::string& what) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    auto v = j.get<std::int64_t>();
    if (v < 0)
      throw std::runtime_error(what + ": negative value");
    return static_cast<std::uint64_t>(v);
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    try {
      std::size_t pos = 0;
      std::uint64_t v = std::stoull(s, &pos, 0); // accepts 0x.. and decimal
      if (pos != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error(what + ": bad value literal '" + s + "'");
    }
  }
  throw std::runtime_error(what + ": value must be an integer or hex string");
}

} // namespace detail

inline VectorSuite parse_vectors(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", "") != "tv/1")
    throw std::runtime_error("vector suite: expected schema \"tv/1\"");
  VectorSuite suite;
  if (j.contains("clock")) {
    if (!j["clock"].is_string())
      throw std::runtime_error("vector suite: clock must be a signal name");
    suite.clock = j["clock"].get<std::string>();
  }
  if (j.contains("reset")) {
    const auto& r = j["reset"];
    if (!r.is_object() || !r.contains("signal"))
      throw std::runtime_error("vector suite: reset needs a signal");
    ResetSpec spec;
    spec.signal = r["signal"].get<std::string>();
    spec.active = static_cast<int>(detail::json_value(
        r.value("active", nlohmann::json(1)), "reset.active"));
    spec.cycles = static_cast<int>(detail::json_value(
        r.value("cycles", nlohmann::json(1)), "reset.cycles"));
    suite.reset = std::move(spec);
  }
  if (!j.contains("steps") || !j["steps"].is_array())
    throw std::runtime_error("vector suite: steps array required");
  std::size_t k = 0;
  for (const auto& sj : j["steps"]) {
    VectorStep step;
    std::string where = "step " + std::to_string(k);
    if (sj.contains("in"))
      for (auto it = sj["in"].begin(); it != sj["in"].end(); ++it)
        step.in[it.key()] =
            detail::json_value(it.value(), where + " input " + it.key());
    if (sj.contains("out"))
      for (auto it = sj["out"].begin(); it != sj["out"].end(); ++it)
        step.out[it.key()] =
            detail::json_value(it.value(), where + " output " + it.key());
    step.settle_only = sj.value("settle", false);
    suite.steps.push_back(std::move(step));
    ++k;
  }
  return suite;
}

inline VectorSuite parse_vectors_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text); // throws on bad JSON
  return parse_vectors(j);
}

} // namespace rtlseek::sim
