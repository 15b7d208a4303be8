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

// Flat key=value configuration for the CLI. Lines are `key = value`; blank
// lines and lines starting with `#` are ignored. Unknown keys are rejected so
// typos fail loudly.
//
//   stage            = 2 | 3
//   external         = <simulator command template with {design}>
//   timeout          = <seconds, > 0>
//   history          = <reasoning-length history file path>
//   grpo.eps         = <clip epsilon, (0, 1]>
//   grpo.beta        = <KL coefficient, >= 0>
//   grpo.group_size  = <integer >= 2>
//   grpo.lr          = <learning rate, > 0>
//   grpo.seed        = <unsigned 64-bit>

#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rtlseek {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AppConfig {
  int stage = 3;
  std::string external; // empty = no external simulator configured
  double timeout = 30.0;
  std::string history; // empty = no history file
  double grpo_eps = 0.2;
  double grpo_beta = 0.04;
  int grpo_group_size = 8;
  double grpo_lr = 0.1;
  std::uint64_t grpo_seed = 42;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": expected a number, got \"" + v +
                      "\"");
  }
}

inline long long to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long i = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key + ": expected an integer, got \"" + v +
                      "\"");
  }
}

inline std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    // stoull accepts and wraps a leading minus; reject it outright
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("");
    std::size_t pos = 0;
    unsigned long long i = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return i;
  } catch (const std::exception&) {
    throw ConfigError("config: " + key +
                      ": expected an unsigned integer, got \"" + v + "\"");
  }
}

} // namespace detail

inline AppConfig parse_config(const std::string& text) {
  AppConfig c;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = detail::trim(t.substr(0, eq));
    std::string val = detail::trim(t.substr(eq + 1));
    if (key == "stage") {
      long long s = detail::to_int(key, val);
      if (s != 2 && s != 3) throw ConfigError("config: stage must be 2 or 3");
      c.stage = static_cast<int>(s);
    } else if (key == "external") {
      c.external = val;
    } else if (key == "timeout") {
      c.timeout = detail::to_double(key, val);
      if (!(c.timeout > 0)) throw ConfigError("config: timeout must be > 0");
    } else if (key == "history") {
      c.history = val;
    } else if (key == "grpo.eps") {
      c.grpo_eps = detail::to_double(key, val);
      if (!(c.grpo_eps > 0) || c.grpo_eps > 1)
        throw ConfigError("config: grpo.eps must be in (0, 1]");
    } else if (key == "grpo.beta") {
      c.grpo_beta = detail::to_double(key, val);
      if (c.grpo_beta < 0) throw ConfigError("config: grpo.beta must be >= 0");
    } else if (key == "grpo.group_size") {
      long long g = detail::to_int(key, val);
      if (g < 2) throw ConfigError("config: grpo.group_size must be >= 2");
      c.grpo_group_size = static_cast<int>(g);
    } else if (key == "grpo.lr") {
      c.grpo_lr = detail::to_double(key, val);
      if (!(c.grpo_lr > 0)) throw ConfigError("config: grpo.lr must be > 0");
    } else if (key == "grpo.seed") {
      c.grpo_seed = detail::to_u64(key, val);
    } else {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": unknown key \"" + key + "\"");
    }
  }
  return c;
}

inline AppConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace rtlseek
