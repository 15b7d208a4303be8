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

// Acceptance gate: nine release criteria, one [PASS]/[FAIL] line each.
// Usage: rtlseek-acceptance <path-to-rtlseek-cli>
// Exit code 0 only when every criterion passes.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "rtlseek/canon.hpp"
#include "rtlseek/grpo.hpp"
#include "rtlseek/metrics.hpp"
#include "rtlseek/parser.hpp"
#include "rtlseek/reward.hpp"
#include "rtlseek/sim.hpp"

#include "equiv_pairs.hpp"

namespace fs = std::filesystem;
using namespace rtlseek;

namespace {

std::string g_cli_path;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           fs::path("rtlseek-accept-" +
                    std::to_string(
                        std::chrono::steady_clock::now().time_since_epoch()
                            .count()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path write(const std::string& rel, const std::string& text) const {
    fs::path p = path / rel;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
};

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

bool nearly(double a, double b, double tol = 0.0) {
  return std::fabs(a - b) <= tol;
}

// ---------------------------------------------------------------- criterion 1

bool reward_exactness(std::string& why) {
  const std::string raw =
      "<think>plan three gates and verify</think>\n"
      "<total_design>\n"
      "module m1(input a, b, output y); assign y = a & b; endmodule\n"
      "module m2(input a, b, output y); assign y = b & a; endmodule\n"
      "module m3(input a, b, output y); assign y = a | b; endmodule\n"
      "</total_design>\n";

  reward::ModelResponse parsed = reward::parse_response(raw);
  if (!parsed.think_span) {
    why = "fixture think span missing";
    return false;
  }
  reward::HistoryWindow history;
  history.append(parsed.think_span->size()); // mean equals current length

  sim::VectorSuite suite;
  for (std::uint64_t a = 0; a < 2; ++a)
    for (std::uint64_t b = 0; b < 2; ++b) {
      sim::VectorStep step;
      step.in = {{"a", a}, {"b", b}};
      step.out = {{"y", a & b}};
      suite.steps.push_back(std::move(step));
    }
  reward::Verification verify;
  verify.vectors = std::move(suite);

  reward::RewardBreakdown b =
      reward::score(raw, reward::StageConfig::stage3(), history, verify);

  struct Expect {
    const char* name;
    double got, want;
  } checks[] = {
      {"r_syn", static_cast<double>(b.r_syn), 1},
      {"r_func", static_cast<double>(b.r_func), 1},
      {"n_c", static_cast<double>(b.n_c), 3},
      {"n_s", static_cast<double>(b.n_s), 2},
      {"r_div", static_cast<double>(b.r_div), 5},
      {"i_s", static_cast<double>(b.i_s), 1},
      {"l_t", b.l_t, 1.0},
      {"r_cont", b.r_cont, 1.0},
      {"r_total", b.r_total, 8.0},
  };
  for (const Expect& e : checks)
    if (!nearly(e.got, e.want)) { // zero tolerance
      why = std::string(e.name) + " = " + std::to_string(e.got) +
            ", expected " + std::to_string(e.want);
      return false;
    }
  return true;
}

// ---------------------------------------------------------------- criterion 2

bool quality_boundary(std::string& why) {
  sim::VectorSuite suite;
  for (std::uint64_t a = 0; a < 2; ++a)
    for (std::uint64_t b = 0; b < 2; ++b) {
      sim::VectorStep step;
      step.in = {{"a", a}, {"b", b}};
      step.out = {{"y", a & b}};
      suite.steps.push_back(std::move(step));
    }
  reward::Verification verify;
  verify.vectors = std::move(suite);

  // one valid passing candidate: component sum 1 + 1 + (1+1) = 4
  reward::HistoryWindow h4;
  reward::RewardBreakdown at4 = reward::score(
      "<think>t</think><total_design>module m(input a, b, output y); "
      "assign y = a & b; endmodule</total_design>",
      reward::StageConfig::stage3(), h4, verify);
  int sum4 = at4.r_syn + at4.r_func + at4.r_div;
  if (sum4 != 4 || at4.i_s != 0) {
    why = "sum " + std::to_string(sum4) + " gave i_s " +
          std::to_string(at4.i_s) + ", expected sum 4 -> i_s 0";
    return false;
  }

  // two distinct valid candidates, one passing: 1 + 1 + (2+1) = 5
  reward::HistoryWindow h5;
  reward::RewardBreakdown at5 = reward::score(
      "<think>t</think><total_design>"
      "module m1(input a, b, output y); assign y = a & b; endmodule\n"
      "module m2(input a, b, output y); assign y = a | b; endmodule\n"
      "</total_design>",
      reward::StageConfig::stage3(), h5, verify);
  int sum5 = at5.r_syn + at5.r_func + at5.r_div;
  if (sum5 != 5 || at5.i_s != 1) {
    why = "sum " + std::to_string(sum5) + " gave i_s " +
          std::to_string(at5.i_s) + ", expected sum 5 -> i_s 1";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- criterion 3

bool equivalence_suite(std::string& why) {
  int correct = 0;
  for (const rtlseek_test::EquivPair& p : rtlseek_test::kSuperficialPairs) {
    CanonicalForm a = canonicalize(parse_source(p.a));
    CanonicalForm b = canonicalize(parse_source(p.b));
    if (a.digest == b.digest && same_tree(a.tree, b.tree)) {
      ++correct;
    } else {
      why += std::string(p.name) + " not judged equivalent; ";
    }
  }
  for (const rtlseek_test::EquivPair& p : rtlseek_test::kSubstantivePairs) {
    CanonicalForm a = canonicalize(parse_source(p.a));
    CanonicalForm b = canonicalize(parse_source(p.b));
    if (a.digest != b.digest || !same_tree(a.tree, b.tree)) {
      ++correct;
    } else {
      why += std::string(p.name) + " wrongly judged equivalent; ";
    }
  }
  if (correct != 20) {
    why = std::to_string(correct) + "/20 — " + why;
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- criterion 4

using Bits = std::map<std::string, std::uint64_t>;

bool truth_table(const char* src,
                 const std::vector<std::pair<std::string, int>>& inputs,
                 const std::function<Bits(const Bits&)>& ref,
                 std::string& why) {
  sim::SimDesign design = sim::elaborate(parse_source(src));
  int total = 0;
  for (const auto& [name, width] : inputs) total += width;
  sim::VectorSuite suite;
  for (std::uint64_t combo = 0; combo < (1ull << total); ++combo) {
    sim::VectorStep step;
    int shift = 0;
    for (const auto& [name, width] : inputs) {
      step.in[name] = (combo >> shift) & ((1ull << width) - 1);
      shift += width;
    }
    step.out = ref(step.in);
    suite.steps.push_back(std::move(step));
  }
  sim::SimOutcome out = sim::run(design, suite);
  if (out.verdict != sim::Verdict::pass) {
    why = out.message;
    if (out.first_failure)
      why += " at step " + std::to_string(out.first_failure->step) + " signal " +
             out.first_failure->signal;
    return false;
  }
  return true;
}

bool simulator_oracle(std::string& why) {
  // exhaustive combinational designs, 10 or fewer input bits each
  bool ok = truth_table(
      "module alu(input [3:0] a, b, output [3:0] sum, diff, prod, sh, "
      "output eq, lt, par, red_and, output [3:0] mux);\n"
      "  assign sum = a + b;\n"
      "  assign diff = a - b;\n"
      "  assign prod = a * b;\n"
      "  assign sh = a << b[1:0];\n"
      "  assign eq = a == b;\n"
      "  assign lt = a < b;\n"
      "  assign par = ^a;\n"
      "  assign red_and = &b;\n"
      "  assign mux = eq ? a : b;\n"
      "endmodule\n",
      {{"a", 4}, {"b", 4}},
      [](const Bits& in) {
        std::uint64_t a = in.at("a"), b = in.at("b");
        std::uint64_t eq = a == b;
        return Bits{{"sum", (a + b) & 15},
                    {"diff", (a - b) & 15},
                    {"prod", (a * b) & 15},
                    {"sh", (a << (b & 3)) & 15},
                    {"eq", eq},
                    {"lt", a < b},
                    {"par", static_cast<std::uint64_t>(__builtin_parityll(a))},
                    {"red_and", b == 15},
                    {"mux", eq ? a : b}};
      },
      why);
  if (!ok) { why = "alu: " + why; return false; }

  ok = truth_table(
      "module mux(input s, input [3:0] a, b, output [3:0] y, "
      "output [1:0] hi);\n"
      "  assign y = s ? a : b;\n"
      "  assign hi = {y[3], y[0]};\n"
      "endmodule\n",
      {{"s", 1}, {"a", 4}, {"b", 4}},
      [](const Bits& in) {
        std::uint64_t y = in.at("s") ? in.at("a") : in.at("b");
        return Bits{{"y", y}, {"hi", ((y >> 3) << 1) | (y & 1)}};
      },
      why);
  if (!ok) { why = "mux: " + why; return false; }

  ok = truth_table(
      "module dm(input [2:0] a, b, output [2:0] quo, rem, "
      "output reg [2:0] sel);\n"
      "  assign quo = a / b;\n"
      "  assign rem = a % b;\n"
      "  always @(*)\n"
      "    case (b)\n"
      "      3'd0: sel = a;\n"
      "      3'd1: sel = ~a;\n"
      "      default: sel = a ^ b;\n"
      "    endcase\n"
      "endmodule\n",
      {{"a", 3}, {"b", 3}},
      [](const Bits& in) {
        std::uint64_t a = in.at("a"), b = in.at("b");
        std::uint64_t sel = b == 0 ? a : b == 1 ? (~a & 7) : (a ^ b);
        return Bits{{"quo", b ? a / b : 0}, {"rem", b ? a % b : 0},
                    {"sel", sel}};
      },
      why);
  if (!ok) { why = "divmod: " + why; return false; }

  ok = truth_table(
      "module hier(input [4:0] a, b, output [4:0] s, output cout);\n"
      "  wire [4:0] c;\n"
      "  fa f0(a[0], b[0], 1'b0, s[0], c[0]);\n"
      "  fa f1(a[1], b[1], c[0], s[1], c[1]);\n"
      "  fa f2(a[2], b[2], c[1], s[2], c[2]);\n"
      "  fa f3(a[3], b[3], c[2], s[3], c[3]);\n"
      "  fa f4(a[4], b[4], c[3], s[4], c[4]);\n"
      "  assign cout = c[4];\n"
      "endmodule\n"
      "module fa(input x, y, z, output s, c);\n"
      "  assign s = x ^ y ^ z;\n"
      "  assign c = (x & y) | (z & (x ^ y));\n"
      "endmodule\n",
      {{"a", 5}, {"b", 5}},
      [](const Bits& in) {
        std::uint64_t full = in.at("a") + in.at("b");
        return Bits{{"s", full & 31}, {"cout", (full >> 5) & 1}};
      },
      why);
  if (!ok) { why = "hierarchical adder: " + why; return false; }

  // 4-bit counter vs direct reference over 50 clocked steps
  {
    sim::SimDesign design = sim::elaborate(parse_source(
        "module ctr(input clk, rst, en, output reg [3:0] q);\n"
        "  always @(posedge clk or posedge rst)\n"
        "    if (rst) q <= 4'd0;\n"
        "    else if (en) q <= q + 4'd1;\n"
        "endmodule\n"));
    sim::VectorSuite suite;
    suite.clock = "clk";
    suite.reset = sim::ResetSpec{"rst", 1, 2};
    std::uint64_t ref_q = 0;
    for (int k = 0; k < 50; ++k) {
      bool en = k % 5 != 2;
      if (en) ref_q = (ref_q + 1) & 15;
      sim::VectorStep step;
      step.in["en"] = en;
      step.out["q"] = ref_q;
      suite.steps.push_back(std::move(step));
    }
    sim::SimOutcome out = sim::run(design, suite);
    if (out.verdict != sim::Verdict::pass) {
      why = "counter: " + out.message;
      return false;
    }
  }

  // 2-stage shift register vs direct reference over 50 clocked steps
  {
    sim::SimDesign design = sim::elaborate(parse_source(
        "module sr(input clk, rst, d, output reg q1, q2);\n"
        "  always @(posedge clk or posedge rst)\n"
        "    if (rst) begin q1 <= 1'b0; q2 <= 1'b0; end\n"
        "    else begin q2 <= q1; q1 <= d; end\n"
        "endmodule\n"));
    sim::VectorSuite suite;
    suite.clock = "clk";
    suite.reset = sim::ResetSpec{"rst", 1, 1};
    std::uint64_t r1 = 0, r2 = 0;
    for (int k = 0; k < 50; ++k) {
      std::uint64_t d = static_cast<std::uint64_t>((k * 5 + 3) % 7 < 3);
      r2 = r1;
      r1 = d;
      sim::VectorStep step;
      step.in["d"] = d;
      step.out["q1"] = r1;
      step.out["q2"] = r2;
      suite.steps.push_back(std::move(step));
    }
    sim::SimOutcome out = sim::run(design, suite);
    if (out.verdict != sim::Verdict::pass) {
      why = "shift register: " + out.message;
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------- criterion 5

double objective_of(const grpo::ToyPolicy& pol, grpo::GroupBatch b,
                    const grpo::GrpoConfig& cfg) {
  b.logprob_current.clear();
  for (int o : b.outcomes) b.logprob_current.push_back(pol.log_prob(o));
  return grpo::objective(b, cfg);
}

bool gradient_check(std::string& why) {
  double worst = 0;
  int done = 0;
  for (std::uint64_t seed = 1; done < 100; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logit(-1.5, 1.5);
    std::uniform_real_distribution<double> reward_draw(-2.0, 2.0);
    std::uniform_int_distribution<int> vocab_pick(3, 6);

    int vocab = vocab_pick(rng);
    std::vector<double> cur(static_cast<std::size_t>(vocab));
    std::vector<double> old_logits(cur.size());
    std::vector<double> ref(cur.size());
    for (auto& v : cur) v = logit(rng);
    for (auto& v : old_logits) v = logit(rng);
    for (auto& v : ref) v = logit(rng);

    grpo::ToyPolicy pol = grpo::ToyPolicy::from_logits(cur);
    pol.ref_logits = ref;
    grpo::GrpoConfig cfg;
    cfg.group_size = 4;
    cfg.clip_eps = 0.2;
    cfg.kl_beta = 0.05;

    grpo::ToyPolicy old_pol = grpo::ToyPolicy::from_logits(old_logits);
    grpo::GroupBatch batch;
    std::vector<double> rewards;
    for (int i = 0; i < cfg.group_size; ++i) {
      int o = old_pol.sample(rng);
      batch.outcomes.push_back(o);
      batch.logprob_old.push_back(old_pol.log_prob(o));
      batch.logprob_ref.push_back(pol.ref_log_prob(o));
      batch.logprob_current.push_back(pol.log_prob(o));
      rewards.push_back(reward_draw(rng));
    }
    batch.rewards = rewards;
    batch.advantages = grpo::advantages(rewards);

    bool near_kink = false;
    for (int i = 0; i < cfg.group_size; ++i) {
      double rho =
          std::exp(batch.logprob_current[static_cast<std::size_t>(i)] -
                   batch.logprob_old[static_cast<std::size_t>(i)]);
      if (std::fabs(rho - 0.8) < 1e-3 || std::fabs(rho - 1.2) < 1e-3)
        near_kink = true;
    }
    if (near_kink) continue; // away-from-kink sampling per the contract
    ++done;

    std::vector<double> analytic = grpo::gradient(pol, batch, cfg);
    const double h = 1e-6;
    for (std::size_t j = 0; j < pol.logits.size(); ++j) {
      grpo::ToyPolicy plus = pol;
      grpo::ToyPolicy minus = pol;
      plus.logits[j] += h;
      minus.logits[j] -= h;
      double fd = (objective_of(plus, batch, cfg) -
                   objective_of(minus, batch, cfg)) /
                  (2 * h);
      double denom = std::max(std::fabs(analytic[j]) + std::fabs(fd), 1e-8);
      worst = std::max(worst, std::fabs(analytic[j] - fd) / denom);
    }
  }
  if (worst >= 1e-5) {
    why = "max relative error " + std::to_string(worst);
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- criterion 6

bool training_dynamics(std::string& why) {
  // (a) single-best environment concentrates probability on the target
  grpo::GrpoConfig cfg;
  cfg.group_size = 8;
  cfg.clip_eps = 0.2;
  cfg.kl_beta = 0.01;
  grpo::TrainResult best = grpo::train_demo(grpo::ToyPolicy(6),
                                            grpo::single_best_env(3), cfg,
                                            500, 0.1, 42);
  double mass = best.policy.probs()[3];
  if (!(mass > 0.9)) {
    why = "single-best target mass " + std::to_string(mass);
    return false;
  }

  // (b) diversity environment: entropy rises from a peaked start in >= 9/10
  // seeds, and the mean reward curve's last quartile beats its first
  const int steps = 300;
  int entropy_up = 0;
  std::vector<double> mean_curve(steps, 0.0);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::vector<double> peaked = {4.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    grpo::TrainResult r =
        grpo::train_demo(grpo::ToyPolicy::from_logits(peaked),
                         grpo::diversity_env(), cfg, steps, 0.1, seed);
    if (r.curve.back().entropy > r.curve.front().entropy) ++entropy_up;
    for (int s = 0; s < steps; ++s)
      mean_curve[static_cast<std::size_t>(s)] +=
          r.curve[static_cast<std::size_t>(s)].mean_reward / 10.0;
  }
  if (entropy_up < 9) {
    why = "entropy rose in only " + std::to_string(entropy_up) + "/10 seeds";
    return false;
  }
  double first_q = 0, last_q = 0;
  for (int s = 0; s < steps / 4; ++s) {
    first_q += mean_curve[static_cast<std::size_t>(s)];
    last_q += mean_curve[static_cast<std::size_t>(steps - 1 - s)];
  }
  if (!(last_q > first_q)) {
    why = "reward curve did not rise (first quartile " +
          std::to_string(first_q) + ", last " + std::to_string(last_q) + ")";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- criterion 7

bool pass_at_k_oracle(std::string& why) {
  for (int n = 1; n <= 10; ++n)
    for (int c = 0; c <= n; ++c)
      for (int k = 1; k <= n; ++k) {
        long total = 0, hit = 0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          int bits = 0;
          for (unsigned m = mask; m; m >>= 1) bits += static_cast<int>(m & 1);
          if (bits != k) continue;
          ++total;
          if (mask & ((1u << c) - 1)) ++hit;
        }
        double brute = static_cast<double>(hit) / static_cast<double>(total);
        double est = metrics::pass_at_k(n, c, k);
        if (std::fabs(est - brute) > 1e-12) {
          why = "n=" + std::to_string(n) + " c=" + std::to_string(c) +
                " k=" + std::to_string(k) + ": " + std::to_string(est) +
                " vs brute " + std::to_string(brute);
          return false;
        }
      }
  return true;
}

// ---------------------------------------------------------------- criterion 8

bool metrics_consistency(std::string& why) {
  sim::VectorSuite suite;
  for (std::uint64_t a = 0; a < 2; ++a)
    for (std::uint64_t b = 0; b < 2; ++b) {
      sim::VectorStep step;
      step.in = {{"a", a}, {"b", b}};
      step.out = {{"y", a & b}};
      suite.steps.push_back(std::move(step));
    }
  reward::Verification verify;
  verify.vectors = std::move(suite);

  const char* ok = "module m(input a, b, output y); assign y = a & b; endmodule";
  const char* wrong =
      "module m(input a, b, output y); assign y = a | b; endmodule";
  const char* bad = "module m(input a, output y); assign y = ; endmodule";

  std::vector<std::vector<std::string>> fixtures = {
      {ok, wrong, ok, wrong, ok},
      {std::string(wrong) + "\n" + bad + "\n" + ok + "\n" + wrong},
      {bad, "plain prose", ok},
      {std::string(ok) + "\n" + ok, std::string(wrong) + "\n" + wrong,
       std::string(ok) + "\n" + wrong},
  };

  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    metrics::ItemMetrics m = metrics::evaluate_item(
        "fixture" + std::to_string(f), fixtures[f], verify);
    auto fail = [&](const std::string& msg) {
      why = "fixture " + std::to_string(f) + ": " + msg;
      return false;
    };
    if (!(m.fun_num <= m.syn_num && m.syn_num <= m.gen_num))
      return fail("candidate count ordering violated");
    if (m.syn_opmo_p1 < m.syn_opoo_p1 || m.syn_opmo_p5 < m.syn_opoo_p5 ||
        m.fun_opmo_p1 < m.fun_opoo_p1 || m.fun_opmo_p5 < m.fun_opoo_p5)
      return fail("any-candidate protocol scored below first-candidate");

    // success rate must equal correct candidates over generated candidates
    int gen = 0, fun = 0;
    for (const std::string& raw : fixtures[f]) {
      metrics::ResponseVerdict v = metrics::classify_response(raw, verify);
      gen += v.gen;
      fun += v.fun;
    }
    double want = gen > 0 ? static_cast<double>(fun) / gen : 0.0;
    if (std::fabs(m.success_rate - want) > 1e-12)
      return fail("success_rate " + std::to_string(m.success_rate) +
                  " != " + std::to_string(want));
  }
  return true;
}

// ---------------------------------------------------------------- criterion 9

int run_to_file(const std::string& cmd_line, const fs::path& out) {
  std::string full = cmd_line + " > " + q(out) + " 2> /dev/null";
  int status = std::system(full.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool cli_determinism(std::string& why) {
  if (g_cli_path.empty()) {
    why = "CLI binary path not supplied (argv[1])";
    return false;
  }
  TempDir dir;
  fs::path tv = dir.write("tv.json", R"({"schema":"tv/1","steps":[
    {"in":{"a":0,"b":0},"out":{"y":0}},
    {"in":{"a":0,"b":1},"out":{"y":0}},
    {"in":{"a":1,"b":0},"out":{"y":0}},
    {"in":{"a":1,"b":1},"out":{"y":1}}]})");
  fs::path resp = dir.write(
      "resp.txt",
      "<think>compare two spellings</think><total_design>\n"
      "module m1(input a, b, output y); assign y = a & b; endmodule\n"
      "module m2(input a, b, output y); assign y = b & a; endmodule\n"
      "module m3(input a, b, output y); assign y = a | b; endmodule\n"
      "</total_design>\n");
  dir.write("resp_tree/gate/sample_1.txt",
            "module m(input a, b, output y); assign y = a & b; endmodule");
  dir.write("resp_tree/gate/sample_2.txt",
            "module m(input a, b, output y); assign y = a | b; endmodule");
  fs::path manifest = dir.write(
      "manifest.json",
      R"({"schema":"bench/1","items":[{"id":"gate","vectors":"tv.json","n":2}]})");

  std::string score_cmd = "\"" + g_cli_path + "\" score " + q(resp) +
                          " --stage 3 --vectors " + q(tv);
  std::string eval_cmd = "\"" + g_cli_path + "\" eval --manifest " +
                         q(manifest) + " --responses " +
                         q(dir.path / "resp_tree");

  std::vector<std::string> score_outs, eval_outs;
  for (int i = 0; i < 3; ++i) {
    fs::path s_out = dir.path / ("score" + std::to_string(i) + ".txt");
    fs::path e_out = dir.path / ("eval" + std::to_string(i) + ".txt");
    if (run_to_file(score_cmd, s_out) != 0) {
      why = "score run " + std::to_string(i) + " did not exit 0";
      return false;
    }
    if (run_to_file(eval_cmd, e_out) != 0) {
      why = "eval run " + std::to_string(i) + " did not exit 0";
      return false;
    }
    score_outs.push_back(slurp(s_out));
    eval_outs.push_back(slurp(e_out));
  }
  if (score_outs[0].empty() || eval_outs[0].empty()) {
    why = "empty CLI output";
    return false;
  }
  if (score_outs[1] != score_outs[0] || score_outs[2] != score_outs[0]) {
    why = "score output differed across runs";
    return false;
  }
  if (eval_outs[1] != eval_outs[0] || eval_outs[2] != eval_outs[0]) {
    why = "eval output differed across runs";
    return false;
  }
  return true;
}

// -----------------------------------------------------------------------------

struct Criterion {
  const char* label;
  double budget_seconds;
  std::function<bool(std::string&)> fn;
};

} // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_cli_path = argv[1];

  const Criterion criteria[] = {
      {"reward exactness on the three-candidate fixture", 1.0,
       reward_exactness},
      {"quality gate boundary: sum 4 stays closed, sum 5 opens", 0.0,
       quality_boundary},
      {"equivalence suite: 10 superficial + 10 substantive pairs", 0.0,
       equivalence_suite},
      {"simulator oracle: exhaustive truth tables, counter, shifter", 10.0,
       simulator_oracle},
      {"gradient vs central finite differences, 100 configurations", 5.0,
       gradient_check},
      {"training dynamics: single-best mass and diversity entropy", 60.0,
       training_dynamics},
      {"pass@k equals brute-force subset enumeration, n <= 10", 0.0,
       pass_at_k_oracle},
      {"metrics consistency: protocol ordering and success rate", 0.0,
       metrics_consistency},
      {"byte-identical score/eval output across 3 runs", 0.0,
       cli_determinism},
  };

  bool all_ok = true;
  int index = 0;
  for (const Criterion& c : criteria) {
    ++index;
    std::string why;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.fn(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (ok && c.budget_seconds > 0 && elapsed >= c.budget_seconds) {
      ok = false;
      why = "exceeded the " + std::to_string(c.budget_seconds) +
            " s time budget (" + std::to_string(elapsed) + " s)";
    }
    std::printf("[%s] %d. %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", index,
                c.label, elapsed, why.empty() ? "" : " — ", why.c_str());
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}
