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

// rtlseek — one binary, subcommand style:
//
//   parse      syntax-check a design, print its AST as JSON
//   equiv      decide structural equivalence of two designs
//   classes    partition designs into structural equivalence classes
//   sim        run a design against a test-vector suite
//   score      compute the multi-objective reward for a model response
//   grpo-demo  train the toy policy, print a step,mean_reward,entropy CSV
//   eval       score a benchmark manifest over a responses directory
//
// Machine output goes to stdout, diagnostics to stderr. Exit codes:
// 0 success, 1 negative verdict (syntax failure / distinct / sim fail),
// 2 I/O or evaluation error, 3 partial evaluation, 64 usage error,
// 78 configuration error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtlseek/app_config.hpp"
#include "rtlseek/ast_json.hpp"
#include "rtlseek/canon.hpp"
#include "rtlseek/grpo.hpp"
#include "rtlseek/metrics.hpp"
#include "rtlseek/parser.hpp"
#include "rtlseek/reward.hpp"
#include "rtlseek/sim.hpp"
#include "rtlseek/sim_external.hpp"
#include "rtlseek/tv_json.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;
constexpr int kExitPartial = 3;
constexpr int kExitUsage = 64;
constexpr int kExitConfig = 78;

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

void print_diagnostics(const std::string& file,
                       const std::vector<rtlseek::Diagnostic>& diags) {
  for (const rtlseek::Diagnostic& d : diags)
    std::cerr << file << ": " << d.kind << " error: " << d.message << " at ["
              << d.span.begin << ", " << d.span.end << ")\n";
}

// parse the file or report why not; nullopt means the caller should exit
std::optional<rtlseek::SyntaxTree> parse_or_report(const std::string& path,
                                                   int& exit_code) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "error: cannot read " << path << "\n";
    exit_code = kExitError;
    return std::nullopt;
  }
  rtlseek::SyntaxVerdict v = rtlseek::check_syntax(text);
  if (!v.pass) {
    print_diagnostics(path, v.diagnostics);
    exit_code = kExitNegative;
    return std::nullopt;
  }
  return std::move(v.tree);
}

int cmd_parse(const std::string& file) {
  std::string text;
  if (!read_file(file, text)) {
    std::cerr << "error: cannot read " << file << "\n";
    return kExitError;
  }
  rtlseek::SyntaxVerdict v = rtlseek::check_syntax(text);
  if (!v.pass) {
    print_diagnostics(file, v.diagnostics);
    return kExitNegative;
  }
  std::cout << rtlseek::to_json(*v.tree).dump(2) << "\n";
  return kExitOk;
}

int cmd_equiv(const std::string& file_a, const std::string& file_b,
              bool explain) {
  int code = kExitError;
  auto a = parse_or_report(file_a, code);
  if (!a) return code == kExitNegative ? kExitError : code;
  auto b = parse_or_report(file_b, code);
  if (!b) return code == kExitNegative ? kExitError : code;
  rtlseek::CanonicalForm ca = rtlseek::canonicalize(*a);
  rtlseek::CanonicalForm cb = rtlseek::canonicalize(*b);
  if (ca.digest == cb.digest && rtlseek::same_tree(ca.tree, cb.tree)) {
    std::cout << "equivalent\n";
    return kExitOk;
  }
  std::cout << "distinct\n";
  if (explain) {
    auto diff = rtlseek::first_difference(ca, cb);
    std::cout << (diff ? *diff : std::string("digest mismatch")) << "\n";
  }
  return kExitNegative;
}

int cmd_classes(std::vector<std::string> inputs) {
  namespace fs = std::filesystem;
  if (inputs.size() == 1 && fs::is_directory(inputs[0])) {
    std::vector<std::string> found;
    for (const auto& e : fs::directory_iterator(inputs[0]))
      if (e.is_regular_file() && e.path().extension() == ".v")
        found.push_back(e.path().string());
    std::sort(found.begin(), found.end());
    inputs = std::move(found);
  }
  if (inputs.empty()) {
    std::cerr << "error: no input designs\n";
    return kExitError;
  }
  std::vector<rtlseek::SyntaxTree> trees;
  for (const std::string& f : inputs) {
    int code = kExitError;
    auto t = parse_or_report(f, code);
    if (!t) return kExitError;
    trees.push_back(std::move(*t));
  }
  rtlseek::EquivClassPartition part = rtlseek::partition(trees);
  rtlseek::ojson j;
  j["schema"] = "classes/1";
  rtlseek::ojson classes = rtlseek::ojson::array();
  for (const auto& cls : part.classes) {
    rtlseek::ojson c = rtlseek::ojson::array();
    for (std::size_t i : cls) c.push_back(i);
    classes.push_back(std::move(c));
  }
  j["classes"] = std::move(classes);
  rtlseek::ojson files = rtlseek::ojson::array();
  for (const std::string& f : inputs) files.push_back(f);
  j["files"] = std::move(files);
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_sim(const std::string& design_file, const std::string& vectors_file,
            const std::string& trace_file, const std::string& top) {
  int code = kExitError;
  auto tree = parse_or_report(design_file, code);
  if (!tree) return kExitError;

  std::string vec_text;
  if (!read_file(vectors_file, vec_text)) {
    std::cerr << "error: cannot read " << vectors_file << "\n";
    return kExitError;
  }
  rtlseek::sim::VectorSuite suite;
  try {
    suite = rtlseek::sim::parse_vectors_text(vec_text);
  } catch (const std::exception& e) {
    std::cerr << "error: " << vectors_file << ": " << e.what() << "\n";
    return kExitError;
  }

  rtlseek::sim::SimDesign design;
  try {
    design = rtlseek::sim::elaborate(*tree, top);
  } catch (const rtlseek::sim::ElaborationError& e) {
    std::cerr << "error: elaboration: " << e.what() << "\n";
    return kExitError;
  }
  rtlseek::sim::SimOutcome out =
      rtlseek::sim::run(design, suite, !trace_file.empty());

  rtlseek::ojson j;
  j["schema"] = "sim/1";
  j["verdict"] = rtlseek::sim::verdict_name(out.verdict);
  j["steps"] = suite.steps.size();
  if (out.first_failure) {
    rtlseek::ojson f;
    f["step"] = out.first_failure->step;
    f["signal"] = out.first_failure->signal;
    f["expected"] = out.first_failure->expected;
    f["actual"] = out.first_failure->actual;
    j["first_failure"] = std::move(f);
  } else {
    j["first_failure"] = nullptr;
  }
  j["message"] = out.message;
  std::cout << j.dump(2) << "\n";

  if (!trace_file.empty() && out.verdict != rtlseek::sim::Verdict::sim_error) {
    rtlseek::ojson t;
    t["schema"] = "sim/1";
    rtlseek::ojson nets = rtlseek::ojson::array();
    for (const auto& n : design.nets) nets.push_back(n.name);
    t["nets"] = std::move(nets);
    rtlseek::ojson steps = rtlseek::ojson::array();
    for (const auto& snap : out.trace) {
      rtlseek::ojson row = rtlseek::ojson::array();
      for (std::uint64_t v : snap) row.push_back(v);
      steps.push_back(std::move(row));
    }
    t["trace"] = std::move(steps);
    std::ofstream tf(trace_file, std::ios::binary);
    if (!tf) {
      std::cerr << "error: cannot write " << trace_file << "\n";
      return kExitError;
    }
    tf << t.dump(2) << "\n";
  }

  switch (out.verdict) {
  case rtlseek::sim::Verdict::pass: return kExitOk;
  case rtlseek::sim::Verdict::fail: return kExitNegative;
  default: return kExitError;
  }
}

int cmd_score(const std::string& response_file, int stage,
              const std::string& vectors_file, const std::string& external,
              const std::string& history_file, double timeout) {
  std::string raw;
  if (!read_file(response_file, raw)) {
    std::cerr << "error: cannot read " << response_file << "\n";
    return kExitError;
  }

  rtlseek::reward::StageConfig cfg = stage == 2
                                         ? rtlseek::reward::StageConfig::stage2()
                                         : rtlseek::reward::StageConfig::stage3();
  rtlseek::reward::Verification verify;
  verify.timeout_seconds = timeout;
  if (!vectors_file.empty()) {
    std::string vec_text;
    if (!read_file(vectors_file, vec_text)) {
      std::cerr << "error: cannot read " << vectors_file << "\n";
      return kExitError;
    }
    try {
      verify.vectors = rtlseek::sim::parse_vectors_text(vec_text);
    } catch (const std::exception& e) {
      std::cerr << "error: " << vectors_file << ": " << e.what() << "\n";
      return kExitError;
    }
  } else if (!external.empty()) {
    verify.external_command = external;
  }

  rtlseek::reward::HistoryWindow history;
  if (!history_file.empty()) {
    std::ifstream in(history_file);
    std::string line;
    std::vector<std::uint64_t> lengths;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      try {
        lengths.push_back(std::stoull(line));
      } catch (const std::exception&) {
        std::cerr << "error: " << history_file
                  << ": expected one integer per line\n";
        return kExitError;
      }
    }
    for (std::uint64_t v : lengths) history.append(v);
  }

  rtlseek::reward::RewardBreakdown b =
      rtlseek::reward::score(raw, cfg, history, verify);
  std::cout << rtlseek::reward::to_json(b).dump(2) << "\n";

  if (!history_file.empty()) {
    std::ofstream out(history_file, std::ios::app);
    if (!out) {
      std::cerr << "error: cannot append to " << history_file << "\n";
      return kExitError;
    }
    out << history.lengths().back() << "\n";
  }
  return kExitOk;
}

int cmd_grpo_demo(const std::string& env_name, int group_size, int steps,
                  std::uint64_t seed, double eps, double beta, double lr) {
  constexpr std::size_t kVocab = 6;
  rtlseek::grpo::GrpoConfig cfg;
  cfg.group_size = group_size;
  cfg.clip_eps = eps;
  cfg.kl_beta = beta;
  try {
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  rtlseek::grpo::ToyPolicy policy(kVocab);
  rtlseek::grpo::GroupRewardFn env;
  if (env_name == "single-best") {
    env = rtlseek::grpo::single_best_env(3);
  } else { // "diversity": start near-degenerate to show the spread-out effect
    std::vector<double> logits(kVocab, 0.0);
    logits[0] = 4.0;
    policy = rtlseek::grpo::ToyPolicy::from_logits(std::move(logits));
    env = rtlseek::grpo::diversity_env();
  }

  rtlseek::grpo::TrainResult result =
      rtlseek::grpo::train_demo(std::move(policy), env, cfg, steps, lr, seed);
  std::cout << "step,mean_reward,entropy\n";
  char buf[96];
  for (std::size_t i = 0; i < result.curve.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f\n", i,
                  result.curve[i].mean_reward, result.curve[i].entropy);
    std::cout << buf;
  }
  return kExitOk;
}

int cmd_eval(const std::string& manifest_file, const std::string& responses,
             const std::string& json_out) {
  std::string text;
  if (!read_file(manifest_file, text)) {
    std::cerr << "error: cannot read " << manifest_file << "\n";
    return kExitError;
  }
  rtlseek::metrics::BenchmarkManifest manifest;
  try {
    manifest = rtlseek::metrics::parse_manifest(
        nlohmann::json::parse(text));
  } catch (const std::exception& e) {
    std::cerr << "error: " << manifest_file << ": " << e.what() << "\n";
    return kExitError;
  }
  std::filesystem::path manifest_dir =
      std::filesystem::path(manifest_file).parent_path();
  rtlseek::metrics::EvalReport report =
      rtlseek::metrics::evaluate(manifest, responses, manifest_dir);
  for (const std::string& w : report.warnings)
    std::cerr << "warning: " << w << "\n";
  std::cout << rtlseek::metrics::to_table(report);
  if (!json_out.empty()) {
    std::ofstream out(json_out, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write " << json_out << "\n";
      return kExitError;
    }
    out << rtlseek::metrics::to_json(report).dump(2) << "\n";
  }
  return report.partial ? kExitPartial : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"RTL design analysis, reward scoring, and evaluation toolkit"};
  app.set_version_flag("--version", "rtlseek 1.0.0");
  app.require_subcommand(0, 1);

  std::string config_path;
  app.add_option("--config", config_path,
                 "flat key=value config file (RTLSEEK_CONFIG fallback)");

  // parse
  auto* sc_parse = app.add_subcommand("parse", "syntax-check, print AST JSON");
  std::string parse_file;
  sc_parse->add_option("file", parse_file, "Verilog source")->required();

  // equiv
  auto* sc_equiv =
      app.add_subcommand("equiv", "structural equivalence of two designs");
  std::string equiv_a, equiv_b;
  bool equiv_explain = false;
  sc_equiv->add_option("a", equiv_a, "first design")->required();
  sc_equiv->add_option("b", equiv_b, "second design")->required();
  sc_equiv->add_flag("--explain", equiv_explain,
                     "print the first differing canonical node");

  // classes
  auto* sc_classes =
      app.add_subcommand("classes", "partition designs into classes");
  std::vector<std::string> classes_inputs;
  sc_classes->add_option("inputs", classes_inputs, "designs or one directory")
      ->required();

  // sim
  auto* sc_sim = app.add_subcommand("sim", "simulate against a vector suite");
  std::string sim_design, sim_vectors, sim_trace, sim_top;
  sc_sim->add_option("design", sim_design, "Verilog source")->required();
  sc_sim->add_option("--vectors", sim_vectors, "vector suite JSON")->required();
  sc_sim->add_option("--trace", sim_trace, "write per-step net values here");
  sc_sim->add_option("--top", sim_top, "top module name");

  // score
  auto* sc_score = app.add_subcommand("score", "reward a model response");
  std::string score_file, score_vectors, score_external, score_history;
  int score_stage = 0;
  double score_timeout = 0;
  sc_score->add_option("response", score_file, "response text file")
      ->required();
  auto* opt_stage =
      sc_score->add_option("--stage", score_stage, "training stage (2 or 3)")
          ->check(CLI::IsMember({2, 3}));
  sc_score->add_option("--vectors", score_vectors, "vector suite JSON");
  auto* opt_external = sc_score->add_option(
      "--external", score_external, "external simulator command ({design})");
  auto* opt_timeout = sc_score->add_option("--timeout", score_timeout,
                                           "external simulator timeout (s)");
  auto* opt_history = sc_score->add_option(
      "--history", score_history, "reasoning-length history file (appended)");

  // grpo-demo
  auto* sc_grpo = app.add_subcommand("grpo-demo", "toy policy training demo");
  std::string grpo_env = "diversity";
  int grpo_group = 0, grpo_steps = 500;
  std::uint64_t grpo_seed = 0;
  double grpo_eps = 0, grpo_beta = 0, grpo_lr = 0;
  sc_grpo->add_option("--env", grpo_env, "single-best | diversity")
      ->check(CLI::IsMember({"single-best", "diversity"}));
  auto* opt_group =
      sc_grpo->add_option("--group-size", grpo_group, "outputs per group");
  sc_grpo->add_option("--steps", grpo_steps, "training steps");
  auto* opt_seed = sc_grpo->add_option("--seed", grpo_seed, "RNG seed");
  auto* opt_eps = sc_grpo->add_option("--eps", grpo_eps, "clip epsilon");
  auto* opt_beta = sc_grpo->add_option("--beta", grpo_beta, "KL coefficient");
  auto* opt_lr = sc_grpo->add_option("--lr", grpo_lr, "learning rate");

  // eval
  auto* sc_eval = app.add_subcommand("eval", "evaluate a benchmark manifest");
  std::string eval_manifest, eval_responses, eval_json;
  sc_eval->add_option("--manifest", eval_manifest, "bench manifest JSON")
      ->required();
  sc_eval->add_option("--responses", eval_responses, "responses directory")
      ->required();
  sc_eval->add_option("--json", eval_json, "also write the JSON report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  // configuration: built-in defaults < config file < explicit flags
  rtlseek::AppConfig cfg;
  if (config_path.empty())
    if (const char* env = std::getenv("RTLSEEK_CONFIG")) config_path = env;
  if (!config_path.empty()) {
    try {
      cfg = rtlseek::load_config_file(config_path);
    } catch (const rtlseek::ConfigError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
  }
  if (opt_stage->count() == 0) score_stage = cfg.stage;
  if (opt_external->count() == 0) score_external = cfg.external;
  if (opt_timeout->count() == 0) score_timeout = cfg.timeout;
  if (opt_history->count() == 0) score_history = cfg.history;
  if (opt_group->count() == 0) grpo_group = cfg.grpo_group_size;
  if (opt_seed->count() == 0) grpo_seed = cfg.grpo_seed;
  if (opt_eps->count() == 0) grpo_eps = cfg.grpo_eps;
  if (opt_beta->count() == 0) grpo_beta = cfg.grpo_beta;
  if (opt_lr->count() == 0) grpo_lr = cfg.grpo_lr;

  try {
    if (sc_parse->parsed()) return cmd_parse(parse_file);
    if (sc_equiv->parsed()) return cmd_equiv(equiv_a, equiv_b, equiv_explain);
    if (sc_classes->parsed()) return cmd_classes(classes_inputs);
    if (sc_sim->parsed())
      return cmd_sim(sim_design, sim_vectors, sim_trace, sim_top);
    if (sc_score->parsed())
      return cmd_score(score_file, score_stage, score_vectors, score_external,
                       score_history, score_timeout);
    if (sc_grpo->parsed())
      return cmd_grpo_demo(grpo_env, grpo_group, grpo_steps, grpo_seed,
                           grpo_eps, grpo_beta, grpo_lr);
    if (sc_eval->parsed())
      return cmd_eval(eval_manifest, eval_responses, eval_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }

  std::cerr << app.help() << "\n";
  std::cerr << "error: a subcommand is required\n";
  return kExitUsage;
}
