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

// Diversity-centric multi-objective reward for one model response:
//
//   r_total = r_syn + r_func + r_div + r_cont
//   r_div   = n_c + n_s   (distinct structural classes among syntax-valid /
//                          function-passing candidates)
//   r_cont  = 0.5*l_t + 0.5*i_f   when the quality sum beats the threshold,
//             -0.5*l_t + 0.5*i_f  otherwise (threshold 4, strict)
//
// l_t compares the reasoning-span length against the mean of the previous
// four; i_f is +1/-1 for well-formed/malformed tag structure. Stage presets
// select which components are live; disabled components score 0.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtlseek/ast_json.hpp"
#include "rtlseek/canon.hpp"
#include "rtlseek/parser.hpp"
#include "rtlseek/response.hpp"
#include "rtlseek/sim.hpp"
#include "rtlseek/sim_external.hpp"

namespace rtlseek::reward {

inline constexpr double kQualityThreshold = 4.0; // strict ">" comparison

enum class SimVerdict { pass, fail, skipped };

struct CandidateVerdict {
  bool parse_pass = false;
  SimVerdict sim = SimVerdict::skipped;
  int class_id = -1; // equivalence class among valid candidates, -1 invalid
};

struct RewardBreakdown {
  int r_syn = 0;
  int r_func = 0;
  int r_div = 0;
  int n_c = 0;
  int n_s = 0;
  int i_s = 0;
  int i_f = -1;
  double l_t = 1.0;
  double r_cont = 0.0;
  double r_total = 0.0;
  std::vector<CandidateVerdict> per_candidate;
};

/// Rolling window of the previous (at most four) reasoning-span lengths.
class HistoryWindow {
public:
  void append(std::uint64_t length) {
    if (lengths_.size() == 4) lengths_.erase(lengths_.begin());
    lengths_.push_back(length);
  }

  // cold start: no prior responses -> neutral ratio later (caller uses 1.0)
  std::optional<double> mean() const {
    if (lengths_.empty()) return std::nullopt;
    double sum = 0;
    for (std::uint64_t v : lengths_) sum += static_cast<double>(v);
    return sum / static_cast<double>(lengths_.size());
  }

  const std::vector<std::uint64_t>& lengths() const { return lengths_; }

private:
  std::vector<std::uint64_t> lengths_;
};

/// Which reward components are live and how they are weighted. The schedule
/// hook can rewrite weights per training step; the default is static 1.0,
/// which reproduces the plain four-term sum.
struct StageConfig {
  bool syn = true;
  bool func = true;
  bool div = true;
  bool cont = true;
  double w_syn = 1.0;
  double w_func = 1.0;
  double w_div = 1.0;
  double w_cont = 1.0;
  std::function<void(StageConfig&, int step)> schedule;

  void apply_schedule(int step) {
    if (schedule) schedule(*this, step);
  }

  static StageConfig stage2() {
    StageConfig c;
    c.func = false; // unverified training data: no functional reward
    return c;
  }

  static StageConfig stage3() { return StageConfig{}; }
};

/// How functional correctness is decided. Neither field set = stage-2 mode:
/// function score 0 and every candidate marked skipped.
struct Verification {
  std::optional<sim::VectorSuite> vectors;
  std::optional<std::string> external_command;
  std::string workdir = "/tmp";
  double timeout_seconds = 30.0;
};

namespace detail {

struct CandidateAnalysis {
  std::vector<std::optional<SyntaxTree>> trees; // per candidate; set if valid
};

inline CandidateAnalysis check_candidates(const ModelResponse& response,
                                          RewardBreakdown& out) {
  CandidateAnalysis a;
  for (const std::string& src : response.candidates) {
    SyntaxVerdict v = check_syntax(src);
    CandidateVerdict cv;
    cv.parse_pass = v.pass;
    out.per_candidate.push_back(cv);
    a.trees.push_back(v.pass ? std::move(v.tree) : std::nullopt);
  }
  return a;
}

inline void run_function_checks(const ModelResponse& response,
                                const CandidateAnalysis& a,
                                const Verification& verify,
                                RewardBreakdown& out) {
  bool configured = verify.vectors || verify.external_command;
  for (std::size_t i = 0; i < a.trees.size(); ++i) {
    CandidateVerdict& cv = out.per_candidate[i];
    if (!cv.parse_pass || !configured) {
      cv.sim = SimVerdict::skipped;
      continue;
    }
    sim::SimOutcome outcome;
    if (verify.vectors) {
      try {
        sim::SimDesign design = sim::elaborate(*a.trees[i]);
        outcome = sim::run(design, *verify.vectors);
      } catch (const sim::ElaborationError&) {
        outcome.verdict = sim::Verdict::sim_error;
      }
    } else {
      outcome = sim::run_external(response.candidates[i],
                                  *verify.external_command, verify.workdir,
                                  verify.timeout_seconds);
    }
    // anything but a clean pass counts as not-passed
    cv.sim = outcome.verdict == sim::Verdict::pass ? SimVerdict::pass
                                                   : SimVerdict::fail;
  }
}

inline void run_diversity(const CandidateAnalysis& a, RewardBreakdown& out) {
  std::vector<SyntaxTree> valid;
  std::vector<std::size_t> valid_index;
  for (std::size_t i = 0; i < a.trees.size(); ++i) {
    if (!a.trees[i]) continue;
    valid.push_back(*a.trees[i]);
    valid_index.push_back(i);
  }
  EquivClassPartition part = rtlseek::partition(valid);
  out.n_c = static_cast<int>(part.classes.size());
  for (std::size_t c = 0; c < part.classes.size(); ++c)
    for (std::size_t v : part.classes[c])
      out.per_candidate[valid_index[v]].class_id = static_cast<int>(c);
  std::vector<bool> class_passes(part.classes.size(), false);
  for (std::size_t i = 0; i < out.per_candidate.size(); ++i)
    if (out.per_candidate[i].sim == SimVerdict::pass &&
        out.per_candidate[i].class_id >= 0)
      class_passes[static_cast<std::size_t>(out.per_candidate[i].class_id)] =
          true;
  for (bool p : class_passes)
    if (p) ++out.n_s;
}

} // namespace detail

/// Reasoning-length ratio: mean of history over current, clamped to [0, 4].
/// Empty history or zero current length degrade to the neutral value 1.
inline double length_ratio(const HistoryWindow& history,
                           std::uint64_t current) {
  auto m = history.mean();
  if (!m) return 1.0;
  double cur = current == 0 ? 1.0 : static_cast<double>(current);
  double ratio = *m / cur;
  if (ratio < 0.0) ratio = 0.0;
  if (ratio > 4.0) ratio = 4.0;
  return ratio;
}

/// Score one raw response. The history window is consulted for l_t and then
/// updated with the current reasoning length, so calls sharing a history
/// stream must be serialized by the caller.
inline RewardBreakdown score(const std::string& raw_text,
                             const StageConfig& stage, HistoryWindow& history,
                             const Verification& verify = {}) {
  RewardBreakdown out;
  ModelResponse response = parse_response(raw_text);

  detail::CandidateAnalysis analysis =
      detail::check_candidates(response, out);

  bool any_valid = false;
  for (const CandidateVerdict& cv : out.per_candidate)
    any_valid |= cv.parse_pass;
  out.r_syn = stage.syn && any_valid ? 1 : 0;

  if (stage.func)
    detail::run_function_checks(response, analysis, verify, out);
  else
    for (CandidateVerdict& cv : out.per_candidate) cv.sim = SimVerdict::skipped;
  bool any_func = false;
  for (const CandidateVerdict& cv : out.per_candidate)
    any_func |= cv.sim == SimVerdict::pass;
  out.r_func = stage.func && any_func ? 1 : 0;

  detail::run_diversity(analysis, out);
  if (!stage.func) out.n_s = 0; // no verified classes without verification
  out.r_div = stage.div ? out.n_c + out.n_s : 0;

  double quality = stage.w_syn * out.r_syn + stage.w_func * out.r_func +
                   stage.w_div * out.r_div;
  out.i_s = quality > kQualityThreshold ? 1 : 0;

  out.i_f = response.think_span && response.design_span ? 1 : -1;
  std::uint64_t think_len =
      response.think_span ? response.think_span->size() : raw_text.size();
  out.l_t = length_ratio(history, think_len);
  double cont = out.i_s == 1 ? 0.5 * out.l_t + 0.5 * out.i_f
                             : -0.5 * out.l_t + 0.5 * out.i_f;
  out.r_cont = stage.cont ? cont : 0.0;

  out.r_total = stage.w_syn * out.r_syn + stage.w_func * out.r_func +
                stage.w_div * out.r_div + stage.w_cont * out.r_cont;

  history.append(think_len);
  return out;
}

inline ojson to_json(const RewardBreakdown& b) {
  ojson j;
  j["schema"] = "reward/1";
  j["r_syn"] = b.r_syn;
  j["r_func"] = b.r_func;
  j["r_div"] = b.r_div;
  j["r_cont"] = b.r_cont;
  j["r_total"] = b.r_total;
  j["n_c"] = b.n_c;
  j["n_s"] = b.n_s;
  j["i_s"] = b.i_s;
  j["i_f"] = b.i_f;
  j["l_t"] = b.l_t;
  ojson arr = ojson::array();
  for (const CandidateVerdict& cv : b.per_candidate) {
    ojson e;
    e["parse"] = cv.parse_pass ? "pass" : "fail";
    e["sim"] = cv.sim == SimVerdict::pass
                   ? "pass"
                   : cv.sim == SimVerdict::fail ? "fail" : "skipped";
    if (cv.class_id >= 0) e["class"] = cv.class_id;
    else e["class"] = nullptr;
    arr.push_back(std::move(e));
  }
  j["per_candidate"] = std::move(arr);
  return j;
}

} // namespace rtlseek::reward
