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

// Benchmark evaluation: per-prompt candidate counts (gen/syn/fun), two
// response-correctness protocols — first-candidate-only and any-candidate —
// each scored for syntax and function at pass@1/pass@5 with the unbiased
// combinatorial estimator, plus the correct-candidate success rate.

#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtlseek/ast_json.hpp"
#include "rtlseek/reward.hpp"
#include "rtlseek/tv_json.hpp"

namespace rtlseek::metrics {

/// Exact binomial coefficient via Pascal's rule (fits uint64 for n <= 62).
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::uint64_t> row(static_cast<std::size_t>(n) + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int j = i; j >= 1; --j) row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j) - 1];
  return row[static_cast<std::size_t>(k)];
}

/// Unbiased pass@k estimator: 1 - C(n-c, k) / C(n, k). With k == n this is
/// the indicator that at least one of the n samples is correct.
inline double pass_at_k(int n, int c, int k) {
  if (n < 1 || n > 62) throw std::invalid_argument("pass_at_k: n out of range");
  if (c < 0 || c > n) throw std::invalid_argument("pass_at_k: need 0 <= c <= n");
  if (k < 1 || k > n) throw std::invalid_argument("pass_at_k: need 1 <= k <= n");
  return 1.0 - static_cast<double>(binomial(n - c, k)) /
                   static_cast<double>(binomial(n, k));
}

/// Candidate counts and response-level correctness for one raw response.
struct ResponseVerdict {
  int gen = 0;
  int syn = 0;
  int fun = 0;
  bool syn_first = false; // first candidate syntax-valid
  bool syn_any = false;
  bool fun_first = false; // first candidate functionally correct
  bool fun_any = false;
};

inline ResponseVerdict classify_response(const std::string& raw,
                                         const reward::Verification& verify) {
  reward::RewardBreakdown rb;
  reward::ModelResponse resp = reward::parse_response(raw);
  reward::detail::CandidateAnalysis analysis =
      reward::detail::check_candidates(resp, rb);
  reward::detail::run_function_checks(resp, analysis, verify, rb);
  ResponseVerdict v;
  v.gen = static_cast<int>(rb.per_candidate.size());
  for (const reward::CandidateVerdict& cv : rb.per_candidate) {
    if (cv.parse_pass) ++v.syn;
    if (cv.sim == reward::SimVerdict::pass) ++v.fun;
  }
  if (!rb.per_candidate.empty()) {
    v.syn_first = rb.per_candidate[0].parse_pass;
    v.fun_first = rb.per_candidate[0].sim == reward::SimVerdict::pass;
  }
  v.syn_any = v.syn > 0;
  v.fun_any = v.fun > 0;
  return v;
}

struct ItemMetrics {
  std::string id;
  bool complete = false;
  int n = 0; // responses evaluated
  double gen_num = 0, syn_num = 0, fun_num = 0, success_rate = 0;
  double syn_opoo_p1 = 0, syn_opoo_p5 = 0, syn_opmo_p1 = 0, syn_opmo_p5 = 0;
  double fun_opoo_p1 = 0, fun_opoo_p5 = 0, fun_opmo_p1 = 0, fun_opmo_p5 = 0;
};

/// Score one benchmark item from its n raw responses. pass@5 degrades to
/// pass@n when fewer than five responses exist.
inline ItemMetrics evaluate_item(const std::string& id,
                                 const std::vector<std::string>& responses,
                                 const reward::Verification& verify) {
  ItemMetrics m;
  m.id = id;
  m.complete = true;
  m.n = static_cast<int>(responses.size());
  if (responses.empty()) return m;

  int gen_total = 0, syn_total = 0, fun_total = 0;
  int c_syn_first = 0, c_syn_any = 0, c_fun_first = 0, c_fun_any = 0;
  for (const std::string& raw : responses) {
    ResponseVerdict v = classify_response(raw, verify);
    gen_total += v.gen;
    syn_total += v.syn;
    fun_total += v.fun;
    c_syn_first += v.syn_first ? 1 : 0;
    c_syn_any += v.syn_any ? 1 : 0;
    c_fun_first += v.fun_first ? 1 : 0;
    c_fun_any += v.fun_any ? 1 : 0;
  }
  double n = static_cast<double>(m.n);
  m.gen_num = gen_total / n;
  m.syn_num = syn_total / n;
  m.fun_num = fun_total / n;
  m.success_rate = gen_total > 0 ? static_cast<double>(fun_total) / gen_total : 0.0;
  int k5 = std::min(5, m.n);
  m.syn_opoo_p1 = pass_at_k(m.n, c_syn_first, 1);
  m.syn_opoo_p5 = pass_at_k(m.n, c_syn_first, k5);
  m.syn_opmo_p1 = pass_at_k(m.n, c_syn_any, 1);
  m.syn_opmo_p5 = pass_at_k(m.n, c_syn_any, k5);
  m.fun_opoo_p1 = pass_at_k(m.n, c_fun_first, 1);
  m.fun_opoo_p5 = pass_at_k(m.n, c_fun_first, k5);
  m.fun_opmo_p1 = pass_at_k(m.n, c_fun_any, 1);
  m.fun_opmo_p5 = pass_at_k(m.n, c_fun_any, k5);
  return m;
}

struct ManifestItem {
  std::string id;
  std::string prompt;   // informational; evaluation consumes responses only
  std::string vectors;  // vector-suite path, relative to the manifest
  std::string external; // external simulator command template
  int n = 0;
};

struct BenchmarkManifest {
  std::vector<ManifestItem> items;
};

inline BenchmarkManifest parse_manifest(const nlohmann::json& j) {
  if (!j.is_object() || j.value("schema", "") != "bench/1")
    throw std::runtime_error("manifest: expected schema \"bench/1\"");
  if (!j.contains("items") || !j["items"].is_array())
    throw std::runtime_error("manifest: missing \"items\" array");
  BenchmarkManifest m;
  for (const auto& e : j["items"]) {
    ManifestItem it;
    if (!e.contains("id") || !e["id"].is_string())
      throw std::runtime_error("manifest item: missing string \"id\"");
    it.id = e["id"].get<std::string>();
    it.prompt = e.value("prompt", "");
    it.vectors = e.value("vectors", "");
    it.external = e.value("external", "");
    if (!e.contains("n") || !e["n"].is_number_integer() ||
        e["n"].get<int>() < 1)
      throw std::runtime_error("manifest item \"" + it.id +
                               "\": \"n\" must be an integer >= 1");
    it.n = e["n"].get<int>();
    for (const ManifestItem& prev : m.items)
      if (prev.id == it.id)
        throw std::runtime_error("manifest: duplicate item id \"" + it.id +
                                 "\"");
    m.items.push_back(std::move(it));
  }
  return m;
}

struct EvalReport {
  std::vector<ItemMetrics> items; // manifest order, incomplete ones flagged
  std::vector<std::string> warnings;
  ItemMetrics aggregate; // unweighted means over complete items, id "mean"
  int complete_items = 0;
  bool partial = false; // any incomplete item -> exit code 3 at the CLI
};

namespace detail {

// summing in sorted order keeps aggregates invariant under item reordering
inline double sorted_mean(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  double s = 0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline bool read_file(const std::filesystem::path& p, std::string& out) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return false;
  std::ostringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

} // namespace detail

/// Evaluate every manifest item against `responses_root/<id>/sample_<k>.txt`
/// (k counted from 1). Items with missing responses or an unreadable vector
/// suite are flagged incomplete, excluded from the aggregates, and reported
/// as warnings.
inline EvalReport evaluate(const BenchmarkManifest& manifest,
                           const std::filesystem::path& responses_root,
                           const std::filesystem::path& manifest_dir) {
  EvalReport report;
  for (const ManifestItem& item : manifest.items) {
    reward::Verification verify;
    bool binding_ok = true;
    if (!item.vectors.empty()) {
      std::string text;
      if (!detail::read_file(manifest_dir / item.vectors, text)) {
        report.warnings.push_back("item \"" + item.id +
                                  "\": cannot read vector suite " +
                                  item.vectors);
        binding_ok = false;
      } else {
        try {
          verify.vectors = sim::parse_vectors_text(text);
        } catch (const std::exception& e) {
          report.warnings.push_back("item \"" + item.id +
                                    "\": bad vector suite: " + e.what());
          binding_ok = false;
        }
      }
    } else if (!item.external.empty()) {
      verify.external_command = item.external;
    }

    std::vector<std::string> responses;
    bool responses_ok = true;
    for (int k = 1; k <= item.n && binding_ok; ++k) {
      std::filesystem::path p = responses_root / item.id /
                                ("sample_" + std::to_string(k) + ".txt");
      std::string text;
      if (!detail::read_file(p, text)) {
        report.warnings.push_back("item \"" + item.id +
                                  "\": missing response " + p.string());
        responses_ok = false;
        break;
      }
      responses.push_back(std::move(text));
    }

    if (!binding_ok || !responses_ok) {
      ItemMetrics m;
      m.id = item.id;
      m.complete = false;
      report.items.push_back(std::move(m));
      report.partial = true;
      continue;
    }
    report.items.push_back(evaluate_item(item.id, responses, verify));
    ++report.complete_items;
  }

  report.aggregate.id = "mean";
  report.aggregate.complete = report.complete_items > 0;
  auto mean_of = [&](double ItemMetrics::*field) {
    std::vector<double> v;
    for (const ItemMetrics& m : report.items)
      if (m.complete) v.push_back(m.*field);
    return detail::sorted_mean(std::move(v));
  };
  report.aggregate.gen_num = mean_of(&ItemMetrics::gen_num);
  report.aggregate.syn_num = mean_of(&ItemMetrics::syn_num);
  report.aggregate.fun_num = mean_of(&ItemMetrics::fun_num);
  report.aggregate.success_rate = mean_of(&ItemMetrics::success_rate);
  report.aggregate.syn_opoo_p1 = mean_of(&ItemMetrics::syn_opoo_p1);
  report.aggregate.syn_opoo_p5 = mean_of(&ItemMetrics::syn_opoo_p5);
  report.aggregate.syn_opmo_p1 = mean_of(&ItemMetrics::syn_opmo_p1);
  report.aggregate.syn_opmo_p5 = mean_of(&ItemMetrics::syn_opmo_p5);
  report.aggregate.fun_opoo_p1 = mean_of(&ItemMetrics::fun_opoo_p1);
  report.aggregate.fun_opoo_p5 = mean_of(&ItemMetrics::fun_opoo_p5);
  report.aggregate.fun_opmo_p1 = mean_of(&ItemMetrics::fun_opmo_p1);
  report.aggregate.fun_opmo_p5 = mean_of(&ItemMetrics::fun_opmo_p5);
  if (report.complete_items == 0) report.partial = true;
  return report;
}

namespace detail {

inline ojson item_json(const ItemMetrics& m) {
  ojson j;
  j["id"] = m.id;
  j["complete"] = m.complete;
  j["n"] = m.n;
  j["gen_num"] = m.gen_num;
  j["syn_num"] = m.syn_num;
  j["fun_num"] = m.fun_num;
  j["success_rate"] = m.success_rate;
  j["syn_opoo_pass@1"] = m.syn_opoo_p1;
  j["syn_opoo_pass@5"] = m.syn_opoo_p5;
  j["syn_opmo_pass@1"] = m.syn_opmo_p1;
  j["syn_opmo_pass@5"] = m.syn_opmo_p5;
  j["fun_opoo_pass@1"] = m.fun_opoo_p1;
  j["fun_opoo_pass@5"] = m.fun_opoo_p5;
  j["fun_opmo_pass@1"] = m.fun_opmo_p1;
  j["fun_opmo_pass@5"] = m.fun_opmo_p5;
  return j;
}

} // namespace detail

inline ojson to_json(const EvalReport& r) {
  ojson j;
  j["schema"] = "report/1";
  ojson items = ojson::array();
  for (const ItemMetrics& m : r.items) items.push_back(detail::item_json(m));
  j["items"] = std::move(items);
  j["aggregate"] = detail::item_json(r.aggregate);
  j["complete_items"] = r.complete_items;
  j["partial"] = r.partial;
  ojson warn = ojson::array();
  for (const std::string& w : r.warnings) warn.push_back(w);
  j["warnings"] = std::move(warn);
  return j;
}

/// Fixed-width table of the per-item and mean rows that mirrors the JSON.
inline std::string to_table(const EvalReport& r) {
  std::ostringstream out;
  auto row = [&](const std::string& id, const std::string* flag,
                 const ItemMetrics* m) {
    char buf[320];
    if (!m) {
      std::snprintf(buf, sizeof buf,
                    "%-14s %5s %6s %6s %6s %6s  %7s %7s %7s %7s  %7s %7s %7s %7s\n",
                    id.c_str(), "n", "gen", "syn", "fun", "sr", "sO@1", "sO@5",
                    "sM@1", "sM@5", "fO@1", "fO@5", "fM@1", "fM@5");
    } else if (flag) {
      std::snprintf(buf, sizeof buf, "%-14s %5s\n", id.c_str(), flag->c_str());
    } else {
      std::snprintf(buf, sizeof buf,
                    "%-14s %5d %6.2f %6.2f %6.2f %6.2f  %7.3f %7.3f %7.3f "
                    "%7.3f  %7.3f %7.3f %7.3f %7.3f\n",
                    id.c_str(), m->n, m->gen_num, m->syn_num, m->fun_num,
                    m->success_rate, m->syn_opoo_p1, m->syn_opoo_p5,
                    m->syn_opmo_p1, m->syn_opmo_p5, m->fun_opoo_p1,
                    m->fun_opoo_p5, m->fun_opmo_p1, m->fun_opmo_p5);
    }
    out << buf;
  };
  row("item", nullptr, nullptr);
  static const std::string incomplete = "(incomplete)";
  for (const ItemMetrics& m : r.items) {
    if (m.complete)
      row(m.id, nullptr, &m);
    else
      row(m.id, &incomplete, &m);
  }
  row(r.aggregate.id, nullptr, &r.aggregate);
  return out.str();
}

} // namespace rtlseek::metrics
