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

// Reference group-relative policy optimization kernel:
//
//   J = (1/G) * sum_i [ min(rho_i * A_i, clip(rho_i, 1-eps, 1+eps) * A_i)
//                       - beta * k3_i ]
//
// with rho_i the current/old importance ratio, A_i the group-standardized
// advantage, and k3_i = exp(lref - lcur) - (lref - lcur) - 1 the non-negative
// per-sample KL estimate against a frozen reference policy.
//
// The policy is a softmax over a finite design vocabulary — a desk-scale
// stand-in for an LLM. Outputs are atomic vocabulary items, so sequence-level
// and token-level log-probabilities coincide here. The analytic gradient is
// exact up to the clip kinks, where the min-branch subgradient is used.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace rtlseek::grpo {

struct GrpoConfig {
  int group_size = 8;
  double clip_eps = 0.2;   // in (0, 1]
  double kl_beta = 0.04;   // >= 0
  double adv_eps = 1e-8;   // std guard for advantage standardization

  void validate() const {
    if (group_size < 2) throw std::invalid_argument("group_size must be >= 2");
    if (!(clip_eps > 0.0) || clip_eps > 1.0)
      throw std::invalid_argument("clip_eps must be in (0, 1]");
    if (kl_beta < 0.0) throw std::invalid_argument("kl_beta must be >= 0");
  }
};

/// One sampled group: per-output rewards, advantages, and log-probabilities
/// under the current, old (sampling), and frozen reference policies.
struct GroupBatch {
  std::vector<int> outcomes;
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::vector<double> logprob_current;
  std::vector<double> logprob_old;
  std::vector<double> logprob_ref;
};

/// Group-standardized advantages: (r - mean) / (pop_std + eps).
/// Equal rewards yield exactly zero advantages.
inline std::vector<double> advantages(const std::vector<double>& rewards,
                                      double eps = 1e-8) {
  std::size_t g = rewards.size();
  if (g < 2) throw std::invalid_argument("group must have at least 2 rewards");
  double mean = 0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(g);
  double var = 0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(g);
  double sd = std::sqrt(var);
  std::vector<double> a(g, 0.0);
  if (sd == 0.0) return a; // degenerate equal-reward group
  for (std::size_t i = 0; i < g; ++i) a[i] = (rewards[i] - mean) / (sd + eps);
  return a;
}

namespace detail {

inline void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::domain_error(std::string("non-finite ") + what);
}

inline double clamp(double x, double lo, double hi) {
  return x < lo ? lo : x > hi ? hi : x;
}

} // namespace detail

/// Clipped-surrogate objective with k3 KL penalty (maximized by training).
inline double objective(const GroupBatch& b, const GrpoConfig& cfg) {
  cfg.validate();
  detail::check_finite(b.logprob_current, "logprob_current");
  detail::check_finite(b.logprob_old, "logprob_old");
  detail::check_finite(b.logprob_ref, "logprob_ref");
  std::size_t g = b.advantages.size();
  if (b.logprob_current.size() != g || b.logprob_old.size() != g ||
      b.logprob_ref.size() != g)
    throw std::invalid_argument("batch arrays must share one length");
  double sum = 0;
  for (std::size_t i = 0; i < g; ++i) {
    double rho = std::exp(b.logprob_current[i] - b.logprob_old[i]);
    double a = b.advantages[i];
    double unclipped = rho * a;
    double clipped =
        detail::clamp(rho, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * a;
    double surrogate = unclipped < clipped ? unclipped : clipped;
    double d = b.logprob_ref[i] - b.logprob_current[i];
    double k3 = std::exp(d) - d - 1.0; // >= 0, zero iff d == 0
    sum += surrogate - cfg.kl_beta * k3;
  }
  return sum / static_cast<double>(g);
}

/// Softmax policy over a finite design vocabulary with a frozen reference
/// copy of its initial logits (the KL anchor).
struct ToyPolicy {
  std::vector<double> logits;
  std::vector<double> ref_logits;

  explicit ToyPolicy(std::size_t vocab)
      : logits(vocab, 0.0), ref_logits(vocab, 0.0) {}

  static ToyPolicy from_logits(std::vector<double> init) {
    ToyPolicy p(init.size());
    p.logits = init;
    p.ref_logits = std::move(init);
    return p;
  }

  static std::vector<double> softmax(const std::vector<double>& z) {
    double mx = z[0];
    for (double v : z) mx = v > mx ? v : mx;
    std::vector<double> p(z.size());
    double sum = 0;
    for (std::size_t i = 0; i < z.size(); ++i) {
      p[i] = std::exp(z[i] - mx);
      sum += p[i];
    }
    for (double& v : p) v /= sum;
    return p;
  }

  std::vector<double> probs() const { return softmax(logits); }

  static double log_prob_of(const std::vector<double>& z, int o) {
    double mx = z[0];
    for (double v : z) mx = v > mx ? v : mx;
    double sum = 0;
    for (double v : z) sum += std::exp(v - mx);
    return z[static_cast<std::size_t>(o)] - mx - std::log(sum);
  }

  double log_prob(int o) const { return log_prob_of(logits, o); }
  double ref_log_prob(int o) const { return log_prob_of(ref_logits, o); }

  /// Inverse-CDF sampling from a platform-independent uniform draw, so that
  /// seeded runs are reproducible across standard libraries.
  int sample(std::mt19937_64& rng) const {
    std::vector<double> p = probs();
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double acc = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc += p[i];
      if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(p.size()) - 1;
  }

  double entropy() const {
    double h = 0;
    for (double v : probs())
      if (v > 0) h -= v * std::log(v);
    return h;
  }
};

/// Exact gradient of `objective` with respect to the policy logits, with
/// logprob_current recomputed from `pol` for the sampled outcomes. At clip
/// kinks the min-branch (unclipped) derivative is chosen.
inline std::vector<double> gradient(const ToyPolicy& pol, const GroupBatch& b,
                                    const GrpoConfig& cfg) {
  cfg.validate();
  std::size_t g = b.outcomes.size();
  std::vector<double> p = pol.probs();
  std::vector<double> grad(p.size(), 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    int o = b.outcomes[i];
    double lc = pol.log_prob(o);
    double rho = std::exp(lc - b.logprob_old[i]);
    double a = b.advantages[i];
    double unclipped = rho * a;
    double clipped =
        detail::clamp(rho, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * a;
    // d(surrogate)/d(lc): rho*a on the unclipped branch (ties included),
    // zero where the active clipped branch is constant in rho.
    double coeff = unclipped <= clipped ? unclipped : 0.0;
    coeff += cfg.kl_beta * (std::exp(b.logprob_ref[i] - lc) - 1.0);
    // d(lc)/d(logit_j) = [j == o] - p_j
    for (std::size_t j = 0; j < p.size(); ++j)
      grad[j] += coeff * ((static_cast<int>(j) == o ? 1.0 : 0.0) - p[j]);
  }
  for (double& v : grad) v /= static_cast<double>(g);
  return grad;
}

/// Environment: maps one sampled group of vocabulary items to per-output
/// rewards.
using GroupRewardFn =
    std::function<std::vector<double>(const std::vector<int>&)>;

/// Reward 1 for the target design, 0 otherwise.
inline GroupRewardFn single_best_env(int target) {
  return [target](const std::vector<int>& group) {
    std::vector<double> r(group.size(), 0.0);
    for (std::size_t i = 0; i < group.size(); ++i)
      if (group[i] == target) r[i] = 1.0;
    return r;
  };
}

/// Reward 1 for the first occurrence of each distinct valid design in the
/// group, 0 for repeats and invalid designs. The group's total reward is the
/// number of distinct valid designs sampled; attributing it to first
/// occurrences creates within-group contrast (equal rewards would standardize
/// to zero advantages and freeze learning).
inline GroupRewardFn diversity_env(std::vector<bool> valid = {}) {
  return [valid = std::move(valid)](const std::vector<int>& group) {
    std::vector<double> r(group.size(), 0.0);
    std::vector<int> seen;
    for (std::size_t i = 0; i < group.size(); ++i) {
      int o = group[i];
      if (!valid.empty() &&
          (o < 0 || static_cast<std::size_t>(o) >= valid.size() ||
           !valid[static_cast<std::size_t>(o)]))
        continue;
      bool first = true;
      for (int s : seen)
        if (s == o) { first = false; break; }
      if (first) {
        seen.push_back(o);
        r[i] = 1.0;
      }
    }
    return r;
  };
}

struct StepStats {
  double mean_reward = 0;
  double entropy = 0;
};

struct TrainResult {
  ToyPolicy policy{1};
  std::vector<StepStats> curve;
};

/// One training run: per step, snapshot the old policy, sample G outputs from
/// it, score them, standardize advantages, and take one gradient-ascent step
/// on the clipped objective. Entropy is recorded before the update, so
/// curve[0].entropy is the initial policy's entropy.
inline TrainResult train_demo(ToyPolicy policy, const GroupRewardFn& env,
                              const GrpoConfig& cfg, int steps, double lr,
                              std::uint64_t seed) {
  cfg.validate();
  std::mt19937_64 rng(seed);
  TrainResult result;
  for (int step = 0; step < steps; ++step) {
    // each group is consumed by exactly one update, so the old (sampling)
    // policy coincides with the current policy at sampling time
    GroupBatch b;
    for (int i = 0; i < cfg.group_size; ++i) {
      int o = policy.sample(rng);
      b.outcomes.push_back(o);
      b.logprob_old.push_back(policy.log_prob(o));
      b.logprob_ref.push_back(policy.ref_log_prob(o));
    }
    b.rewards = env(b.outcomes);
    b.advantages = advantages(b.rewards, cfg.adv_eps);

    StepStats s;
    for (double r : b.rewards) s.mean_reward += r;
    s.mean_reward /= static_cast<double>(cfg.group_size);
    s.entropy = policy.entropy();
    result.curve.push_back(s);

    std::vector<double> g = gradient(policy, b, cfg);
    for (std::size_t j = 0; j < policy.logits.size(); ++j)
      policy.logits[j] += lr * g[j];
  }
  result.policy = std::move(policy);
  return result;
}

} // namespace rtlseek::grpo
