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

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "rtlseek/grpo.hpp"

using namespace rtlseek::grpo;

namespace {

// objective as a function of the policy's logits: recompute the current
// log-probabilities for the sampled outcomes, leave everything else fixed
double objective_of(const ToyPolicy& pol, GroupBatch b,
                    const GrpoConfig& cfg) {
  b.logprob_current.clear();
  for (int o : b.outcomes) b.logprob_current.push_back(pol.log_prob(o));
  return objective(b, cfg);
}

struct RandomCase {
  ToyPolicy pol{1};
  GroupBatch batch;
  GrpoConfig cfg;
};

// random policy/batch pair whose importance ratios stay away from the clip
// kinks by a margin much larger than the finite-difference step
RandomCase random_case(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> logit(-1.5, 1.5);
  std::uniform_real_distribution<double> reward(-2.0, 2.0);
  std::uniform_int_distribution<int> vocab_pick(3, 6);
  for (;;) {
    int vocab = vocab_pick(rng);
    std::vector<double> cur(static_cast<std::size_t>(vocab));
    std::vector<double> old_logits(cur.size());
    std::vector<double> ref(cur.size());
    for (auto& v : cur) v = logit(rng);
    for (auto& v : old_logits) v = logit(rng);
    for (auto& v : ref) v = logit(rng);

    RandomCase c;
    c.pol = ToyPolicy::from_logits(cur);
    c.pol.ref_logits = ref;
    c.cfg.group_size = 4;
    c.cfg.clip_eps = 0.2;
    c.cfg.kl_beta = 0.05;

    ToyPolicy old_pol = ToyPolicy::from_logits(old_logits);
    std::vector<double> rewards;
    for (int i = 0; i < c.cfg.group_size; ++i) {
      int o = old_pol.sample(rng);
      c.batch.outcomes.push_back(o);
      c.batch.logprob_old.push_back(old_pol.log_prob(o));
      c.batch.logprob_ref.push_back(c.pol.ref_log_prob(o));
      c.batch.logprob_current.push_back(c.pol.log_prob(o));
      rewards.push_back(reward(rng));
    }
    c.batch.rewards = rewards;
    c.batch.advantages = advantages(rewards);

    bool near_kink = false;
    for (int i = 0; i < c.cfg.group_size; ++i) {
      double rho = std::exp(c.batch.logprob_current[static_cast<std::size_t>(
                                i)] -
                            c.batch.logprob_old[static_cast<std::size_t>(i)]);
      if (std::fabs(rho - (1.0 - c.cfg.clip_eps)) < 1e-3 ||
          std::fabs(rho - (1.0 + c.cfg.clip_eps)) < 1e-3)
        near_kink = true;
    }
    if (!near_kink) return c;
  }
}

double max_fd_error(const RandomCase& c) {
  std::vector<double> analytic = gradient(c.pol, c.batch, c.cfg);
  double worst = 0;
  const double h = 1e-6;
  for (std::size_t j = 0; j < c.pol.logits.size(); ++j) {
    ToyPolicy plus = c.pol;
    ToyPolicy minus = c.pol;
    plus.logits[j] += h;
    minus.logits[j] -= h;
    double fd =
        (objective_of(plus, c.batch, c.cfg) -
         objective_of(minus, c.batch, c.cfg)) /
        (2 * h);
    double denom = std::max(std::fabs(analytic[j]) + std::fabs(fd), 1e-8);
    double err = std::fabs(analytic[j] - fd) / denom;
    worst = std::max(worst, err);
  }
  return worst;
}

} // namespace

TEST_CASE("advantages: equal rewards, two-point case, standardization") {
  CHECK(advantages({1, 1, 1, 1}) == std::vector<double>{0, 0, 0, 0});

  std::vector<double> two = advantages({0, 2}, 1e-15);
  CHECK(two[0] == Catch::Approx(-1.0).margin(1e-9));
  CHECK(two[1] == Catch::Approx(1.0).margin(1e-9));

  // mean 3.5; squared deviations 4.5^2 + 3^2 + 1.5^2 + 3^2 = 40.5,
  // population variance 40.5 / 4 = 10.125
  std::vector<double> four = advantages({8.0, 0.5, 5.0, 0.5});
  double sd = std::sqrt(10.125);
  CHECK(four[0] == Catch::Approx((8.0 - 3.5) / (sd + 1e-8)).epsilon(1e-12));
  CHECK(four[1] == Catch::Approx((0.5 - 3.5) / (sd + 1e-8)).epsilon(1e-12));
  CHECK(four[2] == Catch::Approx((5.0 - 3.5) / (sd + 1e-8)).epsilon(1e-12));

  double mean = 0;
  for (double a : four) mean += a;
  CHECK(std::fabs(mean / 4) < 1e-9);
  double var = 0;
  for (double a : four) var += a * a;
  CHECK(std::sqrt(var / 4) == Catch::Approx(1.0).margin(1e-6));

  CHECK_THROWS_AS(advantages({1.0}), std::invalid_argument);
}

TEST_CASE("advantages are invariant under a constant reward shift") {
  std::vector<double> base = {3.0, -1.0, 0.5, 7.25};
  std::vector<double> shifted;
  for (double r : base) shifted.push_back(r + 123.5);
  std::vector<double> a = advantages(base);
  std::vector<double> b = advantages(shifted);
  for (std::size_t i = 0; i < a.size(); ++i)
    CHECK(a[i] == Catch::Approx(b[i]).margin(1e-9));
}

TEST_CASE("objective hand values") {
  GrpoConfig cfg;
  cfg.group_size = 2;
  cfg.clip_eps = 0.2;
  cfg.kl_beta = 0.0;

  // identical current/old/ref: J equals the advantage mean, which is zero
  GroupBatch same;
  same.advantages = advantages({1.0, 3.0});
  same.logprob_current = {-0.7, -1.1};
  same.logprob_old = same.logprob_current;
  same.logprob_ref = same.logprob_current;
  CHECK(std::fabs(objective(same, cfg)) < 1e-12);

  // rho = 2, A = 1: clipped at 1.2
  GroupBatch up;
  up.advantages = {1.0, 1.0};
  up.logprob_old = {-1.0, -1.0};
  up.logprob_current = {-1.0 + std::log(2.0), -1.0 + std::log(2.0)};
  up.logprob_ref = up.logprob_current;
  CHECK(objective(up, cfg) == Catch::Approx(1.2).epsilon(1e-12));

  // rho = 2, A = -1: one-sided pessimistic min keeps -2
  GroupBatch down = up;
  down.advantages = {-1.0, -1.0};
  CHECK(objective(down, cfg) == Catch::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("objective rejects malformed batches") {
  GrpoConfig cfg;
  GroupBatch b;
  b.advantages = {0.0, 0.0};
  b.logprob_current = {0.0, std::log(0.0)}; // -inf
  b.logprob_old = {0.0, 0.0};
  b.logprob_ref = {0.0, 0.0};
  CHECK_THROWS_AS(objective(b, cfg), std::domain_error);

  GroupBatch short_arrays;
  short_arrays.advantages = {0.0, 0.0};
  short_arrays.logprob_current = {0.0};
  short_arrays.logprob_old = {0.0, 0.0};
  short_arrays.logprob_ref = {0.0, 0.0};
  CHECK_THROWS_AS(objective(short_arrays, cfg), std::invalid_argument);

  GrpoConfig bad;
  bad.group_size = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.group_size = 8;
  bad.clip_eps = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.clip_eps = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.clip_eps = 0.2;
  bad.kl_beta = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("k3 estimate is nonnegative and zero only at equality") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> d(-3.0, 3.0);
  for (int t = 0; t < 200; ++t) {
    double diff = d(rng);
    double k3 = std::exp(diff) - diff - 1.0;
    CHECK(k3 >= 0.0);
    if (std::fabs(diff) > 1e-6) CHECK(k3 > 0.0);
  }
  CHECK(std::exp(0.0) - 0.0 - 1.0 == 0.0);
}

TEST_CASE("softmax policy invariants") {
  ToyPolicy p = ToyPolicy::from_logits({0.3, -1.0, 2.0, 0.0});
  std::vector<double> probs = p.probs();
  double sum = 0;
  for (double v : probs) sum += v;
  CHECK(std::fabs(sum - 1.0) < 1e-12);
  for (int o = 0; o < 4; ++o)
    CHECK(std::exp(p.log_prob(o)) ==
          Catch::Approx(probs[static_cast<std::size_t>(o)]).epsilon(1e-12));

  ToyPolicy uniform(5);
  CHECK(uniform.entropy() == Catch::Approx(std::log(5.0)).epsilon(1e-12));

  std::mt19937_64 a(99), b(99);
  for (int t = 0; t < 50; ++t) CHECK(p.sample(a) == p.sample(b));
}

TEST_CASE("gradient vanishes in the trivial stationary cases") {
  ToyPolicy pol = ToyPolicy::from_logits({0.5, -0.5, 1.0});
  GrpoConfig cfg;
  cfg.group_size = 3;
  cfg.kl_beta = 0.0;
  GroupBatch b;
  b.outcomes = {0, 1, 2};
  for (int o : b.outcomes) {
    b.logprob_old.push_back(pol.log_prob(o));
    b.logprob_ref.push_back(pol.ref_log_prob(o));
    b.logprob_current.push_back(pol.log_prob(o));
  }
  b.advantages = {0.0, 0.0, 0.0};
  for (double g : gradient(pol, b, cfg)) CHECK(g == 0.0);

  // beta > 0 adds nothing when the policy sits at the reference
  cfg.kl_beta = 2.5;
  pol.ref_logits = pol.logits;
  b.logprob_ref.clear();
  for (int o : b.outcomes) b.logprob_ref.push_back(pol.ref_log_prob(o));
  for (double g : gradient(pol, b, cfg))
    CHECK(std::fabs(g) < 1e-15);
}

TEST_CASE("gradient matches central finite differences off the kinks") {
  double worst = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed)
    worst = std::max(worst, max_fd_error(random_case(seed)));
  CHECK(worst < 1e-5);
}

TEST_CASE("at the old policy with wide clip the gradient is REINFORCE") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> logit(-1.0, 1.0);
  std::vector<double> z = {logit(rng), logit(rng), logit(rng), logit(rng)};
  ToyPolicy pol = ToyPolicy::from_logits(z);
  GrpoConfig cfg;
  cfg.group_size = 4;
  cfg.clip_eps = 1.0; // widest allowed clip; rho = 1 sits far inside
  cfg.kl_beta = 0.0;
  GroupBatch b;
  b.outcomes = {2, 0, 3, 2};
  for (int o : b.outcomes) {
    b.logprob_old.push_back(pol.log_prob(o)); // theta == theta_old
    b.logprob_ref.push_back(pol.ref_log_prob(o));
    b.logprob_current.push_back(pol.log_prob(o));
  }
  b.advantages = advantages({1.0, 0.0, 0.0, 1.0});

  std::vector<double> got = gradient(pol, b, cfg);
  std::vector<double> p = pol.probs();
  std::vector<double> want(p.size(), 0.0);
  for (std::size_t i = 0; i < b.outcomes.size(); ++i)
    for (std::size_t j = 0; j < p.size(); ++j)
      want[j] += b.advantages[i] *
                 ((static_cast<int>(j) == b.outcomes[i] ? 1.0 : 0.0) - p[j]) /
                 4.0;
  for (std::size_t j = 0; j < p.size(); ++j)
    CHECK(got[j] == Catch::Approx(want[j]).margin(1e-12));
}

TEST_CASE("single-best environment concentrates mass on the target") {
  GrpoConfig cfg;
  cfg.group_size = 8;
  cfg.clip_eps = 0.2;
  cfg.kl_beta = 0.01;
  TrainResult r =
      train_demo(ToyPolicy(6), single_best_env(3), cfg, 500, 0.1, 42);
  CHECK(r.policy.probs()[3] > 0.9);
  CHECK(r.curve.size() == 500);
  // reward curve ends higher than it starts (mean over quartiles)
  double first = 0, last = 0;
  for (int i = 0; i < 125; ++i) {
    first += r.curve[static_cast<std::size_t>(i)].mean_reward;
    last += r.curve[static_cast<std::size_t>(375 + i)].mean_reward;
  }
  CHECK(last > first);
}

TEST_CASE("diversity environment raises entropy from a peaked start") {
  GrpoConfig cfg;
  cfg.group_size = 8;
  cfg.clip_eps = 0.2;
  cfg.kl_beta = 0.01;
  std::vector<double> peaked = {4.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  int improved = 0;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    TrainResult r = train_demo(ToyPolicy::from_logits(peaked),
                               diversity_env(), cfg, 300, 0.1, seed);
    if (r.curve.back().entropy > r.curve.front().entropy) ++improved;
  }
  CHECK(improved == 3);
}

TEST_CASE("diversity rewards count distinct valid designs once") {
  GroupRewardFn env = diversity_env({true, false, true, true});
  std::vector<double> r = env({0, 0, 1, 2, 2, 3});
  CHECK(r == std::vector<double>{1, 0, 0, 1, 0, 1});
  double total = 0;
  for (double v : r) total += v;
  CHECK(total == 3.0); // three distinct valid designs in the group

  GroupRewardFn all_valid = diversity_env();
  std::vector<double> r2 = all_valid({5, 5, 5});
  CHECK(r2 == std::vector<double>{1, 0, 0});
}

TEST_CASE("a large KL coefficient pins the policy to the reference") {
  GrpoConfig cfg;
  cfg.group_size = 8;
  cfg.clip_eps = 0.2;
  cfg.kl_beta = 100.0;
  ToyPolicy start(6); // uniform reference
  // step size must sit in the stable regime for the KL pull (lr * beta <= 1)
  TrainResult r = train_demo(start, single_best_env(2), cfg, 300, 0.005, 7);
  std::vector<double> ref = ToyPolicy::softmax(r.policy.ref_logits);
  std::vector<double> fin = r.policy.probs();
  double tv = 0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    tv += std::fabs(ref[i] - fin[i]);
  tv /= 2;
  CHECK(tv <= 0.05);
}

TEST_CASE("curve records pre-update entropy") {
  ToyPolicy start = ToyPolicy::from_logits({1.0, 0.0, 0.0});
  double initial_entropy = start.entropy();
  GrpoConfig cfg;
  cfg.group_size = 4;
  TrainResult r = train_demo(start, single_best_env(0), cfg, 5, 0.1, 3);
  CHECK(r.curve[0].entropy == initial_entropy);
}
