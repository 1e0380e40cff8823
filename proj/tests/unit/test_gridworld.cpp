#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "distrl/gridworld.hpp"
#include "oracles.hpp"

using namespace distrl;

TEST_CASE("policy_action examples") {
  CHECK(policy_action({-7.5, 0.5, -1}, {1, 1}) == Action::kPlus);
  CHECK(policy_action({-7.5, 0.5, 1}, {1, 1}) == Action::kMinus);
  CHECK(policy_action({0, 0, 1}, {1, 1}) == Action::kPlus);
  // The zero set maps to +1 under either sign.
  CHECK(policy_action({-2, 1, 1}, {1, 1}) == Action::kPlus);
  CHECK(policy_action({-2, 1, -1}, {1, 1}) == Action::kPlus);
  CHECK_THROWS_AS(action_map({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("policies 3 and 4 are complementary off the zero set") {
  const auto refs = reference_policies();
  const ActionMap m3 = action_map(refs[2]), m4 = action_map(refs[3]);
  for (std::size_t i = 0; i < kNumStates; ++i) {
    const State s = State::from_index(i);
    if (15.0 + 2.0 * s.s1 + s.s2 != 0.0) CHECK(m3[i] != m4[i]);
    CHECK(policy_action(refs[2], s) == policy_action(refs[2], s));
  }
}

TEST_CASE("state index round-trips") {
  for (std::size_t i = 0; i < kNumStates; ++i) CHECK(State::from_index(i).index() == i);
  CHECK(State{1, 1}.index() == 0);
  CHECK(State{1, 2}.index() == 1);
  CHECK(State{2, 1}.index() == 15);
}

TEST_CASE("random steps never leave the state box or the reward interval") {
  const GridWorld env;
  Rng rng(1);
  State s{1, 1};
  bool ok = true;
  for (int t = 0; t < 1000000; ++t) {
    const Action a = rng.bernoulli(0.5) ? Action::kPlus : Action::kMinus;
    const auto st = env.step(s, a, rng);
    ok = ok && st.next.valid() && std::abs(st.reward.r1) <= 15.0 && std::abs(st.reward.r2) <= 15.0;
    s = rng.bernoulli(0.01) ? State::from_index(rng.index(kNumStates)) : st.next;
  }
  CHECK(ok);
}

TEST_CASE("conditional reward mean") {
  const GridWorld env;
  Rng rng(2);
  double sum = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += env.reward({5, 3}, Action::kPlus, {9, 4}, rng).r1;
  // sd 1, so the standard error is about 0.003.
  CHECK(std::abs(sum / n - 3.8) < 0.015);
}

TEST_CASE("branch frequency at (1,1) with a = -1") {
  const GridWorld env;
  Rng rng(3);
  int chisq = 0, expo = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const auto d = env.sample_next_detailed({1, 1}, Action::kMinus, rng);
    chisq += d.s1_from_chisq;
    expo += d.s2_from_exponential;
  }
  CHECK(std::abs(chisq / double(n) - 0.75) <= 0.01);
  CHECK(std::abs(expo / double(n) - 0.75) <= 0.01);
}

TEST_CASE("next-state frequencies match the closed-form kernel") {
  const GridWorld env;
  Rng rng(4);
  for (const State s : {State{1, 1}, State{7, 3}, State{15, 15}, State{4, 12}}) {
    for (const Action a : {Action::kMinus, Action::kPlus}) {
      std::array<double, 15> f1{}, f2{};
      const int n = 100000;
      for (int i = 0; i < n; ++i) {
        const State next = env.sample_next(s, a, rng);
        f1[next.s1 - 1] += 1.0 / n;
        f2[next.s2 - 1] += 1.0 / n;
      }
      const auto p1 = oracle::true_s1_pmf(s, a), p2 = oracle::true_s2_pmf(s, a);
      double sum1 = 0, sum2 = 0;
      for (int v = 0; v < 15; ++v) {
        sum1 += p1[v];
        sum2 += p2[v];
      }
      CHECK(sum1 == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(sum2 == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(oracle::total_variation(f1, p1) < 0.01);
      CHECK(oracle::total_variation(f2, p2) < 0.01);
    }
  }
}

TEST_CASE("rollout edge cases") {
  const GridWorld env;
  const LinearPolicy p{-7.5, 0.5, -1};
  Rng a(5), b(5);
  const auto one = rollout(env, {3, 4}, p, 1, 0.7, a);
  const auto st = env.step({3, 4}, policy_action(p, {3, 4}), b);
  CHECK(one == std::vector<double>{st.reward.r1, st.reward.r2});

  Rng c(6), d(6);
  const auto g0 = rollout(env, {3, 4}, p, 50, 0.0, c);
  const auto first = env.step({3, 4}, policy_action(p, {3, 4}), d);
  CHECK(g0 == std::vector<double>{first.reward.r1, first.reward.r2});

  // 15 * 0.7^100 / 0.3 = 1.617e-14.
  CHECK(15.0 * std::pow(0.7, 100) / 0.3 == doctest::Approx(1.6172e-14).epsilon(1e-4));
  CHECK(15.0 * std::pow(0.7, 100) / 0.3 < 2e-14);

  Rng e(7);
  CHECK_THROWS_AS(rollout(env, {1, 1}, p, 0, 0.7, e), std::invalid_argument);
  CHECK_THROWS_AS(rollout(env, {1, 1}, p, 10, 1.0, e), std::invalid_argument);
  CHECK_THROWS_AS(rollout(env, {0, 1}, p, 10, 0.5, e), std::invalid_argument);
}

TEST_CASE("first-reward adapter") {
  const GridWorld env;
  const FirstRewardOnly one(env);
  CHECK(one.reward_dims() == 1);
  Rng a(8), b(8);
  double r[1];
  one.sample_reward({2, 2}, Action::kPlus, {5, 5}, a, r);
  CHECK(r[0] == env.reward({2, 2}, Action::kPlus, {5, 5}, b).r1);
}

TEST_CASE("policy set sampling") {
  Rng rng(9);
  const auto set = sample_policy_set(100, BetaRanges{}, rng);
  REQUIRE(set.size() == 200);
  std::set<ActionMap> maps;
  for (const auto& p : set) maps.insert(action_map(p));
  CHECK(maps.size() == 200);

  const auto pair = sample_policy_set(1, BetaRanges{}, rng);
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].beta0 == pair[1].beta0);
  CHECK(pair[0].beta1 == pair[1].beta1);
  CHECK(pair[0].sgn == -pair[1].sgn);

  CHECK_THROWS_AS(sample_policy_set(2, BetaRanges{1, 1, 0.5, 0.5}, rng, 50), std::runtime_error);
  CHECK_THROWS_AS(sample_policy_set(0, BetaRanges{}, rng), std::invalid_argument);
}

TEST_CASE("trajectories are prefix-stable and round-trip through CSV") {
  const GridWorld env;
  const auto all = generate_trajectories(env, 0, 5, 20, 42);
  const auto first = generate_trajectories(env, 0, 3, 20, 42);
  const auto rest = generate_trajectories(env, 3, 2, 20, 42);
  REQUIRE(all.size() == 100);
  for (std::size_t i = 0; i < 60; ++i) {
    CHECK(all[i].s == first[i].s);
    CHECK(all[i].reward.r1 == first[i].reward.r1);
  }
  for (std::size_t i = 0; i < 40; ++i) CHECK(all[60 + i].next == rest[i].next);

  std::stringstream ss;
  write_trajectory_csv(ss, all);
  const auto back = read_trajectory_csv(ss);
  REQUIRE(back.size() == all.size());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(back[i].episode == all[i].episode);
    CHECK(back[i].t == all[i].t);
    CHECK(back[i].s == all[i].s);
    CHECK(back[i].a == all[i].a);
    CHECK(back[i].next == all[i].next);
    CHECK(back[i].reward.r1 == all[i].reward.r1);
    CHECK(back[i].reward.r2 == all[i].reward.r2);
  }
}
