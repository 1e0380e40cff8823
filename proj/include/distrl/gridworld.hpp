#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "distrl/rng.hpp"

namespace distrl {

inline constexpr int kStateMin = 1;
inline constexpr int kStateMax = 15;
inline constexpr int kStatesPerDim = kStateMax - kStateMin + 1;
inline constexpr std::size_t kNumStates = kStatesPerDim * kStatesPerDim;
inline constexpr double kRewardBound = 15.0;

struct State {
  int s1 = kStateMin;
  int s2 = kStateMin;

  auto operator<=>(const State&) const = default;

  bool valid() const {
    return s1 >= kStateMin && s1 <= kStateMax && s2 >= kStateMin && s2 <= kStateMax;
  }
  /// Row-major index with s1 varying slowest.
  std::size_t index() const {
    return static_cast<std::size_t>((s1 - kStateMin) * kStatesPerDim + (s2 - kStateMin));
  }
  static State from_index(std::size_t i) {
    return {static_cast<int>(i / kStatesPerDim) + kStateMin, static_cast<int>(i % kStatesPerDim) + kStateMin};
  }
};

enum class Action : int { kMinus = -1, kPlus = 1 };

inline int value(Action a) { return static_cast<int>(a); }

/// Deterministic policy: +1 when sgn * (beta0 + beta1 * s1 + s2) >= 0.
struct LinearPolicy {
  double beta0 = 0.0;
  double beta1 = 0.0;
  int sgn = 1;

  bool operator==(const LinearPolicy&) const = default;
};

Action policy_action(const LinearPolicy& p, State s);

using ActionMap = std::array<Action, kNumStates>;

ActionMap action_map(const LinearPolicy& p);

/// The four policies studied in the fixed-policy experiments.
std::array<LinearPolicy, 4> reference_policies();

struct RewardVec {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// Transition and reward sampler consumed by dynamic programming and
/// rollouts. Implementations are immutable; all randomness comes from the
/// caller's Rng.
class Dynamics {
 public:
  virtual ~Dynamics() = default;

  virtual std::size_t reward_dims() const = 0;
  virtual State sample_next(State s, Action a, Rng& rng) const = 0;
  /// Writes reward_dims() values into out.
  virtual void sample_reward(State s, Action a, State next, Rng& rng, std::span<double> out) const = 0;
};

/// Which mixture component produced each next-state coordinate.
struct TransitionDraw {
  State next;
  bool s1_from_chisq = false;
  bool s2_from_exponential = false;
};

/// The two-dimensional simulation environment.
///
/// S1' ~ Chisq(s1) w.p. 0.75 (a = -1) or 0.25 (a = +1), else N(0.1 s1 + 8, 1).
/// S2' ~ Exp(mean max(floor(0.25 s1 + s2), 1)) with the same mixing
/// probabilities, else Uniform(1, 10). Both are rounded half away from zero
/// and clamped to {1..15}. R1 ~ N(s1' - s1 - 0.2 [a = +1], 1) and
/// R2 ~ N(s2' - s2, 1), each clamped to [-15, 15].
class GridWorld final : public Dynamics {
 public:
  std::size_t reward_dims() const override { return 2; }
  State sample_next(State s, Action a, Rng& rng) const override;
  void sample_reward(State s, Action a, State next, Rng& rng, std::span<double> out) const override;

  TransitionDraw sample_next_detailed(State s, Action a, Rng& rng) const;
  RewardVec reward(State s, Action a, State next, Rng& rng) const;

  struct Step {
    State next;
    RewardVec reward;
  };
  Step step(State s, Action a, Rng& rng) const;
};

/// Keeps only the first reward coordinate of another Dynamics.
class FirstRewardOnly final : public Dynamics {
 public:
  explicit FirstRewardOnly(const Dynamics& inner) : inner_(inner) {}
  std::size_t reward_dims() const override { return 1; }
  State sample_next(State s, Action a, Rng& rng) const override { return inner_.sample_next(s, a, rng); }
  void sample_reward(State s, Action a, State next, Rng& rng, std::span<double> out) const override;

 private:
  const Dynamics& inner_;
};

/// sum_{t < horizon} gamma^t r_t along one trajectory of policy p from s0.
/// The truncation bias is at most 15 gamma^horizon / (1 - gamma) per
/// coordinate.
std::vector<double> rollout(const Dynamics& env, State s0, const ActionMap& policy, int horizon, double gamma,
                            Rng& rng);
std::vector<double> rollout(const Dynamics& env, State s0, const LinearPolicy& policy, int horizon, double gamma,
                            Rng& rng);

struct BetaRanges {
  double beta0_lo = -20.0;
  double beta0_hi = 20.0;
  double beta1_lo = -3.0;
  double beta1_hi = 3.0;
};

/// Draws n_pairs coefficient pairs whose action maps differ from every
/// earlier candidate and emits each with sgn = -1 and sgn = +1. Throws
/// std::runtime_error when a pair cannot be found within retry_cap draws.
std::vector<LinearPolicy> sample_policy_set(std::size_t n_pairs, const BetaRanges& ranges, Rng& rng,
                                            std::size_t retry_cap = 10000);

/// One logged transition.
struct TransitionRow {
  std::int64_t episode = 0;
  int t = 0;
  State s;
  Action a = Action::kPlus;
  State next;
  RewardVec reward;
};

/// Trajectories under the uniform-random behavior policy from uniform-random
/// initial states. Episode e uses its own stream, so the first n episodes of
/// a longer request equal a shorter request.
std::vector<TransitionRow> generate_trajectories(const GridWorld& env, std::int64_t first_episode,
                                                 std::int64_t n_episodes, int length, std::uint64_t seed);

/// CSV with header episode,t,s1,s2,a,s1',s2',r1,r2.
void write_trajectory_csv(std::ostream& out, std::span<const TransitionRow> rows);
std::vector<TransitionRow> read_trajectory_csv(std::istream& in);

}  // namespace distrl
