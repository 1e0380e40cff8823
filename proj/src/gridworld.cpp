#include "distrl/gridworld.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "distrl/csv_io.hpp"

namespace distrl {

namespace {

int discretize(double x) {
  const double r = std::round(std::clamp(x, -1e6, 1e6));
  return static_cast<int>(std::clamp(r, static_cast<double>(kStateMin), static_cast<double>(kStateMax)));
}

double clamp_reward(double r) { return std::clamp(r, -kRewardBound, kRewardBound); }

double branch_probability(Action a) { return a == Action::kMinus ? 0.75 : 0.25; }

}  // namespace

Action policy_action(const LinearPolicy& p, State s) {
  const double form = p.sgn * (p.beta0 + p.beta1 * s.s1 + s.s2);
  return form >= 0.0 ? Action::kPlus : Action::kMinus;
}

ActionMap action_map(const LinearPolicy& p) {
  if (p.sgn != 1 && p.sgn != -1) throw std::invalid_argument("LinearPolicy: sgn must be +1 or -1");
  ActionMap m{};
  for (std::size_t i = 0; i < kNumStates; ++i) m[i] = policy_action(p, State::from_index(i));
  return m;
}

std::array<LinearPolicy, 4> reference_policies() {
  return {LinearPolicy{-7.5, 0.5, -1}, LinearPolicy{-7.5, 0.5, 1}, LinearPolicy{15.0, 2.0, -1},
          LinearPolicy{15.0, 2.0, 1}};
}

TransitionDraw GridWorld::sample_next_detailed(State s, Action a, Rng& rng) const {
  TransitionDraw d;
  const double p = branch_probability(a);
  d.s1_from_chisq = rng.bernoulli(p);
  const double x1 = d.s1_from_chisq ? rng.chi_squared(s.s1) : rng.normal(0.1 * s.s1 + 8.0, 1.0);
  d.s2_from_exponential = rng.bernoulli(p);
  const double theta = std::max(std::floor(0.25 * s.s1 + s.s2), 1.0);
  const double x2 = d.s2_from_exponential ? rng.exponential_mean(theta) : rng.uniform(1.0, 10.0);
  d.next = {discretize(x1), discretize(x2)};
  return d;
}

State GridWorld::sample_next(State s, Action a, Rng& rng) const { return sample_next_detailed(s, a, rng).next; }

RewardVec GridWorld::reward(State s, Action a, State next, Rng& rng) const {
  const double shift = a == Action::kPlus ? 0.2 : 0.0;
  RewardVec r;
  r.r1 = clamp_reward(rng.normal(next.s1 - s.s1 - shift, 1.0));
  r.r2 = clamp_reward(rng.normal(next.s2 - s.s2, 1.0));
  return r;
}

void GridWorld::sample_reward(State s, Action a, State next, Rng& rng, std::span<double> out) const {
  const RewardVec r = reward(s, a, next, rng);
  out[0] = r.r1;
  out[1] = r.r2;
}

GridWorld::Step GridWorld::step(State s, Action a, Rng& rng) const {
  const State next = sample_next(s, a, rng);
  return {next, reward(s, a, next, rng)};
}

void FirstRewardOnly::sample_reward(State s, Action a, State next, Rng& rng, std::span<double> out) const {
  double buffer[8];
  const std::size_t d = inner_.reward_dims();
  if (d > 8) throw std::logic_error("FirstRewardOnly: inner reward too wide");
  inner_.sample_reward(s, a, next, rng, std::span<double>(buffer, d));
  out[0] = buffer[0];
}

std::vector<double> rollout(const Dynamics& env, State s0, const ActionMap& policy, int horizon, double gamma,
                            Rng& rng) {
  if (horizon < 1) throw std::invalid_argument("rollout: horizon must be at least 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("rollout: gamma must lie in [0, 1)");
  if (!s0.valid()) throw std::invalid_argument("rollout: invalid initial state");
  const std::size_t d = env.reward_dims();
  std::vector<double> total(d, 0.0);
  std::vector<double> r(d);
  State s = s0;
  double discount = 1.0;
  for (int t = 0; t < horizon; ++t) {
    const Action a = policy[s.index()];
    const State next = env.sample_next(s, a, rng);
    env.sample_reward(s, a, next, rng, r);
    for (std::size_t k = 0; k < d; ++k) total[k] += discount * r[k];
    discount *= gamma;
    s = next;
  }
  return total;
}

std::vector<double> rollout(const Dynamics& env, State s0, const LinearPolicy& policy, int horizon, double gamma,
                            Rng& rng) {
  return rollout(env, s0, action_map(policy), horizon, gamma, rng);
}

std::vector<LinearPolicy> sample_policy_set(std::size_t n_pairs, const BetaRanges& ranges, Rng& rng,
                                            std::size_t retry_cap) {
  if (n_pairs < 1) throw std::invalid_argument("sample_policy_set: n_pairs must be at least 1");
  if (ranges.beta0_lo > ranges.beta0_hi || ranges.beta1_lo > ranges.beta1_hi) {
    throw std::invalid_argument("sample_policy_set: empty coefficient range");
  }
  auto draw = [&rng](double lo, double hi) { return lo == hi ? lo : rng.uniform(lo, hi); };
  std::set<ActionMap> seen;
  std::vector<LinearPolicy> out;
  out.reserve(2 * n_pairs);
  for (std::size_t pair = 0; pair < n_pairs; ++pair) {
    bool found = false;
    for (std::size_t attempt = 0; attempt < retry_cap && !found; ++attempt) {
      const double b0 = draw(ranges.beta0_lo, ranges.beta0_hi);
      const double b1 = draw(ranges.beta1_lo, ranges.beta1_hi);
      const LinearPolicy minus{b0, b1, -1};
      const LinearPolicy plus{b0, b1, 1};
      const ActionMap m_minus = action_map(minus);
      const ActionMap m_plus = action_map(plus);
      if (seen.contains(m_minus) || seen.contains(m_plus) || m_minus == m_plus) continue;
      seen.insert(m_minus);
      seen.insert(m_plus);
      out.push_back(minus);
      out.push_back(plus);
      found = true;
    }
    if (!found) {
      throw std::runtime_error("sample_policy_set: could not draw a distinct coefficient pair within the retry cap");
    }
  }
  return out;
}

std::vector<TransitionRow> generate_trajectories(const GridWorld& env, std::int64_t first_episode,
                                                 std::int64_t n_episodes, int length, std::uint64_t seed) {
  if (n_episodes < 0 || length < 1) throw std::invalid_argument("generate_trajectories: bad sizes");
  std::vector<TransitionRow> rows;
  rows.reserve(static_cast<std::size_t>(n_episodes) * static_cast<std::size_t>(length));
  for (std::int64_t e = first_episode; e < first_episode + n_episodes; ++e) {
    Rng rng = Rng::stream(seed, StreamTag::kTrajectory, {static_cast<std::uint64_t>(e)});
    State s = State::from_index(rng.index(kNumStates));
    for (int t = 0; t < length; ++t) {
      const Action a = rng.bernoulli(0.5) ? Action::kPlus : Action::kMinus;
      const auto step = env.step(s, a, rng);
      rows.push_back({e, t, s, a, step.next, step.reward});
      s = step.next;
    }
  }
  return rows;
}

void write_trajectory_csv(std::ostream& out, std::span<const TransitionRow> rows) {
  out << "episode,t,s1,s2,a,s1',s2',r1,r2\n";
  for (const auto& r : rows) {
    out << r.episode << ',' << r.t << ',' << r.s.s1 << ',' << r.s.s2 << ',' << value(r.a) << ',' << r.next.s1 << ','
        << r.next.s2 << ',' << format_number(r.reward.r1) << ',' << format_number(r.reward.r2) << '\n';
  }
}

std::vector<TransitionRow> read_trajectory_csv(std::istream& in) {
  const CsvTable table = read_csv(in);
  if (table.header.size() != 9) throw std::runtime_error("trajectory CSV: expected 9 columns");
  std::vector<TransitionRow> rows;
  rows.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& f = table.rows[i];
    TransitionRow r;
    r.episode = static_cast<std::int64_t>(f[0]);
    r.t = static_cast<int>(f[1]);
    r.s = {static_cast<int>(f[2]), static_cast<int>(f[3])};
    r.a = f[4] < 0 ? Action::kMinus : Action::kPlus;
    r.next = {static_cast<int>(f[5]), static_cast<int>(f[6])};
    r.reward = {f[7], f[8]};
    if (f[4] != 1.0 && f[4] != -1.0) {
      throw std::runtime_error("trajectory CSV: bad action in row " + std::to_string(i));
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace distrl
