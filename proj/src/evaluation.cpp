#include "distrl/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distrl/parallel.hpp"

namespace distrl {

SampleSet empirical_return_dist(const Dynamics& env, const ActionMap& policy, State s0, const RolloutSpec& spec) {
  if (spec.n_rollouts == 0) throw std::invalid_argument("empirical_return_dist: n_rollouts must be >= 1");
  if (!s0.valid()) throw std::invalid_argument("empirical_return_dist: invalid initial state");
  const std::size_t d = env.reward_dims();
  std::vector<double> coords(spec.n_rollouts * d);
  parallel_for(spec.n_rollouts, spec.workers, [&](std::size_t i) {
    Rng rng = Rng::stream(spec.seed, StreamTag::kRollout, {i});
    const std::vector<double> g = rollout(env, s0, policy, spec.horizon, spec.gamma, rng);
    std::copy(g.begin(), g.end(), coords.begin() + static_cast<std::ptrdiff_t>(i * d));
  });
  return SampleSet(d, std::move(coords));
}

SampleSet empirical_return_dist(const Dynamics& env, const LinearPolicy& policy, State s0,
                                const RolloutSpec& spec) {
  return empirical_return_dist(env, action_map(policy), s0, spec);
}

std::vector<double> distance_path(std::span<const ValueTable> snapshots, const MeasureView& oracle, State state,
                                  const DirectionSet& dirs) {
  if (snapshots.empty()) throw std::invalid_argument("distance_path: no snapshots");
  if (!state.valid()) throw std::out_of_range("distance_path: state outside the table");
  const SlicedReference ref(oracle, dirs);
  std::vector<double> out;
  out.reserve(snapshots.size());
  for (const ValueTable& t : snapshots) out.push_back(ref.distance_to(t.at(state.index()).view()).value);
  return out;
}

double utility_percentile(std::span<const double> all, double value) {
  if (all.empty()) throw std::invalid_argument("utility_percentile: empty list");
  std::size_t below = 0, equal = 0;
  for (double u : all) {
    if (u < value) ++below;
    else if (u == value) ++equal;
  }
  const double n = static_cast<double>(all.size());
  if (equal < 2) return 100.0 * static_cast<double>(below + equal) / n;
  return 100.0 * (static_cast<double>(below) + 0.5 * static_cast<double>(equal)) / n;
}

double quantile_linear(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile_linear: empty list");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile_linear: q outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

PercentileSummary summarize(std::span<const double> values) {
  std::vector<double> v(values.begin(), values.end());
  if (v.empty()) throw std::invalid_argument("summarize: empty list");
  PercentileSummary s;
  s.p5 = quantile_linear(v, 0.05);
  s.p25 = quantile_linear(v, 0.25);
  s.p50 = quantile_linear(v, 0.50);
  s.p75 = quantile_linear(v, 0.75);
  s.p95 = quantile_linear(v, 0.95);
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  s.min = *mn;
  s.max = *mx;
  return s;
}

}  // namespace distrl
