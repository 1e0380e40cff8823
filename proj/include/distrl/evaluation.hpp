#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "distrl/gridworld.hpp"
#include "distrl/return_dist.hpp"
#include "distrl/wasserstein.hpp"

namespace distrl {

struct RolloutSpec {
  std::size_t n_rollouts = 10000;
  int horizon = 100;
  double gamma = 0.7;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Monte-Carlo returns of `policy` from s0. Rollout i uses the stream
/// (seed, kRollout, i), so the result does not depend on the worker count.
SampleSet empirical_return_dist(const Dynamics& env, const ActionMap& policy, State s0, const RolloutSpec& spec);
SampleSet empirical_return_dist(const Dynamics& env, const LinearPolicy& policy, State s0,
                                const RolloutSpec& spec);

/// W_Theta between each snapshot's distribution at `state` and the oracle.
std::vector<double> distance_path(std::span<const ValueTable> snapshots, const MeasureView& oracle, State state,
                                  const DirectionSet& dirs);

/// Percentile rank of `value` within `all`. Counts entries <= value; when
/// value ties at least two entries, ties count half (midrank).
double utility_percentile(std::span<const double> all, double value);

/// Linear interpolation between order statistics (type 7).
double quantile_linear(std::vector<double> values, double q);

struct PercentileSummary {
  double p5 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p95 = 0.0, min = 0.0, max = 0.0;
};

PercentileSummary summarize(std::span<const double> values);

}  // namespace distrl
