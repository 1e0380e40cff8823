#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "distrl/distributional_dp.hpp"
#include "distrl/gridworld.hpp"
#include "distrl/return_dist.hpp"

namespace distrl {

enum class StatKind { kMean, kMedian, kQuantile, kTailAbove, kTailBelow, kNorm };

/// weight * statistic. `dim` is ignored for kNorm; `q` applies to kQuantile;
/// `threshold` to the tail probabilities.
struct UtilityTerm {
  StatKind kind = StatKind::kMean;
  std::size_t dim = 0;
  double q = 0.5;
  double threshold = 0.0;
  double weight = 1.0;
};

/// offset + sum of weighted summary statistics of a return distribution.
struct UtilitySpec {
  std::vector<UtilityTerm> terms;
  double offset = 0.0;

  /// median(Z1) + 20 P(Z2 > 5).
  static UtilitySpec median_plus_tail();

  /// Throws std::invalid_argument on bad dims, q, or non-finite weights.
  void validate(std::size_t dims) const;
};

double utility(const MeasureView& dist, const UtilitySpec& u);

struct RankedPolicy {
  std::size_t index = 0;  // position in the input list
  LinearPolicy policy;
  double utility = 0.0;
};

/// Evaluates every policy with the same DP parameters, scores the return
/// distribution at the query state, and ranks by descending utility (ties by
/// input index). Each evaluation seeds its streams from params.seed and the
/// policy's action map, so policies that act identically score identically.
std::vector<RankedPolicy> search(const Dynamics& dynamics, std::span<const LinearPolicy> policies,
                                 const UtilitySpec& u, State query, const DpParams& params, const GridPtr& grid,
                                 unsigned workers = 1);

/// Seed for evaluating one policy: mixes the base seed with the action map.
std::uint64_t policy_seed(std::uint64_t base, const ActionMap& map);

}  // namespace distrl
