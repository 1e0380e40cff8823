#include "distrl/policy_search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distrl/parallel.hpp"

namespace distrl {

UtilitySpec UtilitySpec::median_plus_tail() {
  UtilitySpec u;
  u.terms.push_back({StatKind::kMedian, 0, 0.5, 0.0, 1.0});
  u.terms.push_back({StatKind::kTailAbove, 1, 0.5, 5.0, 20.0});
  return u;
}

void UtilitySpec::validate(std::size_t dims) const {
  if (!std::isfinite(offset)) throw std::invalid_argument("UtilitySpec: non-finite offset");
  for (const auto& t : terms) {
    if (!std::isfinite(t.weight)) throw std::invalid_argument("UtilitySpec: non-finite weight");
    if (t.kind != StatKind::kNorm && t.dim >= dims) {
      throw std::invalid_argument("UtilitySpec: term dimension exceeds the distribution dimension");
    }
    if (t.kind == StatKind::kQuantile && !(t.q >= 0.0 && t.q <= 1.0)) {
      throw std::invalid_argument("UtilitySpec: quantile level outside [0, 1]");
    }
  }
}

double utility(const MeasureView& dist, const UtilitySpec& u) {
  u.validate(dist.dims);
  double total = u.offset;
  for (const auto& t : u.terms) {
    double stat = 0.0;
    switch (t.kind) {
      case StatKind::kMean: stat = mean(dist)[t.dim]; break;
      case StatKind::kMedian: stat = marginal_median(dist, t.dim); break;
      case StatKind::kQuantile: stat = marginal_quantile(dist, t.dim, t.q); break;
      case StatKind::kTailAbove: stat = tail_prob(dist, t.dim, t.threshold); break;
      case StatKind::kTailBelow: stat = lower_tail_prob(dist, t.dim, t.threshold); break;
      case StatKind::kNorm: stat = expected_norm(dist); break;
    }
    total += t.weight * stat;
  }
  return total;
}

std::uint64_t policy_seed(std::uint64_t base, const ActionMap& map) {
  // FNV-1a over the action bits, then mixed with the base seed.
  std::uint64_t h = 1469598103934665603ull;
  for (Action a : map) {
    h ^= a == Action::kPlus ? 1u : 0u;
    h *= 1099511628211ull;
  }
  std::uint64_t z = base ^ (h + 0x9e3779b97f4a7c15ull + (base << 6) + (base >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::vector<RankedPolicy> search(const Dynamics& dynamics, std::span<const LinearPolicy> policies,
                                 const UtilitySpec& u, State query, const DpParams& params, const GridPtr& grid,
                                 unsigned workers) {
  if (policies.empty()) throw std::invalid_argument("search: empty policy set");
  if (!query.valid()) throw std::invalid_argument("search: invalid query state");
  u.validate(grid->dims());
  std::vector<RankedPolicy> ranked(policies.size());
  parallel_for(policies.size(), workers, [&](std::size_t i) {
    const ActionMap map = action_map(policies[i]);
    DpParams p = params;
    p.seed = policy_seed(params.seed, map);
    p.workers = 1;
    const PolicyEvaluation eval = evaluate_policy(dynamics, map, p, grid);
    ranked[i] = {i, policies[i], utility(eval.table[query.index()].view(), u)};
  });
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const RankedPolicy& a, const RankedPolicy& b) { return a.utility > b.utility; });
  return ranked;
}

}  // namespace distrl
