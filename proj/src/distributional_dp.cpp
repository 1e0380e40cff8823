#include "distrl/distributional_dp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distrl/parallel.hpp"
#include "distrl/wasserstein.hpp"

namespace distrl {

namespace {

void validate(const DpParams& p, const SupportGrid& grid) {
  if (!(p.gamma >= 0.0 && p.gamma <= 1.0)) throw std::invalid_argument("DpParams: gamma must lie in [0, 1]");
  if (p.n_sample < 1) throw std::invalid_argument("DpParams: n_sample must be at least 1");
  if (p.n_repeat < 1 && !p.allow_zero_repeat) throw std::invalid_argument("DpParams: n_repeat must be at least 1");
  if (p.init.lo.size() != grid.dims() || p.init.hi.size() != grid.dims()) {
    throw std::invalid_argument("DpParams: init box dimension differs from the grid");
  }
  for (std::size_t k = 0; k < grid.dims(); ++k) {
    if (p.init.lo[k] > p.init.hi[k]) throw std::invalid_argument("DpParams: init box has lo above hi");
    if (p.init.lo[k] < grid.lo()[k] || p.init.hi[k] > grid.hi()[k]) {
      throw std::invalid_argument("DpParams: init box lies outside the grid");
    }
  }
}

}  // namespace

ValueTable init_value_table(const GridPtr& grid, const DpParams& params) {
  validate(params, *grid);
  const std::size_t d = grid->dims();
  std::vector<std::vector<std::size_t>> counts(kNumStates);
  parallel_for(kNumStates, params.workers, [&](std::size_t s) {
    Rng rng = Rng::stream(params.seed, StreamTag::kInit, {s});
    std::vector<std::size_t> c(grid->size(), 0);
    std::vector<double> point(d);
    for (std::size_t i = 0; i < params.n_sample; ++i) {
      for (std::size_t k = 0; k < d; ++k) {
        const double lo = params.init.lo[k];
        const double hi = params.init.hi[k];
        point[k] = lo == hi ? lo : rng.uniform(lo, hi);
      }
      ++c[grid->snap(point)];
    }
    counts[s] = std::move(c);
  });
  std::vector<CategoricalReturnDist> dists;
  dists.reserve(kNumStates);
  for (const auto& c : counts) dists.push_back(from_counts(grid, c));
  return ValueTable(grid, std::move(dists));
}

ValueTable bellman_sweep(const ValueTable& prev, const Dynamics& dynamics, const ActionMap& policy,
                         const DpParams& params, std::size_t sweep, SweepStats* stats) {
  const SupportGrid& grid = prev.grid();
  validate(params, grid);
  if (prev.size() != kNumStates) throw std::invalid_argument("bellman_sweep: table does not cover the state space");
  if (dynamics.reward_dims() != grid.dims()) {
    throw std::invalid_argument("bellman_sweep: reward dimension differs from the grid");
  }
  const std::size_t d = grid.dims();

  std::vector<AtomSampler> samplers;
  samplers.reserve(kNumStates);
  for (std::size_t s = 0; s < kNumStates; ++s) samplers.emplace_back(prev[s]);

  std::vector<std::vector<std::size_t>> counts(kNumStates);
  std::vector<std::size_t> clamped(kNumStates, 0);
  parallel_for(kNumStates, params.workers, [&](std::size_t si) {
    Rng rng = Rng::stream(params.seed, StreamTag::kSweep, {sweep, si});
    const State s = State::from_index(si);
    const Action a = policy[si];
    std::vector<std::size_t> c(grid.size(), 0);
    std::vector<double> reward(d);
    std::vector<double> point(d);
    std::size_t outside = 0;
    for (std::size_t i = 0; i < params.n_sample; ++i) {
      const State next = dynamics.sample_next(s, a, rng);
      dynamics.sample_reward(s, a, next, rng, reward);
      const auto z = grid.atom(samplers[next.index()].draw(rng));
      for (std::size_t k = 0; k < d; ++k) point[k] = reward[k] + params.gamma * z[k];
      if (!grid.contains(point)) ++outside;
      ++c[grid.snap(point)];
    }
    counts[si] = std::move(c);
    clamped[si] = outside;
  });

  std::vector<CategoricalReturnDist> dists;
  dists.reserve(kNumStates);
  std::size_t outside = 0;
  for (std::size_t s = 0; s < kNumStates; ++s) {
    dists.push_back(from_counts(prev.grid_ptr(), counts[s]));
    outside += clamped[s];
  }
  if (stats) {
    stats->clamped_fraction = static_cast<double>(outside) / static_cast<double>(kNumStates * params.n_sample);
  }
  return ValueTable(prev.grid_ptr(), std::move(dists));
}

PolicyEvaluation evaluate_policy(const Dynamics& dynamics, const ActionMap& policy, const DpParams& params,
                                 const GridPtr& grid, const SweepObserver& observer, bool keep_snapshots) {
  PolicyEvaluation out{init_value_table(grid, params), {}, {}};
  for (std::size_t sweep = 1; sweep <= params.n_repeat; ++sweep) {
    SweepStats st;
    out.table = bellman_sweep(out.table, dynamics, policy, params, sweep, &st);
    out.stats.push_back(st);
    if (keep_snapshots) out.snapshots.push_back(out.table);
    if (observer) observer(sweep, out.table);
  }
  return out;
}

PolicyEvaluation evaluate_policy(const Dynamics& dynamics, const LinearPolicy& policy, const DpParams& params,
                                 const GridPtr& grid, const SweepObserver& observer, bool keep_snapshots) {
  return evaluate_policy(dynamics, action_map(policy), params, grid, observer, keep_snapshots);
}

namespace {

double sup_w1(const ValueTable& a, const ValueTable& b) {
  const std::vector<double> axis{1.0};
  double sup = 0.0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    sup = std::max(sup, w1_1d(project(a[s].view(), axis), project(b[s].view(), axis)));
  }
  return sup;
}

}  // namespace

ContractionReport contraction_step(const ValueTable& v1, const ValueTable& v2, const Dynamics& dynamics,
                                   const ActionMap& policy, const DpParams& params) {
  if (v1.grid().dims() != 1 || v2.grid().dims() != 1) {
    throw std::invalid_argument("contraction_step: one-dimensional grids only");
  }
  const ValueTable t1 = bellman_sweep(v1, dynamics, policy, params, 1);
  const ValueTable t2 = bellman_sweep(v2, dynamics, policy, params, 1);
  return {params.gamma, sup_w1(v1, v2), sup_w1(t1, t2), v1.grid().half_width(0)};
}

}  // namespace distrl
