#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "distrl/gridworld.hpp"
#include "distrl/return_dist.hpp"
#include "distrl/support_grid.hpp"

namespace distrl {

/// Box from which initial returns are drawn uniformly.
struct InitSpec {
  std::vector<double> lo{-12.5, -12.5};
  std::vector<double> hi{12.5, 12.5};
};

struct DpParams {
  double gamma = 0.7;
  std::size_t n_sample = 1000;
  std::size_t n_repeat = 20;
  InitSpec init;
  std::uint64_t seed = 0;
  unsigned workers = 1;
  /// Permits n_repeat = 0, which returns the initial table.
  bool allow_zero_repeat = false;
};

struct SweepStats {
  /// Fraction of backed-up samples r + gamma z' that fell outside the grid box.
  double clamped_fraction = 0.0;
};

/// Per state: n_sample uniform draws from the init box, snapped to atoms.
ValueTable init_value_table(const GridPtr& grid, const DpParams& params);

/// One synchronous distributional Bellman sweep. For every state s, draws
/// n_sample triples s' ~ P(.|s, pi(s)), r ~ R(s, pi(s), s'), z' ~ prev[s'],
/// snaps r + gamma z' to the nearest atom, and replaces the distribution at
/// s by the empirical law of the snapped points. Only `prev` is read. The
/// stream for state s is derived from (seed, sweep, s).
ValueTable bellman_sweep(const ValueTable& prev, const Dynamics& dynamics, const ActionMap& policy,
                         const DpParams& params, std::size_t sweep, SweepStats* stats = nullptr);

/// Called after each sweep with its 1-based index.
using SweepObserver = std::function<void(std::size_t sweep, const ValueTable& table)>;

struct PolicyEvaluation {
  ValueTable table;
  std::vector<ValueTable> snapshots;  // filled only when requested
  std::vector<SweepStats> stats;
};

/// Initial table followed by n_repeat sweeps.
PolicyEvaluation evaluate_policy(const Dynamics& dynamics, const ActionMap& policy, const DpParams& params,
                                 const GridPtr& grid, const SweepObserver& observer = {},
                                 bool keep_snapshots = false);
PolicyEvaluation evaluate_policy(const Dynamics& dynamics, const LinearPolicy& policy, const DpParams& params,
                                 const GridPtr& grid, const SweepObserver& observer = {},
                                 bool keep_snapshots = false);

/// One sweep applied to two tables. `before` and `after` are
/// sup_s W1(V1(s), V2(s)) and sup_s W1(T V1(s), T V2(s)); both sweeps share
/// the same streams.
struct ContractionReport {
  double gamma = 0.0;
  double before = 0.0;
  double after = 0.0;
  double slack = 0.0;  // half the cell width

  /// after <= gamma * before + 2 * slack.
  bool holds() const { return after <= gamma * before + 2.0 * slack; }
};

/// One-dimensional grids only, where W1 is exact.
ContractionReport contraction_step(const ValueTable& v1, const ValueTable& v2, const Dynamics& dynamics,
                                   const ActionMap& policy, const DpParams& params);

}  // namespace distrl
