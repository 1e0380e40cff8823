#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "distrl/gridworld.hpp"

namespace distrl {

inline constexpr std::size_t kNumCells = kNumStates * 2;  // (state, action)

inline std::size_t cell_of(State s, Action a) { return s.index() * 2 + (a == Action::kPlus ? 1 : 0); }

/// Per (s1, s2, a) counts of the observed s1' and s2' values.
class TransitionCounts {
 public:
  TransitionCounts();

  void add(State s, Action a, State next);

  std::uint64_t visits(State s, Action a) const { return visits_[cell_of(s, a)]; }
  std::uint64_t count_s1(State s, Action a, int next_s1) const;
  std::uint64_t count_s2(State s, Action a, int next_s2) const;

  bool operator==(const TransitionCounts&) const = default;

 private:
  std::vector<std::uint64_t> s1_;  // kNumCells x 15
  std::vector<std::uint64_t> s2_;
  std::vector<std::uint64_t> visits_;
};

/// Fitted multivariate linear model for (r1, r2) on (s1, s2, a, s1', s2').
struct RegressionFit {
  static constexpr std::size_t kFeatures = 6;  // intercept, s1, s2, a, s1', s2'

  std::array<std::array<double, kFeatures>, 2> coef{};
  std::array<double, 2> residual_sd{};
  std::uint64_t rows = 0;

  RewardVec predict(State s, Action a, State next) const;

  bool operator==(const RegressionFit&) const = default;
};

/// Normal-equation accumulators. Sums are kept in 128-bit fixed point, so
/// the fit does not depend on the order in which rows arrive.
class RewardRegression {
 public:
  static constexpr std::uint64_t kMinRows = 6;

  void add(State s, Action a, State next, RewardVec r);
  std::uint64_t rows() const { return rows_; }
  /// Throws std::logic_error with fewer than kMinRows rows.
  RegressionFit fit() const;

  bool operator==(const RewardRegression&) const = default;

 private:
  using Fixed = __int128;
  static Fixed to_fixed(double v);
  static double from_fixed(Fixed v);

  std::array<std::int64_t, 36> xtx_{};
  std::array<Fixed, 12> xty_{};
  std::array<Fixed, 2> yty_{};
  std::uint64_t rows_ = 0;
};

struct ModelOptions {
  /// Laplace pseudo-count per next-state value; 0 disables smoothing.
  double pseudo_count = 0.5;
  /// Add Gaussian residual noise to predicted rewards.
  bool reward_noise = true;
};

/// Immutable transition and reward model fitted from logged data.
class LearnedModel final : public Dynamics {
 public:
  LearnedModel(const TransitionCounts& counts, RegressionFit fit, ModelOptions options = {});

  std::size_t reward_dims() const override { return 2; }
  State sample_next(State s, Action a, Rng& rng) const override;
  void sample_reward(State s, Action a, State next, Rng& rng, std::span<double> out) const override;

  /// Smoothed P(s1' = v | s, a); throws for an unvisited cell without smoothing.
  double probability_s1(State s, Action a, int v) const;
  double probability_s2(State s, Action a, int v) const;
  const RegressionFit& reward_fit() const { return fit_; }
  const ModelOptions& options() const { return options_; }

  RewardVec sample_reward(State s, Action a, State next, Rng& rng) const;

  /// table,s1,s2,a,next,probability rows (table 1 for s1', 2 for s2').
  void write_transitions_csv(std::ostream& out) const;
  /// output,intercept,s1,s2,a,s1',s2',residual_sd rows.
  void write_rewards_csv(std::ostream& out) const;

 private:
  int draw(std::span<const double> cumulative, Rng& rng) const;
  std::span<const double> cdf(std::size_t table, std::size_t cell) const;
  void require_visited(std::size_t cell) const;

  RegressionFit fit_;
  ModelOptions options_;
  std::vector<double> cdf_s1_;  // kNumCells x 15, unnormalized cumulative
  std::vector<double> cdf_s2_;
  std::vector<std::uint64_t> visits_;
};

/// Accumulates counts and regression statistics from trajectory rows.
class ModelEstimator {
 public:
  /// Validates the whole batch first; a malformed row rejects the batch with
  /// std::invalid_argument naming the row index.
  void ingest(std::span<const TransitionRow> rows);

  const TransitionCounts& counts() const { return counts_; }
  const RewardRegression& regression() const { return regression_; }
  std::uint64_t rows() const { return regression_.rows(); }

  LearnedModel snapshot(ModelOptions options = {}) const;

 private:
  TransitionCounts counts_;
  RewardRegression regression_;
};

}  // namespace distrl
