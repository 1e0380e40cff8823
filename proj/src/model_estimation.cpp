#include "distrl/model_estimation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "distrl/csv_io.hpp"

namespace distrl {

namespace {

constexpr std::size_t kValues = kStatesPerDim;
constexpr int kFixedShift = 64;

std::size_t value_slot(int v) { return static_cast<std::size_t>(v - kStateMin); }

std::array<double, RegressionFit::kFeatures> features(State s, Action a, State next) {
  return {1.0, double(s.s1), double(s.s2), double(value(a)), double(next.s1), double(next.s2)};
}

}  // namespace

TransitionCounts::TransitionCounts()
    : s1_(kNumCells * kValues, 0), s2_(kNumCells * kValues, 0), visits_(kNumCells, 0) {}

void TransitionCounts::add(State s, Action a, State next) {
  const std::size_t c = cell_of(s, a);
  ++s1_[c * kValues + value_slot(next.s1)];
  ++s2_[c * kValues + value_slot(next.s2)];
  ++visits_[c];
}

std::uint64_t TransitionCounts::count_s1(State s, Action a, int next_s1) const {
  return s1_[cell_of(s, a) * kValues + value_slot(next_s1)];
}

std::uint64_t TransitionCounts::count_s2(State s, Action a, int next_s2) const {
  return s2_[cell_of(s, a) * kValues + value_slot(next_s2)];
}

RewardVec RegressionFit::predict(State s, Action a, State next) const {
  const auto x = features(s, a, next);
  RewardVec r;
  for (std::size_t j = 0; j < kFeatures; ++j) {
    r.r1 += coef[0][j] * x[j];
    r.r2 += coef[1][j] * x[j];
  }
  return r;
}

RewardRegression::Fixed RewardRegression::to_fixed(double v) {
  return static_cast<Fixed>(std::ldexp(v, kFixedShift));
}

double RewardRegression::from_fixed(Fixed v) {
  return std::ldexp(static_cast<double>(v), -kFixedShift);
}

void RewardRegression::add(State s, Action a, State next, RewardVec r) {
  const auto x = features(s, a, next);
  const double y[2] = {r.r1, r.r2};
  for (std::size_t i = 0; i < RegressionFit::kFeatures; ++i) {
    for (std::size_t j = 0; j < RegressionFit::kFeatures; ++j) {
      xtx_[i * 6 + j] += static_cast<std::int64_t>(x[i] * x[j]);
    }
    for (std::size_t k = 0; k < 2; ++k) xty_[i * 2 + k] += to_fixed(x[i] * y[k]);
  }
  for (std::size_t k = 0; k < 2; ++k) yty_[k] += to_fixed(y[k] * y[k]);
  ++rows_;
}

RegressionFit RewardRegression::fit() const {
  if (rows_ < kMinRows) throw std::logic_error("RewardRegression: too few rows to fit");
  constexpr std::size_t p = RegressionFit::kFeatures;
  Eigen::Matrix<double, 6, 6> xtx;
  Eigen::Matrix<double, 6, 2> xty;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) xtx(long(i), long(j)) = static_cast<double>(xtx_[i * 6 + j]);
    for (std::size_t k = 0; k < 2; ++k) xty(long(i), long(k)) = from_fixed(xty_[i * 2 + k]);
  }
  const Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<double, 6, 6>> solver(xtx);
  const Eigen::Matrix<double, 6, 2> beta = solver.solve(xty);
  const double dof = std::max<double>(1.0, static_cast<double>(rows_) - static_cast<double>(solver.rank()));

  RegressionFit out;
  out.rows = rows_;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto b = beta.col(long(k));
    const double rss = from_fixed(yty_[k]) - 2.0 * b.dot(xty.col(long(k))) + b.dot(xtx * b);
    out.residual_sd[k] = std::sqrt(std::max(rss, 0.0) / dof);
    for (std::size_t j = 0; j < p; ++j) out.coef[k][j] = b(long(j));
  }
  return out;
}

LearnedModel::LearnedModel(const TransitionCounts& counts, RegressionFit fit, ModelOptions options)
    : fit_(fit), options_(options), cdf_s1_(kNumCells * kValues), cdf_s2_(kNumCells * kValues), visits_(kNumCells) {
  if (!(options_.pseudo_count >= 0.0)) throw std::invalid_argument("LearnedModel: negative pseudo-count");
  for (std::size_t i = 0; i < kNumStates; ++i) {
    const State s = State::from_index(i);
    for (Action a : {Action::kMinus, Action::kPlus}) {
      const std::size_t c = cell_of(s, a);
      visits_[c] = counts.visits(s, a);
      double run1 = 0.0;
      double run2 = 0.0;
      for (int v = kStateMin; v <= kStateMax; ++v) {
        run1 += static_cast<double>(counts.count_s1(s, a, v)) + options_.pseudo_count;
        run2 += static_cast<double>(counts.count_s2(s, a, v)) + options_.pseudo_count;
        cdf_s1_[c * kValues + value_slot(v)] = run1;
        cdf_s2_[c * kValues + value_slot(v)] = run2;
      }
    }
  }
}

std::span<const double> LearnedModel::cdf(std::size_t table, std::size_t cell) const {
  const auto& v = table == 1 ? cdf_s1_ : cdf_s2_;
  return {v.data() + cell * kValues, kValues};
}

void LearnedModel::require_visited(std::size_t cell) const {
  if (visits_[cell] == 0 && options_.pseudo_count == 0.0) {
    throw std::runtime_error("LearnedModel: unvisited state-action pair with smoothing disabled");
  }
}

int LearnedModel::draw(std::span<const double> cumulative, Rng& rng) const {
  const double u = rng.uniform() * cumulative.back();
  for (std::size_t i = 0; i < cumulative.size(); ++i) {
    if (u < cumulative[i]) return static_cast<int>(i) + kStateMin;
  }
  return kStateMax;
}

State LearnedModel::sample_next(State s, Action a, Rng& rng) const {
  const std::size_t c = cell_of(s, a);
  require_visited(c);
  const int n1 = draw(cdf(1, c), rng);
  const int n2 = draw(cdf(2, c), rng);
  return {n1, n2};
}

double LearnedModel::probability_s1(State s, Action a, int v) const {
  const std::size_t c = cell_of(s, a);
  require_visited(c);
  const auto cum = cdf(1, c);
  const std::size_t i = value_slot(v);
  return (cum[i] - (i ? cum[i - 1] : 0.0)) / cum.back();
}

double LearnedModel::probability_s2(State s, Action a, int v) const {
  const std::size_t c = cell_of(s, a);
  require_visited(c);
  const auto cum = cdf(2, c);
  const std::size_t i = value_slot(v);
  return (cum[i] - (i ? cum[i - 1] : 0.0)) / cum.back();
}

RewardVec LearnedModel::sample_reward(State s, Action a, State next, Rng& rng) const {
  if (fit_.rows < RewardRegression::kMinRows) throw std::logic_error("LearnedModel: reward model is not fitted");
  RewardVec r = fit_.predict(s, a, next);
  if (options_.reward_noise) {
    r.r1 += fit_.residual_sd[0] * rng.normal(0.0, 1.0);
    r.r2 += fit_.residual_sd[1] * rng.normal(0.0, 1.0);
  }
  r.r1 = std::clamp(r.r1, -kRewardBound, kRewardBound);
  r.r2 = std::clamp(r.r2, -kRewardBound, kRewardBound);
  return r;
}

void LearnedModel::sample_reward(State s, Action a, State next, Rng& rng, std::span<double> out) const {
  const RewardVec r = sample_reward(s, a, next, rng);
  out[0] = r.r1;
  out[1] = r.r2;
}

void LearnedModel::write_transitions_csv(std::ostream& out) const {
  std::vector<std::vector<double>> rows;
  for (std::size_t table : {1u, 2u}) {
    for (std::size_t i = 0; i < kNumStates; ++i) {
      const State s = State::from_index(i);
      for (Action a : {Action::kMinus, Action::kPlus}) {
        const auto cum = cdf(table, cell_of(s, a));
        for (std::size_t v = 0; v < kValues; ++v) {
          const double p = cum.back() > 0.0 ? (cum[v] - (v ? cum[v - 1] : 0.0)) / cum.back() : 0.0;
          rows.push_back({double(table), double(s.s1), double(s.s2), double(value(a)), double(v + kStateMin), p});
        }
      }
    }
  }
  write_csv(out, {"table", "s1", "s2", "a", "next", "probability"}, rows);
}

void LearnedModel::write_rewards_csv(std::ostream& out) const {
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < 2; ++k) {
    std::vector<double> row{double(k + 1)};
    row.insert(row.end(), fit_.coef[k].begin(), fit_.coef[k].end());
    row.push_back(fit_.residual_sd[k]);
    rows.push_back(std::move(row));
  }
  write_csv(out, {"output", "intercept", "s1", "s2", "a", "s1'", "s2'", "residual_sd"}, rows);
}

void ModelEstimator::ingest(std::span<const TransitionRow> rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    const bool action_ok = r.a == Action::kMinus || r.a == Action::kPlus;
    const bool rewards_ok = std::isfinite(r.reward.r1) && std::isfinite(r.reward.r2);
    if (!r.s.valid() || !r.next.valid() || !action_ok || !rewards_ok) {
      throw std::invalid_argument("ModelEstimator: malformed trajectory row " + std::to_string(i));
    }
  }
  for (const auto& r : rows) {
    counts_.add(r.s, r.a, r.next);
    regression_.add(r.s, r.a, r.next, r.reward);
  }
}

LearnedModel ModelEstimator::snapshot(ModelOptions options) const {
  RegressionFit fit;
  if (regression_.rows() >= RewardRegression::kMinRows) fit = regression_.fit();
  return LearnedModel(counts_, fit, options);
}

}  // namespace distrl
