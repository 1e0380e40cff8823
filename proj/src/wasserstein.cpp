#include "distrl/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace distrl {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr std::size_t kMaxOracleSize = 64;

// Sorts (atom, weight) pairs and merges equal atoms in place.
void sort_and_merge(std::vector<double>& atoms, std::vector<double>& weights) {
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return atoms[i] < atoms[j]; });
  std::vector<double> a;
  std::vector<double> w;
  a.reserve(atoms.size());
  w.reserve(atoms.size());
  for (std::size_t i : order) {
    if (weights[i] == 0.0) continue;
    if (!a.empty() && a.back() == atoms[i]) {
      w.back() += weights[i];
    } else {
      a.push_back(atoms[i]);
      w.push_back(weights[i]);
    }
  }
  atoms = std::move(a);
  weights = std::move(w);
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

void require_unit(std::span<const double> t) {
  if (std::abs(std::sqrt(dot(t, t)) - 1.0) > kUnitTolerance) {
    throw std::invalid_argument("project: direction is not a unit vector");
  }
}

DirectionSet half_circle(std::size_t n) {
  std::vector<double> coords;
  coords.reserve(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    const double theta = std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    coords.push_back(std::cos(theta));
    coords.push_back(std::sin(theta));
  }
  return DirectionSet(2, std::move(coords));
}

}  // namespace

Weighted1D::Weighted1D(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.empty() || atoms_.size() != weights_.size()) {
    throw std::invalid_argument("Weighted1D: atoms and weights must be non-empty and of equal length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!std::isfinite(atoms_[i]) || !(weights_[i] >= 0.0)) {
      throw std::invalid_argument("Weighted1D: non-finite atom or negative weight");
    }
    total += weights_[i];
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("Weighted1D: weights do not sum to 1");
  sort_and_merge(atoms_, weights_);
}

double w1_1d(const Weighted1D& a, const Weighted1D& b) {
  const auto xa = a.atoms();
  const auto wa = a.weights();
  const auto xb = b.atoms();
  const auto wb = b.weights();
  std::size_t i = 0;
  std::size_t j = 0;
  double fa = 0.0;
  double fb = 0.0;
  double total = 0.0;
  double x = std::min(xa[0], xb[0]);
  while (i < xa.size() || j < xb.size()) {
    const double next_a = i < xa.size() ? xa[i] : std::numeric_limits<double>::infinity();
    const double next_b = j < xb.size() ? xb[j] : std::numeric_limits<double>::infinity();
    const double next = std::min(next_a, next_b);
    total += std::abs(fa - fb) * (next - x);
    x = next;
    if (next_a == next) fa += wa[i++];
    if (next_b == next) fb += wb[j++];
  }
  return total;
}

DirectionSet::DirectionSet(std::size_t dims, std::vector<double> coords)
    : dims_(dims), coords_(std::move(coords)) {
  if (dims_ == 0 || coords_.empty() || coords_.size() % dims_ != 0) {
    throw std::invalid_argument("DirectionSet: empty or ragged direction list");
  }
  for (std::size_t i = 0; i < size(); ++i) {
    const auto t = direction(i);
    if (std::abs(std::sqrt(dot(t, t)) - 1.0) > 1e-12) {
      throw std::invalid_argument("DirectionSet: direction is not a unit vector");
    }
  }
}

DirectionSet angle_set(std::size_t n) {
  if (n < 1) throw std::invalid_argument("angle_set: need at least one angle");
  return half_circle(n);
}

DirectionSet random_directions(std::size_t dims, std::size_t n, Rng& rng) {
  if (dims == 0 || n == 0) throw std::invalid_argument("random_directions: empty request");
  std::vector<double> coords;
  coords.reserve(dims * n);
  std::vector<double> v(dims);
  for (std::size_t i = 0; i < n; ++i) {
    double norm = 0.0;
    do {
      for (auto& x : v) x = rng.normal(0.0, 1.0);
      norm = std::sqrt(dot(v, v));
    } while (norm < 1e-12);
    for (double x : v) coords.push_back(x / norm);
  }
  return DirectionSet(dims, std::move(coords));
}

Weighted1D project(const MeasureView& m, std::span<const double> t) {
  if (t.size() != m.dims) throw std::invalid_argument("project: dimension mismatch");
  require_unit(t);
  std::vector<double> atoms;
  std::vector<double> weights;
  atoms.reserve(m.size());
  weights.reserve(m.size());
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights[i] == 0.0) continue;
    atoms.push_back(dot(m.point(i), t));
    weights.push_back(m.weights[i]);
    total += m.weights[i];
  }
  if (atoms.empty() || std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("project: measure is empty or not normalized");
  }
  sort_and_merge(atoms, weights);
  return Weighted1D(Weighted1D::Trusted{}, std::move(atoms), std::move(weights));
}

SlicedDistance max_sliced_w1(const MeasureView& a, const MeasureView& b, const DirectionSet& dirs) {
  if (dirs.size() == 0) throw std::invalid_argument("max_sliced_w1: empty direction set");
  SlicedDistance best{-1.0, 0};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    const double d = w1_1d(project(a, dirs.direction(i)), project(b, dirs.direction(i)));
    if (d > best.value) best = {d, i};
  }
  return best;
}

SlicedReference::SlicedReference(const MeasureView& reference, DirectionSet dirs) : dirs_(std::move(dirs)) {
  projections_.reserve(dirs_.size());
  for (std::size_t i = 0; i < dirs_.size(); ++i) projections_.push_back(project(reference, dirs_.direction(i)));
}

SlicedDistance SlicedReference::distance_to(const MeasureView& other) const {
  SlicedDistance best{-1.0, 0};
  for (std::size_t i = 0; i < dirs_.size(); ++i) {
    const double d = w1_1d(projections_[i], project(other, dirs_.direction(i)));
    if (d > best.value) best = {d, i};
  }
  return best;
}

CoveringEstimate covering_error_bound(const MeasureView& a, const MeasureView& b, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("covering_error_bound: eps must be positive");
  if (a.dims != 2 || b.dims != 2) throw std::invalid_argument("covering_error_bound: two-dimensional inputs only");
  const double spacing = eps >= 2.0 ? std::numbers::pi : 2.0 * std::asin(eps / 2.0);
  const auto n = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::numbers::pi / spacing)));
  CoveringEstimate out;
  out.n_directions = n;
  out.approx = max_sliced_w1(a, b, half_circle(n)).value;
  out.fine = max_sliced_w1(a, b, half_circle(16 * n)).value;
  out.bound = eps * (expected_norm(a) + expected_norm(b));
  if (std::abs(out.fine - out.approx) > out.bound + 1e-12) {
    throw std::logic_error("covering_error_bound: finer estimate outside the covering bound");
  }
  return out;
}

std::vector<std::size_t> min_cost_assignment(std::span<const double> cost, std::size_t n) {
  if (cost.size() != n * n) throw std::invalid_argument("min_cost_assignment: cost matrix is not n x n");
  // Shortest augmenting paths with row/column potentials, 1-based internally.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0);
  std::vector<double> v(n + 1, 0.0);
  std::vector<std::size_t> match(n + 1, 0);  // match[col] = row
  std::vector<std::size_t> way(n + 1, 0);
  for (std::size_t row = 1; row <= n; ++row) {
    match[0] = row;
    std::size_t col0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col0] = 1;
      const std::size_t r = match[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const double reduced = cost[(r - 1) * n + (c - 1)] - u[r] - v[c];
        if (reduced < minv[c]) {
          minv[c] = reduced;
          way[c] = col0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          col1 = c;
        }
      }
      for (std::size_t c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      col0 = col1;
    } while (match[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      match[col0] = match[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t c = 1; c <= n; ++c) assignment[match[c] - 1] = c - 1;
  return assignment;
}

double w1_matching_oracle(const SampleSet& a, const SampleSet& b) {
  if (a.size() != b.size()) throw std::invalid_argument("w1_matching_oracle: unequal sample counts");
  if (a.size() == 0 || a.size() > kMaxOracleSize) {
    throw std::invalid_argument("w1_matching_oracle: sample count must be in [1, 64]");
  }
  if (a.dims() != b.dims()) throw std::invalid_argument("w1_matching_oracle: dimension mismatch");
  const std::size_t n = a.size();
  std::vector<double> cost(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double sq = 0.0;
      for (std::size_t k = 0; k < a.dims(); ++k) {
        const double diff = a.point(i)[k] - b.point(j)[k];
        sq += diff * diff;
      }
      cost[i * n + j] = std::sqrt(sq);
    }
  }
  const auto assignment = min_cost_assignment(cost, n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) total += cost[i * n + assignment[i]];
  return total / static_cast<double>(n);
}

}  // namespace distrl
