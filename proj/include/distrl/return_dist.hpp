#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distrl/rng.hpp"
#include "distrl/support_grid.hpp"

namespace distrl {

/// A list of points in R^d stored row-major.
class SampleSet {
 public:
  explicit SampleSet(std::size_t dims = 0) : dims_(dims) {}
  SampleSet(std::size_t dims, std::vector<double> coords);

  std::size_t dims() const { return dims_; }
  std::size_t size() const { return dims_ == 0 ? 0 : coords_.size() / dims_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dims_, dims_}; }
  std::span<double> point(std::size_t i) { return {coords_.data() + i * dims_, dims_}; }
  std::span<const double> coords() const { return coords_; }

  void reserve(std::size_t n) { coords_.reserve(n * dims_); }
  void push_back(std::span<const double> p);

 private:
  std::size_t dims_;
  std::vector<double> coords_;
};

/// Non-owning view of a finite weighted measure: `coords` holds
/// weights.size() points of dimension `dims`, row-major.
struct MeasureView {
  std::size_t dims = 0;
  std::span<const double> coords;
  std::span<const double> weights;

  std::size_t size() const { return weights.size(); }
  std::span<const double> point(std::size_t i) const { return coords.subspan(i * dims, dims); }
};

/// Finite weighted point set that owns its storage.
struct WeightedPoints {
  std::size_t dims = 0;
  std::vector<double> coords;
  std::vector<double> weights;

  /// Uniform weights over the samples.
  static WeightedPoints uniform(const SampleSet& samples);
  MeasureView view() const { return {dims, coords, weights}; }
};

/// Probability weights over the atoms of a SupportGrid.
class CategoricalReturnDist {
 public:
  /// Validates non-negativity and normalization (within 1e-9).
  CategoricalReturnDist(GridPtr grid, std::vector<double> weights);

  static CategoricalReturnDist point_mass(GridPtr grid, std::size_t atom);

  const SupportGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t atom) const { return weights_[atom]; }
  std::size_t support_size() const;

  MeasureView view() const { return {grid_->dims(), grid_->atom_table(), weights_}; }

 private:
  GridPtr grid_;
  std::vector<double> weights_;
};

/// Empirical distribution of the snapped samples.
CategoricalReturnDist from_samples(GridPtr grid, const SampleSet& samples);

/// Builds a distribution from per-atom counts.
CategoricalReturnDist from_counts(GridPtr grid, std::span<const std::size_t> counts);

/// Draws atom indices by inverse CDF over the support of a distribution.
class AtomSampler {
 public:
  explicit AtomSampler(const CategoricalReturnDist& dist);
  std::size_t draw(Rng& rng) const;

 private:
  std::vector<double> cumulative_;
  std::vector<std::size_t> atoms_;
};

/// n i.i.d. atom centers drawn from the distribution.
SampleSet sample(const CategoricalReturnDist& dist, Rng& rng, std::size_t n);

// Summary statistics. Marginal quantiles use the left-continuous generalized
// inverse: the smallest support value whose marginal CDF reaches q.
std::vector<double> mean(const MeasureView& m);
double marginal_quantile(const MeasureView& m, std::size_t dim, double q);
double marginal_median(const MeasureView& m, std::size_t dim);
/// P(Z[dim] > c).
double tail_prob(const MeasureView& m, std::size_t dim, double c);
/// P(Z[dim] < c).
double lower_tail_prob(const MeasureView& m, std::size_t dim, double c);
/// E||Z|| (Euclidean).
double expected_norm(const MeasureView& m);

/// Per-state return distributions for one policy, all on the same grid.
class ValueTable {
 public:
  ValueTable(GridPtr grid, std::vector<CategoricalReturnDist> dists);

  std::size_t size() const { return dists_.size(); }
  const CategoricalReturnDist& operator[](std::size_t state) const { return dists_[state]; }
  const CategoricalReturnDist& at(std::size_t state) const;
  const SupportGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }

 private:
  GridPtr grid_;
  std::vector<CategoricalReturnDist> dists_;
};

}  // namespace distrl
