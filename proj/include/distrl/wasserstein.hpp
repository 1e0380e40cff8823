#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "distrl/return_dist.hpp"
#include "distrl/rng.hpp"

namespace distrl {

/// Discrete probability measure on the real line with strictly increasing
/// atoms. Construction sorts the input and merges duplicate positions.
class Weighted1D {
 public:
  Weighted1D(std::vector<double> atoms, std::vector<double> weights);

  static Weighted1D point_mass(double x) { return Weighted1D({x}, {1.0}); }

  std::span<const double> atoms() const { return atoms_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return atoms_.size(); }

 private:
  struct Trusted {};
  Weighted1D(Trusted, std::vector<double> atoms, std::vector<double> weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {}
  friend Weighted1D project(const MeasureView&, std::span<const double>);

  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// Exact W1 between two measures on the line: the integral of |F_a - F_b|,
/// evaluated in one merged sweep over both atom lists.
double w1_1d(const Weighted1D& a, const Weighted1D& b);

/// Unit vectors in R^d, stored row-major.
class DirectionSet {
 public:
  /// Validates that every row has Euclidean norm 1 within 1e-12.
  DirectionSet(std::size_t dims, std::vector<double> coords);

  std::size_t dims() const { return dims_; }
  std::size_t size() const { return coords_.size() / dims_; }
  std::span<const double> direction(std::size_t i) const { return {coords_.data() + i * dims_, dims_}; }

 private:
  std::size_t dims_;
  std::vector<double> coords_;
};

/// (cos(j*pi/n), sin(j*pi/n)) for j = 0..n-1.
DirectionSet angle_set(std::size_t n);

/// n directions uniform on the unit sphere of R^d.
DirectionSet random_directions(std::size_t dims, std::size_t n, Rng& rng);

/// Pushforward of a measure under x -> t.x. Zero-weight atoms are dropped and
/// coinciding projections merged. Rejects |t| != 1 beyond 1e-9.
Weighted1D project(const MeasureView& m, std::span<const double> t);

struct SlicedDistance {
  double value = 0.0;
  std::size_t direction = 0;  // index of the maximizing direction
};

/// max over dirs of w1_1d(project(a, t), project(b, t)).
SlicedDistance max_sliced_w1(const MeasureView& a, const MeasureView& b, const DirectionSet& dirs);

/// A reference measure projected once onto every direction, for repeated
/// max-sliced comparisons against the same target.
class SlicedReference {
 public:
  SlicedReference(const MeasureView& reference, DirectionSet dirs);

  SlicedDistance distance_to(const MeasureView& other) const;
  const DirectionSet& directions() const { return dirs_; }

 private:
  DirectionSet dirs_;
  std::vector<Weighted1D> projections_;
};

struct CoveringEstimate {
  double approx = 0.0;   // sup over the covering set
  double bound = 0.0;    // eps * (E|X| + E|Y|)
  double fine = 0.0;     // sup over a 16x finer set
  std::size_t n_directions = 0;
};

/// Max-sliced W1 over a half-circle direction set whose angular spacing is at
/// most 2*asin(eps/2), which covers the unit circle to within eps. Also
/// evaluates a finer nested set; throws std::logic_error if the two differ
/// by more than the covering bound. Two-dimensional inputs only.
CoveringEstimate covering_error_bound(const MeasureView& a, const MeasureView& b, double eps);

/// Minimum-cost perfect matching on a square cost matrix (row-major n x n).
/// Returns assignment[row] = column.
std::vector<std::size_t> min_cost_assignment(std::span<const double> cost, std::size_t n);

/// Exact W1 between two uniform empirical measures of equal size (at most
/// 64 points) via minimum-cost matching on Euclidean distances.
double w1_matching_oracle(const SampleSet& a, const SampleSet& b);

}  // namespace distrl
