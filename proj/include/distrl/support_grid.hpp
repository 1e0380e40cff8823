#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace distrl {

/// Axis-aligned uniform lattice of atoms on the box [lo, hi].
///
/// Atom i along dimension k sits at lo[k] + i * (hi[k] - lo[k]) / (bins - 1),
/// so both box corners are atoms. Atoms are indexed row-major with dimension
/// 0 varying slowest. Each atom z owns the half-closed cell
/// [z - c, z + c) per dimension, where c is half the spacing; the top face of
/// the extended box [lo - c, hi + c] belongs to the last cell.
class SupportGrid {
 public:
  SupportGrid(std::vector<double> lo, std::vector<double> hi, std::size_t bins_per_dim);

  std::size_t dims() const { return lo_.size(); }
  std::size_t bins_per_dim() const { return bins_; }
  /// Number of atoms, bins_per_dim^dims.
  std::size_t size() const { return size_; }

  std::span<const double> lo() const { return lo_; }
  std::span<const double> hi() const { return hi_; }
  double step(std::size_t dim) const { return step_[dim]; }
  double half_width(std::size_t dim) const { return 0.5 * step_[dim]; }

  double coordinate(std::size_t dim, std::size_t i) const;
  std::span<const double> atom(std::size_t index) const {
    return {atoms_.data() + index * dims(), dims()};
  }
  /// All atom coordinates, row-major (size() x dims()).
  std::span<const double> atom_table() const { return atoms_; }

  std::size_t flat_index(std::span<const std::size_t> per_dim) const;

  /// Nearest atom in Euclidean distance. Points outside the box snap to the
  /// boundary. Exact ties go to the lower coordinate.
  std::size_t snap(std::span<const double> point) const;

  /// Cell of the half-closed tiling that contains the point. Throws if the
  /// point lies outside the extended box [lo - c, hi + c].
  std::size_t cell_index(std::span<const double> point) const;

  bool contains(std::span<const double> point) const;

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
  std::vector<double> step_;
  std::size_t bins_;
  std::size_t size_;
  std::vector<double> atoms_;
};

using GridPtr = std::shared_ptr<const SupportGrid>;

GridPtr build_grid(std::vector<double> lo, std::vector<double> hi, std::size_t bins_per_dim);

/// Componentwise min(max(point, lo), hi): the metric projection onto the box.
std::vector<double> clamp_to_box(std::span<const double> point, std::span<const double> lo,
                                 std::span<const double> hi);

}  // namespace distrl
