#include "distrl/support_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace distrl {

namespace {

void require_finite(std::span<const double> point, const char* what) {
  for (double v : point) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
  }
}

}  // namespace

SupportGrid::SupportGrid(std::vector<double> lo, std::vector<double> hi, std::size_t bins_per_dim)
    : lo_(std::move(lo)), hi_(std::move(hi)), bins_(bins_per_dim), size_(1) {
  if (lo_.empty() || lo_.size() != hi_.size()) {
    throw std::invalid_argument("SupportGrid: lo and hi must be non-empty and of equal length");
  }
  if (bins_ < 2) throw std::invalid_argument("SupportGrid: bins_per_dim must be at least 2");
  require_finite(lo_, "SupportGrid lo");
  require_finite(hi_, "SupportGrid hi");
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    if (!(lo_[k] < hi_[k])) throw std::invalid_argument("SupportGrid: lo must be below hi");
    step_.push_back((hi_[k] - lo_[k]) / static_cast<double>(bins_ - 1));
  }
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    if (size_ > (std::size_t{1} << 26) / bins_) throw std::invalid_argument("SupportGrid: too many atoms");
    size_ *= bins_;
  }

  const std::size_t d = dims();
  atoms_.resize(size_ * d);
  for (std::size_t index = 0; index < size_; ++index) {
    std::size_t rest = index;
    for (std::size_t k = d; k-- > 0;) {
      atoms_[index * d + k] = coordinate(k, rest % bins_);
      rest /= bins_;
    }
  }
}

double SupportGrid::coordinate(std::size_t dim, std::size_t i) const {
  return lo_[dim] + static_cast<double>(i) * (hi_[dim] - lo_[dim]) / static_cast<double>(bins_ - 1);
}

std::size_t SupportGrid::flat_index(std::span<const std::size_t> per_dim) const {
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims(); ++k) index = index * bins_ + per_dim[k];
  return index;
}

std::size_t SupportGrid::snap(std::span<const double> point) const {
  if (point.size() != dims()) throw std::invalid_argument("snap: dimension mismatch");
  const double top = static_cast<double>(bins_ - 1);
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims(); ++k) {
    const double v = point[k];
    if (!std::isfinite(v)) throw std::invalid_argument("snap: non-finite coordinate");
    const double t = std::clamp((v - lo_[k]) / step_[k], 0.0, top);
    // ceil(t - 1/2) rounds to nearest with halves going down.
    const auto i = static_cast<std::size_t>(std::ceil(t - 0.5));
    index = index * bins_ + i;
  }
  return index;
}

std::size_t SupportGrid::cell_index(std::span<const double> point) const {
  if (point.size() != dims()) throw std::invalid_argument("cell_index: dimension mismatch");
  require_finite(point, "cell_index");
  std::size_t index = 0;
  for (std::size_t k = 0; k < dims(); ++k) {
    const double t = (point[k] - lo_[k]) / step_[k] + 0.5;
    if (t < 0.0 || t > static_cast<double>(bins_)) {
      throw std::out_of_range("cell_index: point outside the tiled box");
    }
    const auto i = std::min(static_cast<std::size_t>(std::floor(t)), bins_ - 1);
    index = index * bins_ + i;
  }
  return index;
}

bool SupportGrid::contains(std::span<const double> point) const {
  for (std::size_t k = 0; k < dims(); ++k) {
    if (point[k] < lo_[k] || point[k] > hi_[k]) return false;
  }
  return true;
}

GridPtr build_grid(std::vector<double> lo, std::vector<double> hi, std::size_t bins_per_dim) {
  return std::make_shared<const SupportGrid>(std::move(lo), std::move(hi), bins_per_dim);
}

std::vector<double> clamp_to_box(std::span<const double> point, std::span<const double> lo,
                                 std::span<const double> hi) {
  if (point.size() != lo.size() || lo.size() != hi.size()) {
    throw std::invalid_argument("clamp_to_box: dimension mismatch");
  }
  require_finite(point, "clamp_to_box");
  std::vector<double> out(point.size());
  for (std::size_t k = 0; k < point.size(); ++k) {
    if (lo[k] > hi[k]) throw std::invalid_argument("clamp_to_box: lo above hi");
    out[k] = std::min(std::max(point[k], lo[k]), hi[k]);
  }
  return out;
}

}  // namespace distrl
