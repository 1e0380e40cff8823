#include "distrl/return_dist.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace distrl {

namespace {

constexpr double kNormalizationTolerance = 1e-9;
// Cumulative sums of many small weights drift; treat q as reached within this.
constexpr double kCdfSlack = 1e-12;

void check_dim(const MeasureView& m, std::size_t dim) {
  if (dim >= m.dims) throw std::out_of_range("summary: dimension out of range");
}

}  // namespace

SampleSet::SampleSet(std::size_t dims, std::vector<double> coords)
    : dims_(dims), coords_(std::move(coords)) {
  if (dims_ == 0 || coords_.size() % dims_ != 0) {
    throw std::invalid_argument("SampleSet: coordinate count is not a multiple of dims");
  }
}

void SampleSet::push_back(std::span<const double> p) {
  if (p.size() != dims_) throw std::invalid_argument("SampleSet: dimension mismatch");
  coords_.insert(coords_.end(), p.begin(), p.end());
}

WeightedPoints WeightedPoints::uniform(const SampleSet& samples) {
  if (samples.empty()) throw std::invalid_argument("WeightedPoints: empty sample set");
  const auto n = samples.size();
  return {samples.dims(), std::vector<double>(samples.coords().begin(), samples.coords().end()),
          std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

CategoricalReturnDist::CategoricalReturnDist(GridPtr grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
  if (!grid_) throw std::invalid_argument("CategoricalReturnDist: null grid");
  if (weights_.size() != grid_->size()) {
    throw std::invalid_argument("CategoricalReturnDist: weight count differs from atom count");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("CategoricalReturnDist: negative or non-finite weight");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw std::invalid_argument("CategoricalReturnDist: weights do not sum to 1");
  }
}

CategoricalReturnDist CategoricalReturnDist::point_mass(GridPtr grid, std::size_t atom) {
  std::vector<double> w(grid->size(), 0.0);
  w.at(atom) = 1.0;
  return {std::move(grid), std::move(w)};
}

std::size_t CategoricalReturnDist::support_size() const {
  return static_cast<std::size_t>(std::count_if(weights_.begin(), weights_.end(), [](double w) { return w > 0.0; }));
}

CategoricalReturnDist from_counts(GridPtr grid, std::span<const std::size_t> counts) {
  const std::size_t total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) throw std::invalid_argument("from_counts: no observations");
  std::vector<double> w(counts.size());
  const double inv = 1.0 / static_cast<double>(total);
  for (std::size_t i = 0; i < counts.size(); ++i) w[i] = static_cast<double>(counts[i]) * inv;
  return {std::move(grid), std::move(w)};
}

CategoricalReturnDist from_samples(GridPtr grid, const SampleSet& samples) {
  if (samples.empty()) throw std::invalid_argument("from_samples: empty sample list");
  if (samples.dims() != grid->dims()) throw std::invalid_argument("from_samples: dimension mismatch");
  std::vector<std::size_t> counts(grid->size(), 0);
  for (std::size_t i = 0; i < samples.size(); ++i) ++counts[grid->snap(samples.point(i))];
  return from_counts(std::move(grid), counts);
}

AtomSampler::AtomSampler(const CategoricalReturnDist& dist) {
  const auto w = dist.weights();
  double running = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0.0) continue;
    running += w[i];
    cumulative_.push_back(running);
    atoms_.push_back(i);
  }
}

std::size_t AtomSampler::draw(Rng& rng) const {
  const double u = rng.uniform() * cumulative_.back();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return atoms_[static_cast<std::size_t>(it - cumulative_.begin())];
}

SampleSet sample(const CategoricalReturnDist& dist, Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("sample: n must be at least 1");
  AtomSampler sampler(dist);
  SampleSet out(dist.grid().dims());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(dist.grid().atom(sampler.draw(rng)));
  return out;
}

std::vector<double> mean(const MeasureView& m) {
  std::vector<double> mu(m.dims, 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    const double w = m.weights[i];
    if (w == 0.0) continue;
    const auto p = m.point(i);
    for (std::size_t k = 0; k < m.dims; ++k) mu[k] += w * p[k];
  }
  return mu;
}

double marginal_quantile(const MeasureView& m, std::size_t dim, double q) {
  check_dim(m, dim);
  if (!(q >= 0.0 && q <= 1.0)) throw std::out_of_range("marginal_quantile: q outside [0, 1]");
  std::vector<std::pair<double, double>> marginal;
  marginal.reserve(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights[i] > 0.0) marginal.emplace_back(m.point(i)[dim], m.weights[i]);
  }
  if (marginal.empty()) throw std::invalid_argument("marginal_quantile: empty measure");
  std::sort(marginal.begin(), marginal.end());
  double cdf = 0.0;
  for (std::size_t i = 0; i < marginal.size(); ++i) {
    cdf += marginal[i].second;
    const bool last_of_value = i + 1 == marginal.size() || marginal[i + 1].first != marginal[i].first;
    if (last_of_value && cdf >= q - kCdfSlack) return marginal[i].first;
  }
  return marginal.back().first;
}

double marginal_median(const MeasureView& m, std::size_t dim) { return marginal_quantile(m, dim, 0.5); }

double tail_prob(const MeasureView& m, std::size_t dim, double c) {
  check_dim(m, dim);
  double p = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.point(i)[dim] > c) p += m.weights[i];
  }
  return p;
}

double lower_tail_prob(const MeasureView& m, std::size_t dim, double c) {
  check_dim(m, dim);
  double p = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.point(i)[dim] < c) p += m.weights[i];
  }
  return p;
}

double expected_norm(const MeasureView& m) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m.weights[i] == 0.0) continue;
    double sq = 0.0;
    for (double v : m.point(i)) sq += v * v;
    total += m.weights[i] * std::sqrt(sq);
  }
  return total;
}

ValueTable::ValueTable(GridPtr grid, std::vector<CategoricalReturnDist> dists)
    : grid_(std::move(grid)), dists_(std::move(dists)) {
  for (const auto& d : dists_) {
    if (d.grid_ptr() != grid_) throw std::invalid_argument("ValueTable: distributions use different grids");
  }
}

const CategoricalReturnDist& ValueTable::at(std::size_t state) const {
  if (state >= dists_.size()) throw std::out_of_range("ValueTable: state missing from table");
  return dists_[state];
}

}  // namespace distrl
