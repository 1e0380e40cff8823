#include "distrl/banach_approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "distrl/parallel.hpp"

namespace distrl {

namespace {

void require_dims(const SequenceNorm& norm, std::size_t dims, const char* where) {
  if (dims != norm.dims()) throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

double coord_or_zero(std::span<const double> p, std::size_t j) { return p.empty() ? 0.0 : p[j]; }

}  // namespace

SequenceNorm SequenceNorm::euclidean(std::size_t dims) {
  if (dims == 0) throw std::invalid_argument("SequenceNorm: zero dimension");
  return SequenceNorm(NormKind::kWeightedL2, dims, std::vector<double>(dims, 1.0));
}

SequenceNorm SequenceNorm::weighted_l2(std::vector<double> weights) {
  if (weights.empty()) throw std::invalid_argument("SequenceNorm: zero dimension");
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) throw std::invalid_argument("SequenceNorm: weights must be positive");
  }
  const std::size_t d = weights.size();
  return SequenceNorm(NormKind::kWeightedL2, d, std::move(weights));
}

SequenceNorm SequenceNorm::sup(std::size_t dims) {
  if (dims == 0) throw std::invalid_argument("SequenceNorm: zero dimension");
  return SequenceNorm(NormKind::kSup, dims, std::vector<double>(dims, 1.0));
}

double SequenceNorm::operator()(std::span<const double> x) const { return distance(x, {}); }

double SequenceNorm::distance(std::span<const double> x, std::span<const double> p) const {
  double acc = 0.0;
  if (kind_ == NormKind::kSup) {
    for (std::size_t j = 0; j < dims_; ++j) acc = std::max(acc, std::abs(x[j] - coord_or_zero(p, j)));
    return acc;
  }
  for (std::size_t j = 0; j < dims_; ++j) {
    const double u = x[j] - coord_or_zero(p, j);
    acc += weights_[j] * u * u;
  }
  return std::sqrt(acc);
}

double SequenceNorm::dual(std::span<const double> v) const {
  double acc = 0.0;
  if (kind_ == NormKind::kSup) {
    for (std::size_t j = 0; j < dims_; ++j) acc += std::abs(v[j]);
    return acc;
  }
  for (std::size_t j = 0; j < dims_; ++j) acc += v[j] * v[j] / weights_[j];
  return std::sqrt(acc);
}

double SequenceNorm::distance_difference(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> p) const {
  const double dx = distance(x, p);
  const double dy = distance(y, p);
  if (kind_ == NormKind::kSup) return dx - dy;
  const double denom = dx + dy;
  if (denom == 0.0) return 0.0;
  // ||x-p||^2 - ||y-p||^2 = sum w (x - y)(x + y - 2p).
  double num = 0.0;
  for (std::size_t j = dims_; j-- > 0;) {
    const double pj = coord_or_zero(p, j);
    num += weights_[j] * (x[j] - y[j]) * ((x[j] - pj) + (y[j] - pj));
  }
  return num / denom;
}

TailRadius tail_radius(const SampleSet& samples, const SequenceNorm& norm, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("tail_radius: eps must be positive");
  if (samples.empty()) throw std::invalid_argument("tail_radius: no samples");
  require_dims(norm, samples.dims(), "tail_radius");
  const std::size_t n = samples.size();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) norms[i] = norm(samples.point(i));
  std::sort(norms.begin(), norms.end());
  // suffix[i] = sum of norms[i..n).
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + norms[i];
  const double nd = static_cast<double>(n);

  TailRadius out;
  if (suffix[0] / nd <= eps) {
    out.radius = 0.0;
    out.tail_mean = suffix[0] / nd;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double r = norms[i];
    const std::size_t first_above = static_cast<std::size_t>(std::upper_bound(norms.begin(), norms.end(), r) - norms.begin());
    const double tail = suffix[first_above] / nd;
    if (tail <= eps) {
      out.radius = r;
      out.tail_mean = tail;
      out.saturated = first_above == n;
      return out;
    }
  }
  out.radius = norms.back();
  out.saturated = true;
  return out;
}

SampleSet clamp_to_cube(const SampleSet& samples, double r) {
  if (!(r >= 0.0)) throw std::invalid_argument("clamp_to_cube: negative radius");
  std::vector<double> c(samples.coords().begin(), samples.coords().end());
  for (double& v : c) v = std::clamp(v, -r, r);
  return SampleSet(samples.dims(), std::move(c));
}

SequenceSample truncate_coords(const SequenceSample& samples, std::size_t k) {
  const std::size_t d = samples.dims();
  if (k > d) throw std::invalid_argument("truncate_coords: k exceeds K_max");
  SequenceSample out = samples;
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto p = out.point(i);
    std::fill(p.begin() + static_cast<std::ptrdiff_t>(k), p.end(), 0.0);
  }
  return out;
}

Battery::Battery(SequenceNorm norm, std::vector<Functional> functionals)
    : norm_(std::move(norm)), functionals_(std::move(functionals)) {
  if (functionals_.empty()) throw std::invalid_argument("Battery: no functionals");
  for (const auto& f : functionals_) {
    if (f.kind == FunctionalKind::kNorm) continue;
    if (f.v.size() != norm_.dims()) throw std::invalid_argument("Battery: functional dimension mismatch");
    if (f.kind == FunctionalKind::kLinear && std::abs(norm_.dual(f.v) - 1.0) > 1e-9) {
      throw std::invalid_argument("Battery: linear functional must have unit dual norm");
    }
  }
}

double Battery::eval(std::size_t i, std::span<const double> x) const {
  const Functional& f = functionals_[i];
  switch (f.kind) {
    case FunctionalKind::kNorm: return norm_(x);
    case FunctionalKind::kDistance: return norm_.distance(x, f.v);
    case FunctionalKind::kLinear: break;
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) acc += f.v[j] * x[j];
  return acc;
}

double Battery::difference(std::size_t i, std::span<const double> x, std::span<const double> y) const {
  const Functional& f = functionals_[i];
  switch (f.kind) {
    case FunctionalKind::kNorm: return norm_.distance_difference(x, y, {});
    case FunctionalKind::kDistance: return norm_.distance_difference(x, y, f.v);
    case FunctionalKind::kLinear: break;
  }
  double acc = 0.0;
  for (std::size_t j = x.size(); j-- > 0;) acc += f.v[j] * (x[j] - y[j]);
  return acc;
}

Battery make_battery(const SequenceNorm& norm, const BatteryOptions& options, Rng& rng) {
  if (options.size == 0) throw std::invalid_argument("make_battery: empty battery");
  const std::size_t d = norm.dims();
  std::vector<Functional> fs;
  fs.reserve(options.size);
  fs.push_back({FunctionalKind::kNorm, {}});
  const std::size_t n_linear = (options.size - 1) / 2;
  for (std::size_t i = 0; i < n_linear; ++i) {
    std::vector<double> v(d);
    double dual = 0.0;
    while (!(dual > 0.0)) {
      for (double& x : v) x = options.nonnegative ? std::abs(rng.normal(0.0, 1.0)) : rng.normal(0.0, 1.0);
      dual = norm.dual(v);
    }
    for (double& x : v) x /= dual;
    fs.push_back({FunctionalKind::kLinear, std::move(v)});
  }
  while (fs.size() < options.size) {
    std::vector<double> p(d);
    for (double& x : p) {
      const double z = rng.normal(0.0, options.point_scale);
      x = options.nonnegative ? -std::abs(z) : z;
    }
    fs.push_back({FunctionalKind::kDistance, std::move(p)});
  }
  return Battery(norm, std::move(fs));
}

LipschitzError lipschitz_error(const SampleSet& a, const SampleSet& b, const Battery& battery, unsigned workers) {
  if (a.size() != b.size() || a.dims() != b.dims()) throw std::invalid_argument("lipschitz_error: unpaired samples");
  if (a.empty()) throw std::invalid_argument("lipschitz_error: no samples");
  require_dims(battery.norm(), a.dims(), "lipschitz_error");
  const std::size_t n = a.size();
  std::vector<double> means(battery.size()), ses(battery.size());
  parallel_for(battery.size(), workers, [&](std::size_t f) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = std::abs(battery.difference(f, a.point(i), b.point(i)));
      sum += v;
      sum_sq += v * v;
    }
    const double nd = static_cast<double>(n);
    const double m = sum / nd;
    const double var = n > 1 ? std::max(0.0, (sum_sq - nd * m * m) / (nd - 1.0)) : 0.0;
    means[f] = m;
    ses[f] = std::sqrt(var / nd);
  });
  LipschitzError out;
  for (std::size_t f = 0; f < means.size(); ++f) {
    if (means[f] > out.value || f == 0) {
      out.value = means[f];
      out.standard_error = ses[f];
      out.argmax = f;
    }
  }
  return out;
}

double mean_norm_distance(const SampleSet& a, const SampleSet& b, const SequenceNorm& norm) {
  if (a.size() != b.size() || a.dims() != b.dims()) throw std::invalid_argument("mean_norm_distance: unpaired samples");
  if (a.empty()) throw std::invalid_argument("mean_norm_distance: no samples");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += norm.distance(a.point(i), b.point(i));
  return sum / static_cast<double>(a.size());
}

namespace {

// inc[j] = f(x truncated at j+1) - f(x truncated at j), j = 0..K-1.
void truncation_increments(const Battery& battery, std::size_t f, std::span<const double> x,
                           std::vector<double>& inc, std::vector<double>& scratch) {
  const std::size_t k = x.size();
  const Functional& fn = battery.functional(f);
  const SequenceNorm& norm = battery.norm();
  inc.assign(k, 0.0);
  if (fn.kind == FunctionalKind::kLinear) {
    for (std::size_t j = 0; j < k; ++j) inc[j] = fn.v[j] * x[j];
    return;
  }
  const std::span<const double> p = fn.kind == FunctionalKind::kDistance ? std::span<const double>(fn.v)
                                                                           : std::span<const double>();
  // scratch[j] = ||a_j - p|| where a_j keeps the first j coordinates of x.
  scratch.assign(k + 1, 0.0);
  if (norm.kind() == NormKind::kSup) {
    std::vector<double> suffix(k + 1, 0.0);
    for (std::size_t j = k; j-- > 0;) suffix[j] = std::max(suffix[j + 1], std::abs(coord_or_zero(p, j)));
    double prefix = 0.0;
    for (std::size_t j = 0; j <= k; ++j) {
      scratch[j] = std::max(prefix, suffix[j]);
      if (j < k) prefix = std::max(prefix, std::abs(x[j] - coord_or_zero(p, j)));
    }
    for (std::size_t j = 0; j < k; ++j) inc[j] = scratch[j + 1] - scratch[j];
    return;
  }
  const auto w = norm.weights();
  std::vector<double> suffix(k + 1, 0.0);
  for (std::size_t j = k; j-- > 0;) {
    const double pj = coord_or_zero(p, j);
    suffix[j] = suffix[j + 1] + w[j] * pj * pj;
  }
  double prefix = 0.0;
  for (std::size_t j = 0; j <= k; ++j) {
    scratch[j] = std::sqrt(prefix + suffix[j]);
    if (j < k) {
      const double u = x[j] - coord_or_zero(p, j);
      prefix += w[j] * u * u;
    }
  }
  for (std::size_t j = 0; j < k; ++j) {
    const double denom = scratch[j + 1] + scratch[j];
    if (denom == 0.0) continue;
    const double pj = coord_or_zero(p, j);
    // (x_j - p_j)^2 - p_j^2 = x_j (x_j - 2 p_j).
    inc[j] = w[j] * x[j] * (x[j] - 2.0 * pj) / denom;
  }
}

}  // namespace

std::vector<double> truncation_curve(const SequenceSample& samples, const Battery& battery, unsigned workers) {
  if (samples.empty()) throw std::invalid_argument("truncation_curve: no samples");
  require_dims(battery.norm(), samples.dims(), "truncation_curve");
  const std::size_t k_max = samples.dims();
  const std::size_t n = samples.size();
  std::vector<std::vector<double>> per_functional(battery.size());
  parallel_for(battery.size(), workers, [&](std::size_t f) {
    std::vector<double> acc(k_max + 1, 0.0), inc, scratch;
    for (std::size_t i = 0; i < n; ++i) {
      truncation_increments(battery, f, samples.point(i), inc, scratch);
      double tail = 0.0;
      for (std::size_t k = k_max; k-- > 0;) {
        tail += inc[k];
        acc[k] += std::abs(tail);
      }
    }
    for (double& v : acc) v /= static_cast<double>(n);
    per_functional[f] = std::move(acc);
  });
  std::vector<double> curve(k_max + 1, 0.0);
  for (const auto& acc : per_functional) {
    for (std::size_t k = 0; k <= k_max; ++k) curve[k] = std::max(curve[k], acc[k]);
  }
  return curve;
}

std::optional<std::size_t> smallest_truncation(std::span<const double> curve, double delta) {
  const auto it = std::partition_point(curve.begin(), curve.end(), [delta](double e) { return !(e < delta); });
  if (it == curve.end()) return std::nullopt;
  return static_cast<std::size_t>(it - curve.begin());
}

SequenceSample sample_geometric_sequences(std::size_t n, std::size_t k_max, double ratio, Rng& rng) {
  if (n == 0 || k_max == 0) throw std::invalid_argument("sample_geometric_sequences: empty request");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("sample_geometric_sequences: ratio outside (0, 1)");
  std::vector<double> c(n * k_max);
  for (std::size_t i = 0; i < n; ++i) {
    double env = 1.0;
    for (std::size_t j = 0; j < k_max; ++j) {
      env *= ratio;
      c[i * k_max + j] = env * rng.uniform();
    }
  }
  return SequenceSample(k_max, std::move(c));
}

ProjectionCertificate projection_certificate(const SampleSet& calibration, const SampleSet& evaluation,
                                             const Battery& battery, double eps, unsigned workers) {
  ProjectionCertificate out;
  out.eps = eps;
  out.radius = tail_radius(calibration, battery.norm(), eps);
  const SampleSet clamped = clamp_to_cube(evaluation, out.radius.radius);
  out.error = lipschitz_error(evaluation, clamped, battery, workers);
  out.bound = 2.0 * eps + 3.0 * out.error.standard_error;
  out.pass = out.error.value <= out.bound;
  return out;
}

TruncationCertificate truncation_certificate(const SequenceSample& samples, const Battery& battery,
                                             std::span<const double> deltas, unsigned workers) {
  TruncationCertificate out;
  out.curve = truncation_curve(samples, battery, workers);
  out.monotone = std::is_sorted(out.curve.rbegin(), out.curve.rend());
  out.pass = out.monotone;
  for (double delta : deltas) {
    out.deltas.push_back(delta);
    out.smallest_k.push_back(smallest_truncation(out.curve, delta));
    if (!out.smallest_k.back()) out.pass = false;
  }
  return out;
}

}  // namespace distrl
