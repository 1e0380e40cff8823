#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "distrl/return_dist.hpp"
#include "distrl/rng.hpp"

namespace distrl {

/// Draws of a sequence-valued random element, each truncated to K_max
/// coefficients. Stored as a SampleSet with dims() == K_max.
using SequenceSample = SampleSet;

enum class NormKind { kWeightedL2, kSup };

/// Norm on coefficient space: sqrt(sum w_j x_j^2) or max_j |x_j|.
class SequenceNorm {
 public:
  static SequenceNorm euclidean(std::size_t dims);
  static SequenceNorm weighted_l2(std::vector<double> weights);
  static SequenceNorm sup(std::size_t dims);

  NormKind kind() const { return kind_; }
  std::size_t dims() const { return dims_; }
  std::span<const double> weights() const { return weights_; }

  double operator()(std::span<const double> x) const;
  /// ||x - p||.
  double distance(std::span<const double> x, std::span<const double> p) const;
  /// Dual norm: sqrt(sum v_j^2 / w_j) or sum |v_j|.
  double dual(std::span<const double> v) const;
  /// ||x - p|| - ||y - p||, computed without cancellation for weighted l2.
  double distance_difference(std::span<const double> x, std::span<const double> y,
                             std::span<const double> p) const;

 private:
  SequenceNorm(NormKind kind, std::size_t dims, std::vector<double> weights)
      : kind_(kind), dims_(dims), weights_(std::move(weights)) {}

  NormKind kind_;
  std::size_t dims_;
  std::vector<double> weights_;  // all ones for sup
};

struct TailRadius {
  double radius = 0.0;
  /// The constraint was met only at the largest sample norm.
  bool saturated = false;
  /// mean(||Z|| 1{||Z|| > radius}).
  double tail_mean = 0.0;
};

/// Smallest r in {0} U {sample norms} with mean(||Z|| 1{||Z|| > r}) <= eps.
TailRadius tail_radius(const SampleSet& samples, const SequenceNorm& norm, double eps);

/// Coordinates clamped to [-r, r].
SampleSet clamp_to_cube(const SampleSet& samples, double r);

/// Coordinates with index >= k set to zero. Throws if k > K_max.
SequenceSample truncate_coords(const SequenceSample& samples, std::size_t k);

enum class FunctionalKind { kNorm, kLinear, kDistance };

/// A 1-Lipschitz map: ||x||, v.x with dual(v) = 1, or ||x - v||.
struct Functional {
  FunctionalKind kind = FunctionalKind::kNorm;
  std::vector<double> v;
};

class Battery {
 public:
  Battery(SequenceNorm norm, std::vector<Functional> functionals);

  std::size_t size() const { return functionals_.size(); }
  const SequenceNorm& norm() const { return norm_; }
  const Functional& functional(std::size_t i) const { return functionals_[i]; }

  double eval(std::size_t i, std::span<const double> x) const;
  /// f_i(x) - f_i(y).
  double difference(std::size_t i, std::span<const double> x, std::span<const double> y) const;

 private:
  SequenceNorm norm_;
  std::vector<Functional> functionals_;
};

struct BatteryOptions {
  std::size_t size = 128;
  /// Linear functionals with v >= 0 and distance centers with p <= 0.
  bool nonnegative = false;
  /// Coordinate scale of the distance centers.
  double point_scale = 1.0;
};

/// The norm, then linear functionals, then distance maps in equal shares.
Battery make_battery(const SequenceNorm& norm, const BatteryOptions& options, Rng& rng);

struct LipschitzError {
  double value = 0.0;           // max_f mean_i |f(a_i) - f(b_i)|
  double standard_error = 0.0;  // of the maximizing mean
  std::size_t argmax = 0;
};

/// a and b are paired draws of equal size and dimension.
LipschitzError lipschitz_error(const SampleSet& a, const SampleSet& b, const Battery& battery,
                               unsigned workers = 1);

/// mean_i ||a_i - b_i||.
double mean_norm_distance(const SampleSet& a, const SampleSet& b, const SequenceNorm& norm);

/// Entry k is the battery error between the samples and truncate_coords(k),
/// for k = 0..K_max. Each per-sample difference is built as a suffix sum of
/// one-coordinate increments, so for samples in the nonnegative cone with a
/// nonnegative battery the curve is exactly non-increasing in floating point.
std::vector<double> truncation_curve(const SequenceSample& samples, const Battery& battery, unsigned workers = 1);

/// Smallest k with curve[k] < delta, found by binary search on a
/// non-increasing curve.
std::optional<std::size_t> smallest_truncation(std::span<const double> curve, double delta);

/// a_ij = ratio^(j+1) U_ij with U uniform on [0, 1).
SequenceSample sample_geometric_sequences(std::size_t n, std::size_t k_max, double ratio, Rng& rng);

struct ProjectionCertificate {
  double eps = 0.0;
  TailRadius radius;
  LipschitzError error;
  double bound = 0.0;  // 2 eps + 3 SE
  bool pass = false;
};

/// Radius from `calibration`; error between `evaluation` and its clamp to
/// the cube of that radius.
ProjectionCertificate projection_certificate(const SampleSet& calibration, const SampleSet& evaluation,
                                             const Battery& battery, double eps, unsigned workers = 1);

struct TruncationCertificate {
  std::vector<double> curve;
  bool monotone = false;
  std::vector<double> deltas;
  std::vector<std::optional<std::size_t>> smallest_k;
  bool pass = false;
};

TruncationCertificate truncation_certificate(const SequenceSample& samples, const Battery& battery,
                                             std::span<const double> deltas, unsigned workers = 1);

}  // namespace distrl
