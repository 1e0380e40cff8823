#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace distrl {

/// Tags that keep derived random streams for different purposes disjoint.
enum class StreamTag : std::uint64_t {
  kInit = 1,
  kSweep = 2,
  kRollout = 3,
  kTrajectory = 4,
  kPolicySet = 5,
  kBattery = 6,
  kSamples = 7,
  kOracle = 8,
};

/// Seeded random source.
///
/// Parallel work never shares an Rng. Each unit of work (a state within a
/// sweep, a rollout, a trajectory) gets its own stream derived from the
/// master seed and a path of integers, so results are identical for any
/// worker count or scheduling order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng stream(std::uint64_t seed, StreamTag tag,
                    std::initializer_list<std::uint64_t> path = {}) {
    std::vector<std::uint32_t> words;
    words.reserve(4 + 2 * path.size());
    auto push = [&words](std::uint64_t v) {
      words.push_back(static_cast<std::uint32_t>(v));
      words.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push(seed);
    push(static_cast<std::uint64_t>(tag));
    for (std::uint64_t p : path) push(p);
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
  }

  /// A 64-bit seed derived the same way as stream().
  static std::uint64_t derive(std::uint64_t seed, StreamTag tag, std::initializer_list<std::uint64_t> path = {}) {
    return stream(seed, tag, path).engine_();
  }

  /// Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
  double normal(double mean, double sd) { return mean + sd * std_normal_(engine_); }
  double chi_squared(double dof) { return std::chi_squared_distribution<double>(dof)(engine_); }
  /// Exponential parameterized by its mean.
  double exponential_mean(double mean) {
    return std::exponential_distribution<double>(1.0 / mean)(engine_);
  }
  bool bernoulli(double p) { return uniform() < p; }
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  explicit Rng(std::seed_seq& seq) : engine_(seq) {}

  std::mt19937_64 engine_;
  std::normal_distribution<double> std_normal_{0.0, 1.0};
};

}  // namespace distrl
