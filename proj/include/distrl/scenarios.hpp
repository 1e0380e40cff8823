#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "distrl/banach_approx.hpp"
#include "distrl/distributional_dp.hpp"
#include "distrl/evaluation.hpp"
#include "distrl/gridworld.hpp"
#include "distrl/model_estimation.hpp"
#include "distrl/policy_search.hpp"

namespace distrl {

/// Malformed or inconsistent configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GridConfig {
  std::vector<double> lo{-25.0, -25.0};
  std::vector<double> hi{25.0, 25.0};
  std::size_t bins = 41;
};

struct EvalConfig {
  std::size_t n_rollouts = 10000;
  int horizon = 100;
  std::size_t angles = 60;
  State query{1, 1};
};

struct SearchConfig {
  std::size_t n_pairs = 100;  // candidates = 2 * n_pairs
  BetaRanges betas;
  UtilitySpec utility = UtilitySpec::median_plus_tail();
  int trajectory_length = 100;
  std::vector<std::int64_t> checkpoints{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
};

struct Scenario2Config {
  int trajectory_length = 100;
  std::vector<std::int64_t> n_trajectories{100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
};

struct TheoremConfig {
  std::vector<double> epsilons{0.1, 0.5, 1.0};
  std::vector<double> deltas{0.1, 0.01};
  std::size_t n_samples = 10000;
  std::size_t k_max = 256;
  std::size_t n_sequences = 1000;
  double ratio = 0.5;
  std::size_t battery_size = 128;
};

/// Every tunable of a run. Defaults reproduce the full-scale experiments.
struct RunConfig {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  GridConfig grid;
  DpParams dp;
  ModelOptions model;
  EvalConfig eval;
  SearchConfig search;
  Scenario2Config scenario2;
  TheoremConfig theorem;

  /// Parses a JSON document whose sections (grid, dp, model, eval, search,
  /// scenario2, theorem) override the defaults. Throws ConfigError.
  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text() const;
  /// FNV-1a of the canonical JSON, as 16 hex digits.
  std::string hash() const;
  /// Throws ConfigError on inconsistent values.
  void validate() const;

  /// 25 policy pairs and 300 samples per state.
  void apply_reduced_search();
};

// Thresholds applied in --check mode.
inline constexpr double kScenario1Sweep10Max = 0.6;
inline constexpr double kScenario1Sweep20Max = 0.35;
inline constexpr double kScenario2FinalMax = 0.8;
inline constexpr double kScenario3PercentileMin = 85.0;

struct Scenario1Result {
  std::vector<LinearPolicy> policies;
  std::vector<std::vector<double>> paths;  // [policy][sweep - 1]
  std::vector<double> max_clamped_fraction;
};

Scenario1Result run_scenario1(const RunConfig& cfg);

struct Scenario2Result {
  std::vector<LinearPolicy> policies;
  std::vector<std::int64_t> n_trajectories;
  std::vector<std::vector<double>> final_distance;  // [checkpoint][policy]
  std::vector<std::vector<double>> last_paths;      // [policy][sweep - 1], largest n_trajectory
};

Scenario2Result run_scenario2(const RunConfig& cfg);

struct SearchStep {
  std::int64_t update_step = 0;  // trajectories ingested
  std::vector<RankedPolicy> ranking;
  std::size_t selected = 0;
  double true_utility = 0.0;
  double percentile = 0.0;
};

struct Scenario3Result {
  std::vector<LinearPolicy> policies;
  std::vector<double> true_utilities;
  PercentileSummary summary;
  std::vector<SearchStep> steps;
};

Scenario3Result run_scenario3(const RunConfig& cfg);

struct TheoremResult {
  std::vector<ProjectionCertificate> projection;
  TruncationCertificate truncation;
  bool pass() const;
};

TheoremResult run_theorem_check(const RunConfig& cfg);

/// Artifact writers. Each returns the file names it created, relative to dir.
std::vector<std::string> write_scenario1(const Scenario1Result& r, const std::filesystem::path& dir);
std::vector<std::string> write_scenario2(const Scenario2Result& r, const std::filesystem::path& dir);
std::vector<std::string> write_scenario3(const Scenario3Result& r, const std::filesystem::path& dir);
std::vector<std::string> write_theorem_check(const TheoremResult& r, const std::filesystem::path& dir);

/// manifest.json with the seed, config hash, config, versions, and outputs.
void write_manifest(const std::filesystem::path& dir, const std::string& subcommand, const RunConfig& cfg,
                    const std::vector<std::string>& outputs);

/// Human-readable check outcomes; empty when everything passes.
std::vector<std::string> check_scenario1(const Scenario1Result& r);
std::vector<std::string> check_scenario2(const Scenario2Result& r);
std::vector<std::string> check_scenario3(const Scenario3Result& r);

GridPtr build_grid(const GridConfig& g);
DirectionSet build_directions(const EvalConfig& e);

/// One sweep of the first-reward-only environment under policy 1 on the grid
/// [-30, 30] with 241 atoms, applied to two tables initialized from random
/// sub-boxes of [-25, 25] drawn from `seed`.
ContractionReport contraction_trial(double gamma, std::uint64_t seed, std::size_t n_sample = 10000,
                                    unsigned workers = 1);

}  // namespace distrl
