// Runs the eight acceptance criteria and prints one PASS/FAIL line for each.
// Every tolerance is pinned below. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "distrl/evaluation.hpp"
#include "distrl/scenarios.hpp"
#include "distrl/wasserstein.hpp"

using namespace distrl;
namespace fs = std::filesystem;

namespace {

constexpr int kSeeds = 10;

// Criterion 1.
constexpr double kSweep10Max = 0.6;
constexpr int kSweep10MinSeeds = 9;
constexpr double kScenario1BudgetSeconds = 600.0;
// Criterion 2.
constexpr double kSweep20MedianMax = 0.35;
// Criterion 3.
constexpr double kScenario2MedianMax = 0.8;
constexpr double kScenario2BudgetSeconds = 1200.0;
// Criterion 4.
constexpr double kPercentileMin = 85.0;
constexpr int kPercentileMinSeeds = 8;
constexpr double kReducedBudgetSeconds = 600.0;
constexpr double kFullBudgetSeconds = 3600.0;
// Criterion 5.
constexpr double kContractionGammas[] = {0.5, 0.7, 0.9};
constexpr std::size_t kContractionSamples = 10000;
// Criterion 6.
constexpr int kMetricInstances = 200;
constexpr double kMetricTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double median(std::vector<double> v) { return quantile_linear(std::move(v), 0.5); }

RunConfig seeded(std::uint64_t seed, unsigned workers) {
  RunConfig c;
  c.seed = seed;
  c.workers = workers;
  return c;
}

Outcome scenario1_criteria(unsigned workers, Outcome& terminal) {
  std::vector<int> below(4, 0);
  std::vector<std::vector<double>> sweep20(4);
  double slowest = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    const auto t0 = Clock::now();
    const Scenario1Result r = run_scenario1(seeded(s, workers));
    slowest = std::max(slowest, seconds_since(t0));
    for (std::size_t i = 0; i < 4; ++i) {
      if (r.paths[i].at(9) < kSweep10Max) ++below[i];
      sweep20[i].push_back(r.paths[i].at(19));
    }
  }
  Outcome conv{slowest <= kScenario1BudgetSeconds, ""};
  terminal = {true, ""};
  for (std::size_t i = 0; i < 4; ++i) {
    conv.pass = conv.pass && below[i] >= kSweep10MinSeeds;
    conv.detail += "p" + std::to_string(i + 1) + " " + std::to_string(below[i]) + "/10 ";
    const double m = median(sweep20[i]);
    terminal.pass = terminal.pass && m <= kSweep20MedianMax;
    terminal.detail += "p" + std::to_string(i + 1) + " " + fmt(m) + " ";
  }
  conv.detail += "seeds below " + fmt(kSweep10Max, 2) + " at sweep 10; slowest seed " + fmt(slowest, 1) + " s";
  terminal.detail += "seed-median sweep-20 distance (max " + fmt(kSweep20MedianMax, 2) + ")";
  return conv;
}

Outcome scenario2_criterion(unsigned workers) {
  std::vector<std::vector<double>> small(4), large(4);
  double slowest = 0.0;
  for (int s = 0; s < kSeeds; ++s) {
    RunConfig c = seeded(s, workers);
    c.scenario2.n_trajectories = {100, 1000};
    const auto t0 = Clock::now();
    const Scenario2Result r = run_scenario2(c);
    slowest = std::max(slowest, seconds_since(t0));
    for (std::size_t i = 0; i < 4; ++i) {
      small[i].push_back(r.final_distance[0][i]);
      large[i].push_back(r.final_distance[1][i]);
    }
  }
  Outcome o{slowest <= kScenario2BudgetSeconds, ""};
  for (std::size_t i = 0; i < 4; ++i) {
    const double m100 = median(small[i]), m1000 = median(large[i]);
    o.pass = o.pass && m1000 <= kScenario2MedianMax && m1000 <= m100;
    o.detail += "p" + std::to_string(i + 1) + " " + fmt(m100) + "->" + fmt(m1000) + " ";
  }
  o.detail += "seed-median at 100 -> 1000 trajectories (max " + fmt(kScenario2MedianMax, 2) + "); slowest seed " +
              fmt(slowest, 1) + " s";
  return o;
}

Outcome scenario3_criterion(unsigned workers, bool full) {
  int hits = 0;
  double slowest = 0.0;
  std::string pcts;
  for (int s = 0; s < kSeeds; ++s) {
    RunConfig c = seeded(s, workers);
    if (!full) {
      c.apply_reduced_search();
      c.search.checkpoints = {c.search.checkpoints.back()};
    }
    const auto t0 = Clock::now();
    const Scenario3Result r = run_scenario3(c);
    slowest = std::max(slowest, seconds_since(t0));
    const double pct = r.steps.back().percentile;
    if (pct >= kPercentileMin) ++hits;
    pcts += fmt(pct, 1) + " ";
  }
  const double budget = full ? kFullBudgetSeconds : kReducedBudgetSeconds;
  return {hits >= kPercentileMinSeeds && slowest <= budget,
          std::string(full ? "full" : "reduced") + " mode, " + std::to_string(hits) + "/10 seeds at percentile >= " +
              fmt(kPercentileMin, 0) + " [" + pcts + "]; slowest seed " + fmt(slowest, 1) + " s"};
}

Outcome contraction_criterion(unsigned workers) {
  Outcome o{true, ""};
  for (double g : kContractionGammas) {
    int held = 0;
    double worst = 0.0;
    for (int s = 0; s < kSeeds; ++s) {
      const ContractionReport r = contraction_trial(g, s, kContractionSamples, workers);
      if (r.holds()) ++held;
      worst = std::max(worst, (r.after - 2.0 * r.slack) / r.before);
    }
    o.pass = o.pass && held == kSeeds;
    o.detail += "gamma " + fmt(g, 1) + ": " + std::to_string(held) + "/10 (worst (after-2c)/before " + fmt(worst) +
                ") ";
  }
  return o;
}

SampleSet random_points(std::size_t n, std::size_t d, Rng& rng) {
  SampleSet s(d);
  std::vector<double> p(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& x : p) x = rng.normal(0.0, rng.uniform(0.5, 4.0)) + rng.uniform(-3.0, 3.0);
    s.push_back(p);
  }
  return s;
}

Weighted1D as_line(const SampleSet& s) {
  std::vector<double> atoms(s.coords().begin(), s.coords().end());
  return Weighted1D(atoms, std::vector<double>(atoms.size(), 1.0 / static_cast<double>(atoms.size())));
}

Outcome metric_criterion() {
  Rng rng = Rng::stream(2024, StreamTag::kSamples, {6});
  const DirectionSet dirs = angle_set(60);
  double exact_gap = 0.0, sliced_excess = -1e300, scale_gap = 0.0, shift_gap = 0.0, covering_excess = -1e300;
  for (int k = 0; k < kMetricInstances; ++k) {
    const std::size_t n = 1 + rng.index(32);
    const SampleSet a1 = random_points(n, 1, rng), b1 = random_points(n, 1, rng);
    exact_gap = std::max(exact_gap, std::abs(w1_1d(as_line(a1), as_line(b1)) - w1_matching_oracle(a1, b1)));

    const SampleSet a2 = random_points(n, 2, rng), b2 = random_points(n, 2, rng);
    const WeightedPoints pa = WeightedPoints::uniform(a2), pb = WeightedPoints::uniform(b2);
    const double w = max_sliced_w1(pa.view(), pb.view(), dirs).value;
    sliced_excess = std::max(sliced_excess, w - w1_matching_oracle(a2, b2));

    const double c = rng.uniform(-3.0, 3.0);
    WeightedPoints sa = pa, sb = pb;
    for (double& x : sa.coords) x *= c;
    for (double& x : sb.coords) x *= c;
    scale_gap = std::max(scale_gap, std::abs(max_sliced_w1(sa.view(), sb.view(), dirs).value - std::abs(c) * w));

    const double shift[2] = {rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
    WeightedPoints ta = pa, tb = pb;
    for (std::size_t i = 0; i < ta.coords.size(); ++i) {
      ta.coords[i] += shift[i % 2];
      tb.coords[i] += shift[i % 2];
    }
    shift_gap = std::max(shift_gap, std::abs(max_sliced_w1(ta.view(), tb.view(), dirs).value - w));

    const double eps = rng.uniform(0.01, 0.5);
    const CoveringEstimate ce = covering_error_bound(pa.view(), pb.view(), eps);
    covering_excess = std::max(covering_excess, (ce.fine - ce.approx) - ce.bound);
  }
  const bool pass = exact_gap <= kMetricTol && sliced_excess <= kMetricTol && scale_gap <= kMetricTol &&
                    shift_gap <= kMetricTol && covering_excess <= 0.0;
  return {pass, "1-D exact gap " + fmt(exact_gap * 1e9, 3) + "e-9, sliced minus matching max " +
                    fmt(sliced_excess, 4) + ", scale gap " + fmt(scale_gap * 1e9, 3) + "e-9, shift gap " +
                    fmt(shift_gap * 1e9, 3) + "e-9, covering excess max " + fmt(covering_excess, 4) + " over " +
                    std::to_string(kMetricInstances) + " instances each"};
}

Outcome theorem_criterion(unsigned workers) {
  int passed = 0;
  double worst_ratio = 0.0;
  std::string ks;
  for (int s = 0; s < kSeeds; ++s) {
    const TheoremResult r = run_theorem_check(seeded(s, workers));
    if (r.pass()) ++passed;
    for (const auto& p : r.projection) worst_ratio = std::max(worst_ratio, p.error.value / p.bound);
    if (s == 0) {
      for (std::size_t i = 0; i < r.truncation.deltas.size(); ++i) {
        const auto& k = r.truncation.smallest_k[i];
        ks += "delta " + fmt(r.truncation.deltas[i], 2) + " -> k=" + (k ? std::to_string(*k) : "none") + " ";
      }
    }
  }
  return {passed == kSeeds, std::to_string(passed) + "/10 seeds; worst error/bound " + fmt(worst_ratio) +
                                "; seed 0 truncation " + ks};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism_criterion(unsigned workers) {
  RunConfig c;
  c.seed = 17;
  c.dp.n_sample = 200;
  c.dp.n_repeat = 5;
  c.eval.n_rollouts = 1000;
  c.search.n_pairs = 5;
  c.search.checkpoints = {50, 100};
  c.scenario2.n_trajectories = {50, 100};
  c.theorem.n_samples = 2000;
  c.theorem.n_sequences = 200;
  const fs::path root = fs::temp_directory_path() / "distrl_acceptance_determinism";
  fs::remove_all(root);
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (int run = 0; run < 2; ++run) {
    c.workers = run == 0 ? 1 : std::max(2u, workers);
    const fs::path dir = root / std::to_string(run);
    for (const char* sub : {"s1", "s2", "s3", "thm"}) fs::create_directories(dir / sub);
    write_scenario1(run_scenario1(c), dir / "s1");
    write_scenario2(run_scenario2(c), dir / "s2");
    write_scenario3(run_scenario3(c), dir / "s3");
    write_theorem_check(run_theorem_check(c), dir / "thm");
  }
  for (const auto& e : fs::recursive_directory_iterator(root / "0")) {
    if (!e.is_regular_file() || e.path().extension() != ".csv") continue;
    const fs::path rel = fs::relative(e.path(), root / "0");
    ++compared;
    if (slurp(e.path()) != slurp(root / "1" / rel)) differing.push_back(rel.string());
  }
  fs::remove_all(root);
  std::string detail = std::to_string(compared) + " CSVs compared across two runs (1 and " +
                       std::to_string(std::max(2u, workers)) + " workers)";
  for (const auto& d : differing) detail += "; differs: " + d;
  return {differing.empty() && compared > 0, detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  bool full = false;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<int> only;
  app.add_flag("--full", full, "Run criterion 4 at full scale instead of reduced mode");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--only", only, "Run only these criteria");
  CLI11_PARSE(app, argc, argv);

  auto selected = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };
  int failures = 0;
  auto report = [&](int id, const char* name, const Outcome& o, double secs) {
    std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  };
  auto guarded = [&](const std::function<Outcome()>& f) {
    try {
      return f();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  if (selected(1) || selected(2)) {
    const auto t0 = Clock::now();
    Outcome terminal;
    const Outcome conv = guarded([&] { return scenario1_criteria(workers, terminal); });
    if (terminal.detail.empty()) terminal = conv;
    const double secs = seconds_since(t0);
    if (selected(1)) report(1, "scenario1-sweep10", conv, secs);
    if (selected(2)) report(2, "scenario1-sweep20", terminal, secs);
  }
  struct Item {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Item> items{
      {3, "scenario2-model", [&] { return scenario2_criterion(workers); }},
      {4, "scenario3-search", [&] { return scenario3_criterion(workers, full); }},
      {5, "contraction", [&] { return contraction_criterion(workers); }},
      {6, "metric-suite", [] { return metric_criterion(); }},
      {7, "theorem-certificates", [&] { return theorem_criterion(workers); }},
      {8, "determinism", [&] { return determinism_criterion(workers); }},
  };
  for (const auto& item : items) {
    if (!selected(item.id)) continue;
    const auto t0 = Clock::now();
    const Outcome o = guarded(item.run);
    report(item.id, item.name, o, seconds_since(t0));
  }
  return failures;
}
