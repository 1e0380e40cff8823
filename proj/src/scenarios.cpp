#include "distrl/scenarios.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "distrl/csv_io.hpp"
#include "distrl/svg_plot.hpp"

namespace distrl {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

void reject_unknown(const json& obj, const char* section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(std::string("config: section '") + section + "' must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(std::string("config: unknown key '") + key + "' in " + section);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it != obj.end()) out = it->get<T>();
}

void read_range(const json& obj, const char* key, double& lo, double& hi) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  const auto v = it->get<std::vector<double>>();
  if (v.size() != 2) throw ConfigError(std::string("config: '") + key + "' must be [lo, hi]");
  lo = v[0];
  hi = v[1];
}

const std::vector<std::pair<StatKind, std::string>>& stat_names() {
  static const std::vector<std::pair<StatKind, std::string>> names{
      {StatKind::kMean, "mean"},          {StatKind::kMedian, "median"},
      {StatKind::kQuantile, "quantile"},  {StatKind::kTailAbove, "tail_above"},
      {StatKind::kTailBelow, "tail_below"}, {StatKind::kNorm, "norm"}};
  return names;
}

std::string stat_name(StatKind k) {
  for (const auto& [kind, name] : stat_names()) {
    if (kind == k) return name;
  }
  return "mean";
}

StatKind stat_kind(const std::string& name) {
  for (const auto& [kind, n] : stat_names()) {
    if (n == name) return kind;
  }
  throw ConfigError("config: unknown utility statistic '" + name + "'");
}

json utility_to_json(const UtilitySpec& u) {
  json terms = json::array();
  for (const auto& t : u.terms) {
    terms.push_back({{"stat", stat_name(t.kind)}, {"dim", t.dim}, {"q", t.q}, {"threshold", t.threshold},
                     {"weight", t.weight}});
  }
  return {{"offset", u.offset}, {"terms", terms}};
}

UtilitySpec utility_from_json(const json& j) {
  reject_unknown(j, "search.utility", {"offset", "terms"});
  UtilitySpec u;
  read(j, "offset", u.offset);
  if (j.contains("terms")) {
    for (const auto& t : j.at("terms")) {
      reject_unknown(t, "search.utility.terms", {"stat", "dim", "q", "threshold", "weight"});
      UtilityTerm term;
      term.kind = stat_kind(t.at("stat").get<std::string>());
      read(t, "dim", term.dim);
      read(t, "q", term.q);
      read(t, "threshold", term.threshold);
      read(t, "weight", term.weight);
      u.terms.push_back(term);
    }
  }
  return u;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string csv_text(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  write_csv(os, header, rows);
  return os.str();
}

std::string svg_text(const LineChart& chart) {
  std::ostringstream os;
  write_svg(os, chart);
  return os.str();
}

std::vector<double> iota_from_one(std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1);
  return x;
}

std::vector<double> as_doubles(const std::vector<std::int64_t>& v) { return {v.begin(), v.end()}; }

std::string policy_label(std::size_t i) { return "policy " + std::to_string(i + 1); }

// Oracle returns of `policy` from the query state under the true dynamics.
SampleSet oracle_samples(const RunConfig& cfg, const GridWorld& env, const ActionMap& policy, std::uint64_t seed) {
  RolloutSpec spec;
  spec.n_rollouts = cfg.eval.n_rollouts;
  spec.horizon = cfg.eval.horizon;
  spec.gamma = cfg.dp.gamma;
  spec.seed = seed;
  spec.workers = cfg.workers;
  return empirical_return_dist(env, policy, cfg.eval.query, spec);
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    reject_unknown(j, "top level",
                   {"seed", "workers", "grid", "dp", "model", "eval", "search", "scenario2", "theorem"});
    read(j, "seed", c.seed);
    read(j, "workers", c.workers);
    if (j.contains("grid")) {
      const json& g = j.at("grid");
      reject_unknown(g, "grid", {"lo", "hi", "bins"});
      read(g, "lo", c.grid.lo);
      read(g, "hi", c.grid.hi);
      read(g, "bins", c.grid.bins);
    }
    if (j.contains("dp")) {
      const json& d = j.at("dp");
      reject_unknown(d, "dp", {"gamma", "n_sample", "n_repeat", "init_lo", "init_hi"});
      read(d, "gamma", c.dp.gamma);
      read(d, "n_sample", c.dp.n_sample);
      read(d, "n_repeat", c.dp.n_repeat);
      read(d, "init_lo", c.dp.init.lo);
      read(d, "init_hi", c.dp.init.hi);
    }
    if (j.contains("model")) {
      const json& m = j.at("model");
      reject_unknown(m, "model", {"pseudo_count", "reward_noise"});
      read(m, "pseudo_count", c.model.pseudo_count);
      read(m, "reward_noise", c.model.reward_noise);
    }
    if (j.contains("eval")) {
      const json& e = j.at("eval");
      reject_unknown(e, "eval", {"n_rollouts", "horizon", "angles", "query"});
      read(e, "n_rollouts", c.eval.n_rollouts);
      read(e, "horizon", c.eval.horizon);
      read(e, "angles", c.eval.angles);
      if (e.contains("query")) {
        const auto q = e.at("query").get<std::vector<int>>();
        if (q.size() != 2) throw ConfigError("config: eval.query must be [s1, s2]");
        c.eval.query = {q[0], q[1]};
      }
    }
    if (j.contains("search")) {
      const json& s = j.at("search");
      reject_unknown(s, "search", {"n_pairs", "beta0", "beta1", "utility", "trajectory_length", "checkpoints"});
      read(s, "n_pairs", c.search.n_pairs);
      read_range(s, "beta0", c.search.betas.beta0_lo, c.search.betas.beta0_hi);
      read_range(s, "beta1", c.search.betas.beta1_lo, c.search.betas.beta1_hi);
      if (s.contains("utility")) c.search.utility = utility_from_json(s.at("utility"));
      read(s, "trajectory_length", c.search.trajectory_length);
      read(s, "checkpoints", c.search.checkpoints);
    }
    if (j.contains("scenario2")) {
      const json& s = j.at("scenario2");
      reject_unknown(s, "scenario2", {"trajectory_length", "n_trajectories"});
      read(s, "trajectory_length", c.scenario2.trajectory_length);
      read(s, "n_trajectories", c.scenario2.n_trajectories);
    }
    if (j.contains("theorem")) {
      const json& t = j.at("theorem");
      reject_unknown(t, "theorem",
                     {"epsilons", "deltas", "n_samples", "k_max", "n_sequences", "ratio", "battery_size"});
      read(t, "epsilons", c.theorem.epsilons);
      read(t, "deltas", c.theorem.deltas);
      read(t, "n_samples", c.theorem.n_samples);
      read(t, "k_max", c.theorem.k_max);
      read(t, "n_sequences", c.theorem.n_sequences);
      read(t, "ratio", c.theorem.ratio);
      read(t, "battery_size", c.theorem.battery_size);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string RunConfig::to_json_text() const {
  // Seed and worker count are reported separately and excluded here.
  const json j = {
      {"grid", {{"lo", grid.lo}, {"hi", grid.hi}, {"bins", grid.bins}}},
      {"dp",
       {{"gamma", dp.gamma},
        {"n_sample", dp.n_sample},
        {"n_repeat", dp.n_repeat},
        {"init_lo", dp.init.lo},
        {"init_hi", dp.init.hi}}},
      {"model", {{"pseudo_count", model.pseudo_count}, {"reward_noise", model.reward_noise}}},
      {"eval",
       {{"n_rollouts", eval.n_rollouts},
        {"horizon", eval.horizon},
        {"angles", eval.angles},
        {"query", {eval.query.s1, eval.query.s2}}}},
      {"search",
       {{"n_pairs", search.n_pairs},
        {"beta0", {search.betas.beta0_lo, search.betas.beta0_hi}},
        {"beta1", {search.betas.beta1_lo, search.betas.beta1_hi}},
        {"utility", utility_to_json(search.utility)},
        {"trajectory_length", search.trajectory_length},
        {"checkpoints", search.checkpoints}}},
      {"scenario2",
       {{"trajectory_length", scenario2.trajectory_length}, {"n_trajectories", scenario2.n_trajectories}}},
      {"theorem",
       {{"epsilons", theorem.epsilons},
        {"deltas", theorem.deltas},
        {"n_samples", theorem.n_samples},
        {"k_max", theorem.k_max},
        {"n_sequences", theorem.n_sequences},
        {"ratio", theorem.ratio},
        {"battery_size", theorem.battery_size}}},
  };
  return j.dump();
}

std::string RunConfig::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : to_json_text()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void RunConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError("config: " + msg); };
  if (grid.lo.size() != 2 || grid.hi.size() != 2) fail("grid.lo and grid.hi must have two entries");
  if (grid.bins < 2) fail("grid.bins must be >= 2");
  for (std::size_t d = 0; d < 2; ++d) {
    if (!(grid.lo[d] < grid.hi[d])) fail("grid.lo must be below grid.hi");
  }
  if (!(dp.gamma >= 0.0 && dp.gamma < 1.0)) fail("dp.gamma must lie in [0, 1)");
  if (dp.n_sample == 0) fail("dp.n_sample must be >= 1");
  if (dp.n_repeat == 0) fail("dp.n_repeat must be >= 1");
  if (dp.init.lo.size() != 2 || dp.init.hi.size() != 2) fail("dp init box must be two-dimensional");
  for (std::size_t d = 0; d < 2; ++d) {
    if (dp.init.lo[d] > dp.init.hi[d]) fail("dp.init_lo must not exceed dp.init_hi");
    if (dp.init.lo[d] < grid.lo[d] || dp.init.hi[d] > grid.hi[d]) fail("dp init box must lie inside the grid");
  }
  if (!(model.pseudo_count >= 0.0)) fail("model.pseudo_count must be >= 0");
  if (eval.n_rollouts == 0) fail("eval.n_rollouts must be >= 1");
  if (eval.horizon < 1) fail("eval.horizon must be >= 1");
  if (eval.angles == 0) fail("eval.angles must be >= 1");
  if (!eval.query.valid()) fail("eval.query must be a valid state");
  if (search.n_pairs == 0) fail("search.n_pairs must be >= 1");
  if (!(search.betas.beta0_lo <= search.betas.beta0_hi && search.betas.beta1_lo <= search.betas.beta1_hi)) {
    fail("search beta ranges must be ordered");
  }
  try {
    search.utility.validate(2);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  auto positive_increasing = [&](const std::vector<std::int64_t>& v, const char* name) {
    if (v.empty()) fail(std::string(name) + " must be non-empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 1 || (i > 0 && v[i] <= v[i - 1])) fail(std::string(name) + " must be positive and increasing");
    }
  };
  positive_increasing(search.checkpoints, "search.checkpoints");
  positive_increasing(scenario2.n_trajectories, "scenario2.n_trajectories");
  if (search.trajectory_length < 1 || scenario2.trajectory_length < 1) fail("trajectory_length must be >= 1");
  if (theorem.epsilons.empty()) fail("theorem.epsilons must be non-empty");
  for (double e : theorem.epsilons) {
    if (!(e > 0.0)) fail("theorem.epsilons must be positive");
  }
  for (double d : theorem.deltas) {
    if (!(d > 0.0)) fail("theorem.deltas must be positive");
  }
  if (theorem.n_samples < 2 || theorem.n_sequences < 2) fail("theorem sample counts must be >= 2");
  if (theorem.k_max == 0) fail("theorem.k_max must be >= 1");
  if (!(theorem.ratio > 0.0 && theorem.ratio < 1.0)) fail("theorem.ratio must lie in (0, 1)");
  if (theorem.battery_size == 0) fail("theorem.battery_size must be >= 1");
}

void RunConfig::apply_reduced_search() {
  search.n_pairs = 25;
  dp.n_sample = 300;
}

GridPtr build_grid(const GridConfig& g) { return build_grid(g.lo, g.hi, g.bins); }

ContractionReport contraction_trial(double gamma, std::uint64_t seed, std::size_t n_sample, unsigned workers) {
  const GridPtr grid = build_grid({-30.0}, {30.0}, 241);
  const GridWorld env;
  const FirstRewardOnly first(env);
  Rng rng = Rng::stream(seed, StreamTag::kInit, {1});
  auto random_box = [&rng] {
    double a = rng.uniform(-25.0, 25.0), b = rng.uniform(-25.0, 25.0);
    if (a > b) std::swap(a, b);
    return InitSpec{{a}, {b}};
  };
  DpParams p;
  p.gamma = gamma;
  p.n_sample = n_sample;
  p.workers = workers;
  p.init = random_box();
  p.seed = Rng::derive(seed, StreamTag::kInit, {2});
  const ValueTable v1 = init_value_table(grid, p);
  p.init = random_box();
  p.seed = Rng::derive(seed, StreamTag::kInit, {3});
  const ValueTable v2 = init_value_table(grid, p);
  p.seed = Rng::derive(seed, StreamTag::kSweep, {5});
  return contraction_step(v1, v2, first, action_map(reference_policies()[0]), p);
}

DirectionSet build_directions(const EvalConfig& e) { return angle_set(e.angles); }

Scenario1Result run_scenario1(const RunConfig& cfg) {
  cfg.validate();
  const GridWorld env;
  const GridPtr grid = build_grid(cfg.grid);
  const DirectionSet dirs = build_directions(cfg.eval);
  Scenario1Result out;
  const auto refs = reference_policies();
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const ActionMap map = action_map(refs[i]);
    DpParams p = cfg.dp;
    p.seed = Rng::derive(cfg.seed, StreamTag::kSweep, {1, i});
    p.workers = cfg.workers;
    const PolicyEvaluation eval = evaluate_policy(env, map, p, grid, {}, true);
    const SampleSet oracle = oracle_samples(cfg, env, map, Rng::derive(cfg.seed, StreamTag::kOracle, {1, i}));
    const WeightedPoints wp = WeightedPoints::uniform(oracle);
    out.policies.push_back(refs[i]);
    out.paths.push_back(distance_path(eval.snapshots, wp.view(), cfg.eval.query, dirs));
    double clamped = 0.0;
    for (const auto& st : eval.stats) clamped = std::max(clamped, st.clamped_fraction);
    out.max_clamped_fraction.push_back(clamped);
  }
  return out;
}

Scenario2Result run_scenario2(const RunConfig& cfg) {
  cfg.validate();
  const GridWorld env;
  const GridPtr grid = build_grid(cfg.grid);
  const DirectionSet dirs = build_directions(cfg.eval);
  const auto refs = reference_policies();

  std::vector<SlicedReference> oracles;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const SampleSet s = oracle_samples(cfg, env, action_map(refs[i]), Rng::derive(cfg.seed, StreamTag::kOracle, {2, i}));
    const WeightedPoints wp = WeightedPoints::uniform(s);
    oracles.emplace_back(wp.view(), dirs);
  }

  Scenario2Result out;
  out.policies.assign(refs.begin(), refs.end());
  out.n_trajectories = cfg.scenario2.n_trajectories;
  const std::uint64_t traj_seed = Rng::derive(cfg.seed, StreamTag::kTrajectory, {2});
  ModelEstimator estimator;
  std::int64_t ingested = 0;
  for (std::size_t c = 0; c < out.n_trajectories.size(); ++c) {
    const std::int64_t target = out.n_trajectories[c];
    const auto rows = generate_trajectories(env, ingested, target - ingested, cfg.scenario2.trajectory_length, traj_seed);
    estimator.ingest(rows);
    ingested = target;
    const LearnedModel model = estimator.snapshot(cfg.model);
    const bool last = c + 1 == out.n_trajectories.size();
    std::vector<double> finals;
    for (std::size_t i = 0; i < refs.size(); ++i) {
      DpParams p = cfg.dp;
      p.seed = Rng::derive(cfg.seed, StreamTag::kSweep, {2, i});
      p.workers = cfg.workers;
      std::vector<double> path;
      const SweepObserver observer = [&](std::size_t, const ValueTable& t) {
        path.push_back(oracles[i].distance_to(t.at(cfg.eval.query.index()).view()).value);
      };
      evaluate_policy(model, refs[i], p, grid, observer);
      finals.push_back(path.back());
      if (last) out.last_paths.push_back(std::move(path));
    }
    out.final_distance.push_back(std::move(finals));
  }
  return out;
}

Scenario3Result run_scenario3(const RunConfig& cfg) {
  cfg.validate();
  const GridWorld env;
  const GridPtr grid = build_grid(cfg.grid);
  Scenario3Result out;
  Rng policy_rng = Rng::stream(cfg.seed, StreamTag::kPolicySet, {3});
  out.policies = sample_policy_set(cfg.search.n_pairs, cfg.search.betas, policy_rng);

  out.true_utilities.resize(out.policies.size());
  for (std::size_t i = 0; i < out.policies.size(); ++i) {
    const SampleSet s =
        oracle_samples(cfg, env, action_map(out.policies[i]), Rng::derive(cfg.seed, StreamTag::kOracle, {3, i}));
    out.true_utilities[i] = utility(WeightedPoints::uniform(s).view(), cfg.search.utility);
  }
  out.summary = summarize(out.true_utilities);

  DpParams p = cfg.dp;
  p.seed = Rng::derive(cfg.seed, StreamTag::kSweep, {3});
  const std::uint64_t traj_seed = Rng::derive(cfg.seed, StreamTag::kTrajectory, {3});
  ModelEstimator estimator;
  std::int64_t ingested = 0;
  for (std::int64_t target : cfg.search.checkpoints) {
    const auto rows = generate_trajectories(env, ingested, target - ingested, cfg.search.trajectory_length, traj_seed);
    estimator.ingest(rows);
    ingested = target;
    const LearnedModel model = estimator.snapshot(cfg.model);
    SearchStep step;
    step.update_step = target;
    step.ranking = search(model, out.policies, cfg.search.utility, cfg.eval.query, p, grid, cfg.workers);
    step.selected = step.ranking.front().index;
    step.true_utility = out.true_utilities[step.selected];
    step.percentile = utility_percentile(out.true_utilities, step.true_utility);
    out.steps.push_back(std::move(step));
  }
  return out;
}

bool TheoremResult::pass() const {
  for (const auto& c : projection) {
    if (!c.pass) return false;
  }
  return truncation.pass;
}

TheoremResult run_theorem_check(const RunConfig& cfg) {
  cfg.validate();
  const GridWorld env;
  const ActionMap map = action_map(reference_policies()[0]);
  RolloutSpec spec;
  spec.n_rollouts = cfg.theorem.n_samples;
  spec.horizon = cfg.eval.horizon;
  spec.gamma = cfg.dp.gamma;
  spec.workers = cfg.workers;
  spec.seed = Rng::derive(cfg.seed, StreamTag::kSamples, {4, 0});
  const SampleSet calibration = empirical_return_dist(env, map, cfg.eval.query, spec);
  spec.seed = Rng::derive(cfg.seed, StreamTag::kSamples, {4, 1});
  const SampleSet evaluation = empirical_return_dist(env, map, cfg.eval.query, spec);

  TheoremResult out;
  Rng battery_rng = Rng::stream(cfg.seed, StreamTag::kBattery, {4, 0});
  BatteryOptions opts;
  opts.size = cfg.theorem.battery_size;
  opts.point_scale = 10.0;
  const Battery returns_battery = make_battery(SequenceNorm::euclidean(2), opts, battery_rng);
  for (double eps : cfg.theorem.epsilons) {
    out.projection.push_back(projection_certificate(calibration, evaluation, returns_battery, eps, cfg.workers));
  }

  Rng seq_rng = Rng::stream(cfg.seed, StreamTag::kSamples, {4, 2});
  const SequenceSample seqs =
      sample_geometric_sequences(cfg.theorem.n_sequences, cfg.theorem.k_max, cfg.theorem.ratio, seq_rng);
  Rng seq_battery_rng = Rng::stream(cfg.seed, StreamTag::kBattery, {4, 1});
  BatteryOptions seq_opts;
  seq_opts.size = cfg.theorem.battery_size;
  seq_opts.nonnegative = true;
  const Battery seq_battery = make_battery(SequenceNorm::euclidean(cfg.theorem.k_max), seq_opts, seq_battery_rng);
  out.truncation = truncation_certificate(seqs, seq_battery, cfg.theorem.deltas, cfg.workers);
  return out;
}

std::vector<std::string> write_scenario1(const Scenario1Result& r, const std::filesystem::path& dir) {
  std::vector<std::string> files;
  for (std::size_t i = 0; i < r.paths.size(); ++i) {
    const std::string stem = "distance_path_policy" + std::to_string(i + 1);
    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < r.paths[i].size(); ++s) rows.push_back({static_cast<double>(s + 1), r.paths[i][s]});
    write_file(dir / (stem + ".csv"), csv_text({"sweep", "distance"}, rows));
    LineChart chart;
    chart.title = "Max-sliced W1 to the rollout oracle, " + policy_label(i);
    chart.x_label = "sweep";
    chart.y_label = "W_Theta";
    chart.series.push_back({policy_label(i), iota_from_one(r.paths[i].size()), r.paths[i]});
    chart.reference_lines.push_back({"0.5", 0.5});
    write_file(dir / (stem + ".svg"), svg_text(chart));
    files.push_back(stem + ".csv");
    files.push_back(stem + ".svg");
  }
  return files;
}

std::vector<std::string> write_scenario2(const Scenario2Result& r, const std::filesystem::path& dir) {
  std::vector<std::string> files;
  std::vector<std::string> header{"n_trajectory"};
  for (std::size_t i = 0; i < r.policies.size(); ++i) header.push_back("policy" + std::to_string(i + 1));
  std::vector<std::vector<double>> rows;
  for (std::size_t c = 0; c < r.n_trajectories.size(); ++c) {
    std::vector<double> row{static_cast<double>(r.n_trajectories[c])};
    row.insert(row.end(), r.final_distance[c].begin(), r.final_distance[c].end());
    rows.push_back(std::move(row));
  }
  write_file(dir / "distance_vs_ntrajectory.csv", csv_text(header, rows));
  files.push_back("distance_vs_ntrajectory.csv");

  LineChart chart;
  chart.title = "Final max-sliced W1 with a learned model";
  chart.x_label = "trajectories";
  chart.y_label = "W_Theta";
  for (std::size_t i = 0; i < r.policies.size(); ++i) {
    std::vector<double> y;
    for (const auto& f : r.final_distance) y.push_back(f[i]);
    chart.series.push_back({policy_label(i), as_doubles(r.n_trajectories), y});
  }
  write_file(dir / "distance_vs_ntrajectory.svg", svg_text(chart));
  files.push_back("distance_vs_ntrajectory.svg");

  for (std::size_t i = 0; i < r.last_paths.size(); ++i) {
    const std::string stem = "model_distance_path_policy" + std::to_string(i + 1);
    std::vector<std::vector<double>> prow;
    for (std::size_t s = 0; s < r.last_paths[i].size(); ++s) {
      prow.push_back({static_cast<double>(s + 1), r.last_paths[i][s]});
    }
    write_file(dir / (stem + ".csv"), csv_text({"sweep", "distance"}, prow));
    files.push_back(stem + ".csv");
  }
  return files;
}

std::vector<std::string> write_scenario3(const Scenario3Result& r, const std::filesystem::path& dir) {
  std::vector<std::string> files;
  const PercentileSummary& s = r.summary;
  std::vector<std::vector<double>> path_rows;
  std::vector<std::vector<double>> selection_rows;
  for (const auto& step : r.steps) {
    path_rows.push_back({static_cast<double>(step.update_step), step.true_utility, s.p5, s.p25, s.p50, s.p75, s.p95,
                         s.min, s.max});
    const LinearPolicy& p = r.policies[step.selected];
    selection_rows.push_back({static_cast<double>(step.update_step), static_cast<double>(step.selected + 1), p.beta0,
                              p.beta1, static_cast<double>(p.sgn), step.ranking.front().utility, step.true_utility,
                              step.percentile});
  }
  write_file(dir / "utility_path.csv",
             csv_text({"update_step", "utility", "p5", "p25", "p50", "p75", "p95", "min", "max"}, path_rows));
  write_file(dir / "selection.csv", csv_text({"update_step", "policy_id", "beta0", "beta1", "sgn",
                                              "estimated_utility", "true_utility", "percentile"},
                                             selection_rows));
  files.push_back("utility_path.csv");
  files.push_back("selection.csv");

  if (!r.steps.empty()) {
    std::vector<std::vector<double>> rank_rows;
    for (const auto& rp : r.steps.back().ranking) {
      rank_rows.push_back({static_cast<double>(rp.index + 1), rp.policy.beta0, rp.policy.beta1,
                           static_cast<double>(rp.policy.sgn), rp.utility});
    }
    write_file(dir / "ranking.csv", csv_text({"policy_id", "beta0", "beta1", "sgn", "estimated_utility"}, rank_rows));
    files.push_back("ranking.csv");
  }

  std::vector<std::vector<double>> truth_rows;
  for (std::size_t i = 0; i < r.policies.size(); ++i) {
    const LinearPolicy& p = r.policies[i];
    truth_rows.push_back(
        {static_cast<double>(i + 1), p.beta0, p.beta1, static_cast<double>(p.sgn), r.true_utilities[i]});
  }
  write_file(dir / "true_utilities.csv", csv_text({"policy_id", "beta0", "beta1", "sgn", "true_utility"}, truth_rows));
  files.push_back("true_utilities.csv");

  LineChart chart;
  chart.title = "True utility of the selected policy";
  chart.x_label = "trajectories";
  chart.y_label = "utility";
  std::vector<double> x, y;
  for (const auto& step : r.steps) {
    x.push_back(static_cast<double>(step.update_step));
    y.push_back(step.true_utility);
  }
  chart.series.push_back({"selected policy", x, y});
  chart.reference_lines = {{"p5", s.p5}, {"p25", s.p25}, {"p50", s.p50}, {"p75", s.p75}, {"p95", s.p95}};
  write_file(dir / "utility_path.svg", svg_text(chart));
  files.push_back("utility_path.svg");
  return files;
}

std::vector<std::string> write_theorem_check(const TheoremResult& r, const std::filesystem::path& dir) {
  std::vector<std::vector<double>> rows;
  for (const auto& c : r.projection) {
    rows.push_back({c.eps, c.radius.radius, c.error.value, c.bound, c.pass ? 1.0 : 0.0});
  }
  write_file(dir / "projection_report.csv", csv_text({"epsilon", "radius", "error", "bound", "pass"}, rows));

  std::vector<std::vector<double>> curve_rows;
  for (std::size_t k = 0; k < r.truncation.curve.size(); ++k) {
    curve_rows.push_back({static_cast<double>(k), r.truncation.curve[k]});
  }
  write_file(dir / "truncation_curve.csv", csv_text({"k", "error"}, curve_rows));

  std::vector<std::vector<double>> delta_rows;
  for (std::size_t i = 0; i < r.truncation.deltas.size(); ++i) {
    const auto& k = r.truncation.smallest_k[i];
    delta_rows.push_back({r.truncation.deltas[i], k ? static_cast<double>(*k) : -1.0, k ? 1.0 : 0.0});
  }
  write_file(dir / "truncation_report.csv", csv_text({"delta", "smallest_k", "pass"}, delta_rows));
  return {"projection_report.csv", "truncation_curve.csv", "truncation_report.csv"};
}

void write_manifest(const std::filesystem::path& dir, const std::string& subcommand, const RunConfig& cfg,
                    const std::vector<std::string>& outputs) {
  const json j = {
      {"tool", "distrl"},
      {"version", kVersion},
      {"compiler", __VERSION__},
      {"subcommand", subcommand},
      {"seed", cfg.seed},
      {"config_hash", cfg.hash()},
      {"config", json::parse(cfg.to_json_text())},
      {"outputs", outputs},
  };
  write_file(dir / "manifest.json", j.dump(2) + "\n");
}

std::vector<std::string> check_scenario1(const Scenario1Result& r) {
  std::vector<std::string> failures;
  for (std::size_t i = 0; i < r.paths.size(); ++i) {
    const auto& path = r.paths[i];
    if (path.size() >= 10 && !(path[9] < kScenario1Sweep10Max)) {
      failures.push_back(policy_label(i) + ": sweep-10 distance " + format_number(path[9]) + " >= " +
                         format_number(kScenario1Sweep10Max));
    }
    if (path.size() >= 20 && !(path[19] <= kScenario1Sweep20Max)) {
      failures.push_back(policy_label(i) + ": sweep-20 distance " + format_number(path[19]) + " > " +
                         format_number(kScenario1Sweep20Max));
    }
  }
  return failures;
}

std::vector<std::string> check_scenario2(const Scenario2Result& r) {
  std::vector<std::string> failures;
  if (r.final_distance.empty()) return {"no checkpoints"};
  const auto& first = r.final_distance.front();
  const auto& last = r.final_distance.back();
  for (std::size_t i = 0; i < last.size(); ++i) {
    if (!(last[i] <= kScenario2FinalMax)) {
      failures.push_back(policy_label(i) + ": final distance " + format_number(last[i]) + " > " +
                         format_number(kScenario2FinalMax));
    }
    if (!(last[i] <= first[i])) {
      failures.push_back(policy_label(i) + ": distance grew from " + format_number(first[i]) + " to " +
                         format_number(last[i]));
    }
  }
  return failures;
}

std::vector<std::string> check_scenario3(const Scenario3Result& r) {
  if (r.steps.empty()) return {"no checkpoints"};
  const double pct = r.steps.back().percentile;
  if (pct < kScenario3PercentileMin) {
    return {"selected policy percentile " + format_number(pct) + " < " + format_number(kScenario3PercentileMin)};
  }
  return {};
}

}  // namespace distrl
