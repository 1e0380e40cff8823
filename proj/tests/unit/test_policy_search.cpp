#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "distrl/policy_search.hpp"

using namespace distrl;

namespace {

WeightedPoints points(std::size_t dims, std::vector<double> coords, std::vector<double> weights) {
  return WeightedPoints{dims, std::move(coords), std::move(weights)};
}

GridPtr paper_grid() { return build_grid({-25.0, -25.0}, {25.0, 25.0}, 41); }

DpParams small_params(std::uint64_t seed) {
  DpParams p;
  p.n_sample = 100;
  p.n_repeat = 5;
  p.seed = seed;
  return p;
}

std::vector<LinearPolicy> candidate_set(std::size_t pairs, std::uint64_t seed) {
  Rng rng(seed);
  return sample_policy_set(pairs, BetaRanges{}, rng);
}

}  // namespace

TEST_CASE("median plus tail on point masses") {
  const UtilitySpec u = UtilitySpec::median_plus_tail();
  CHECK(utility(points(2, {3.0, 6.0}, {1.0}).view(), u) == doctest::Approx(23.0));
  CHECK(utility(points(2, {3.0, 4.0}, {1.0}).view(), u) == doctest::Approx(3.0));
  // The threshold is strict.
  CHECK(utility(points(2, {3.0, 5.0}, {1.0}).view(), u) == doctest::Approx(3.0));
}

TEST_CASE("single statistics by hand") {
  const WeightedPoints two = points(1, {0.0, 2.0}, {0.5, 0.5});
  UtilitySpec mean_only;
  mean_only.terms.push_back({StatKind::kMean, 0});
  CHECK(utility(two.view(), mean_only) == doctest::Approx(1.0));

  // Marginal on dim 0: -1 (0.2), 1 (0.3), 4 (0.5).
  const WeightedPoints m = points(2, {1.0, 0.0, -1.0, 3.0, 4.0, -4.0}, {0.3, 0.2, 0.5});
  UtilitySpec u;
  u.terms.push_back({StatKind::kQuantile, 0, 0.5});
  CHECK(utility(m.view(), u) == doctest::Approx(1.0));
  u.terms[0].q = 0.51;
  CHECK(utility(m.view(), u) == doctest::Approx(4.0));
  u.terms[0] = {StatKind::kTailBelow, 1, 0.5, 0.0, 10.0};
  CHECK(utility(m.view(), u) == doctest::Approx(5.0));
  u.terms[0] = {StatKind::kNorm, 0, 0.5, 0.0, 1.0};
  CHECK(utility(m.view(), u) == doctest::Approx(0.3 + 0.2 * std::sqrt(10.0) + 0.5 * std::sqrt(32.0)));
  u.offset = -2.0;
  CHECK(utility(m.view(), u) == doctest::Approx(-2.0 + 0.3 + 0.2 * std::sqrt(10.0) + 0.5 * std::sqrt(32.0)));
}

TEST_CASE("utility spec validation") {
  const WeightedPoints one = points(1, {0.0}, {1.0});
  UtilitySpec u = UtilitySpec::median_plus_tail();
  CHECK_THROWS_AS(utility(one.view(), u), std::invalid_argument);
  UtilitySpec q;
  q.terms.push_back({StatKind::kQuantile, 0, 1.5});
  CHECK_THROWS_AS(q.validate(1), std::invalid_argument);
  UtilitySpec w;
  w.terms.push_back({StatKind::kMean, 0, 0.5, 0.0, std::numeric_limits<double>::infinity()});
  CHECK_THROWS_AS(w.validate(1), std::invalid_argument);
  UtilitySpec n;
  n.terms.push_back({StatKind::kNorm, 7});
  CHECK_NOTHROW(n.validate(1));
}

TEST_CASE("search over one policy") {
  const GridWorld env;
  const std::vector<LinearPolicy> one{reference_policies()[0]};
  const auto r = search(env, one, UtilitySpec::median_plus_tail(), {1, 1}, small_params(1), paper_grid());
  REQUIRE(r.size() == 1);
  CHECK(r[0].index == 0);
  CHECK(r[0].policy == one[0]);
  CHECK(std::isfinite(r[0].utility));
}

TEST_CASE("search rejects an empty set and a bad query state") {
  const GridWorld env;
  const std::vector<LinearPolicy> none;
  CHECK_THROWS_AS(search(env, none, UtilitySpec::median_plus_tail(), {1, 1}, small_params(1), paper_grid()),
                  std::invalid_argument);
  const std::vector<LinearPolicy> one{reference_policies()[0]};
  CHECK_THROWS_AS(search(env, one, UtilitySpec::median_plus_tail(), {0, 1}, small_params(1), paper_grid()),
                  std::invalid_argument);
}

TEST_CASE("identical policies tie and keep input order") {
  const GridWorld env;
  const LinearPolicy p = reference_policies()[2];
  // Same action map from different coefficients.
  const std::vector<LinearPolicy> twins{p, p, LinearPolicy{p.beta0 + 1e-3, p.beta1, p.sgn}};
  REQUIRE(action_map(twins[0]) == action_map(twins[2]));
  const auto r = search(env, twins, UtilitySpec::median_plus_tail(), {1, 1}, small_params(4), paper_grid());
  CHECK(r[0].utility == r[1].utility);
  CHECK(r[1].utility == r[2].utility);
  CHECK(r[0].index == 0);
  CHECK(r[1].index == 1);
  CHECK(r[2].index == 2);
}

TEST_CASE("ranking is descending and independent of the worker count") {
  const GridWorld env;
  const auto set = candidate_set(4, 8);
  const auto a = search(env, set, UtilitySpec::median_plus_tail(), {1, 1}, small_params(2), paper_grid(), 1);
  const auto b = search(env, set, UtilitySpec::median_plus_tail(), {1, 1}, small_params(2), paper_grid(), 3);
  REQUIRE(a.size() == set.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == b[i].index);
    CHECK(a[i].utility == b[i].utility);
    CHECK(a[i].policy == set[a[i].index]);
    if (i > 0) CHECK(a[i - 1].utility >= a[i].utility);
  }
}

TEST_CASE("positive affine change of utility keeps the ranking") {
  const GridWorld env;
  const auto set = candidate_set(5, 21);
  const UtilitySpec u = UtilitySpec::median_plus_tail();
  UtilitySpec v = u;
  const double a = 2.5, b = -7.0;
  for (auto& t : v.terms) t.weight *= a;
  v.offset = a * u.offset + b;
  const auto ru = search(env, set, u, {1, 1}, small_params(6), paper_grid());
  const auto rv = search(env, set, v, {1, 1}, small_params(6), paper_grid());
  for (std::size_t i = 0; i < ru.size(); ++i) {
    CHECK(ru[i].index == rv[i].index);
    CHECK(rv[i].utility == doctest::Approx(a * ru[i].utility + b));
    if (i > 0) CHECK((ru[i - 1].utility == ru[i].utility) == (rv[i - 1].utility == rv[i].utility));
  }
}

TEST_CASE("appending a dominated duplicate keeps the winner") {
  const GridWorld env;
  auto set = candidate_set(4, 33);
  const auto before = search(env, set, UtilitySpec::median_plus_tail(), {1, 1}, small_params(9), paper_grid());
  for (std::size_t k = 1; k < before.size(); ++k) {
    if (before[k].utility >= before[0].utility) continue;
    auto extended = set;
    extended.push_back(before[k].policy);
    const auto after =
        search(env, extended, UtilitySpec::median_plus_tail(), {1, 1}, small_params(9), paper_grid());
    CHECK(after[0].index == before[0].index);
    CHECK(after[0].utility == before[0].utility);
  }
}

TEST_CASE("policy seed depends only on base seed and action map") {
  const LinearPolicy p = reference_policies()[2];
  const LinearPolicy shifted{p.beta0 + 1e-3, p.beta1, p.sgn};
  REQUIRE(action_map(p) == action_map(shifted));
  CHECK(policy_seed(1, action_map(p)) == policy_seed(1, action_map(shifted)));
  CHECK(policy_seed(1, action_map(p)) != policy_seed(2, action_map(p)));
  CHECK(policy_seed(1, action_map(reference_policies()[2])) != policy_seed(1, action_map(reference_policies()[3])));
}
