#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "distrl/return_dist.hpp"
#include "oracles.hpp"

using namespace distrl;

namespace {

GridPtr paper_grid() { return build_grid({-25, -25}, {25, 25}, 41); }

std::size_t atom_at(const SupportGrid& g, double x, double y) {
  const std::vector<double> p{x, y};
  const std::size_t i = g.snap(p);
  REQUIRE(g.atom(i)[0] == x);
  REQUIRE(g.atom(i)[1] == y);
  return i;
}

SampleSet points(std::initializer_list<std::pair<double, double>> xs) {
  SampleSet s(2);
  for (auto [x, y] : xs) s.push_back(std::vector<double>{x, y});
  return s;
}

}  // namespace

TEST_CASE("from_samples examples") {
  const GridPtr g = paper_grid();
  const auto d1 = from_samples(g, points({{0, 0}, {0, 0}, {0, 0}, {0, 0}}));
  CHECK(d1.weight(atom_at(*g, 0, 0)) == 1.0);
  CHECK(d1.support_size() == 1);

  const auto d2 = from_samples(g, points({{0, 0}, {1.25, 0}}));
  CHECK(d2.weight(atom_at(*g, 0, 0)) == 0.5);
  CHECK(d2.weight(atom_at(*g, 1.25, 0)) == 0.5);

  // Each sample snapped by exhaustive search, then counted.
  const SampleSet s3 = points({{0.6, 0}, {0.7, 0}, {1.2, 0}});
  std::vector<double> expected(g->size(), 0.0);
  for (std::size_t i = 0; i < s3.size(); ++i) expected[oracle::nearest_atom(*g, s3.point(i))] += 1.0 / 3.0;
  const auto d3 = from_samples(g, s3);
  // 0.7 is nearer to 1.25 than to 0, so only 0.6 lands on the origin.
  CHECK(d3.weight(atom_at(*g, 0, 0)) == doctest::Approx(1.0 / 3.0));
  CHECK(d3.weight(atom_at(*g, 1.25, 0)) == doctest::Approx(2.0 / 3.0));
  CHECK(oracle::total_variation(d3.weights(), expected) < 1e-12);

  CHECK_THROWS_AS(from_samples(g, SampleSet(2)), std::invalid_argument);
}

TEST_CASE("weights are validated") {
  const GridPtr g = build_grid({0.0}, {1.0}, 2);
  CHECK_THROWS_AS(CategoricalReturnDist(g, {0.5, 0.4}), std::invalid_argument);
  CHECK_THROWS_AS(CategoricalReturnDist(g, {1.5, -0.5}), std::invalid_argument);
  CHECK_THROWS_AS(CategoricalReturnDist(g, {1.0}), std::invalid_argument);
  CHECK_NOTHROW(CategoricalReturnDist(g, {0.25, 0.75}));
}

TEST_CASE("sampling a point mass repeats its atom") {
  const GridPtr g = paper_grid();
  const auto d = CategoricalReturnDist::point_mass(g, atom_at(*g, 2.5, 2.5));
  Rng rng(1);
  const SampleSet s = sample(d, rng, 5);
  REQUIRE(s.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(s.point(i)[0] == 2.5);
    CHECK(s.point(i)[1] == 2.5);
  }
  CHECK_THROWS_AS(sample(d, rng, 0), std::invalid_argument);
}

TEST_CASE("two-atom sampling frequency concentrates at one half") {
  const GridPtr g = build_grid({0.0}, {1.0}, 2);
  const CategoricalReturnDist d(g, {0.5, 0.5});
  Rng rng(2);
  const SampleSet s = sample(d, rng, 10000);
  double ones = 0;
  for (std::size_t i = 0; i < s.size(); ++i) ones += s.point(i)[0];
  // Binomial sd is 0.005, so 0.02 is four standard deviations.
  CHECK(std::abs(ones / 10000.0 - 0.5) <= 0.02);
}

TEST_CASE("resampling recovers the weights in total variation") {
  const GridPtr g = paper_grid();
  Rng rng(4);
  SampleSet base(2);
  for (int i = 0; i < 200; ++i) base.push_back(std::vector<double>{rng.normal(0, 3), rng.normal(2, 2)});
  const auto d = from_samples(g, base);
  const auto again = from_samples(g, sample(d, rng, 100000));
  CHECK(oracle::total_variation(d.weights(), again.weights()) < 0.02);
}

TEST_CASE("summary statistics of a point mass") {
  const GridPtr g = paper_grid();
  const auto d = CategoricalReturnDist::point_mass(g, atom_at(*g, 3.75, 6.25));
  const auto m = mean(d.view());
  CHECK(m[0] == 3.75);
  CHECK(m[1] == 6.25);
  CHECK(marginal_median(d.view(), 0) == 3.75);
  CHECK(tail_prob(d.view(), 1, 5.0) == 1.0);
  CHECK(lower_tail_prob(d.view(), 1, 5.0) == 0.0);
  CHECK(expected_norm(d.view()) == doctest::Approx(std::hypot(3.75, 6.25)));
}

TEST_CASE("mean is linear and quantiles use the left-continuous inverse") {
  const GridPtr g = paper_grid();
  std::vector<double> w(g->size(), 0.0);
  w[atom_at(*g, 0, 0)] = 0.5;
  w[atom_at(*g, 2.5, 0)] = 0.5;
  const CategoricalReturnDist d(g, w);
  CHECK(mean(d.view())[0] == doctest::Approx(1.25));
  CHECK(mean(d.view())[1] == 0.0);
  // CDF reaches 0.5 exactly at the lower atom.
  CHECK(marginal_quantile(d.view(), 0, 0.5) == 0.0);
  CHECK(marginal_quantile(d.view(), 0, 0.5000001) == 2.5);

  std::vector<double> w2(g->size(), 0.0);
  w2[atom_at(*g, -1.25, 0)] = 0.25;
  w2[atom_at(*g, 1.25, 0)] = 0.75;
  const CategoricalReturnDist d2(g, w2);
  CHECK(marginal_quantile(d2.view(), 0, 0.5) == 1.25);
  CHECK(marginal_quantile(d2.view(), 0, 0.25) == -1.25);
  CHECK(marginal_quantile(d2.view(), 0, 0.0) == -1.25);
  CHECK(marginal_quantile(d2.view(), 0, 1.0) == 1.25);
}

TEST_CASE("summary preconditions") {
  const GridPtr g = paper_grid();
  const auto d = CategoricalReturnDist::point_mass(g, 0);
  CHECK_THROWS_AS(marginal_quantile(d.view(), 2, 0.5), std::out_of_range);
  CHECK_THROWS_AS(marginal_quantile(d.view(), 0, 1.5), std::out_of_range);
  CHECK_THROWS_AS(tail_prob(d.view(), 5, 0.0), std::out_of_range);
}

TEST_CASE("mean matches the weighted atom average and tail_prob is monotone") {
  const GridPtr g = paper_grid();
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    SampleSet s(2);
    for (int i = 0; i < 300; ++i) s.push_back(std::vector<double>{rng.normal(0, 6), rng.normal(0, 6)});
    const auto d = from_samples(g, s);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      mx += d.weight(i) * g->atom(i)[0];
      my += d.weight(i) * g->atom(i)[1];
    }
    const auto m = mean(d.view());
    CHECK(std::abs(m[0] - mx) <= 1e-12);
    CHECK(std::abs(m[1] - my) <= 1e-12);
    double prev = 2.0;
    for (double c = -30; c <= 30; c += 0.37) {
      const double p = tail_prob(d.view(), 1, c);
      CHECK(p <= prev);
      prev = p;
    }
  }
}

TEST_CASE("value table lookup") {
  const GridPtr g = build_grid({0.0}, {1.0}, 2);
  std::vector<CategoricalReturnDist> ds(3, CategoricalReturnDist::point_mass(g, 1));
  const ValueTable t(g, ds);
  CHECK(t.size() == 3);
  CHECK(t.at(2).weight(1) == 1.0);
  CHECK_THROWS_AS(t.at(3), std::out_of_range);
  const GridPtr other = build_grid({0.0}, {1.0}, 2);
  std::vector<CategoricalReturnDist> mixed{CategoricalReturnDist::point_mass(g, 0),
                                           CategoricalReturnDist::point_mass(other, 0)};
  CHECK_THROWS_AS(ValueTable(g, mixed), std::invalid_argument);
}
