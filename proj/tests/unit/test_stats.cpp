#include <doctest.h>

#include <algorithm>
#include <random>

#include "tropescope/error.hpp"
#include "tropescope/stats.hpp"

using namespace tropescope;

namespace {

DescriptiveSummary describe_list(std::vector<double> v) { return describe(std::span<const double>(v)); }
BoxplotSummary box_list(std::vector<double> v) { return boxplot(std::span<const double>(v)); }

BipartiteSnapshot random_snapshot(std::mt19937_64& rng) {
  BipartiteSnapshot s;
  const auto films = 1 + rng() % 60;
  for (std::size_t i = 0; i < rng() % 600; ++i) {
    s.add_relation({"Film", "F" + std::to_string(rng() % films)}, {"Main", "T" + std::to_string(rng() % 90)});
  }
  for (std::size_t i = 0; i < rng() % 5; ++i) s.ensure_film({"Film", "Z" + std::to_string(i)});
  return s;
}

}  // namespace

TEST_CASE("degree sequences") {
  BipartiteSnapshot s;
  CHECK(degree_sequence(s, Axis::TropesPerFilm).empty());
  CHECK(degree_sequence(s, Axis::FilmsPerTrope).empty());
  s.add_relation({"Film", "A"}, {"Main", "T"});
  s.add_relation({"Film", "B"}, {"Main", "T"});
  CHECK(degree_sequence(s, Axis::TropesPerFilm) == std::vector<std::size_t>{1, 1});
  CHECK(degree_sequence(s, Axis::FilmsPerTrope) == std::vector<std::size_t>{2});
  s.ensure_film({"Film", "Lost"});
  CHECK(degree_sequence(s, Axis::TropesPerFilm) == std::vector<std::size_t>{0, 1, 1});
}

TEST_CASE("axis names") {
  CHECK(axis_from_string("films") == Axis::TropesPerFilm);
  CHECK(axis_from_string("tropes") == Axis::FilmsPerTrope);
  CHECK(axis_from_string("tropes-per-film") == Axis::TropesPerFilm);
  CHECK_THROWS(axis_from_string("nope"));
}

TEST_CASE("describe examples") {
  const auto flat = describe_list({5, 5, 5});
  CHECK(flat.nobs == 3);
  CHECK(flat.mean == 5);
  CHECK(flat.variance == 0);
  CHECK_FALSE(flat.skewness);
  CHECK_FALSE(flat.kurtosis);

  const auto s = describe_list({1, 2, 3, 4, 5});
  CHECK(s.mean == doctest::Approx(3).epsilon(1e-12));
  CHECK(s.variance == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(*s.skewness == doctest::Approx(0).epsilon(1e-12));
  CHECK(*s.kurtosis == doctest::Approx(-1.3).epsilon(1e-12));
  CHECK(s.min == 1);
  CHECK(s.max == 5);

  const auto one = describe_list({7});
  CHECK(one.nobs == 1);
  CHECK(one.variance == 0);
  CHECK_FALSE(one.skewness);

  CHECK_THROWS_AS(describe_list({}), EmptyInput);
  const std::vector<std::size_t> ints{1, 2, 3, 4, 5};
  CHECK(describe(std::span<const std::size_t>(ints)).variance == doctest::Approx(2.5));
}

TEST_CASE("describe invariants on random data") {
  std::mt19937_64 rng(17);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> v(2 + rng() % 500);
    std::lognormal_distribution<double> d(1, 1.5);
    for (auto& x : v) x = d(rng);
    const auto s = describe(std::span<const double>(v));
    CHECK(s.min <= s.mean);
    CHECK(s.mean <= s.max);
    CHECK(s.variance >= 0);
    CHECK(s.nobs == v.size());
  }
}

TEST_CASE("boxplot examples") {
  const auto b = box_list({1, 2, 3, 4, 5});
  CHECK(b.q1 == 2);
  CHECK(b.median == 3);
  CHECK(b.q3 == 4);
  CHECK(b.iqr == 2);
  CHECK(b.outlier_count == 0);
  CHECK(b.whisker_low == 1);
  CHECK(b.whisker_high == 5);

  const auto single = box_list({42});
  CHECK(single.q1 == 42);
  CHECK(single.median == 42);
  CHECK(single.q3 == 42);
  CHECK(single.iqr == 0);
  CHECK(single.outlier_count == 0);

  const auto tail = box_list({1, 1, 1, 1, 100});
  CHECK(tail.outlier_count == 1);
  CHECK(tail.whisker_high == 1);

  // Interpolation between order statistics: position (n-1)p.
  const auto even = box_list({4, 1, 3, 2});
  CHECK(even.q1 == doctest::Approx(1.75));
  CHECK(even.median == doctest::Approx(2.5));
  CHECK(even.q3 == doctest::Approx(3.25));

  CHECK_THROWS_AS(box_list({}), EmptyInput);
}

TEST_CASE("boxplot invariants") {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 200; ++round) {
    std::vector<double> v(1 + rng() % 300);
    std::geometric_distribution<int> g(0.1);
    for (auto& x : v) x = g(rng);
    const auto b = boxplot(std::span<const double>(v));
    CHECK(b.q1 <= b.median);
    CHECK(b.median <= b.q3);
    CHECK(b.iqr == doctest::Approx(b.q3 - b.q1));
    const double lo = b.q1 - 1.5 * b.iqr;
    const double hi = b.q3 + 1.5 * b.iqr;
    std::size_t outside = 0;
    double wl = INFINITY;
    double wh = -INFINITY;
    for (double x : v) {
      if (x < lo || x > hi) {
        ++outside;
      } else {
        wl = std::min(wl, x);
        wh = std::max(wh, x);
      }
    }
    CHECK(b.outlier_count == outside);
    CHECK(b.whisker_low == wl);
    CHECK(b.whisker_high == wh);
  }
}

TEST_CASE("histogram") {
  CHECK(histogram(BipartiteSnapshot{}, Axis::TropesPerFilm).empty());
  BipartiteSnapshot s;
  s.add_relation({"Film", "A"}, {"Main", "X"});
  s.add_relation({"Film", "B"}, {"Main", "X"});
  s.add_relation({"Film", "C"}, {"Main", "X"});
  s.add_relation({"Film", "C"}, {"Main", "Y"});
  s.add_relation({"Film", "C"}, {"Main", "Z"});
  CHECK(histogram(s, Axis::TropesPerFilm) == FrequencyHistogram{{1, 2}, {3, 1}});
  CHECK(histogram(s, Axis::FilmsPerTrope) == FrequencyHistogram{{1, 2}, {3, 1}});
}

TEST_CASE("property: histogram recount and degree sums") {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 50; ++round) {
    const auto s = random_snapshot(rng);
    for (Axis axis : {Axis::TropesPerFilm, Axis::FilmsPerTrope}) {
      const auto degrees = degree_sequence(s, axis);
      CHECK(std::is_sorted(degrees.begin(), degrees.end()));
      std::map<std::size_t, std::size_t> recount;
      for (auto d : degrees) ++recount[d];
      const auto h = histogram(s, axis);
      CHECK(h == recount);
      std::size_t total = 0;
      std::size_t weighted = 0;
      for (const auto& [degree, count] : h) {
        CHECK(count > 0);
        total += count;
        weighted += degree * count;
      }
      CHECK(total == (axis == Axis::TropesPerFilm ? s.film_count() : s.trope_count()));
      CHECK(weighted == connection_count(s));
    }
  }
}
