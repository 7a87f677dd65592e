#include <random>
#include <vector>

#include "doctest.h"
#include "edpdcs/core.hpp"
#include "edpdcs/errors.hpp"
#include "oracles.hpp"

using namespace edpdcs;

TEST_CASE("squared_distance examples") {
  CHECK(squared_distance(std::vector<double>{0, 0}, std::vector<double>{0, 0}) == 0.0);
  CHECK(squared_distance(std::vector<double>{0, 0}, std::vector<double>{1, 1}) == 2.0);

  const std::vector<double> a{0.1, 0.2, 0.3};
  const std::vector<double> b{0.4, 0.0, 0.3};
  CHECK(squared_distance(a, b) == doctest::Approx(0.13).epsilon(1e-15));
  CHECK(squared_distance(a, b) == oracle::sq_dist(a, b));
}

TEST_CASE("squared_distance rejects a dimension mismatch") {
  CHECK_THROWS_AS(squared_distance(std::vector<double>{0, 0}, std::vector<double>{0}),
                  InvalidInput);
}

TEST_CASE("squared_distance is symmetric, nonnegative and zero only on equal points") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto pts = oracle::random_points(rng, 2, 1 + trial % 5);
    const double ab = squared_distance(pts[0], pts[1]);
    CHECK(ab == squared_distance(pts[1], pts[0]));
    CHECK(ab > 0.0);
    CHECK(squared_distance(pts[0], pts[0]) == 0.0);
  }
}

TEST_CASE("nearest_centroid examples") {
  const CentroidSet two({0, 0, 1, 1}, 2, false);
  CHECK(nearest_centroid(std::vector<double>{0.1, 0.1}, two) == 0);
  CHECK(nearest_centroid(std::vector<double>{0.5, 0.5}, two) == 0);  // tie -> lowest

  const CentroidSet three({0, 0, 0, 1, 1, 1, 0.8, 0.8, 0.8}, 3, false);
  CHECK(nearest_centroid(std::vector<double>{0.85, 0.85, 0.85}, three) == 2);
}

TEST_CASE("nearest_centroid agrees with an argmin over true distances") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 1 + trial % 4;
    auto cents = oracle::random_points(rng, 6, d);
    auto x = oracle::random_points(rng, 1, d)[0];
    const CentroidSet cs(oracle::flatten(cents), d, false);
    std::size_t best = 0;
    for (std::size_t j = 1; j < cents.size(); ++j) {
      if (std::sqrt(oracle::sq_dist(x, cents[j])) < std::sqrt(oracle::sq_dist(x, cents[best]))) {
        best = j;
      }
    }
    CHECK(nearest_centroid(x, cs) == best);
  }
}

TEST_CASE("assignment is a pure function of points and centroids") {
  std::mt19937_64 rng(8);
  const Dataset data(oracle::flatten(oracle::random_points(rng, 50, 3)), 3, true);
  const CentroidSet cs(oracle::flatten(oracle::random_points(rng, 4, 3)), 3, false);
  const Assignment a = assign_all(data, cs);
  CHECK(a == assign_all(data, cs));
  for (std::size_t label : a.labels) CHECK(label < 4);
}

TEST_CASE("Dataset validates its invariants") {
  CHECK_THROWS_AS(Dataset({}, 2, false), InvalidInput);
  CHECK_THROWS_AS(Dataset({1, 2, 3}, 2, false), InvalidInput);
  CHECK_THROWS_AS(Dataset({0.5, 1.5}, 2, true), InvalidInput);
  CHECK_THROWS_AS(Dataset({0.5, 0.5}, 0, false), InvalidInput);
  const Dataset ok({0.0, 1.0, 0.5, 0.25}, 2, true, "t");
  CHECK(ok.n_rows() == 2);
  CHECK(ok.row(1)[1] == 0.25);
}

TEST_CASE("partition_rows covers every row once with balanced sizes") {
  for (std::size_t n : {1u, 7u, 748u}) {
    for (std::size_t p = 1; p <= std::min<std::size_t>(n, 9); ++p) {
      const auto parts = partition_rows(n, p);
      REQUIRE(parts.size() == p);
      CHECK(parts.front().begin == 0);
      CHECK(parts.back().end == n);
      for (std::size_t i = 1; i < p; ++i) CHECK(parts[i].begin == parts[i - 1].end);
      CHECK(parts.front().size() - parts.back().size() <= 1);
    }
  }
  CHECK_THROWS_AS(partition_rows(3, 4), InvalidInput);
  CHECK_THROWS_AS(partition_rows(3, 0), InvalidInput);
}

TEST_CASE("ClusterAggregate merge adds counts and sums") {
  ClusterAggregate a{1, 2.0, {0.5, 1.0}};
  a.merge({1, 3.0, {1.0, 0.25}});
  CHECK(a.count == 5.0);
  CHECK(a.sums == std::vector<double>{1.5, 1.25});
  CHECK_THROWS_AS(a.merge({2, 1.0, {0.0, 0.0}}), InvalidInput);
}
