#include <cmath>
#include <vector>

#include "doctest.h"
#include "edpdcs/errors.hpp"
#include "edpdcs/laplace.hpp"
#include "edpdcs/ledger.hpp"
#include "oracles.hpp"

using namespace edpdcs;

TEST_CASE("inverse CDF maps the median to zero and is odd") {
  CHECK(laplace_inverse_cdf(0.5, 1.0) == 0.0);
  CHECK(laplace_inverse_cdf(0.5, 7.0) == 0.0);
  CHECK(laplace_inverse_cdf(0.25, 2.0) == doctest::Approx(-laplace_inverse_cdf(0.75, 2.0)));
  // F(-b ln 2) = 1/4 for Lap(b).
  CHECK(laplace_inverse_cdf(0.25, 2.0) == doctest::Approx(-2.0 * std::log(2.0)));
}

TEST_CASE("sample rejects a nonpositive scale") {
  LaplaceSampler s(1);
  CHECK_THROWS_AS(s.sample(0.0), InvalidInput);
  CHECK_THROWS_AS(s.sample(-1.0), InvalidInput);
}

TEST_CASE("identical seeds give identical sequences") {
  LaplaceSampler a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.sample(1.5);
    CHECK(x == b.sample(1.5));
    differs |= x != c.sample(1.5);
  }
  CHECK(differs);
  CHECK(a.draw_count() == 1000);
}

TEST_CASE("Monte Carlo moments match the analytic Laplace moments") {
  constexpr int kDraws = 1'000'000;
  {
    LaplaceSampler s(2024);
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < kDraws; ++i) {
      const double x = s.sample(1.0);
      sum += x;
      sq += x * x;
    }
    const double mean = sum / kDraws;
    const double var = sq / kDraws - mean * mean;
    CHECK(std::abs(var - 2.0) <= 0.05 * 2.0);
  }
  {
    LaplaceSampler s(77);
    double sum = 0.0;
    for (int i = 0; i < kDraws; ++i) sum += s.sample(3.0);
    CHECK(std::abs(sum / kDraws) <= 0.02);
  }
}

TEST_CASE("draws pass a KS test against the Laplace CDF") {
  for (double b : {0.2, 1.0, 5.0}) {
    LaplaceSampler s(static_cast<std::uint64_t>(b * 1000));
    std::vector<double> draws(100'000);
    for (double& x : draws) x = s.sample(b);
    CHECK(oracle::ks_statistic(draws, b) < oracle::ks_critical_001(draws.size()));
  }
}

TEST_CASE("stream seeds depend on every coordinate") {
  const auto base = stream_seed(1, 2, 3);
  CHECK(base == stream_seed(1, 2, 3));
  CHECK(base != stream_seed(2, 2, 3));
  CHECK(base != stream_seed(1, 3, 3));
  CHECK(base != stream_seed(1, 2, 4));
  CHECK(stream_seed(1, 2, 3) != stream_seed(1, 3, 2));
}

TEST_CASE("perturb_aggregate") {
  const ClusterAggregate agg{0, 100.0, {10.0, 20.0, 30.0, 40.0}};

  SUBCASE("vanishing noise leaves the aggregate unchanged") {
    LaplaceSampler s(9);
    const auto out = perturb_aggregate(agg, 1e12, 1e12, s, true);
    CHECK(out.count == doctest::Approx(100.0).epsilon(1e-9));
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(out.sums[i] - agg.sums[i]) < 1e-9);
  }

  SUBCASE("noise is unbiased") {
    LaplaceSampler s(31337);
    double total = 0.0;
    constexpr int kTrials = 100'000;
    for (int t = 0; t < kTrials; ++t) total += perturb_aggregate(agg, 1.0, 1.0, s, true).count;
    CHECK(std::abs(total / kTrials - 100.0) <= 0.05);
  }

  SUBCASE("consumes exactly d + 1 draws") {
    LaplaceSampler s(1);
    const ClusterAggregate six{0, 3.0, std::vector<double>(6, 0.5)};
    const auto before = s.draw_count();
    perturb_aggregate(six, 0.5, 0.5, s, true);
    CHECK(s.draw_count() - before == 7);
  }

  SUBCASE("refuses unnormalized data") {
    LaplaceSampler s(1);
    CHECK_THROWS_AS(perturb_aggregate(agg, 1.0, 1.0, s, false), InvalidInput);
  }

  SUBCASE("count noise uses eps_count and sum noise uses eps_dim") {
    // With a huge eps_dim only the count moves.
    LaplaceSampler s(4);
    const auto out = perturb_aggregate(agg, 0.01, 1e12, s, true);
    CHECK(out.count != doctest::Approx(100.0).epsilon(1e-6));
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(out.sums[i] - agg.sums[i]) < 1e-9);
  }
}

TEST_CASE("ledger charges") {
  SUBCASE("exact spend") {
    BudgetLedger l(1.0);
    l.charge("a", 0.5);
    l.charge("b", 0.5);
    CHECK(l.spent() == 1.0);
    CHECK(l.fully_spent());
    CHECK(l.entries().size() == 2);
  }
  SUBCASE("overspend is rejected and leaves the ledger unchanged") {
    BudgetLedger l(1.0);
    l.charge("a", 0.6);
    CHECK_THROWS_AS(l.charge("b", 0.6), BudgetExhausted);
    CHECK(l.spent() == 0.6);
    CHECK(l.entries().size() == 1);
  }
  SUBCASE("eps / T allocation") {
    BudgetLedger l(2.0);
    for (int t = 0; t < 4; ++t) l.charge("t", 0.5);
    CHECK(l.spent() == 2.0);
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(BudgetLedger(0.0), InvalidInput);
    BudgetLedger l(1.0);
    CHECK_THROWS_AS(l.charge("z", 0.0), InvalidInput);
  }
  SUBCASE("T charges of eps/T reconcile for many budgets") {
    for (double eps : {0.5, 1.0, 1.5, 2.0, 3.0, 0.7, 2.9}) {
      for (int T = 2; T <= 7; ++T) {
        BudgetLedger l(eps);
        for (int t = 0; t < T; ++t) l.charge("t", eps / T);
        CHECK(std::abs(l.spent() - eps) <= 1e-12);
      }
    }
  }
}
