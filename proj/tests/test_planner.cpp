#include <cmath>
#include <vector>

#include "doctest.h"
#include "edpdcs/errors.hpp"
#include "edpdcs/planner.hpp"
#include "oracles.hpp"

using namespace edpdcs;

namespace {

PlannerInputs inputs(std::size_t n, std::size_t d, std::size_t k, double rho, double eps) {
  PlannerInputs in;
  in.n_rows = n;
  in.n_dims = d;
  in.k = k;
  in.rho = rho;
  in.epsilon_total = eps;
  return in;
}

}  // namespace

TEST_CASE("minimal_iteration_budget closed form") {
  CHECK(minimal_iteration_budget(inputs(1000, 1, 1, 0.0, 1.0)) ==
        doctest::Approx(std::sqrt(8e-4)).epsilon(1e-14));

  const double blood = minimal_iteration_budget(inputs(748, 4, 2, 0.225, 1.0));
  CHECK(std::abs(blood - oracle::epsilon_m(748, 4, 2, 0.225L)) < 1e-12);
  CHECK(blood == doctest::Approx(0.5481).epsilon(1e-4));

  const double adult = minimal_iteration_budget(inputs(48842, 6, 5, 0.225, 1.0));
  CHECK(std::abs(adult - oracle::epsilon_m(48842, 6, 5, 0.225L)) < 1e-12);
  CHECK(adult == doctest::Approx(0.0569).epsilon(1e-3));
}

TEST_CASE("eps_m scales with the MSE threshold") {
  PlannerInputs in = inputs(748, 4, 2, 0.225, 1.0);
  const double base = minimal_iteration_budget(in);
  in.mse_threshold = 0.0025;
  CHECK(minimal_iteration_budget(in) == doctest::Approx(2.0 * base));
}

TEST_CASE("substituting eps_m back into the MSE bound gives the threshold") {
  for (double thr : {0.01, 0.003, 0.1}) {
    for (std::size_t k : {1u, 2u, 5u}) {
      PlannerInputs in = inputs(1000 * k, 3, k, 0.225, 1.0);
      in.mse_threshold = thr;
      const double eps_m = minimal_iteration_budget(in);
      CHECK(std::abs(expected_centroid_mse(in, eps_m) - thr) < 1e-12);
    }
  }
}

TEST_CASE("eps_m is increasing in k and d and decreasing in N") {
  double prev = 0.0;
  for (std::size_t k = 1; k <= 8; ++k) {
    const double v = minimal_iteration_budget(inputs(5000, 3, k, 0.225, 1.0));
    CHECK(v > prev);
    prev = v;
  }
  prev = 0.0;
  for (std::size_t d = 1; d <= 10; ++d) {
    const double v = minimal_iteration_budget(inputs(5000, d, 3, 0.225, 1.0));
    CHECK(v > prev);
    prev = v;
  }
  prev = 1e300;
  for (std::size_t n : {100u, 500u, 1000u, 50000u}) {
    const double v = minimal_iteration_budget(inputs(n, 3, 3, 0.225, 1.0));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("iteration_count reproduces the published iteration table") {
  const std::vector<double> eps{0.5, 1.0, 1.5, 2.0, 3.0};
  const std::vector<int> blood{2, 2, 2, 3, 4};
  for (std::size_t i = 0; i < eps.size(); ++i) {
    CHECK(iteration_count(eps[i], 0.65508, 7) == blood[i]);
    CHECK(iteration_count(eps[i], 0.06799, 7) == 7);
  }
}

TEST_CASE("iteration_count boundary and range") {
  CHECK(iteration_count(2.0 * 0.3, 0.3, 7) == 2);
  CHECK(iteration_count(2.0 * 0.3 + 1e-9, 0.3, 7) == 2);  // floor(2.000...) = 2
  CHECK(iteration_count(0.9, 0.3, 7) == 3);
  CHECK(iteration_count(1e9, 0.3, 7) == 7);
  CHECK(iteration_count(1e9, 0.3, 4) == 4);
  for (double eps = 0.01; eps < 10.0; eps *= 1.3) {
    const int t = iteration_count(eps, 0.2, 7);
    CHECK(t >= 2);
    CHECK(t <= 7);
  }
}

TEST_CASE("make_plan splits the per-iteration budget evenly") {
  SUBCASE("eps_t = 0.5 with d = 4") {
    PlannerInputs in = inputs(748, 4, 2, 0.225, 1.0);
    const BudgetPlan p = make_plan(in, 0.65508);
    CHECK(p.iterations == 2);
    CHECK(p.epsilon_per_iter == 0.5);
    CHECK(p.epsilon_dim == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p.epsilon_count == p.epsilon_dim);
  }
  SUBCASE("Adult shape, eps = 1") {
    const BudgetPlan p = make_plan(inputs(48842, 6, 5, 0.225, 1.0), 0.06799);
    CHECK(p.iterations == 7);
    CHECK(p.epsilon_per_iter == doctest::Approx(1.0 / 7.0).epsilon(1e-15));
    CHECK(p.epsilon_dim == doctest::Approx(1.0 / 49.0).epsilon(1e-15));
  }
  SUBCASE("Blood shape, eps = 3") {
    const BudgetPlan p = make_plan(inputs(748, 4, 2, 0.225, 3.0), 0.65508);
    CHECK(p.iterations == 4);
    CHECK(p.epsilon_per_iter == 0.75);
    CHECK(p.epsilon_dim == doctest::Approx(0.15).epsilon(1e-15));
  }
  SUBCASE("split invariants hold across a grid") {
    for (std::size_t d = 1; d <= 8; ++d) {
      for (double eps : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        const BudgetPlan p = make_plan(inputs(2000, d, 3, 0.225, eps));
        CHECK(std::abs(d * p.epsilon_dim + p.epsilon_count - p.epsilon_per_iter) < 1e-12);
        CHECK(std::abs(p.iterations * p.epsilon_per_iter - eps) < 1e-12);
      }
    }
  }
}

TEST_CASE("make_plan records override and reference discrepancies") {
  const BudgetPlan with_override = make_plan(inputs(748, 4, 2, 0.225, 1.0), 0.65508);
  REQUIRE(with_override.epsilon_m_override);
  CHECK(with_override.epsilon_m == 0.65508);
  CHECK(with_override.notes.size() == 1);

  const BudgetPlan plain = make_plan(inputs(748, 4, 2, 0.225, 1.0));
  CHECK_FALSE(plain.epsilon_m_override);
  REQUIRE(plain.notes.size() == 1);
  CHECK(plain.notes[0].find("0.65508") != std::string::npos);

  CHECK(make_plan(inputs(900, 4, 2, 0.225, 1.0)).notes.empty());
}

TEST_CASE("planner input validation") {
  CHECK_THROWS_AS(make_plan(inputs(10, 2, 0, 0.2, 1.0)), InvalidInput);
  CHECK_THROWS_AS(make_plan(inputs(2, 2, 3, 0.2, 1.0)), InvalidInput);
  CHECK_THROWS_AS(make_plan(inputs(10, 0, 2, 0.2, 1.0)), InvalidInput);
  CHECK_THROWS_AS(make_plan(inputs(10, 2, 2, 1.5, 1.0)), InvalidInput);
  CHECK_THROWS_AS(make_plan(inputs(10, 2, 2, 0.2, 0.0)), InvalidInput);
  PlannerInputs in = inputs(10, 2, 2, 0.2, 1.0);
  in.t_cap = 1;
  CHECK_THROWS_AS(make_plan(in), InvalidInput);
  in.t_cap = 7;
  in.mse_threshold = 0.0;
  CHECK_THROWS_AS(make_plan(in), InvalidInput);
  CHECK_THROWS_AS(make_plan(inputs(10, 2, 2, 0.2, 1.0), -1.0), InvalidInput);
}
