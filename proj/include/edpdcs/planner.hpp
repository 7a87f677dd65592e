#ifndef EDPDCS_PLANNER_HPP
#define EDPDCS_PLANNER_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace edpdcs {

struct PlannerInputs {
  std::size_t n_rows = 0;
  std::size_t n_dims = 0;
  std::size_t k = 0;
  double rho = 0.225;            // average S_i / C, one scalar for all dims
  double epsilon_total = 0.0;
  double mse_threshold = 0.01;   // bound on the summed centroid MSE
  int t_cap = 7;

  // Throws InvalidInput naming the first violated precondition.
  void validate() const;
};

struct BudgetPlan {
  double epsilon_total = 0.0;
  double epsilon_m_computed = 0.0;
  std::optional<double> epsilon_m_override;
  double epsilon_m = 0.0;        // the value actually used for T
  int iterations = 0;            // T, counting initialization as iteration 1
  double epsilon_per_iter = 0.0; // eps_t = eps / T
  double epsilon_dim = 0.0;      // eps_i
  double epsilon_count = 0.0;    // eps_0
  std::vector<std::string> notes;
};

// Smallest per-iteration budget eps_t that keeps the expected summed MSE of
// the k noisy centroids at or below mse_threshold:
//   sqrt( (2 / mse_threshold) * k^3 d (1+d)^2 (1+rho^2) / N^2 ).
double minimal_iteration_budget(const PlannerInputs& in);

// Expected summed MSE of the k noisy centroids when one iteration spends
// eps_t split evenly over the d sums and the count.
double expected_centroid_mse(const PlannerInputs& in, double eps_t);

// T = 2 when eps <= 2 eps_m, otherwise clamp(floor(eps / eps_m), 2, t_cap).
int iteration_count(double epsilon_total, double epsilon_m, int t_cap);

// Builds the full plan. An eps_m override replaces the computed value for
// the T rule; the discrepancy is recorded in `notes`.
BudgetPlan make_plan(const PlannerInputs& in,
                     std::optional<double> epsilon_m_override = std::nullopt);

// Published eps_m for the two benchmark shapes (UCI Blood: N=748, d=4, k=2;
// UCI Adult: N=48842, d=6, k=5), if `in` matches one of them with the
// default rho and threshold.
std::optional<double> reference_epsilon_m(const PlannerInputs& in);

}  // namespace edpdcs

#endif  // EDPDCS_PLANNER_HPP
