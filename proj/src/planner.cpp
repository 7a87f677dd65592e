#include "edpdcs/planner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "edpdcs/errors.hpp"

namespace edpdcs {
namespace {

// k^3 d (1+d)^2 (1+rho^2) / N^2, the data-shape factor shared by the MSE
// bound and its inverse.
double shape_factor(const PlannerInputs& in) {
  const double k = static_cast<double>(in.k);
  const double d = static_cast<double>(in.n_dims);
  const double n = static_cast<double>(in.n_rows);
  return k * k * k * d * (1.0 + d) * (1.0 + d) * (1.0 + in.rho * in.rho) /
         (n * n);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

void PlannerInputs::validate() const {
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (n_rows < k) throw InvalidInput("N must be at least k");
  if (n_dims < 1) throw InvalidInput("d must be at least 1");
  if (!(epsilon_total > 0.0) || !std::isfinite(epsilon_total)) {
    throw InvalidInput("epsilon must be positive and finite");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidInput("rho must lie in [0,1]");
  if (!(mse_threshold > 0.0)) throw InvalidInput("MSE threshold must be positive");
  if (t_cap < 2) throw InvalidInput("iteration cap must be at least 2");
}

double minimal_iteration_budget(const PlannerInputs& in) {
  in.validate();
  return std::sqrt(2.0 / in.mse_threshold * shape_factor(in));
}

double expected_centroid_mse(const PlannerInputs& in, double eps_t) {
  if (!(eps_t > 0.0)) throw InvalidInput("eps_t must be positive");
  return 2.0 * shape_factor(in) / (eps_t * eps_t);
}

int iteration_count(double epsilon_total, double epsilon_m, int t_cap) {
  if (!(epsilon_total > 0.0) || !(epsilon_m > 0.0)) {
    throw InvalidInput("iteration_count needs positive budgets");
  }
  if (epsilon_total <= 2.0 * epsilon_m) return 2;
  const double ratio = std::floor(epsilon_total / epsilon_m);
  const double capped = std::min(static_cast<double>(t_cap), ratio);
  return std::max(2, static_cast<int>(capped));
}

BudgetPlan make_plan(const PlannerInputs& in,
                     std::optional<double> epsilon_m_override) {
  in.validate();
  BudgetPlan plan;
  plan.epsilon_total = in.epsilon_total;
  plan.epsilon_m_computed = minimal_iteration_budget(in);
  plan.epsilon_m = plan.epsilon_m_computed;
  if (epsilon_m_override) {
    if (!(*epsilon_m_override > 0.0)) {
      throw InvalidInput("eps_m override must be positive");
    }
    plan.epsilon_m_override = epsilon_m_override;
    plan.epsilon_m = *epsilon_m_override;
    if (*epsilon_m_override != plan.epsilon_m_computed) {
      plan.notes.push_back("eps_m override " + fmt(*epsilon_m_override) +
                           " replaces computed " +
                           fmt(plan.epsilon_m_computed) + " (ratio " +
                           fmt(*epsilon_m_override / plan.epsilon_m_computed) +
                           ")");
    }
  } else if (auto ref = reference_epsilon_m(in)) {
    plan.notes.push_back(
        "computed eps_m " + fmt(plan.epsilon_m_computed) +
        " differs from the published reference " + fmt(*ref) +
        " for this dataset shape (ratio " +
        fmt(*ref / plan.epsilon_m_computed) +
        "); pass an eps_m override to reproduce the published iteration "
        "counts");
  }
  plan.iterations = iteration_count(in.epsilon_total, plan.epsilon_m, in.t_cap);
  plan.epsilon_per_iter = in.epsilon_total / plan.iterations;
  const double split = plan.epsilon_per_iter / static_cast<double>(in.n_dims + 1);
  plan.epsilon_dim = split;
  plan.epsilon_count = split;
  return plan;
}

std::optional<double> reference_epsilon_m(const PlannerInputs& in) {
  if (in.rho != 0.225 || in.mse_threshold != 0.01) return std::nullopt;
  if (in.n_rows == 748 && in.n_dims == 4 && in.k == 2) return 0.65508;
  if (in.n_rows == 48842 && in.n_dims == 6 && in.k == 5) return 0.06799;
  return std::nullopt;
}

}  // namespace edpdcs
