#include "edpdcs/report.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "edpdcs/errors.hpp"

namespace edpdcs {

using nlohmann::json;

std::string_view variant_name(Variant v) {
  switch (v) {
    case Variant::kEdpdcs: return "EDPDCS";
    case Variant::kRfDpkm: return "RF_DPKM";
    case Variant::kRuDpkm: return "RU_DPKM";
    case Variant::kNonPrivate: return "NONPRIVATE";
  }
  return "UNKNOWN";
}

Variant parse_variant(std::string_view name) {
  std::string norm;
  for (char c : name) {
    if (c == '-') c = '_';
    norm.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (norm == "EDPDCS") return Variant::kEdpdcs;
  if (norm == "RF_DPKM" || norm == "RFDPKM" || norm == "RF") return Variant::kRfDpkm;
  if (norm == "RU_DPKM" || norm == "RUDPKM" || norm == "RU") return Variant::kRuDpkm;
  if (norm == "NONPRIVATE" || norm == "NON_PRIVATE") return Variant::kNonPrivate;
  throw InvalidInput("unknown variant '" + std::string(name) + "'");
}

json to_json(const CentroidSet& cs) {
  json rows = json::array();
  for (std::size_t j = 0; j < cs.k(); ++j) {
    auto c = cs.centroid(j);
    rows.push_back(std::vector<double>(c.begin(), c.end()));
  }
  return {{"k", cs.k()}, {"noisy", cs.noisy()}, {"centroids", rows}};
}

json to_json(const ClusterAggregate& agg) {
  return {{"cluster", agg.cluster_index}, {"count", agg.count}, {"sums", agg.sums}};
}

json to_json(const BudgetPlan& plan) {
  json j = {
      {"epsilon", plan.epsilon_total},
      {"epsilon_m_computed", plan.epsilon_m_computed},
      {"epsilon_m", plan.epsilon_m},
      {"T", plan.iterations},
      {"epsilon_per_iter", plan.epsilon_per_iter},
      {"epsilon_dim", plan.epsilon_dim},
      {"epsilon_count", plan.epsilon_count},
      {"notes", plan.notes},
  };
  j["epsilon_m_override"] =
      plan.epsilon_m_override ? json(*plan.epsilon_m_override) : json(nullptr);
  return j;
}

json to_json(const RunReport& r, bool include_execution) {
  json iters = json::array();
  for (const auto& t : r.iterations) {
    json it = {
        {"iteration", t.iteration},
        {"phase", t.phase},
        {"budget_charged", t.budget_charged},
        {"noise_draws", t.noise_draws},
        {"nicv_after", t.nicv_after},
        {"centroid_shift", t.centroid_shift},
    };
    if (t.centroids_after) it["centroids_after"] = to_json(*t.centroids_after)["centroids"];
    if (!t.exact_aggregates.empty()) {
      json ex = json::array();
      json no = json::array();
      for (const auto& a : t.exact_aggregates) ex.push_back(to_json(a));
      for (const auto& a : t.noisy_aggregates) no.push_back(to_json(a));
      it["exact_aggregates"] = ex;
      it["noisy_aggregates"] = no;
    }
    iters.push_back(std::move(it));
  }
  json ledger = json::array();
  for (const auto& e : r.ledger) ledger.push_back({{"phase", e.phase}, {"amount", e.amount}});

  json j = {
      {"variant", variant_name(r.variant)},
      {"epsilon", r.epsilon},
      {"seed", r.seed},
      {"k", r.k},
      {"n_rows", r.n_rows},
      {"n_dims", r.n_dims},
      {"nicv", r.nicv},
      {"iterations_run", r.iterations_run},
      {"budget_spent", r.budget_spent},
      {"budget_residual", r.budget_residual},
      {"noise_draws", r.noise_draws},
      {"ledger", ledger},
      {"iterations", iters},
      {"notes", r.notes},
  };
  j["plan"] = r.plan ? to_json(*r.plan) : json(nullptr);
  j["initial_centroids"] = r.initial_centroids ? to_json(*r.initial_centroids) : json(nullptr);
  j["final_centroids"] = r.final_centroids ? to_json(*r.final_centroids) : json(nullptr);
  if (include_execution) {
    j["execution"] = {
        {"n_partitions", r.n_partitions},
        {"timing_note", "wall-clock values vary between runs"},
        {"wall_clock_ms",
         {{"init", r.wall_clock_ms.init_ms},
          {"iterations", r.wall_clock_ms.iterations_ms},
          {"total", r.wall_clock_ms.total_ms}}},
    };
  }
  return j;
}

}  // namespace edpdcs
