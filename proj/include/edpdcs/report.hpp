#ifndef EDPDCS_REPORT_HPP
#define EDPDCS_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "edpdcs/core.hpp"
#include "edpdcs/ledger.hpp"
#include "edpdcs/planner.hpp"
#include "json.hpp"

namespace edpdcs {

enum class Variant { kEdpdcs, kRfDpkm, kRuDpkm, kNonPrivate };

std::string_view variant_name(Variant v);
// Accepts the names printed by variant_name, case-insensitively, with '-'
// or '_' as separators. Throws InvalidInput otherwise.
Variant parse_variant(std::string_view name);

struct IterationTrace {
  std::size_t iteration = 0;     // 1-based; EDPDCS initialization is 1
  std::string phase;             // "init" or "lloyd"
  double budget_charged = 0.0;   // 0 for the non-private variant
  std::uint64_t noise_draws = 0;
  double nicv_after = 0.0;
  double centroid_shift = 0.0;   // max Euclidean move of any centroid
  std::optional<CentroidSet> centroids_before;
  std::optional<CentroidSet> centroids_after;
  // Diagnostic mode only.
  std::vector<ClusterAggregate> exact_aggregates;
  std::vector<ClusterAggregate> noisy_aggregates;
};

struct PhaseTimings {
  double init_ms = 0.0;
  double iterations_ms = 0.0;
  double total_ms = 0.0;
};

struct RunReport {
  Variant variant = Variant::kEdpdcs;
  double epsilon = 0.0;          // 0 for the non-private variant
  std::uint64_t seed = 0;
  std::size_t k = 0;
  std::size_t n_rows = 0;
  std::size_t n_dims = 0;
  double nicv = 0.0;
  std::size_t iterations_run = 0;
  double budget_spent = 0.0;
  double budget_residual = 0.0;  // RU leaves part of the budget unspent
  std::uint64_t noise_draws = 0;
  std::optional<BudgetPlan> plan;
  std::vector<LedgerEntry> ledger;
  std::vector<IterationTrace> iterations;
  std::optional<CentroidSet> initial_centroids;
  std::optional<CentroidSet> final_centroids;
  std::vector<std::string> notes;
  // Execution details; they do not influence any released value.
  std::size_t n_partitions = 1;
  PhaseTimings wall_clock_ms;
};

// Full report. With include_execution = false the partition count and the
// timings are left out, which makes the output a pure function of data,
// configuration and seed.
nlohmann::json to_json(const RunReport& report, bool include_execution = true);
nlohmann::json to_json(const BudgetPlan& plan);
nlohmann::json to_json(const CentroidSet& cs);
nlohmann::json to_json(const ClusterAggregate& agg);

}  // namespace edpdcs

#endif  // EDPDCS_REPORT_HPP
