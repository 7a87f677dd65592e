#ifndef EDPDCS_EVALUATION_HPP
#define EDPDCS_EVALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edpdcs/canopy.hpp"
#include "edpdcs/core.hpp"
#include "edpdcs/engine.hpp"
#include "edpdcs/planner.hpp"
#include "edpdcs/report.hpp"
#include "json.hpp"

namespace edpdcs {

// Normalized intra-cluster variance: mean over all rows of the squared
// distance to the centroid of the row's assigned cluster.
double nicv(const Dataset& data, const CentroidSet& cs, const Assignment& asg);

struct NicvStats {
  std::size_t count = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, 0 for a single run
};

NicvStats summarize(const std::vector<double>& values);

struct SummaryCell {
  Variant variant = Variant::kEdpdcs;
  double epsilon = 0.0;
  NicvStats stats;
  std::size_t failures = 0;
};

struct ComparisonSummary {
  std::vector<SummaryCell> cells;    // epsilon-major, then variant order
  std::optional<SummaryCell> floor;  // NONPRIVATE reference
  std::vector<RunReport> runs;
  std::vector<std::string> notes;

  const SummaryCell* find(Variant v, double epsilon) const;
};

struct CompareOptions {
  std::vector<double> epsilons{0.5, 1.0, 1.5, 2.0, 3.0};
  std::vector<Variant> variants{Variant::kEdpdcs, Variant::kRfDpkm, Variant::kRuDpkm};
  std::size_t n_seeds = 30;
  std::uint64_t base_seed = 1;
  bool include_floor = true;
  std::size_t sweep_threads = 0;  // concurrent runs; 0 = hardware concurrency
};

// Runs every (epsilon, variant, seed) combination; seed s uses master seed
// base_seed + s for the engine and for the canopy subsample. Engine errors
// are caught per run and counted as failures in the cell.
ComparisonSummary compare_variants(const Dataset& data, std::size_t k,
                                   const PlannerInputs& planner,
                                   const CanopyParams& canopy,
                                   const EngineConfig& engine,
                                   const CompareOptions& options,
                                   std::optional<double> epsilon_m_override = std::nullopt);

// Columns: variant,epsilon,seed_count,mean_nicv,sd_nicv. The floor row, if
// any, comes last with epsilon "inf".
std::string summary_csv(const ComparisonSummary& summary);
nlohmann::json to_json(const ComparisonSummary& summary, bool include_execution = true);

struct TimingCell {
  std::size_t n_rows = 0;
  std::size_t n_partitions = 0;
  double median_ms = 0.0;
  std::vector<double> samples_ms;
};

struct TimingOptions {
  std::vector<std::size_t> sizes;       // empty = the dataset's own N
  std::vector<std::size_t> partitions{1, 4};
  std::size_t repetitions = 3;
};

// Rows of `data` resized to n: a seeded subsample when n <= N, otherwise the
// rows repeated cyclically.
Dataset resize_dataset(const Dataset& data, std::size_t n, std::uint64_t seed);

// Wall-clock of full runs per (size, partitions) cell, median of the
// repetitions. Each run uses as many map threads as partitions.
std::vector<TimingCell> timing_sweep(const Dataset& data, std::size_t k,
                                     const PlannerInputs& planner,
                                     const CanopyParams& canopy,
                                     const EngineConfig& engine,
                                     const TimingOptions& options,
                                     std::optional<double> epsilon_m_override = std::nullopt);

// Columns: n_rows,n_partitions,median_ms,repetitions.
std::string timing_csv(const std::vector<TimingCell>& cells);

}  // namespace edpdcs

#endif  // EDPDCS_EVALUATION_HPP
