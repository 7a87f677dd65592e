#ifndef EDPDCS_ENGINE_HPP
#define EDPDCS_ENGINE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "edpdcs/canopy.hpp"
#include "edpdcs/core.hpp"
#include "edpdcs/laplace.hpp"
#include "edpdcs/planner.hpp"
#include "edpdcs/report.hpp"

namespace edpdcs {

struct EngineConfig {
  Variant variant = Variant::kEdpdcs;
  std::size_t n_partitions = 1;
  std::uint64_t master_seed = 0;
  bool clamp_centroids = true;
  double min_count = 1.0;          // floor for noisy denominators
  std::size_t ru_max_iters = 10;
  double ru_shift_tol = 1e-4;
  std::size_t nonprivate_max_iters = 100;
  double nonprivate_shift_tol = 1e-9;
  std::size_t threads = 0;         // 0 = hardware concurrency
  bool diagnostics = false;        // keep per-iteration aggregates
};

// Fixed-point accumulator for coordinates in [0,1] (scale 2^64, 128-bit).
// Integer addition is associative, so a sum does not depend on how rows
// were split into partitions or in which order partials are merged.
class FixedSum {
 public:
  void add(double v);
  void add(const FixedSum& other) { acc_ += other.acc_; }
  double value() const;
  bool operator==(const FixedSum&) const = default;

 private:
  __extension__ typedef __int128 Int128;
  Int128 acc_ = 0;
};

// Map-side statistics of one cluster within one partition.
struct PartialAggregate {
  std::size_t cluster_index = 0;
  std::uint64_t count = 0;
  std::vector<FixedSum> sums;

  void merge(const PartialAggregate& other);
  ClusterAggregate to_aggregate() const;
};

// Map task: assigns each row in `rows` to its nearest centroid and returns
// the partial count and sums of every cluster that received at least one
// row, in ascending cluster order.
std::vector<PartialAggregate> map_assign(const Dataset& data, RowRange rows,
                                         const CentroidSet& cs);

struct ReduceParams {
  bool dp_enabled = false;
  double eps_dim = 0.0;
  double eps_count = 0.0;
  double min_count = 1.0;
  bool clamp = true;
};

struct ReduceOutput {
  std::vector<double> centroid;
  ClusterAggregate exact;
  ClusterAggregate released;  // equals exact when dp is off
  bool retained_previous = false;
};

// Reduce task for one cluster. Partials must be given in ascending
// partition order. With dp on, perturbs the merged (C, S) once with
// `sampler` and returns S' / max(C', min_count), clamped. With dp off, an
// empty cluster keeps `previous`.
ReduceOutput reduce_cluster(std::span<const PartialAggregate> partials,
                            std::size_t cluster_index, std::size_t n_dims,
                            const ReduceParams& params, LaplaceSampler* sampler,
                            std::span<const double> previous, bool data_normalized);

struct StepOutput {
  CentroidSet centroids;
  std::vector<ClusterAggregate> exact;
  std::vector<ClusterAggregate> released;
  std::uint64_t noise_draws = 0;
};

// One map/reduce Lloyd iteration over the given partitions. Reduce task j
// draws its noise from stream_seed(master_seed, iteration, j).
StepOutput lloyd_step(const Dataset& data, std::span<const RowRange> partitions,
                      const CentroidSet& current, std::uint64_t iteration,
                      const ReduceParams& params, std::uint64_t master_seed,
                      std::size_t threads);

struct RunResult {
  CentroidSet centroids;
  Assignment assignment;
  RunReport report;
  std::optional<InitResult> init;  // EDPDCS only
};

// k distinct rows of `data`, chosen uniformly with the given seed.
CentroidSet random_initial_centroids(const Dataset& data, std::size_t k,
                                     std::uint64_t seed);

// Private canopy initialization charged as iteration 1, then T - 1 noisy
// Lloyd iterations at eps/T each. The plan's N, d and k come from `data`.
RunResult run_edpdcs(const Dataset& data, std::size_t k, PlannerInputs in,
                     const CanopyParams& canopy, const EngineConfig& cfg,
                     std::optional<double> epsilon_m_override = std::nullopt);

// RF_DPKM: random rows, T from the planner, eps/T per iteration.
// RU_DPKM: random rows, iteration t charges eps/2^(t+1), stops on small shift
// or ru_max_iters. NONPRIVATE: plain Lloyd from random rows (in.epsilon_total
// is ignored).
RunResult run_baseline(const Dataset& data, std::size_t k, PlannerInputs in,
                       const EngineConfig& cfg,
                       std::optional<double> epsilon_m_override = std::nullopt);

// Non-private Lloyd from the given centroids until the largest centroid move
// is below cfg.nonprivate_shift_tol or nonprivate_max_iters is reached.
RunResult run_lloyd(const Dataset& data, const CentroidSet& init,
                    const EngineConfig& cfg);

// Dispatches on cfg.variant.
RunResult run_variant(const Dataset& data, std::size_t k, const PlannerInputs& in,
                      const CanopyParams& canopy, const EngineConfig& cfg,
                      std::optional<double> epsilon_m_override = std::nullopt);

}  // namespace edpdcs

#endif  // EDPDCS_ENGINE_HPP
