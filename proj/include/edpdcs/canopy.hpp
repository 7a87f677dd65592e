#ifndef EDPDCS_CANOPY_HPP
#define EDPDCS_CANOPY_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "edpdcs/core.hpp"
#include "edpdcs/planner.hpp"

namespace edpdcs {

struct CanopyParams {
  // Loose and tight radii (Euclidean, not squared). Unset means derived from
  // the subsample: t2 = half the mean pairwise distance, t1 = 2 * t2.
  std::optional<double> t1;
  std::optional<double> t2;
  // Unset means 20 * k, capped at N.
  std::optional<std::size_t> subsample_size;
  std::uint64_t seed = 0;
  // How many times both radii are halved when fewer than k canopies form.
  int max_retries = 3;
};

struct Canopy {
  std::size_t center = 0;                  // row index in the subsample
  std::vector<std::size_t> members;        // distance < t1, includes center
  std::vector<std::size_t> tight_members;  // distance < t2, includes center
};

// One pass of canopy pre-clustering. Seeds are popped in ascending row
// order; every remaining point within t1 of the seed joins the canopy and
// every point within t2 leaves the working set for good. Requires
// t1 > t2 > 0.
std::vector<Canopy> run_canopy(const Dataset& subsample, double t1, double t2);

// Mean Euclidean distance over all unordered pairs of rows; 0 for one row.
double mean_pairwise_distance(const Dataset& data);

// Indices of the k canopies with the most (loose) members, largest first;
// earlier canopies win ties. Returns fewer than k when fewer exist.
std::vector<std::size_t> rank_canopies(const std::vector<Canopy>& canopies,
                                       std::size_t k);

// Throws InvariantViolation if any two tight-member sets intersect.
void check_tight_sets_disjoint(const std::vector<Canopy>& canopies);

// Sorted row indices of a seeded uniform sample without replacement.
std::vector<std::size_t> draw_subsample(std::size_t n_rows, std::size_t size,
                                        std::uint64_t seed);

struct InitResult {
  CentroidSet centroids;        // released, noisy, clamped
  CentroidSet exact_centroids;  // tight-member means before noise
  std::vector<Canopy> canopies;
  std::vector<std::size_t> selected;
  std::vector<std::size_t> subsample_rows;
  double t1 = 0.0;
  double t2 = 0.0;
  int retries = 0;
  std::size_t random_fill = 0;  // slots filled with data-independent points
  std::uint64_t noise_draws = 0;
  std::vector<std::string> notes;
};

// Private initial centroids. Each selected canopy releases
//   o_i = (sum_{tight} x_i + Lap(1/eps_i)) / max(|tight| + Lap(1/eps_0), min_count)
// clamped to [0,1] when `clamp` is set. Noise for canopy slot j comes from
// stream_seed(master_seed, iteration, j). The caller charges the phase.
InitResult select_initial_centroids(const Dataset& data, std::size_t k,
                                    const CanopyParams& params,
                                    const BudgetPlan& plan,
                                    std::uint64_t master_seed,
                                    std::uint64_t iteration = 1,
                                    double min_count = 1.0, bool clamp = true);

}  // namespace edpdcs

#endif  // EDPDCS_CANOPY_HPP
