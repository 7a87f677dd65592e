#ifndef EDPDCS_LAPLACE_HPP
#define EDPDCS_LAPLACE_HPP

#include <cstdint>
#include <random>

#include "edpdcs/core.hpp"

namespace edpdcs {

// Global sensitivity of the count and of every per-dimension sum when the
// data lives in [0,1]^d.
inline constexpr double kCountSensitivity = 1.0;
inline constexpr double kSumSensitivity = 1.0;

// Inverse CDF of the zero-mean Laplace distribution with scale b, evaluated
// at u in (0, 1).
double laplace_inverse_cdf(double u, double scale);

// Deterministic 64-bit mix of (master seed, iteration, cluster). Reduce
// tasks seed their private sampler with this so that noise does not depend
// on scheduling or partition count.
std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t iteration,
                          std::uint64_t cluster);

// Seeded source of Laplace noise. Single owner; not thread-safe.
class LaplaceSampler {
 public:
  explicit LaplaceSampler(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  // One draw of Lap(scale). Throws InvalidInput unless scale > 0.
  double sample(double scale);

  // Uniform on the open interval (0, 1) with 53 random bits. Counts as a
  // draw.
  double uniform_open();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t draw_count() const { return draw_count_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::uint64_t draw_count_ = 0;
};

// count' = count + Lap(1/eps_count), sums'_i = sums_i + Lap(1/eps_dim).
// Consumes exactly d + 1 draws, count first. Refuses (InvalidInput) when the
// data is not normalized, since the unit sensitivities would not hold.
ClusterAggregate perturb_aggregate(const ClusterAggregate& agg,
                                   double eps_count, double eps_dim,
                                   LaplaceSampler& sampler,
                                   bool data_normalized);

}  // namespace edpdcs

#endif  // EDPDCS_LAPLACE_HPP
