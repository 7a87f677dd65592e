#include "edpdcs/laplace.hpp"

#include <cmath>

#include "edpdcs/errors.hpp"

namespace edpdcs {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double laplace_inverse_cdf(double u, double scale) {
  const double centered = u - 0.5;
  const double sign = centered < 0.0 ? -1.0 : (centered > 0.0 ? 1.0 : 0.0);
  return -scale * sign * std::log(1.0 - 2.0 * std::abs(centered));
}

std::uint64_t stream_seed(std::uint64_t master_seed, std::uint64_t iteration,
                          std::uint64_t cluster) {
  std::uint64_t h = splitmix64(master_seed);
  h = splitmix64(h ^ iteration);
  h = splitmix64(h ^ (cluster + 0x632be59bd9b4e019ULL));
  return h;
}

double LaplaceSampler::uniform_open() {
  ++draw_count_;
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double LaplaceSampler::sample(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw InvalidInput("Laplace scale must be positive and finite");
  }
  return laplace_inverse_cdf(uniform_open(), scale);
}

ClusterAggregate perturb_aggregate(const ClusterAggregate& agg,
                                   double eps_count, double eps_dim,
                                   LaplaceSampler& sampler,
                                   bool data_normalized) {
  if (!data_normalized) {
    throw InvalidInput(
        "refusing to perturb aggregates of unnormalized data: unit "
        "sensitivity does not hold");
  }
  if (!(eps_count > 0.0) || !(eps_dim > 0.0)) {
    throw InvalidInput("per-query budgets must be positive");
  }
  ClusterAggregate out = agg;
  out.count += sampler.sample(kCountSensitivity / eps_count);
  for (double& s : out.sums) s += sampler.sample(kSumSensitivity / eps_dim);
  return out;
}

}  // namespace edpdcs
