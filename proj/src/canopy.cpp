#include "edpdcs/canopy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "edpdcs/errors.hpp"
#include "edpdcs/laplace.hpp"

namespace edpdcs {
namespace {

constexpr std::uint64_t kSubsampleStream = 0x5ab5a3b1e0000001ULL;
constexpr std::uint64_t kFillStream = 0xf111f111f111f111ULL;
constexpr double kMinTightRadius = 1e-9;

}  // namespace

std::vector<Canopy> run_canopy(const Dataset& subsample, double t1, double t2) {
  if (!(t2 > 0.0) || !(t1 > t2)) {
    throw InvalidInput("canopy thresholds must satisfy t1 > t2 > 0");
  }
  const double t1_sq = t1 * t1;
  const double t2_sq = t2 * t2;

  std::vector<std::size_t> working(subsample.n_rows());
  std::iota(working.begin(), working.end(), std::size_t{0});

  std::vector<Canopy> canopies;
  while (!working.empty()) {
    Canopy canopy;
    canopy.center = working.front();
    canopy.members.push_back(canopy.center);
    canopy.tight_members.push_back(canopy.center);
    const auto center = subsample.row(canopy.center);

    std::vector<std::size_t> kept;
    kept.reserve(working.size());
    for (std::size_t pos = 1; pos < working.size(); ++pos) {
      const std::size_t idx = working[pos];
      const double dist = squared_distance(center, subsample.row(idx));
      if (dist < t1_sq) canopy.members.push_back(idx);
      if (dist < t2_sq) {
        canopy.tight_members.push_back(idx);
      } else {
        kept.push_back(idx);
      }
    }
    working = std::move(kept);
    canopies.push_back(std::move(canopy));
  }
  return canopies;
}

double mean_pairwise_distance(const Dataset& data) {
  const std::size_t n = data.n_rows();
  if (n < 2) return 0.0;
  double total = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      total += std::sqrt(squared_distance(data.row(a), data.row(b)));
    }
  }
  return total / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

std::vector<std::size_t> rank_canopies(const std::vector<Canopy>& canopies,
                                       std::size_t k) {
  std::vector<std::size_t> order(canopies.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return canopies[a].members.size() > canopies[b].members.size();
  });
  if (order.size() > k) order.resize(k);
  return order;
}

void check_tight_sets_disjoint(const std::vector<Canopy>& canopies) {
  std::vector<std::size_t> all;
  for (const auto& c : canopies) {
    all.insert(all.end(), c.tight_members.begin(), c.tight_members.end());
  }
  std::sort(all.begin(), all.end());
  if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
    throw InvariantViolation("canopy tight-member sets overlap");
  }
}

std::vector<std::size_t> draw_subsample(std::size_t n_rows, std::size_t size,
                                        std::uint64_t seed) {
  if (size == 0 || size > n_rows) {
    throw InvalidInput("subsample size must be in [1, N]");
  }
  // Partial Fisher-Yates driven by 53-bit uniforms; std::uniform_int_distribution
  // is not reproducible across standard libraries.
  std::vector<std::size_t> idx(n_rows);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  LaplaceSampler rng(seed);
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t span = n_rows - i;
    auto pick = static_cast<std::size_t>(rng.uniform_open() * static_cast<double>(span));
    if (pick >= span) pick = span - 1;
    std::swap(idx[i], idx[i + pick]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end());
  return idx;
}

InitResult select_initial_centroids(const Dataset& data, std::size_t k,
                                    const CanopyParams& params,
                                    const BudgetPlan& plan,
                                    std::uint64_t master_seed,
                                    std::uint64_t iteration, double min_count,
                                    bool clamp) {
  if (k == 0) throw InvalidInput("k must be at least 1");
  if (!data.normalized()) {
    throw InvalidInput("canopy initialization requires normalized data");
  }
  const std::size_t d = data.n_dims();

  const std::size_t sub_size =
      std::min(params.subsample_size.value_or(20 * k), data.n_rows());
  std::vector<std::size_t> rows =
      draw_subsample(data.n_rows(), sub_size,
                     stream_seed(params.seed, 0, kSubsampleStream));
  const Dataset sub = data.select_rows(rows, data.source_label() + "/canopy");

  double t2 = params.t2.value_or(0.0);
  double t1 = params.t1.value_or(0.0);
  if (!params.t2) {
    t2 = std::max(0.5 * mean_pairwise_distance(sub), kMinTightRadius);
    if (params.t1 && *params.t1 <= t2) t2 = 0.5 * *params.t1;
  }
  if (!params.t1) t1 = 2.0 * t2;

  std::vector<Canopy> canopies = run_canopy(sub, t1, t2);
  int retries = 0;
  while (canopies.size() < k && retries < params.max_retries) {
    t1 *= 0.5;
    t2 *= 0.5;
    ++retries;
    canopies = run_canopy(sub, t1, t2);
  }
  check_tight_sets_disjoint(canopies);

  std::vector<std::size_t> selected = rank_canopies(canopies, k);

  std::vector<double> noisy;
  std::vector<double> exact;
  noisy.reserve(k * d);
  exact.reserve(k * d);
  std::uint64_t draws = 0;
  for (std::size_t slot = 0; slot < selected.size(); ++slot) {
    const Canopy& c = canopies[selected[slot]];
    ClusterAggregate agg;
    agg.cluster_index = slot;
    agg.count = static_cast<double>(c.tight_members.size());
    agg.sums.assign(d, 0.0);
    for (std::size_t m : c.tight_members) {
      auto r = sub.row(m);
      for (std::size_t i = 0; i < d; ++i) agg.sums[i] += r[i];
    }
    for (std::size_t i = 0; i < d; ++i) exact.push_back(agg.sums[i] / agg.count);

    LaplaceSampler sampler(stream_seed(master_seed, iteration, slot));
    const ClusterAggregate released = perturb_aggregate(
        agg, plan.epsilon_count, plan.epsilon_dim, sampler, data.normalized());
    draws += sampler.draw_count();
    const double denom = std::max(released.count, min_count);
    for (std::size_t i = 0; i < d; ++i) {
      double v = released.sums[i] / denom;
      if (clamp) v = std::clamp(v, 0.0, 1.0);
      noisy.push_back(v);
    }
  }

  std::vector<std::string> notes;
  std::size_t random_fill = 0;
  if (selected.size() < k) {
    const std::size_t missing = k - selected.size();
    LaplaceSampler fill(stream_seed(params.seed, 0, kFillStream));
    for (std::size_t s = 0; s < missing * d; ++s) {
      const double v = fill.uniform_open();
      noisy.push_back(v);
      exact.push_back(v);
    }
    random_fill = missing;
    std::ostringstream note;
    note << "canopy produced " << selected.size() << " of " << k
         << " canopies after " << retries << " radius halvings; filled "
         << missing << " centroid(s) with uniform random points";
    notes.push_back(note.str());
  } else if (retries > 0) {
    notes.push_back("canopy radii halved " + std::to_string(retries) +
                        " time(s) to reach k canopies");
  }

  return InitResult{CentroidSet(std::move(noisy), d, true),
                    CentroidSet(std::move(exact), d, false),
                    std::move(canopies),
                    std::move(selected),
                    std::move(rows),
                    t1,
                    t2,
                    retries,
                    random_fill,
                    draws,
                    std::move(notes)};
}

}  // namespace edpdcs
