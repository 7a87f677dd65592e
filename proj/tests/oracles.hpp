// Test-only reference computations. None of these call into the library's
// numeric paths; they exist to check them.
#ifndef EDPDCS_TESTS_ORACLES_HPP
#define EDPDCS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

// Direct double loop over clusters and their members.
inline double nicv(const Matrix& pts, const Matrix& centroids,
                   const std::vector<std::size_t>& labels) {
  long double total = 0.0L;
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (labels[i] != c) continue;
      for (std::size_t j = 0; j < pts[i].size(); ++j) {
        const long double diff = static_cast<long double>(pts[i][j]) - centroids[c][j];
        total += diff * diff;
      }
    }
  }
  return static_cast<double>(total / pts.size());
}

// Minimum NICV over every split of the rows into two non-empty groups, each
// represented by its own mean.
inline double best_two_partition_nicv(const Matrix& pts) {
  const std::size_t n = pts.size();
  const std::size_t d = pts.front().size();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    if (mask & 1) continue;  // each split once: row 0 always in group 0
    Matrix mean(2, std::vector<double>(d, 0.0));
    std::size_t cnt[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1;
      ++cnt[g];
      for (std::size_t j = 0; j < d; ++j) mean[g][j] += pts[i][j];
    }
    for (int g = 0; g < 2; ++g) {
      for (double& v : mean[g]) v /= static_cast<double>(cnt[g]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += sq_dist(pts[i], mean[(mask >> i) & 1]);
    best = std::min(best, total / static_cast<double>(n));
  }
  return best;
}

inline double laplace_cdf(double x, double b) {
  return x < 0.0 ? 0.5 * std::exp(x / b) : 1.0 - 0.5 * std::exp(-x / b);
}

// Two-sided one-sample Kolmogorov-Smirnov statistic against Lap(b).
inline double ks_statistic(std::vector<double> draws, double b) {
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = laplace_cdf(draws[i], b);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

// Asymptotic critical value of the KS statistic at alpha = 0.01.
inline double ks_critical_001(std::size_t n) {
  return 1.6276 / std::sqrt(static_cast<double>(n));
}

// eps_m evaluated term by term in long double, in a different order from the
// library: sqrt(200 * k^3 * d * (1+d)^2 * (1+rho^2)) / N for threshold 0.01.
inline double epsilon_m(long double n, long double d, long double k, long double rho,
                        long double threshold = 0.01L) {
  long double num = 2.0L / threshold;
  for (int i = 0; i < 3; ++i) num *= k;
  num *= d;
  num *= (1.0L + d);
  num *= (1.0L + d);
  num *= (1.0L + rho * rho);
  return static_cast<double>(std::sqrt(num) / n);
}

// Random points in [0,1]^d from a std engine, for property tests.
inline Matrix random_points(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  Matrix m(n, std::vector<double>(d));
  for (auto& row : m) {
    for (double& v : row) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  }
  return m;
}

inline std::vector<double> flatten(const Matrix& m) {
  std::vector<double> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

}  // namespace oracle

#endif  // EDPDCS_TESTS_ORACLES_HPP
