#include "edpdcs/core.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "edpdcs/errors.hpp"

namespace edpdcs {

Dataset::Dataset(std::vector<double> values, std::size_t n_dims,
                 bool normalized, std::string source_label)
    : values_(std::move(values)),
      n_dims_(n_dims),
      normalized_(normalized),
      source_label_(std::move(source_label)) {
  if (n_dims_ == 0) throw InvalidInput("dataset must have at least one dimension");
  if (values_.empty()) throw InvalidInput("dataset must have at least one row");
  if (values_.size() % n_dims_ != 0) {
    throw InvalidInput("dataset value count is not a multiple of its dimension");
  }
  n_rows_ = values_.size() / n_dims_;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!std::isfinite(v)) {
      throw InvalidInput("non-finite coordinate at row " +
                         std::to_string(i / n_dims_));
    }
    if (normalized_ && (v < 0.0 || v > 1.0)) {
      throw InvalidInput("coordinate outside [0,1] at row " +
                         std::to_string(i / n_dims_) +
                         " in a dataset flagged normalized");
    }
  }
}

Dataset Dataset::select_rows(std::span<const std::size_t> rows,
                             std::string label) const {
  if (rows.empty()) throw InvalidInput("cannot select zero rows");
  std::vector<double> out;
  out.reserve(rows.size() * n_dims_);
  for (std::size_t r : rows) {
    if (r >= n_rows_) throw InvalidInput("row index out of range");
    auto src = row(r);
    out.insert(out.end(), src.begin(), src.end());
  }
  return Dataset(std::move(out), n_dims_, normalized_,
                 label.empty() ? source_label_ : std::move(label));
}

std::vector<RowRange> partition_rows(std::size_t n_rows, std::size_t parts) {
  if (parts == 0 || parts > n_rows) {
    throw InvalidInput("partition count must be in [1, N]");
  }
  std::vector<RowRange> out;
  out.reserve(parts);
  const std::size_t base = n_rows / parts;
  const std::size_t extra = n_rows % parts;
  std::size_t begin = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::size_t len = base + (p < extra ? 1 : 0);
    out.push_back({begin, begin + len});
    begin += len;
  }
  return out;
}

CentroidSet::CentroidSet(std::vector<double> values, std::size_t n_dims,
                         bool noisy)
    : values_(std::move(values)), n_dims_(n_dims), noisy_(noisy) {
  if (n_dims_ == 0) throw InvalidInput("centroids must have at least one dimension");
  if (values_.empty() || values_.size() % n_dims_ != 0) {
    throw InvalidInput("centroid set must hold k >= 1 full centroids");
  }
}

void ClusterAggregate::merge(const ClusterAggregate& other) {
  if (other.cluster_index != cluster_index) {
    throw InvalidInput("merging aggregates of different clusters");
  }
  if (sums.empty()) sums.assign(other.sums.size(), 0.0);
  if (other.sums.size() != sums.size()) {
    throw InvalidInput("merging aggregates of different dimension");
  }
  count += other.count;
  for (std::size_t i = 0; i < sums.size(); ++i) sums[i] += other.sums[i];
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw InvalidInput("squared_distance: dimension mismatch (" +
                       std::to_string(a.size()) + " vs " +
                       std::to_string(b.size()) + ")");
  }
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double diff = a[j] - b[j];
    acc += diff * diff;
  }
  return acc;
}

std::size_t nearest_centroid(std::span<const double> x, const CentroidSet& cs) {
  if (cs.k() == 0) throw InvalidInput("nearest_centroid: empty centroid set");
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < cs.k(); ++j) {
    const double dist = squared_distance(x, cs.centroid(j));
    // Strict comparison keeps the lowest index on ties.
    if (dist < best_dist) {
      best_dist = dist;
      best = j;
    }
  }
  return best;
}

Assignment assign_all(const Dataset& data, const CentroidSet& cs) {
  Assignment asg;
  asg.labels.resize(data.n_rows());
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    asg.labels[i] = nearest_centroid(data.row(i), cs);
  }
  return asg;
}

std::vector<double> column_means(const Dataset& data) {
  std::vector<double> mean(data.n_dims(), 0.0);
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    auto r = data.row(i);
    for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += r[j];
  }
  for (double& m : mean) m /= static_cast<double>(data.n_rows());
  return mean;
}

}  // namespace edpdcs
