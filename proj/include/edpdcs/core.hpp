#ifndef EDPDCS_CORE_HPP
#define EDPDCS_CORE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace edpdcs {

// N x d matrix of points, row-major, one point per row. Immutable once built.
class Dataset {
 public:
  // Throws InvalidInput if the shape is inconsistent, N or d is zero, any
  // value is non-finite, or `normalized` is set while a coordinate lies
  // outside [0, 1].
  Dataset(std::vector<double> values, std::size_t n_dims, bool normalized,
          std::string source_label = {});

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_dims() const { return n_dims_; }
  bool normalized() const { return normalized_; }
  const std::string& source_label() const { return source_label_; }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * n_dims_, n_dims_};
  }
  std::span<const double> values() const { return values_; }

  // The listed rows, in the given order, as a new dataset. Throws
  // InvalidInput when `rows` is empty or an index is out of range.
  Dataset select_rows(std::span<const std::size_t> rows,
                      std::string label = {}) const;

 private:
  std::vector<double> values_;
  std::size_t n_rows_ = 0;
  std::size_t n_dims_ = 0;
  bool normalized_ = false;
  std::string source_label_;
};

// Half-open row interval of a dataset. Map tasks work on these so that a
// partition never copies point data.
struct RowRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
};

// Splits [0, n_rows) into `parts` contiguous, disjoint ranges whose sizes
// differ by at most one. Requires 1 <= parts <= n_rows.
std::vector<RowRange> partition_rows(std::size_t n_rows, std::size_t parts);

class CentroidSet {
 public:
  CentroidSet(std::vector<double> values, std::size_t n_dims, bool noisy);

  std::size_t k() const { return n_dims_ == 0 ? 0 : values_.size() / n_dims_; }
  std::size_t n_dims() const { return n_dims_; }
  bool noisy() const { return noisy_; }

  std::span<const double> centroid(std::size_t j) const {
    return {values_.data() + j * n_dims_, n_dims_};
  }
  std::span<const double> values() const { return values_; }

  bool operator==(const CentroidSet&) const = default;

 private:
  std::vector<double> values_;
  std::size_t n_dims_ = 0;
  bool noisy_ = false;
};

struct Assignment {
  std::vector<std::size_t> labels;

  bool operator==(const Assignment&) const = default;
};

// Sufficient statistics of one cluster: count C and per-dimension sums S_i.
// Exact partials come out of the map step; the reduce step may perturb them.
struct ClusterAggregate {
  std::size_t cluster_index = 0;
  double count = 0.0;
  std::vector<double> sums;

  // Adds `other` into this aggregate. Both must describe the same cluster.
  void merge(const ClusterAggregate& other);
};

// Sum over dimensions of (a_j - b_j)^2. Throws InvalidInput on a dimension
// mismatch.
double squared_distance(std::span<const double> a, std::span<const double> b);

// Index of the centroid closest to x; the lowest index wins ties.
std::size_t nearest_centroid(std::span<const double> x, const CentroidSet& cs);

// Labels every row of `data` with its nearest centroid.
Assignment assign_all(const Dataset& data, const CentroidSet& cs);

// Per-column mean of the dataset.
std::vector<double> column_means(const Dataset& data);

}  // namespace edpdcs

#endif  // EDPDCS_CORE_HPP
