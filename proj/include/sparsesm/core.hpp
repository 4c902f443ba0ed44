#pragma once

#include <Eigen/Core>
#include <cstddef>
#include <span>
#include <vector>

#include "sparsesm/error.hpp"

namespace sparsesm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// n x p observation matrix (row = observation). Always finite and non-empty.
class DataMatrix {
 public:
  const Matrix& values() const noexcept { return values_; }
  Index n() const noexcept { return values_.rows(); }
  Index p() const noexcept { return values_.cols(); }
  auto row(Index i) const { return values_.row(i); }
  /// p x n copy with one observation per column.
  const Matrix& by_column() const noexcept { return columns_; }

  /// Rows selected by `rows`, in that order.
  Matrix gather_rows(std::span<const Index> rows) const;
  /// Columns selected by `cols`, in that order.
  DataMatrix select_columns(std::span<const Index> cols) const;

  friend DataMatrix validate_matrix(Matrix raw);

 private:
  explicit DataMatrix(Matrix values) : values_(std::move(values)), columns_(values_.transpose()) {}
  Matrix values_;
  Matrix columns_;
};

/// Throws EmptyInput or NonFiniteEntry(row, col) with 1-based coordinates.
DataMatrix validate_matrix(Matrix raw);

enum class Standardization { Robust, Classical };

/// Robust: center by column median, scale by MAD. Classical: mean / sample sd.
/// Columns with zero scale are centered and left unscaled.
DataMatrix standardize_columns(const DataMatrix& X,
                               Standardization kind = Standardization::Robust);

/// Cluster labels. Stored 0-based (0..K-1); file and CLI surfaces use 1..K.
class Partition {
 public:
  Partition() = default;
  Partition(std::vector<int> labels, int K);

  static Partition from_one_based(const std::vector<int>& labels, int K);

  const std::vector<int>& labels() const noexcept { return labels_; }
  int K() const noexcept { return K_; }
  std::size_t n() const noexcept { return labels_.size(); }
  int operator[](std::size_t i) const { return labels_[i]; }

  std::vector<std::vector<Index>> clusters() const;
  std::vector<std::size_t> sizes() const;
  std::vector<int> one_based() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<int> labels_;
  int K_ = 0;
};

/// K x p matrix of cluster centers, one row per cluster.
using CenterSet = Matrix;

struct FitDiagnostics {
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
  int empty_cluster_repairs = 0;
  int degenerate_cluster_repairs = 0;
  int median_nonconvergence = 0;
};

double median_inplace(std::span<double> values);
double median_of(std::span<const double> values);

}  // namespace sparsesm
