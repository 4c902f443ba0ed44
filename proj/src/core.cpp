#include "sparsesm/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sparsesm {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyActiveSet: return "EmptyActiveSet";
    case ErrorCode::InvalidMetric: return "InvalidMetric";
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::RaggedRows: return "RaggedRows";
    case ErrorCode::NonNumericCell: return "NonNumericCell";
    case ErrorCode::UnknownLabelColumn: return "UnknownLabelColumn";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

DataMatrix validate_matrix(Matrix raw) {
  if (raw.rows() < 1 || raw.cols() < 1) {
    throw Error(ErrorCode::EmptyInput, "data matrix must have at least one row and one column");
  }
  for (Index i = 0; i < raw.rows(); ++i) {
    for (Index j = 0; j < raw.cols(); ++j) {
      if (!std::isfinite(raw(i, j))) {
        throw Error(ErrorCode::NonFiniteEntry,
                    "non-finite entry at row " + std::to_string(i + 1) + ", column " +
                        std::to_string(j + 1),
                    static_cast<std::size_t>(i + 1), static_cast<std::size_t>(j + 1));
      }
    }
  }
  return DataMatrix(std::move(raw));
}

Matrix DataMatrix::gather_rows(std::span<const Index> rows) const {
  Matrix out(static_cast<Index>(rows.size()), p());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = values_.row(rows[r]);
  return out;
}

DataMatrix DataMatrix::select_columns(std::span<const Index> cols) const {
  if (cols.empty()) throw Error(ErrorCode::EmptyInput, "select_columns: no columns selected");
  Matrix out(n(), static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c] < 0 || cols[c] >= p()) {
      throw Error(ErrorCode::DimensionMismatch, "select_columns: column index out of range");
    }
    out.col(static_cast<Index>(c)) = values_.col(cols[c]);
  }
  return DataMatrix(std::move(out));
}

double median_inplace(std::span<double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "median of empty set");
  const std::size_t n = values.size();
  const std::size_t mid = n / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (n % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double median_of(std::span<const double> values) {
  std::vector<double> copy(values.begin(), values.end());
  return median_inplace(copy);
}

DataMatrix standardize_columns(const DataMatrix& X, Standardization kind) {
  Matrix out = X.values();
  const Index n = X.n();
  std::vector<double> buffer(static_cast<std::size_t>(n));
  for (Index j = 0; j < X.p(); ++j) {
    double center = 0.0;
    double scale = 0.0;
    if (kind == Standardization::Robust) {
      for (Index i = 0; i < n; ++i) buffer[static_cast<std::size_t>(i)] = out(i, j);
      center = median_inplace(buffer);
      for (Index i = 0; i < n; ++i) buffer[static_cast<std::size_t>(i)] = std::abs(out(i, j) - center);
      scale = median_inplace(buffer);
    } else {
      center = out.col(j).mean();
      if (n > 1) scale = std::sqrt((out.col(j).array() - center).square().sum() / static_cast<double>(n - 1));
    }
    if (!(scale > 0.0)) scale = 1.0;
    out.col(j) = (out.col(j).array() - center) / scale;
  }
  return validate_matrix(std::move(out));
}

Partition::Partition(std::vector<int> labels, int K) : labels_(std::move(labels)), K_(K) {
  if (K < 1) throw Error(ErrorCode::InvalidArgument, "partition needs K >= 1");
  for (int label : labels_) {
    if (label < 0 || label >= K) {
      throw Error(ErrorCode::InvalidArgument, "partition label out of range");
    }
  }
}

Partition Partition::from_one_based(const std::vector<int>& labels, int K) {
  std::vector<int> zero(labels.size());
  std::transform(labels.begin(), labels.end(), zero.begin(), [](int l) { return l - 1; });
  return Partition(std::move(zero), K);
}

std::vector<std::vector<Index>> Partition::clusters() const {
  std::vector<std::vector<Index>> out(static_cast<std::size_t>(K_));
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    out[static_cast<std::size_t>(labels_[i])].push_back(static_cast<Index>(i));
  }
  return out;
}

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> out(static_cast<std::size_t>(K_), 0);
  for (int label : labels_) ++out[static_cast<std::size_t>(label)];
  return out;
}

std::vector<int> Partition::one_based() const {
  std::vector<int> out(labels_.size());
  std::transform(labels_.begin(), labels_.end(), out.begin(), [](int l) { return l + 1; });
  return out;
}

}  // namespace sparsesm
