#include "sparsesm/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace sparsesm {

namespace {

double choose2(std::int64_t m) { return 0.5 * static_cast<double>(m) * static_cast<double>(m - 1); }

double entropy(const std::vector<std::int64_t>& sizes, std::int64_t n) {
  double h = 0.0;
  for (auto s : sizes) {
    if (s == 0) continue;
    const double q = static_cast<double>(s) / static_cast<double>(n);
    h -= q * std::log(q);
  }
  return h;
}

std::vector<std::int64_t> row_sums(const ContingencyTable& t) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(t.counts.rows()), 0);
  for (Index k = 0; k < t.counts.rows(); ++k) out[static_cast<std::size_t>(k)] = t.counts.row(k).sum();
  return out;
}

std::vector<std::int64_t> col_sums(const ContingencyTable& t) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(t.counts.cols()), 0);
  for (Index j = 0; j < t.counts.cols(); ++j) out[static_cast<std::size_t>(j)] = t.counts.col(j).sum();
  return out;
}

struct PairCounts {
  double same_both = 0.0;  // TP
  double same_pred = 0.0;  // TP + FP
  double same_truth = 0.0; // TP + FN
  double total = 0.0;
};

PairCounts pair_counts(const ContingencyTable& t) {
  PairCounts pc;
  for (Index k = 0; k < t.counts.rows(); ++k) {
    for (Index j = 0; j < t.counts.cols(); ++j) pc.same_both += choose2(t.counts(k, j));
  }
  for (auto s : row_sums(t)) pc.same_pred += choose2(s);
  for (auto s : col_sums(t)) pc.same_truth += choose2(s);
  pc.total = choose2(t.n);
  return pc;
}

/// H(row label | column label).
double conditional_entropy_rows_given_cols(const ContingencyTable& t) {
  const auto cols = col_sums(t);
  double h = 0.0;
  for (Index k = 0; k < t.counts.rows(); ++k) {
    for (Index j = 0; j < t.counts.cols(); ++j) {
      const auto c = t.counts(k, j);
      if (c == 0) continue;
      h -= static_cast<double>(c) / static_cast<double>(t.n) *
           std::log(static_cast<double>(c) / static_cast<double>(cols[static_cast<std::size_t>(j)]));
    }
  }
  return h;
}

}  // namespace

ContingencyTable ContingencyTable::from_counts(const std::vector<std::vector<std::int64_t>>& rows) {
  ContingencyTable t;
  const auto R = static_cast<Index>(rows.size());
  const auto C = R == 0 ? Index{0} : static_cast<Index>(rows.front().size());
  t.counts.resize(R, C);
  for (Index k = 0; k < R; ++k) {
    if (static_cast<Index>(rows[static_cast<std::size_t>(k)].size()) != C) {
      throw Error(ErrorCode::DimensionMismatch, "contingency rows must have equal length");
    }
    for (Index j = 0; j < C; ++j) {
      const auto c = rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
      if (c < 0) throw Error(ErrorCode::InvalidArgument, "contingency counts must be nonnegative");
      t.counts(k, j) = c;
    }
  }
  t.n = t.counts.sum();
  return t;
}

ContingencyTable ContingencyTable::transposed() const {
  ContingencyTable t;
  t.counts = counts.transpose();
  t.n = n;
  return t;
}

ContingencyTable contingency(const Partition& pred, const Partition& truth) {
  if (pred.n() != truth.n()) throw Error(ErrorCode::LengthMismatch, "partitions have different lengths");
  ContingencyTable t;
  t.counts.setZero(pred.K(), truth.K());
  for (std::size_t i = 0; i < pred.n(); ++i) ++t.counts(pred[i], truth[i]);
  t.n = static_cast<std::int64_t>(pred.n());
  return t;
}

double ari(const ContingencyTable& t) {
  if (t.n < 2) throw Error(ErrorCode::InvalidArgument, "ARI needs at least two observations");
  const PairCounts pc = pair_counts(t);
  const double expected = pc.same_pred * pc.same_truth / pc.total;
  const double maximum = 0.5 * (pc.same_pred + pc.same_truth);
  if (maximum == expected) return 1.0;
  return (pc.same_both - expected) / (maximum - expected);
}

double purity(const ContingencyTable& t) {
  if (t.n < 1) throw Error(ErrorCode::InvalidArgument, "purity needs at least one observation");
  std::int64_t total = 0;
  for (Index k = 0; k < t.counts.rows(); ++k) total += t.counts.row(k).maxCoeff();
  return static_cast<double>(total) / static_cast<double>(t.n);
}

double nmi(const ContingencyTable& t) {
  if (t.n < 1) throw Error(ErrorCode::InvalidArgument, "NMI needs at least one observation");
  const auto rows = row_sums(t);
  const auto cols = col_sums(t);
  const double h_pred = entropy(rows, t.n);
  const double h_truth = entropy(cols, t.n);
  if (h_pred + h_truth == 0.0) return 1.0;
  const double n = static_cast<double>(t.n);
  double mi = 0.0;
  for (Index k = 0; k < t.counts.rows(); ++k) {
    for (Index j = 0; j < t.counts.cols(); ++j) {
      const auto c = t.counts(k, j);
      if (c == 0) continue;
      const double q = static_cast<double>(c) / n;
      mi += q * std::log(static_cast<double>(c) * n /
                         (static_cast<double>(rows[static_cast<std::size_t>(k)]) *
                          static_cast<double>(cols[static_cast<std::size_t>(j)])));
    }
  }
  return std::clamp(2.0 * mi / (h_pred + h_truth), 0.0, 1.0);
}

double fmi(const ContingencyTable& t) {
  if (t.n < 2) throw Error(ErrorCode::InvalidArgument, "FMI needs at least two observations");
  const PairCounts pc = pair_counts(t);
  if (pc.same_pred == 0.0 || pc.same_truth == 0.0) return 0.0;
  return pc.same_both / std::sqrt(pc.same_pred * pc.same_truth);
}

double v_measure(const ContingencyTable& t) {
  if (t.n < 1) throw Error(ErrorCode::InvalidArgument, "V-measure needs at least one observation");
  const double h_pred = entropy(row_sums(t), t.n);
  const double h_truth = entropy(col_sums(t), t.n);
  const double h_truth_given_pred = conditional_entropy_rows_given_cols(t.transposed());
  const double h_pred_given_truth = conditional_entropy_rows_given_cols(t);
  const double homogeneity = h_truth == 0.0 ? 1.0 : 1.0 - h_truth_given_pred / h_truth;
  const double completeness = h_pred == 0.0 ? 1.0 : 1.0 - h_pred_given_truth / h_pred;
  if (homogeneity + completeness == 0.0) return 0.0;
  return std::clamp(2.0 * homogeneity * completeness / (homogeneity + completeness), 0.0, 1.0);
}

MetricSet evaluate_all(const Partition& pred, const Partition& truth) {
  const ContingencyTable t = contingency(pred, truth);
  MetricSet m;
  m.ari = ari(t);
  m.purity = purity(t);
  m.nmi = nmi(t);
  m.fmi = fmi(t);
  m.v_measure = v_measure(t);
  return m;
}

}  // namespace sparsesm
