#pragma once

#include <cstdint>
#include <vector>

#include "sparsesm/core.hpp"

namespace sparsesm {

/// counts(k, j) = |{i : pred_i = k, truth_i = j}|.
struct ContingencyTable {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::int64_t n = 0;

  static ContingencyTable from_counts(const std::vector<std::vector<std::int64_t>>& rows);
  ContingencyTable transposed() const;
};

ContingencyTable contingency(const Partition& pred, const Partition& truth);

/// Hubert-Arabie adjusted Rand index. When the expected and maximal index
/// coincide (e.g. both partitions all singletons) the result is 1.
double ari(const ContingencyTable& t);
double purity(const ContingencyTable& t);
/// 2 I(C;L) / (H(C) + H(L)); 1 when both entropies vanish.
double nmi(const ContingencyTable& t);
/// TP / sqrt((TP+FP)(TP+FN)) over pairs; 0 when either factor is 0.
double fmi(const ContingencyTable& t);
/// Harmonic mean of homogeneity and completeness. Zero-entropy sides count as
/// perfect (homogeneity 1 when H(L)=0, completeness 1 when H(C)=0).
double v_measure(const ContingencyTable& t);

struct MetricSet {
  double ari = 0.0;
  double purity = 0.0;
  double nmi = 0.0;
  double fmi = 0.0;
  double v_measure = 0.0;
};

MetricSet evaluate_all(const Partition& pred, const Partition& truth);

}  // namespace sparsesm
