#pragma once

#include <optional>

#include "sparsesm/core.hpp"
#include "sparsesm/geometry.hpp"

namespace sparsesm {

/// Ridge-regularized spatial-sign covariance, sigma = S + lambda I where S is
/// the (optionally banded) average outer product of residual spatial signs.
struct SscmEstimate {
  Matrix sigma;
  double lambda = 0.1;
  std::optional<int> banding;
};

/// Residuals are x_i - centers.row(label_i); zero residuals contribute zero signs.
/// With banding w, entries with |i - j| > w are zeroed before the ridge is added.
SscmEstimate estimate_sscm(const DataMatrix& X, const CenterSet& centers, const Partition& partition,
                           double lambda, std::optional<int> banding = std::nullopt);

/// Quadratic-form metric with weight sigma^{-1}. If the Cholesky factorization
/// fails (possible only with banding), one extra lambda ridge is added before
/// giving up with SingularMatrix.
MetricSpec inverse_metric(const SscmEstimate& est);

}  // namespace sparsesm
