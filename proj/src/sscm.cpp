#include "sparsesm/sscm.hpp"

#include <Eigen/Cholesky>
#include <cstdlib>

namespace sparsesm {

SscmEstimate estimate_sscm(const DataMatrix& X, const CenterSet& centers, const Partition& partition,
                           double lambda, std::optional<int> banding) {
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "SSCM ridge lambda must be positive");
  if (banding && *banding < 0) throw Error(ErrorCode::InvalidArgument, "SSCM banding width must be nonnegative");
  if (partition.n() != static_cast<std::size_t>(X.n())) {
    throw Error(ErrorCode::LengthMismatch, "partition length does not match the data");
  }
  if (centers.rows() != partition.K() || centers.cols() != X.p()) {
    throw Error(ErrorCode::DimensionMismatch, "center set does not match partition/data");
  }

  const Index n = X.n();
  const Index p = X.p();
  Matrix signs(n, p);
  for (Index i = 0; i < n; ++i) {
    signs.row(i) = X.row(i) - centers.row(partition[static_cast<std::size_t>(i)]);
    const double norm = signs.row(i).norm();
    if (norm > 0.0) {
      signs.row(i) /= norm;
    } else {
      signs.row(i).setZero();
    }
  }

  SscmEstimate est;
  est.lambda = lambda;
  est.banding = banding;
  est.sigma = Matrix::Zero(p, p);
  est.sigma.selfadjointView<Eigen::Lower>().rankUpdate(signs.transpose(), 1.0 / static_cast<double>(n));
  est.sigma.triangularView<Eigen::StrictlyUpper>() = est.sigma.transpose();
  if (banding) {
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < p; ++j) {
        if (std::abs(i - j) > *banding) est.sigma(i, j) = 0.0;
      }
    }
  }
  est.sigma.diagonal().array() += lambda;
  return est;
}

MetricSpec inverse_metric(const SscmEstimate& est) {
  const Index p = est.sigma.rows();
  Matrix sigma = est.sigma;
  for (int attempt = 0; attempt < 2; ++attempt) {
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() == Eigen::Success) {
      Matrix A = llt.solve(Matrix::Identity(p, p));
      A = 0.5 * (A + A.transpose());
      return MetricSpec::quadratic_form(std::move(A));
    }
    sigma.diagonal().array() += est.lambda;
  }
  throw Error(ErrorCode::SingularMatrix, "SSCM estimate is not positive definite even after an extra ridge");
}

}  // namespace sparsesm
