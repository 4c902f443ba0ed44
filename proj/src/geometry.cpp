#include "sparsesm/geometry.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>

namespace sparsesm {

void WeiszfeldConfig::validate() const {
  if (!(tol > 0.0) || max_iter < 1 || !(anchor_epsilon >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "Weiszfeld config needs tol > 0, max_iter >= 1, anchor_epsilon >= 0");
  }
}

double spatial_median_objective(const Matrix& points, const Vector& m) {
  return (points.rowwise() - m.transpose()).rowwise().norm().sum();
}

SpatialMedianResult spatial_median_columns(const Matrix& points, const WeiszfeldConfig& cfg, bool record_trace) {
  cfg.validate();
  const Index m = points.cols();
  if (m == 0) throw Error(ErrorCode::EmptyInput, "spatial median of an empty point set");

  SpatialMedianResult result;
  if (m == 1) {
    result.point = points.col(0);
    result.converged = true;
    if (record_trace) result.objective_trace.push_back(0.0);
    return result;
  }
  Vector y = points.rowwise().mean();

  Vector weights(m);
  Vector T(points.rows());
  for (int it = 0; it < cfg.max_iter; ++it) {
    int coincident = 0;
    double objective = 0.0;
    for (Index i = 0; i < m; ++i) {
      const double d = (points.col(i) - y).norm();
      objective += d;
      if (d <= cfg.anchor_epsilon) {
        ++coincident;
        weights[i] = 0.0;
      } else {
        weights[i] = 1.0 / d;
      }
    }
    if (record_trace) result.objective_trace.push_back(objective);
    const double weight_sum = weights.sum();
    if (weight_sum == 0.0) {
      // every point coincides with y
      result.converged = true;
      break;
    }
    T.noalias() = points * weights;
    T /= weight_sum;

    double step = 0.0;
    if (coincident == 0) {
      step = (T - y).norm();
      y.swap(T);
    } else {
      // Vardi-Zhang: y is optimal when the pull of the other points does not
      // exceed the multiplicity of y.
      const double pull = weight_sum * (T - y).norm();
      if (pull <= static_cast<double>(coincident)) {
        result.iterations = it + 1;
        result.converged = true;
        break;
      }
      const double gamma = static_cast<double>(coincident) / pull;
      T = (1.0 - gamma) * T + gamma * y;
      step = (T - y).norm();
      y.swap(T);
    }
    result.iterations = it + 1;
    if (step <= cfg.tol * std::max(1.0, y.norm())) {
      result.converged = true;
      break;
    }
  }
  if (record_trace) {
    double objective = 0.0;
    for (Index i = 0; i < m; ++i) objective += (points.col(i) - y).norm();
    result.objective_trace.push_back(objective);
  }
  result.point = std::move(y);
  return result;
}

SpatialMedianResult spatial_median_detailed(const Matrix& points, const WeiszfeldConfig& cfg,
                                            bool record_trace) {
  return spatial_median_columns(points.transpose(), cfg, record_trace);
}

Vector spatial_median(const Matrix& points, const WeiszfeldConfig& cfg) {
  return spatial_median_detailed(points, cfg).point;
}

Vector spatial_sign(const Vector& r) {
  const double norm = r.norm();
  if (norm == 0.0) return Vector::Zero(r.size());
  return r / norm;
}

MetricSpec MetricSpec::quadratic_form(Matrix weight) {
  if (weight.rows() != weight.cols() || weight.rows() == 0) {
    throw Error(ErrorCode::InvalidMetric, "metric weight must be a non-empty square matrix");
  }
  if (!weight.allFinite()) throw Error(ErrorCode::InvalidMetric, "metric weight has non-finite entries");
  if ((weight - weight.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorCode::InvalidMetric, "metric weight is not symmetric");
  }
  Eigen::LLT<Matrix> llt(weight);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidMetric, "metric weight is not positive definite");
  }
  MetricSpec spec;
  spec.kind_ = MetricKind::QuadraticForm;
  spec.weight_ = std::move(weight);
  return spec;
}

double distance(const Vector& x, const Vector& m, const MetricSpec& spec) {
  if (x.size() != m.size()) throw Error(ErrorCode::DimensionMismatch, "distance: dimension mismatch");
  if (spec.kind() == MetricKind::EuclideanSquared) return (x - m).squaredNorm();
  const Matrix& A = *spec.weight();
  if (A.rows() != x.size()) throw Error(ErrorCode::DimensionMismatch, "distance: metric dimension mismatch");
  const Vector d = x - m;
  return std::max(0.0, d.dot(A * d));
}

double restricted_distance(const Vector& x, const Vector& m, std::span<const Index> active) {
  if (active.empty()) throw Error(ErrorCode::EmptyActiveSet, "restricted distance over an empty active set");
  if (x.size() != m.size()) throw Error(ErrorCode::DimensionMismatch, "restricted distance: dimension mismatch");
  double total = 0.0;
  for (Index j : active) {
    if (j < 0 || j >= x.size()) throw Error(ErrorCode::DimensionMismatch, "active coordinate out of range");
    const double d = x[j] - m[j];
    total += d * d;
  }
  return total;
}

}  // namespace sparsesm
