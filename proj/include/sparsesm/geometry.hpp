#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sparsesm/core.hpp"

namespace sparsesm {

struct WeiszfeldConfig {
  int max_iter = 200;
  /// Stop when the step length is at most tol * max(1, |m|).
  double tol = 1e-8;
  /// Radius within which the iterate is treated as coinciding with a data point.
  double anchor_epsilon = 1e-12;

  void validate() const;
};

struct SpatialMedianResult {
  Vector point;
  int iterations = 0;
  bool converged = false;
  /// Objective sum_i |x_i - m| at the start iterate and after every step.
  std::vector<double> objective_trace;
};

/// Geometric median of the rows of `points` by Weiszfeld iteration with the
/// Vardi-Zhang step at data points. Starts from the coordinate-wise mean.
/// Non-convergence is reported through the result, never thrown.
SpatialMedianResult spatial_median_detailed(const Matrix& points, const WeiszfeldConfig& cfg = {},
                                            bool record_trace = false);

Vector spatial_median(const Matrix& points, const WeiszfeldConfig& cfg = {});

/// Same solver with one point per column of `points`.
SpatialMedianResult spatial_median_columns(const Matrix& points, const WeiszfeldConfig& cfg = {},
                                           bool record_trace = false);

/// Sum of Euclidean distances from the rows of `points` to `m`.
double spatial_median_objective(const Matrix& points, const Vector& m);

/// r / |r|, or the zero vector for r == 0.
Vector spatial_sign(const Vector& r);

enum class MetricKind { EuclideanSquared, QuadraticForm };

/// Assignment metric: squared Euclidean, or (x-m)' A (x-m) for symmetric
/// positive definite A.
class MetricSpec {
 public:
  static MetricSpec euclidean_squared() { return MetricSpec(); }
  /// Throws InvalidMetric unless A is square, symmetric within 1e-10 and
  /// strictly positive definite.
  static MetricSpec quadratic_form(Matrix weight);

  MetricKind kind() const noexcept { return kind_; }
  const std::optional<Matrix>& weight() const noexcept { return weight_; }

 private:
  MetricSpec() = default;
  MetricKind kind_ = MetricKind::EuclideanSquared;
  std::optional<Matrix> weight_;
};

double distance(const Vector& x, const Vector& m, const MetricSpec& spec);

/// Squared Euclidean distance over the coordinates in `active` (0-based).
double restricted_distance(const Vector& x, const Vector& m, std::span<const Index> active);

}  // namespace sparsesm
