#include "sparsesm/engines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace sparsesm {

namespace {

void check_k(const DataMatrix& X, int K) {
  if (K < 1 || K > X.n()) {
    throw Error(ErrorCode::InvalidArgument,
                "number of clusters must satisfy 1 <= K <= n (K=" + std::to_string(K) + ")");
  }
}

struct AssignmentContext {
  AssignmentRule rule = AssignmentRule::EuclideanSquared;
  const Matrix* weight = nullptr;
  /// Empty means all coordinates.
  std::span<const Index> active;
};

/// n x K matrix of assignment distances.
Matrix distance_matrix(const DataMatrix& X, const CenterSet& centers, const AssignmentContext& ctx) {
  const Index K = centers.rows();
  const Index n = X.n();
  Matrix D(n, K);
  const bool restricted = !ctx.active.empty() && static_cast<Index>(ctx.active.size()) != X.p();
  Matrix Vs;
  Matrix Cs;
  if (restricted) {
    std::vector<Index> idx(ctx.active.begin(), ctx.active.end());
    Vs = X.by_column()(idx, Eigen::all);
    Cs = centers(Eigen::all, idx).transpose();
  } else {
    Cs = centers.transpose();
  }
  const Matrix& data = restricted ? Vs : X.by_column();
  for (Index k = 0; k < K; ++k) {
    const auto c = Cs.col(k);
    switch (ctx.rule) {
      case AssignmentRule::EuclideanSquared:
        for (Index i = 0; i < n; ++i) D(i, k) = (data.col(i) - c).squaredNorm();
        break;
      case AssignmentRule::L1:
        for (Index i = 0; i < n; ++i) D(i, k) = (data.col(i) - c).cwiseAbs().sum();
        break;
      case AssignmentRule::InverseSscm: {
        const Matrix diff = data.colwise() - c;
        const Matrix wd = *ctx.weight * diff;
        D.col(k) = wd.cwiseProduct(diff).colwise().sum().transpose().cwiseMax(0.0);
        break;
      }
    }
  }
  return D;
}

std::vector<int> argmin_labels(const Matrix& D) {
  std::vector<int> labels(static_cast<std::size_t>(D.rows()));
  for (Index i = 0; i < D.rows(); ++i) {
    Index best = 0;
    for (Index k = 1; k < D.cols(); ++k) {
      if (D(i, k) < D(i, best)) best = k;
    }
    labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
  }
  return labels;
}

/// Moves, for each empty cluster, the point farthest from its own center
/// (among clusters that can spare one) into the empty cluster.
int repair_empty(std::vector<int>& labels, int K, const Matrix& D) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(K), 0);
  for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
  int repairs = 0;
  for (int k = 0; k < K; ++k) {
    if (sizes[static_cast<std::size_t>(k)] != 0) continue;
    std::size_t best = labels.size();
    double best_dist = -1.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      const int l = labels[i];
      if (sizes[static_cast<std::size_t>(l)] < 2) continue;
      const double d = D(static_cast<Index>(i), l);
      if (d > best_dist) {
        best_dist = d;
        best = i;
      }
    }
    if (best == labels.size()) break;  // cannot happen while K <= n
    --sizes[static_cast<std::size_t>(labels[best])];
    labels[best] = k;
    ++sizes[static_cast<std::size_t>(k)];
    ++repairs;
  }
  return repairs;
}

/// Center of the points stored one per column.
Vector cluster_center(const Matrix& pts, CenterRule rule, const WeiszfeldConfig& cfg, bool& converged) {
  converged = true;
  switch (rule) {
    case CenterRule::Mean:
      return pts.rowwise().mean();
    case CenterRule::CoordinateMedian: {
      Vector c(pts.rows());
      std::vector<double> buf(static_cast<std::size_t>(pts.cols()));
      for (Index j = 0; j < pts.rows(); ++j) {
        for (Index i = 0; i < pts.cols(); ++i) buf[static_cast<std::size_t>(i)] = pts(j, i);
        c[j] = median_inplace(buf);
      }
      return c;
    }
    case CenterRule::SpatialMedian: {
      auto res = spatial_median_columns(pts, cfg);
      converged = res.converged;
      return std::move(res.point);
    }
  }
  return {};
}

Matrix gather_columns(const DataMatrix& X, const std::vector<Index>& rows) {
  return X.by_column()(Eigen::all, rows);
}

}  // namespace

void EngineConfig::validate() const {
  if (max_iter < 1) throw Error(ErrorCode::InvalidArgument, "max_iter must be at least 1");
  if (init.restarts < 1) throw Error(ErrorCode::InvalidArgument, "restarts must be at least 1");
  if (!(lambda > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda must be positive");
  weiszfeld.validate();
}

EngineSpec EngineSpec::baseline(CenterRule rule, std::optional<double> tau) {
  const AssignmentRule assignment =
      rule == CenterRule::CoordinateMedian ? AssignmentRule::L1 : AssignmentRule::EuclideanSquared;
  return {rule, assignment, tau};
}

std::string to_string(CenterRule rule) {
  switch (rule) {
    case CenterRule::Mean: return "mean";
    case CenterRule::CoordinateMedian: return "coordinate-median";
    case CenterRule::SpatialMedian: return "spatial-median";
  }
  return "unknown";
}

Vector separation_scores(const CenterSet& centers) {
  if (centers.rows() < 2) throw Error(ErrorCode::InvalidArgument, "separation scores need K >= 2");
  const Eigen::RowVectorXd mean = centers.colwise().mean();
  return (centers.rowwise() - mean).cwiseAbs().colwise().sum().transpose();
}

std::vector<Index> active_set(const Vector& scores, double tau) {
  if (!(tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "threshold tau must be nonnegative");
  std::vector<Index> out;
  for (Index j = 0; j < scores.size(); ++j) {
    if (scores[j] >= tau) out.push_back(j);
  }
  return out;
}

SparseState threshold_scores(Vector scores, double tau) {
  SparseState state;
  state.tau = tau;
  state.active = active_set(scores, tau);
  if (state.active.empty() && scores.size() > 0) {
    Index top = 0;
    for (Index j = 1; j < scores.size(); ++j) {
      if (scores[j] > scores[top]) top = j;
    }
    state.active = {top};
    state.fallback = true;
  }
  state.scores = std::move(scores);
  return state;
}

Partition assign(const DataMatrix& X, const CenterSet& centers, const MetricSpec& metric) {
  if (centers.rows() < 1) throw Error(ErrorCode::InvalidArgument, "assign: no centers");
  if (centers.cols() != X.p()) throw Error(ErrorCode::DimensionMismatch, "assign: center dimension mismatch");
  AssignmentContext ctx;
  if (metric.kind() == MetricKind::QuadraticForm) {
    if (metric.weight()->rows() != X.p()) throw Error(ErrorCode::DimensionMismatch, "assign: metric dimension mismatch");
    ctx.rule = AssignmentRule::InverseSscm;
    ctx.weight = &*metric.weight();
  }
  return Partition(argmin_labels(distance_matrix(X, centers, ctx)), static_cast<int>(centers.rows()));
}

Partition assign(const DataMatrix& X, const CenterSet& centers, std::span<const Index> active) {
  if (centers.rows() < 1) throw Error(ErrorCode::InvalidArgument, "assign: no centers");
  if (centers.cols() != X.p()) throw Error(ErrorCode::DimensionMismatch, "assign: center dimension mismatch");
  if (active.empty()) throw Error(ErrorCode::EmptyActiveSet, "assign: empty active set");
  for (Index j : active) {
    if (j < 0 || j >= X.p()) throw Error(ErrorCode::DimensionMismatch, "assign: active coordinate out of range");
  }
  AssignmentContext ctx;
  ctx.active = active;
  return Partition(argmin_labels(distance_matrix(X, centers, ctx)), static_cast<int>(centers.rows()));
}

Partition assign_l1(const DataMatrix& X, const CenterSet& centers) {
  if (centers.rows() < 1) throw Error(ErrorCode::InvalidArgument, "assign: no centers");
  if (centers.cols() != X.p()) throw Error(ErrorCode::DimensionMismatch, "assign: center dimension mismatch");
  AssignmentContext ctx;
  ctx.rule = AssignmentRule::L1;
  return Partition(argmin_labels(distance_matrix(X, centers, ctx)), static_cast<int>(centers.rows()));
}

CenterUpdate update_centers(const DataMatrix& X, const Partition& partition, CenterRule rule,
                            const WeiszfeldConfig& cfg, const CenterSet* previous) {
  if (partition.n() != static_cast<std::size_t>(X.n())) {
    throw Error(ErrorCode::LengthMismatch, "update_centers: partition length does not match the data");
  }
  const int K = partition.K();
  if (K > X.n()) throw Error(ErrorCode::InvalidArgument, "update_centers: more clusters than observations");
  if (previous && (previous->rows() != K || previous->cols() != X.p())) {
    throw Error(ErrorCode::DimensionMismatch, "update_centers: previous centers have the wrong shape");
  }

  CenterUpdate out;
  std::vector<int> labels = partition.labels();
  const auto sizes = partition.sizes();
  if (std::any_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s == 0; })) {
    CenterSet reference;
    if (previous) {
      reference = *previous;
    } else {
      reference = CenterSet::Zero(K, X.p());
      const auto groups = partition.clusters();
      for (int k = 0; k < K; ++k) {
        if (groups[static_cast<std::size_t>(k)].empty()) continue;
        bool ok = true;
        reference.row(k) = cluster_center(gather_columns(X, groups[static_cast<std::size_t>(k)]), rule, cfg, ok).transpose();
      }
    }
    AssignmentContext ctx;
    out.empty_repairs = repair_empty(labels, K, distance_matrix(X, reference, ctx));
  }
  out.partition = Partition(std::move(labels), K);

  out.centers = CenterSet(K, X.p());
  const auto groups = out.partition.clusters();
  for (int k = 0; k < K; ++k) {
    const Matrix pts = gather_columns(X, groups[static_cast<std::size_t>(k)]);
    if (pts.cols() >= 2 && (pts.colwise() - pts.col(0)).cwiseAbs().maxCoeff() == 0.0) {
      out.centers.row(k) = pts.col(0).transpose();
      ++out.degenerate_repairs;
      continue;
    }
    bool converged = true;
    out.centers.row(k) = cluster_center(pts, rule, cfg, converged).transpose();
    if (!converged) ++out.median_nonconvergence;
  }
  return out;
}

CenterSet max_min_seed(const DataMatrix& X, int K, const MetricSpec& metric, const WeiszfeldConfig& cfg) {
  check_k(X, K);
  const Vector m0 = spatial_median_columns(X.by_column(), cfg).point;
  const Index n = X.n();
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  std::vector<Index> seeds;

  Vector nearest(n);
  for (Index i = 0; i < n; ++i) nearest[i] = distance(X.row(i).transpose(), m0, metric);

  auto pick = [&]() {
    Index best = -1;
    for (Index i = 0; i < n; ++i) {
      if (chosen[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || nearest[i] > nearest[best]) best = i;
    }
    return best;
  };

  Index first = pick();
  seeds.push_back(first);
  chosen[static_cast<std::size_t>(first)] = true;
  for (Index i = 0; i < n; ++i) nearest[i] = distance(X.row(i).transpose(), X.row(first).transpose(), metric);
  while (static_cast<int>(seeds.size()) < K) {
    const Index next = pick();
    seeds.push_back(next);
    chosen[static_cast<std::size_t>(next)] = true;
    for (Index i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], distance(X.row(i).transpose(), X.row(next).transpose(), metric));
    }
  }
  return X.gather_rows(seeds);
}

Partition initial_partition(const DataMatrix& X, int K, const EngineConfig& cfg, const RngSpec& rng,
                            int restart) {
  check_k(X, K);
  if (cfg.init.kind == InitKind::MaxMinSeeding) {
    const auto metric = MetricSpec::euclidean_squared();
    return assign(X, max_min_seed(X, K, metric, cfg.weiszfeld), metric);
  }
  Rng gen(rng.child(static_cast<std::uint64_t>(restart)));
  std::vector<int> labels(static_cast<std::size_t>(X.n()));
  for (auto& l : labels) l = static_cast<int>(gen.uniform_index(static_cast<std::uint64_t>(K)));
  return Partition(std::move(labels), K);
}

FitResult fit_from_partition(const DataMatrix& X, const EngineSpec& engine, const EngineConfig& cfg,
                             const Partition& init) {
  cfg.validate();
  const int K = init.K();
  check_k(X, K);
  if (init.n() != static_cast<std::size_t>(X.n())) {
    throw Error(ErrorCode::LengthMismatch, "initial partition length does not match the data");
  }
  if (engine.tau && engine.assignment == AssignmentRule::InverseSscm) {
    throw Error(ErrorCode::InvalidArgument, "thresholding is not defined for the inverse-SSCM assignment");
  }
  if (engine.tau && !(*engine.tau >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be nonnegative");

  FitResult result;
  Partition labels = init;
  CenterSet centers;
  bool have_previous = false;
  std::optional<Vector> overall_median;
  if (engine.tau && cfg.reset_excluded) overall_median = spatial_median_columns(X.by_column(), cfg.weiszfeld).point;

  for (int t = 1; t <= cfg.max_iter; ++t) {
    auto upd = update_centers(X, labels, engine.centers, cfg.weiszfeld, have_previous ? &centers : nullptr);
    result.diagnostics.empty_cluster_repairs += upd.empty_repairs;
    result.diagnostics.degenerate_cluster_repairs += upd.degenerate_repairs;
    result.diagnostics.median_nonconvergence += upd.median_nonconvergence;
    labels = std::move(upd.partition);
    centers = std::move(upd.centers);
    have_previous = true;

    AssignmentContext ctx;
    ctx.rule = engine.assignment;
    Matrix weight;
    if (engine.assignment == AssignmentRule::InverseSscm) {
      result.metric = estimate_sscm(X, centers, labels, cfg.lambda, cfg.banding);
      weight = *inverse_metric(*result.metric).weight();
      ctx.weight = &weight;
    }
    if (engine.tau) {
      Vector scores = K >= 2 ? separation_scores(centers) : Vector::Zero(X.p());
      result.sparse = threshold_scores(std::move(scores), *engine.tau);
      ctx.active = result.sparse->active;
      if (overall_median) {
        std::vector<bool> keep(static_cast<std::size_t>(X.p()), false);
        for (Index j : result.sparse->active) keep[static_cast<std::size_t>(j)] = true;
        for (Index j = 0; j < X.p(); ++j) {
          if (!keep[static_cast<std::size_t>(j)]) centers.col(j).setConstant((*overall_median)[j]);
        }
      }
    }

    const Matrix D = distance_matrix(X, centers, ctx);
    std::vector<int> next = argmin_labels(D);
    result.diagnostics.empty_cluster_repairs += repair_empty(next, K, D);
    double objective = 0.0;
    for (std::size_t i = 0; i < next.size(); ++i) objective += D(static_cast<Index>(i), next[i]);
    result.diagnostics.objective_trace.push_back(objective);
    result.objective = objective;
    result.diagnostics.iterations = t;

    const bool unchanged = next == labels.labels();
    labels = Partition(std::move(next), K);
    if (unchanged) {
      result.diagnostics.converged = true;
      break;
    }
  }
  result.partition = std::move(labels);
  result.centers = std::move(centers);
  return result;
}

FitResult fit(const DataMatrix& X, int K, const EngineSpec& engine, const EngineConfig& cfg,
              const RngSpec& rng) {
  cfg.validate();
  check_k(X, K);
  const int restarts = cfg.init.kind == InitKind::MaxMinSeeding ? 1 : cfg.init.restarts;
  std::optional<FitResult> best;
  for (int r = 0; r < restarts; ++r) {
    FitResult candidate = fit_from_partition(X, engine, cfg, initial_partition(X, K, cfg, rng, r));
    candidate.restart = r;
    if (!best || candidate.objective < best->objective) best = std::move(candidate);
  }
  return std::move(*best);
}

FitResult fit_sm_sscm(const DataMatrix& X, int K, const EngineConfig& cfg, const RngSpec& rng) {
  return fit(X, K, EngineSpec::sm_sscm(), cfg, rng);
}

FitResult fit_sparse_sm(const DataMatrix& X, int K, double tau, const EngineConfig& cfg, const RngSpec& rng) {
  return fit(X, K, EngineSpec::sparse_sm(tau), cfg, rng);
}

FitResult fit_baseline(const DataMatrix& X, int K, CenterRule rule, const EngineConfig& cfg, const RngSpec& rng,
                       std::optional<double> tau) {
  return fit(X, K, EngineSpec::baseline(rule, tau), cfg, rng);
}

}  // namespace sparsesm
