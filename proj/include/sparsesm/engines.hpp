#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sparsesm/core.hpp"
#include "sparsesm/geometry.hpp"
#include "sparsesm/rng.hpp"
#include "sparsesm/sscm.hpp"

namespace sparsesm {

enum class CenterRule { Mean, CoordinateMedian, SpatialMedian };

enum class AssignmentRule {
  EuclideanSquared,
  L1,
  /// Quadratic form with the inverse of the current pooled SSCM estimate.
  InverseSscm,
};

enum class InitKind { RandomAssignment, MaxMinSeeding };

struct InitRule {
  InitKind kind = InitKind::RandomAssignment;
  int restarts = 20;
};

struct EngineConfig {
  int max_iter = 100;
  InitRule init;
  WeiszfeldConfig weiszfeld;
  double lambda = 0.1;
  std::optional<int> banding;
  /// Overwrite excluded center coordinates with the overall spatial median.
  bool reset_excluded = false;

  void validate() const;
};

/// A Lloyd-type engine: how centers are updated, how points are assigned and,
/// for sparse engines, the hard threshold applied to the separation scores.
struct EngineSpec {
  CenterRule centers = CenterRule::SpatialMedian;
  AssignmentRule assignment = AssignmentRule::EuclideanSquared;
  std::optional<double> tau;

  static EngineSpec sm_sscm() { return {CenterRule::SpatialMedian, AssignmentRule::InverseSscm, std::nullopt}; }
  static EngineSpec sparse_sm(double tau) { return {CenterRule::SpatialMedian, AssignmentRule::EuclideanSquared, tau}; }
  static EngineSpec k_spatial_median() { return {CenterRule::SpatialMedian, AssignmentRule::EuclideanSquared, std::nullopt}; }
  static EngineSpec k_means() { return {CenterRule::Mean, AssignmentRule::EuclideanSquared, std::nullopt}; }
  static EngineSpec k_medians() { return {CenterRule::CoordinateMedian, AssignmentRule::L1, std::nullopt}; }
  /// Lloyd baseline for a center rule: squared Euclidean assignment, except
  /// coordinate medians which pair with the l1 distance.
  static EngineSpec baseline(CenterRule rule, std::optional<double> tau = std::nullopt);
};

struct SparseState {
  Vector scores;
  std::vector<Index> active;
  double tau = 0.0;
  /// True when no score reached tau and the top-scoring coordinate was kept.
  bool fallback = false;
};

struct FitResult {
  Partition partition;
  CenterSet centers;
  FitDiagnostics diagnostics;
  std::optional<SparseState> sparse;
  std::optional<SscmEstimate> metric;
  /// sum_i d(x_i, m_{c_i}) under the final assignment distance.
  double objective = 0.0;
  int restart = 0;
};

/// s_j = sum_k |m_kj - mean_k m_kj|. Requires K >= 2.
Vector separation_scores(const CenterSet& centers);

/// {j : s_j >= tau}. An empty result is the AllExcluded signal.
std::vector<Index> active_set(const Vector& scores, double tau);

/// active_set, falling back to the single highest-scoring coordinate (lowest
/// index on ties) when nothing survives the threshold.
SparseState threshold_scores(Vector scores, double tau);

Partition assign(const DataMatrix& X, const CenterSet& centers, const MetricSpec& metric);
Partition assign(const DataMatrix& X, const CenterSet& centers, std::span<const Index> active);
Partition assign_l1(const DataMatrix& X, const CenterSet& centers);

struct CenterUpdate {
  CenterSet centers;
  /// Input partition after empty-cluster repair.
  Partition partition;
  int empty_repairs = 0;
  int degenerate_repairs = 0;
  int median_nonconvergence = 0;
};

/// Per-cluster centers. An empty cluster first receives the observation
/// farthest from its current center (previous centers when given, otherwise
/// the centers of the non-empty clusters). A cluster whose points all coincide
/// takes its point closest to the previous center.
CenterUpdate update_centers(const DataMatrix& X, const Partition& partition, CenterRule rule,
                            const WeiszfeldConfig& cfg, const CenterSet* previous = nullptr);

/// Max-min seeding: the first seed is the point farthest from the overall
/// spatial median; each next seed maximizes the distance to its nearest seed.
CenterSet max_min_seed(const DataMatrix& X, int K, const MetricSpec& metric,
                       const WeiszfeldConfig& cfg = {});

/// Best of cfg.init.restarts runs (lowest objective, earliest restart on ties).
FitResult fit(const DataMatrix& X, int K, const EngineSpec& engine, const EngineConfig& cfg,
              const RngSpec& rng);

/// Single run started from a given partition.
FitResult fit_from_partition(const DataMatrix& X, const EngineSpec& engine, const EngineConfig& cfg,
                             const Partition& init);

FitResult fit_sm_sscm(const DataMatrix& X, int K, const EngineConfig& cfg, const RngSpec& rng);
FitResult fit_sparse_sm(const DataMatrix& X, int K, double tau, const EngineConfig& cfg,
                        const RngSpec& rng);
FitResult fit_baseline(const DataMatrix& X, int K, CenterRule rule, const EngineConfig& cfg,
                       const RngSpec& rng, std::optional<double> tau = std::nullopt);

/// Initial partition for restart `restart` of an engine.
Partition initial_partition(const DataMatrix& X, int K, const EngineConfig& cfg, const RngSpec& rng,
                            int restart);

std::string to_string(CenterRule rule);

}  // namespace sparsesm
