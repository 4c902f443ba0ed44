#pragma once

#include <optional>
#include <vector>

#include "sparsesm/core.hpp"
#include "sparsesm/engines.hpp"
#include "sparsesm/rng.hpp"

namespace sparsesm {

/// Coordinates over which the between-cluster separation is measured.
enum class SeparationConvention { FullSpace, ActiveSubspace };

/// How the Gap reference datasets are formed. Identity is a test hook that
/// reuses the observed data unchanged.
enum class ReferenceKind { ColumnPermutation, Identity };

struct TuningConfig {
  /// Candidate thresholds; empty selects the automatic grid.
  std::vector<double> tau_grid;
  int grid_size = 12;
  /// Smallest positive automatic threshold, relative to the largest pre-fit score.
  double grid_floor_ratio = 0.01;
  int B = 10;
  /// Restarts for fits on reference datasets; unset reuses the engine's restarts.
  std::optional<int> reference_restarts;
  /// Center rule of the thresholded engine (spatial median for Sparse-SM).
  CenterRule center_rule = CenterRule::SpatialMedian;
  SeparationConvention convention = SeparationConvention::FullSpace;
  ReferenceKind reference = ReferenceKind::ColumnPermutation;
  /// 0 means default_worker_count().
  int workers = 1;

  void validate() const;
};

struct GapReport {
  std::vector<double> tau_grid;
  std::vector<double> observed;
  /// B x |grid|.
  Matrix reference;
  std::vector<double> gap;
  std::vector<std::size_t> active_sizes;
  double selected_tau = 0.0;
  std::size_t selected_index = 0;
  /// Some O <= 0 was replaced by O + 1e-12 before taking logs.
  bool degenerate = false;
};

struct TunedFit {
  GapReport report;
  FitResult fit;
};

struct BwdmTerms {
  double abdm = 0.0;
  double awdm = 0.0;
  double bwdm = 0.0;
};

struct KSelectionReport {
  std::vector<int> k_grid;
  std::vector<double> tau_per_k;
  std::vector<std::size_t> active_sizes;
  std::vector<double> abdm;
  std::vector<double> awdm;
  std::vector<double> bwdm;
  int selected_k = 0;
  std::vector<Partition> partitions;
};

/// O = sum_k n_k |m_k - m|^2 with m the spatial median of the full sample.
/// ActiveSubspace restricts centers and m to the fit's active coordinates.
double between_separation(const DataMatrix& X, const FitResult& fit, const WeiszfeldConfig& cfg = {},
                          SeparationConvention convention = SeparationConvention::FullSpace);

/// Same, with the overall spatial median supplied by the caller.
double between_separation(const FitResult& fit, const Vector& overall_median,
                          SeparationConvention convention = SeparationConvention::FullSpace);

/// Independently shuffles every column (Fisher-Yates).
DataMatrix permute_columns(const DataMatrix& X, const RngSpec& rng);

/// gap_l = log O_l - mean_b log O_bl. Entries O <= 0 use log(O + 1e-12) and
/// set *degenerate.
std::vector<double> gap_values(const std::vector<double>& observed, const Matrix& reference,
                               bool* degenerate = nullptr);

/// Index of the largest gap; ties go to the smallest tau.
std::size_t argmax_gap(const std::vector<double>& gap, const std::vector<double>& tau_grid);

/// {0} followed by grid_size-1 geometrically spaced values from
/// floor_ratio * s_max to s_max, where s_max is the largest separation score of
/// an unthresholded pre-fit.
std::vector<double> default_tau_grid(const DataMatrix& X, int K, const EngineConfig& cfg,
                                     const TuningConfig& tuning, const RngSpec& rng);

TunedFit select_tau(const DataMatrix& X, int K, const EngineConfig& cfg, const TuningConfig& tuning,
                    const RngSpec& rng);

/// ABDM / AWDM / BWDM of a partition whose centers are spatial medians of
/// the rows of X (already restricted to the retained coordinates).
BwdmTerms bwdm_terms(const DataMatrix& X, const Partition& partition, const CenterSet& centers);

/// For each K: Gap-tuned tau, refit on the retained coordinates, BWDM.
KSelectionReport select_k(const DataMatrix& X, const std::vector<int>& k_grid, const EngineConfig& cfg,
                          const TuningConfig& tuning, const RngSpec& rng);

}  // namespace sparsesm
