#include "sparsesm/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sparsesm/parallel.hpp"

namespace sparsesm {

namespace {

constexpr double kLogFloor = 1e-12;

double safe_log(double value, bool& degenerate) {
  if (value <= 0.0) {
    degenerate = true;
    return std::log(std::max(value, 0.0) + kLogFloor);
  }
  return std::log(value);
}

int resolve_workers(int requested) { return requested > 0 ? requested : default_worker_count(); }

}  // namespace

void TuningConfig::validate() const {
  if (B < 1) throw Error(ErrorCode::InvalidArgument, "number of reference datasets B must be at least 1");
  if (tau_grid.empty() && grid_size < 1) throw Error(ErrorCode::InvalidArgument, "tau grid size must be at least 1");
  for (double tau : tau_grid) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw Error(ErrorCode::InvalidArgument, "tau grid values must be finite and nonnegative");
  }
  if (!(grid_floor_ratio > 0.0 && grid_floor_ratio <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "grid floor ratio must lie in (0, 1]");
  }
  if (reference_restarts && *reference_restarts < 1) {
    throw Error(ErrorCode::InvalidArgument, "reference restarts must be at least 1");
  }
}

double between_separation(const FitResult& fit, const Vector& overall_median, SeparationConvention convention) {
  const auto sizes = fit.partition.sizes();
  double total = 0.0;
  for (Index k = 0; k < fit.centers.rows(); ++k) {
    const Vector diff = fit.centers.row(k).transpose() - overall_median;
    double sq = 0.0;
    if (convention == SeparationConvention::ActiveSubspace && fit.sparse) {
      for (Index j : fit.sparse->active) sq += diff[j] * diff[j];
    } else {
      sq = diff.squaredNorm();
    }
    total += static_cast<double>(sizes[static_cast<std::size_t>(k)]) * sq;
  }
  return total;
}

double between_separation(const DataMatrix& X, const FitResult& fit, const WeiszfeldConfig& cfg,
                          SeparationConvention convention) {
  if (fit.centers.cols() != X.p() || fit.partition.n() != static_cast<std::size_t>(X.n())) {
    throw Error(ErrorCode::DimensionMismatch, "between_separation: fit does not match the data");
  }
  if (convention == SeparationConvention::ActiveSubspace && fit.sparse) {
    // the overall median is taken within the retained coordinates
    const DataMatrix sub = X.select_columns(fit.sparse->active);
    const Vector m_sub = spatial_median_columns(sub.by_column(), cfg).point;
    Vector m = Vector::Zero(X.p());
    for (std::size_t c = 0; c < fit.sparse->active.size(); ++c) m[fit.sparse->active[c]] = m_sub[static_cast<Index>(c)];
    return between_separation(fit, m, convention);
  }
  return between_separation(fit, spatial_median_columns(X.by_column(), cfg).point, convention);
}

DataMatrix permute_columns(const DataMatrix& X, const RngSpec& rng) {
  Matrix out = X.values();
  Rng gen(rng);
  const Index n = out.rows();
  for (Index j = 0; j < out.cols(); ++j) {
    for (Index i = n - 1; i > 0; --i) {
      const auto swap_with = static_cast<Index>(gen.uniform_index(static_cast<std::uint64_t>(i + 1)));
      std::swap(out(i, j), out(swap_with, j));
    }
  }
  return validate_matrix(std::move(out));
}

std::vector<double> gap_values(const std::vector<double>& observed, const Matrix& reference, bool* degenerate) {
  if (reference.cols() != static_cast<Index>(observed.size()) || reference.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch, "gap: reference matrix must be B x grid");
  }
  bool flag = false;
  std::vector<double> gap(observed.size());
  for (std::size_t l = 0; l < observed.size(); ++l) {
    // mean of log ratios, so identical references give exactly zero
    const double obs = safe_log(observed[l], flag);
    double sum = 0.0;
    for (Index b = 0; b < reference.rows(); ++b) sum += obs - safe_log(reference(b, static_cast<Index>(l)), flag);
    gap[l] = sum / static_cast<double>(reference.rows());
  }
  if (degenerate) *degenerate = flag;
  return gap;
}

std::size_t argmax_gap(const std::vector<double>& gap, const std::vector<double>& tau_grid) {
  if (gap.empty() || gap.size() != tau_grid.size()) {
    throw Error(ErrorCode::DimensionMismatch, "argmax_gap: gap and grid sizes differ");
  }
  std::size_t best = 0;
  for (std::size_t l = 1; l < gap.size(); ++l) {
    if (gap[l] > gap[best] || (gap[l] == gap[best] && tau_grid[l] < tau_grid[best])) best = l;
  }
  return best;
}

std::vector<double> default_tau_grid(const DataMatrix& X, int K, const EngineConfig& cfg,
                                     const TuningConfig& tuning, const RngSpec& rng) {
  tuning.validate();
  const FitResult prefit = fit(X, K, EngineSpec::baseline(tuning.center_rule, 0.0), cfg, rng.child(0));
  const double s_max = prefit.sparse ? prefit.sparse->scores.maxCoeff() : 0.0;
  std::vector<double> grid{0.0};
  const int positive = tuning.grid_size - 1;
  if (positive < 1 || !(s_max > 0.0)) return grid;
  const double lo = s_max * tuning.grid_floor_ratio;
  for (int l = 0; l < positive; ++l) {
    const double frac = positive == 1 ? 1.0 : static_cast<double>(l) / static_cast<double>(positive - 1);
    grid.push_back(lo * std::pow(s_max / lo, frac));
  }
  grid.back() = s_max;
  return grid;
}

TunedFit select_tau(const DataMatrix& X, int K, const EngineConfig& cfg, const TuningConfig& tuning,
                    const RngSpec& rng) {
  tuning.validate();
  cfg.validate();
  TunedFit out;
  GapReport& report = out.report;
  report.tau_grid = tuning.tau_grid.empty() ? default_tau_grid(X, K, cfg, tuning, rng) : tuning.tau_grid;
  const std::size_t L = report.tau_grid.size();
  const auto B = static_cast<std::size_t>(tuning.B);
  const RngSpec init_stream = rng.child(0);

  EngineConfig ref_cfg = cfg;
  if (tuning.reference_restarts) ref_cfg.init.restarts = *tuning.reference_restarts;

  std::vector<DataMatrix> references;
  references.reserve(B);
  for (std::size_t b = 0; b < B; ++b) {
    references.push_back(tuning.reference == ReferenceKind::Identity ? X
                                                                     : permute_columns(X, rng.child(1).child(b)));
  }
  const Vector observed_median = spatial_median_columns(X.by_column(), cfg.weiszfeld).point;
  std::vector<Vector> reference_medians(B);
  for (std::size_t b = 0; b < B; ++b) reference_medians[b] = spatial_median_columns(references[b].by_column(), cfg.weiszfeld).point;

  auto separation = [&](const DataMatrix& data, const FitResult& f, const Vector& median) {
    return tuning.convention == SeparationConvention::FullSpace
               ? between_separation(f, median)
               : between_separation(data, f, cfg.weiszfeld, tuning.convention);
  };

  // cells 0..L-1 are observed fits, then B x L reference fits
  std::vector<std::optional<FitResult>> observed_fits(L);
  report.observed.assign(L, 0.0);
  report.reference = Matrix::Zero(static_cast<Index>(B), static_cast<Index>(L));
  parallel_for(L * (B + 1), resolve_workers(tuning.workers), [&](std::size_t cell) {
    const std::size_t l = cell % L;
    const auto engine = EngineSpec::baseline(tuning.center_rule, report.tau_grid[l]);
    if (cell < L) {
      FitResult f = fit(X, K, engine, cfg, init_stream);
      report.observed[l] = separation(X, f, observed_median);
      observed_fits[l] = std::move(f);
    } else {
      const std::size_t b = cell / L - 1;
      const FitResult f = fit(references[b], K, engine, ref_cfg, init_stream);
      report.reference(static_cast<Index>(b), static_cast<Index>(l)) = separation(references[b], f, reference_medians[b]);
    }
  });

  for (const auto& f : observed_fits) report.active_sizes.push_back(f->sparse ? f->sparse->active.size() : 0);
  report.gap = gap_values(report.observed, report.reference, &report.degenerate);
  report.selected_index = argmax_gap(report.gap, report.tau_grid);
  report.selected_tau = report.tau_grid[report.selected_index];
  out.fit = std::move(*observed_fits[report.selected_index]);
  return out;
}

BwdmTerms bwdm_terms(const DataMatrix& X, const Partition& partition, const CenterSet& centers) {
  const int K = partition.K();
  const auto n = static_cast<double>(X.n());
  if (K < 2 || K >= X.n()) throw Error(ErrorCode::InvalidArgument, "BWDM needs 2 <= K <= n - 1");
  if (centers.rows() != K || centers.cols() != X.p()) throw Error(ErrorCode::DimensionMismatch, "BWDM: centers do not match");
  BwdmTerms t;
  double between = 0.0;
  for (int k = 0; k < K; ++k) {
    for (int l = k + 1; l < K; ++l) between += (centers.row(k) - centers.row(l)).norm();
  }
  t.abdm = between / (0.5 * K * (K - 1));
  double within = 0.0;
  for (Index i = 0; i < X.n(); ++i) within += (X.row(i) - centers.row(partition[static_cast<std::size_t>(i)])).norm();
  t.awdm = within / n;
  const double num = t.abdm / static_cast<double>(K - 1);
  const double den = t.awdm / (n - static_cast<double>(K));
  t.bwdm = den > 0.0 ? num / den : std::numeric_limits<double>::max();
  return t;
}

KSelectionReport select_k(const DataMatrix& X, const std::vector<int>& k_grid, const EngineConfig& cfg,
                          const TuningConfig& tuning, const RngSpec& rng) {
  if (k_grid.empty()) throw Error(ErrorCode::InvalidArgument, "K grid must not be empty");
  for (int K : k_grid) {
    if (K < 2 || K > X.n() - 1) throw Error(ErrorCode::InvalidArgument, "K grid values must lie in {2, ..., n-1}");
  }
  KSelectionReport report;
  report.k_grid = k_grid;
  std::size_t best = 0;
  for (std::size_t g = 0; g < k_grid.size(); ++g) {
    const int K = k_grid[g];
    const RngSpec k_stream = rng.child(static_cast<std::uint64_t>(K));
    const TunedFit tuned = select_tau(X, K, cfg, tuning, k_stream);
    const std::vector<Index>& active = tuned.fit.sparse->active;
    const DataMatrix retained = X.select_columns(active);
    const FitResult refit = fit(retained, K, EngineSpec::baseline(tuning.center_rule), cfg, k_stream.child(2));
    const BwdmTerms terms = bwdm_terms(retained, refit.partition, refit.centers);

    report.tau_per_k.push_back(tuned.report.selected_tau);
    report.active_sizes.push_back(active.size());
    report.abdm.push_back(terms.abdm);
    report.awdm.push_back(terms.awdm);
    report.bwdm.push_back(terms.bwdm);
    report.partitions.push_back(refit.partition);
    if (terms.bwdm > report.bwdm[best]) best = g;
  }
  report.selected_k = k_grid[best];
  return report;
}

}  // namespace sparsesm
