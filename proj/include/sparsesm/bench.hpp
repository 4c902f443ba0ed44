#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sparsesm/config.hpp"
#include "sparsesm/metrics.hpp"

namespace sparsesm {

struct MethodOutcome {
  FitResult fit;
  /// Present when the threshold was tuned by the Gap criterion.
  std::optional<GapReport> gap;
};

/// Fits one method. Sparse methods without a fixed tau are Gap-tuned with
/// `tuning` (its center rule is replaced by the method's).
MethodOutcome run_method(const DataMatrix& X, int K, const MethodSpec& method, const EngineConfig& engine,
                         const TuningConfig& tuning, const RngSpec& rng);

struct BenchRecord {
  std::size_t replication = 0;
  std::optional<double> sweep_value;
  std::string method;
  MetricSet metrics;
  std::optional<double> tau;
  std::size_t active_size = 0;
  double seconds = 0.0;
};

struct BenchSummaryRow {
  std::optional<double> sweep_value;
  std::string method;
  std::size_t replications = 0;
  MetricSet mean;
  /// Sample standard deviation (n - 1 denominator); 0 for a single replication.
  MetricSet sd;
  double active_mean = 0.0;
  double seconds_mean = 0.0;
  double seconds_sd = 0.0;

  friend bool operator==(const BenchSummaryRow&, const BenchSummaryRow&);
};

struct BenchReport {
  std::string sweep_parameter = "none";
  /// Ordered by sweep value, replication, then method.
  std::vector<BenchRecord> records;
  /// Ordered by sweep value, then method in configuration order.
  std::vector<BenchSummaryRow> summary;
};

/// Replication r draws its data from RngSpec{seed, 0}.child(r).child(0) and
/// every method starts from the init stream .child(r).child(1), so all
/// methods, and all values of a sweep, see the same underlying draws.
/// Replications run on `workers` threads; results do not depend on it.
BenchReport run_bench(const ExperimentSpec& spec, int workers = 1);

BenchSummaryRow summarize(const std::vector<BenchRecord>& records);

/// Summary table, one row per (sweep value, method). Runtime columns are
/// written only when `with_timing` is set so that reruns are byte-identical.
std::string summary_to_csv(const BenchReport& report, bool with_timing = false);
/// Inverse of summary_to_csv.
std::vector<BenchSummaryRow> summary_from_csv(const std::string& text);

/// Tidy per-replication table for external plotting.
std::string records_to_csv(const BenchReport& report, bool with_timing = false);
/// One JSON object per replication and method.
std::string records_to_jsonl(const BenchReport& report, bool with_timing = false);

}  // namespace sparsesm
