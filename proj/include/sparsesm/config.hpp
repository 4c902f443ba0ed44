#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sparsesm/datagen.hpp"
#include "sparsesm/engines.hpp"
#include "sparsesm/tuning.hpp"

namespace sparsesm {

enum class Task { Simulate, Cluster, TuneTau, SelectK, Evaluate, Bench };

std::string to_string(Task task);
Task task_from_string(const std::string& name);

/// A clustering method as named in configs and on the command line.
enum class MethodId {
  SmSscm,           // "sm-sscm"
  SparseSm,         // "sparse-sm"
  KSpatialMedian,   // "k-spatial-median"
  KMeans,           // "kmeans"
  KMedians,         // "kmedians"
  SparseKMeans,     // "sparse-kmeans"
  SparseKMedians,   // "sparse-kmedians"
};

std::string to_string(MethodId id);
MethodId method_from_string(const std::string& name);
bool is_sparse(MethodId id);
/// Center rule behind a method (SM-SSCM uses spatial medians).
CenterRule center_rule_of(MethodId id);

struct MethodSpec {
  MethodId id = MethodId::SparseSm;
  /// Fixed threshold for sparse methods; unset means Gap tuning.
  std::optional<double> tau;
};

/// What the "sweep" field varies across a bench run.
enum class SweepParameter { None, P, Epsilon, Delta };

struct Sweep {
  SweepParameter parameter = SweepParameter::None;
  std::vector<double> values;
};

struct DataSource {
  std::optional<std::string> csv_path;
  bool has_header = true;
  std::optional<std::string> label_column;
  std::optional<Standardization> standardize;
  /// Used when csv_path is unset.
  SimDesign design;
};

struct ExperimentSpec {
  Task task = Task::Bench;
  DataSource input;
  std::vector<MethodSpec> methods{{MethodId::SparseSm, std::nullopt}};
  int K = 3;
  std::vector<int> k_grid;
  EngineConfig engine;
  TuningConfig tuning;
  int replications = 1;
  std::uint64_t seed = 1;
  Sweep sweep;
  std::optional<std::string> output;

  void validate() const;
};

/// Parses a JSON experiment document. Unknown keys and type errors raise
/// InvalidConfig naming the offending key.
ExperimentSpec parse_experiment(const std::string& json_text);
ExperimentSpec load_experiment(const std::string& path);
/// Canonical JSON form, accepted back by parse_experiment.
std::string experiment_to_json(const ExperimentSpec& spec);

/// JSON form of a design as accepted under "design" in an experiment.
std::string design_to_json(const SimDesign& design);

}  // namespace sparsesm
