// Command-line front end: simulate, cluster, tune-tau, select-k, evaluate, bench.

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "sparsesm/bench.hpp"
#include "sparsesm/config.hpp"
#include "sparsesm/io.hpp"
#include "sparsesm/metrics.hpp"
#include "sparsesm/parallel.hpp"
#include "sparsesm/report.hpp"

using namespace sparsesm;

namespace {

struct Flags {
  std::optional<std::string> config;
  // data
  std::optional<std::string> input;
  bool no_header = false;
  std::optional<std::string> label_column;
  std::optional<std::string> standardize;
  std::optional<std::string> preset;
  std::optional<std::string> family;
  std::optional<int> p, n0, design_k, s_p;
  std::optional<double> delta, nu;
  std::optional<std::string> contamination;
  std::optional<double> epsilon;
  // engine
  std::optional<std::string> method;
  std::optional<int> K;
  std::optional<std::string> k_grid;
  std::optional<double> tau;
  std::optional<std::string> tau_grid;
  std::optional<double> lambda;
  std::optional<int> banding;
  std::optional<int> restarts, max_iter, B, reference_restarts, replications;
  std::optional<std::string> init;
  std::optional<std::string> convention;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  // outputs
  std::optional<std::string> out;
  std::optional<std::string> truth_out;
  std::optional<std::string> out_dir;
  std::optional<std::string> metrics;
  bool timing = false;
};

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "'" + item + "' is not a number");
    }
  }
  return out;
}

std::vector<int> parse_ints(const std::string& text) {
  std::vector<int> out;
  for (double v : parse_doubles(text)) {
    if (v != static_cast<int>(v)) throw Error(ErrorCode::InvalidArgument, "expected integers in '" + text + "'");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

void add_data_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "JSON experiment file; flags given here override it");
  app->add_option("--input", f.input, "CSV data file (rows are observations)");
  app->add_flag("--no-header", f.no_header, "The CSV has no header line");
  app->add_option("--label-column", f.label_column, "Column with true labels (name or 1-based number)");
  app->add_option("--standardize", f.standardize, "none, robust (median/MAD) or classical (mean/sd)");
  app->add_option("--preset", f.preset, "Simulated design when no --input: sparse-mean or weakly-sparse");
  app->add_option("--family", f.family, "gaussian, student-t or scale-mixture");
  app->add_option("--p", f.p, "Dimension of the simulated design");
  app->add_option("--n0", f.n0, "Observations per simulated cluster");
  app->add_option("--design-k", f.design_k, "Number of simulated clusters");
  app->add_option("--s-p", f.s_p, "Number of informative coordinates");
  app->add_option("--delta", f.delta, "Mean shift on informative coordinates");
  app->add_option("--nu", f.nu, "Degrees of freedom of the t family");
  app->add_option("--contamination", f.contamination, "row-wise or cell-wise");
  app->add_option("--epsilon", f.epsilon, "Contamination probability");
  app->add_option("--seed", f.seed, "Root RNG seed");
}

void add_engine_flags(CLI::App* app, Flags& f) {
  app->add_option("--engine", f.method,
                  "sm-sscm, sparse-sm, k-spatial-median, kmeans, kmedians, sparse-kmeans or sparse-kmedians");
  app->add_option("--K", f.K, "Number of clusters");
  app->add_option("--tau", f.tau, "Fixed threshold for sparse engines (default: Gap tuning)");
  app->add_option("--tau-grid", f.tau_grid, "Comma-separated thresholds for Gap tuning");
  app->add_option("--B", f.B, "Number of permuted reference datasets");
  app->add_option("--reference-restarts", f.reference_restarts, "Restarts for fits on reference datasets");
  app->add_option("--convention", f.convention, "Separation space for Gap: full-space or active-subspace");
  app->add_option("--lambda", f.lambda, "SSCM ridge");
  app->add_option("--banding", f.banding, "SSCM banding width");
  app->add_option("--restarts", f.restarts, "Random restarts");
  app->add_option("--max-iter", f.max_iter, "Maximum Lloyd iterations T");
  app->add_option("--init", f.init, "random or max-min");
  app->add_option("--workers", f.workers, "Worker threads (default: SPARSESM_WORKERS or all cores)");
}

ExperimentSpec build_spec(const Flags& f, Task task) {
  ExperimentSpec s = f.config ? load_experiment(*f.config) : ExperimentSpec{};
  s.task = task;
  if (f.input) s.input.csv_path = *f.input;
  if (f.no_header) s.input.has_header = false;
  if (f.label_column) s.input.label_column = *f.label_column;
  if (f.standardize) {
    if (*f.standardize == "robust") s.input.standardize = Standardization::Robust;
    else if (*f.standardize == "classical") s.input.standardize = Standardization::Classical;
    else if (*f.standardize == "none") s.input.standardize.reset();
    else throw Error(ErrorCode::InvalidArgument, "--standardize expects none, robust or classical");
  }
  SimDesign& d = s.input.design;
  if (f.preset || f.p || f.n0 || f.family) {
    const int p = f.p.value_or(d.p);
    const int n0 = f.n0.value_or(d.n0);
    const Family family = f.family ? family_from_string(*f.family) : d.family;
    const std::string preset = f.preset.value_or("sparse-mean");
    if (preset == "sparse-mean") d = SimDesign::sparse_mean_design(p, n0, d.delta, family);
    else if (preset == "weakly-sparse") d = SimDesign::weakly_sparse_design(p, n0, family, f.nu.value_or(5.0));
    else throw Error(ErrorCode::InvalidArgument, "--preset expects sparse-mean or weakly-sparse");
  }
  if (f.design_k) d.K = *f.design_k;
  if (f.s_p) d.s_p = *f.s_p;
  if (f.delta) d.delta = *f.delta;
  if (f.nu) d.nu = *f.nu;
  if (f.contamination) {
    ContaminationSpec c;
    if (*f.contamination == "row-wise") c.kind = ContaminationSpec::Kind::RowWise;
    else if (*f.contamination == "cell-wise") c.kind = ContaminationSpec::Kind::CellWise;
    else throw Error(ErrorCode::InvalidArgument, "--contamination expects row-wise or cell-wise");
    d.contamination = c;
  }
  if (f.epsilon) {
    if (!d.contamination) throw Error(ErrorCode::InvalidArgument, "--epsilon needs --contamination");
    d.contamination->epsilon = *f.epsilon;
  }
  if (f.method) {
    MethodSpec m{method_from_string(*f.method), std::nullopt};
    if (f.tau) {
      if (!is_sparse(m.id)) throw Error(ErrorCode::InvalidArgument, "--tau applies to sparse engines only");
      m.tau = *f.tau;
    }
    s.methods = {m};
  } else if (f.tau) {
    for (auto& m : s.methods) {
      if (is_sparse(m.id)) m.tau = *f.tau;
    }
  }
  if (f.K) s.K = *f.K;
  if (f.k_grid) s.k_grid = parse_ints(*f.k_grid);
  if (f.tau_grid) s.tuning.tau_grid = parse_doubles(*f.tau_grid);
  if (f.B) s.tuning.B = *f.B;
  if (f.reference_restarts) s.tuning.reference_restarts = *f.reference_restarts;
  if (f.convention) {
    if (*f.convention == "full-space") s.tuning.convention = SeparationConvention::FullSpace;
    else if (*f.convention == "active-subspace") s.tuning.convention = SeparationConvention::ActiveSubspace;
    else throw Error(ErrorCode::InvalidArgument, "--convention expects full-space or active-subspace");
  }
  if (f.lambda) s.engine.lambda = *f.lambda;
  if (f.banding) s.engine.banding = *f.banding;
  if (f.restarts) s.engine.init.restarts = *f.restarts;
  if (f.max_iter) s.engine.max_iter = *f.max_iter;
  if (f.init) {
    if (*f.init == "random") s.engine.init.kind = InitKind::RandomAssignment;
    else if (*f.init == "max-min") s.engine.init.kind = InitKind::MaxMinSeeding;
    else throw Error(ErrorCode::InvalidArgument, "--init expects random or max-min");
  }
  if (f.replications) s.replications = *f.replications;
  if (f.seed) s.seed = *f.seed;
  if (f.out) s.output = *f.out;
  s.tuning.workers = f.workers.value_or(default_worker_count());
  s.validate();
  return s;
}

struct LoadedData {
  DataMatrix X;
  std::optional<Partition> truth;
};

/// CSV input when given, otherwise one draw of the configured design.
LoadedData load_data(const ExperimentSpec& s) {
  if (s.input.csv_path) {
    CsvOptions opts;
    opts.has_header = s.input.has_header;
    opts.label_column = s.input.label_column;
    CsvData csv = ingest_csv(*s.input.csv_path, opts);
    if (s.input.standardize) csv.X = standardize_columns(csv.X, *s.input.standardize);
    return {std::move(csv.X), std::move(csv.labels)};
  }
  SimOutput sim = sample(s.input.design, RngSpec{s.seed, 0}.child(0));
  return {std::move(sim.X), std::move(sim.truth)};
}

void emit(const ExperimentSpec& s, const std::string& text) {
  if (s.output) {
    write_text(*s.output, text + '\n');
  } else {
    std::cout << text << '\n';
  }
}

int run_simulate(const Flags& f) {
  ExperimentSpec s = build_spec(f, Task::Simulate);
  if (!s.output) throw Error(ErrorCode::InvalidArgument, "simulate needs --out for the data CSV");
  const RngSpec rng{s.seed, 0};
  const SimOutput sim = sample(s.input.design, rng);
  std::vector<std::string> header;
  for (Index j = 0; j < sim.X.p(); ++j) header.push_back("x" + std::to_string(j + 1));
  write_text(*s.output, matrix_to_csv(sim.X.values(), header));
  std::string sidecar = f.truth_out.value_or(std::filesystem::path(*s.output).replace_extension(".json").string());
  write_text(sidecar, simulation_sidecar_json(s.input.design, rng, sim) + '\n');
  return 0;
}

int run_cluster(const Flags& f) {
  ExperimentSpec s = build_spec(f, Task::Cluster);
  const LoadedData data = load_data(s);
  const int K = f.K || s.input.csv_path ? s.K : s.input.design.K;
  const MethodSpec& method = s.methods.front();
  const MethodOutcome outcome = run_method(data.X, K, method, s.engine, s.tuning, RngSpec{s.seed, 0}.child(1));
  std::optional<MetricSet> metrics;
  if (data.truth) metrics = evaluate_all(outcome.fit.partition, *data.truth);
  emit(s, fit_to_json(outcome.fit, to_string(method.id), outcome.gap, metrics));
  return 0;
}

int run_tune_tau(const Flags& f) {
  ExperimentSpec s = build_spec(f, Task::TuneTau);
  const MethodSpec& method = s.methods.front();
  if (!is_sparse(method.id)) throw Error(ErrorCode::InvalidArgument, "tune-tau needs a sparse engine");
  const LoadedData data = load_data(s);
  const int K = f.K || s.input.csv_path ? s.K : s.input.design.K;
  TuningConfig tc = s.tuning;
  tc.center_rule = center_rule_of(method.id);
  const TunedFit tuned = select_tau(data.X, K, s.engine, tc, RngSpec{s.seed, 0}.child(1));
  emit(s, gap_report_to_json(tuned.report));
  return 0;
}

int run_select_k(const Flags& f) {
  ExperimentSpec s = build_spec(f, Task::SelectK);
  if (s.k_grid.empty()) throw Error(ErrorCode::InvalidArgument, "select-k needs --k-grid");
  const MethodSpec& method = s.methods.front();
  if (!is_sparse(method.id)) throw Error(ErrorCode::InvalidArgument, "select-k needs a sparse engine");
  const LoadedData data = load_data(s);
  TuningConfig tc = s.tuning;
  tc.center_rule = center_rule_of(method.id);
  emit(s, k_selection_to_json(select_k(data.X, s.k_grid, s.engine, tc, RngSpec{s.seed, 0}.child(1))));
  return 0;
}

int run_evaluate(const std::string& pred, const std::string& truth, bool no_header,
                 const std::optional<std::string>& metric_list, const std::optional<std::string>& out) {
  const Partition p = read_labels(pred, !no_header);
  const Partition t = read_labels(truth, !no_header);
  const MetricSet m = evaluate_all(p, t);
  std::string text = metrics_to_json(m);
  if (metric_list) {
    std::stringstream ss(*metric_list);
    std::string name;
    std::ostringstream os;
    os << "{";
    bool first = true;
    while (std::getline(ss, name, ',')) {
      double v = 0.0;
      if (name == "ari") v = m.ari;
      else if (name == "purity") v = m.purity;
      else if (name == "nmi") v = m.nmi;
      else if (name == "fmi") v = m.fmi;
      else if (name == "v_measure" || name == "v") v = m.v_measure;
      else throw Error(ErrorCode::InvalidArgument, "unknown metric '" + name + "'");
      os << (first ? "" : ", ") << '"' << name << "\": " << format_double(v);
      first = false;
    }
    os << "}";
    text = os.str();
  }
  if (out) write_text(*out, text + '\n');
  else std::cout << text << '\n';
  return 0;
}

int run_bench_cmd(const Flags& f) {
  ExperimentSpec s = build_spec(f, Task::Bench);
  const int workers = f.workers.value_or(default_worker_count());
  // replications are the parallel unit; each tuning run stays sequential
  s.tuning.workers = 1;
  const BenchReport report = run_bench(s, workers);
  const std::string table = summary_to_csv(report, f.timing);
  if (f.out_dir) {
    std::filesystem::create_directories(*f.out_dir);
    const std::filesystem::path dir(*f.out_dir);
    write_text((dir / "summary.csv").string(), table);
    write_text((dir / "records.csv").string(), records_to_csv(report, f.timing));
    write_text((dir / "records.jsonl").string(), records_to_jsonl(report, f.timing));
  }
  if (s.output) write_text(*s.output, table);
  if (!f.out_dir && !s.output) std::cout << table;
  return 0;
}

int report_error(const std::string& code, const std::string& message, std::size_t line = 0,
                 std::size_t column = 0) {
  std::cerr << error_to_json(code, message, line, column) << '\n';
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust sparse clustering with spatial medians"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "Draw a dataset from a simulation design");
  add_data_flags(simulate, f);
  simulate->add_option("--out", f.out, "Data CSV to write")->required();
  simulate->add_option("--truth-out", f.truth_out, "Sidecar JSON (default: data path with .json)");

  auto* cluster = app.add_subcommand("cluster", "Fit one clustering engine");
  add_data_flags(cluster, f);
  add_engine_flags(cluster, f);
  cluster->add_option("--out", f.out, "JSON report path (default: stdout)");

  auto* tune = app.add_subcommand("tune-tau", "Gap selection of the threshold");
  add_data_flags(tune, f);
  add_engine_flags(tune, f);
  tune->add_option("--out", f.out, "JSON report path (default: stdout)");

  auto* selk = app.add_subcommand("select-k", "BWDM selection of the number of clusters");
  add_data_flags(selk, f);
  add_engine_flags(selk, f);
  selk->add_option("--k-grid", f.k_grid, "Comma-separated candidate K values")->required();
  selk->add_option("--out", f.out, "JSON report path (default: stdout)");

  std::string pred_path, truth_path;
  auto* eval = app.add_subcommand("evaluate", "Compare two label files");
  eval->add_option("--pred", pred_path, "Predicted labels (one per line, or JSON)")->required();
  eval->add_option("--truth", truth_path, "True labels (one per line, or JSON such as a simulate sidecar)")->required();
  eval->add_flag("--no-header", f.no_header, "Label text files have no header line");
  eval->add_option("--metrics", f.metrics, "Comma-separated subset of ari,purity,nmi,fmi,v_measure");
  eval->add_option("--out", f.out, "JSON output path (default: stdout)");

  auto* bench = app.add_subcommand("bench", "Replicated comparison of methods");
  add_data_flags(bench, f);
  add_engine_flags(bench, f);
  bench->add_option("--replications", f.replications, "Number of replications");
  bench->add_option("--out-dir", f.out_dir, "Directory for summary.csv, records.csv and records.jsonl");
  bench->add_option("--out", f.out, "Summary CSV path");
  bench->add_flag("--timing", f.timing, "Include runtime columns (output is then not reproducible)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("UsageError", e.what());
  }

  try {
    if (*simulate) return run_simulate(f);
    if (*cluster) return run_cluster(f);
    if (*tune) return run_tune_tau(f);
    if (*selk) return run_select_k(f);
    if (*eval) return run_evaluate(pred_path, truth_path, f.no_header, f.metrics, f.out);
    if (*bench) return run_bench_cmd(f);
  } catch (const Error& e) {
    return report_error(to_string(e.code()), e.what(), e.line(), e.column());
  } catch (const std::exception& e) {
    return report_error("InternalError", e.what());
  }
  return 1;
}
