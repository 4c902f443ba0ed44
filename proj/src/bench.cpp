#include "sparsesm/bench.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <json.hpp>
#include <sstream>

#include "sparsesm/io.hpp"
#include "sparsesm/parallel.hpp"

namespace sparsesm {

namespace {

const char* const kMetricNames[] = {"ari", "purity", "nmi", "fmi", "v_measure"};

double& metric_ref(MetricSet& m, int idx) {
  switch (idx) {
    case 0: return m.ari;
    case 1: return m.purity;
    case 2: return m.nmi;
    case 3: return m.fmi;
    default: return m.v_measure;
  }
}

double metric_at(const MetricSet& m, int idx) {
  MetricSet copy = m;
  return metric_ref(copy, idx);
}

bool same(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

bool same_metrics(const MetricSet& a, const MetricSet& b) {
  for (int i = 0; i < 5; ++i) {
    if (!same(metric_at(a, i), metric_at(b, i))) return false;
  }
  return true;
}

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

SimDesign apply_sweep(SimDesign d, SweepParameter param, double value) {
  switch (param) {
    case SweepParameter::None: break;
    case SweepParameter::P: {
      const double ratio = static_cast<double>(d.s_p) / static_cast<double>(d.p);
      d.p = static_cast<int>(std::lround(value));
      d.s_p = static_cast<int>(std::lround(ratio * value));
      break;
    }
    case SweepParameter::Epsilon: d.contamination->epsilon = value; break;
    case SweepParameter::Delta: d.delta = value; break;
  }
  return d;
}

std::string opt_to_string(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::optional<double> opt_from_string(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::stod(s);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

bool operator==(const BenchSummaryRow& a, const BenchSummaryRow& b) {
  return a.sweep_value == b.sweep_value && a.method == b.method && a.replications == b.replications &&
         same_metrics(a.mean, b.mean) && same_metrics(a.sd, b.sd) && same(a.active_mean, b.active_mean) &&
         same(a.seconds_mean, b.seconds_mean) && same(a.seconds_sd, b.seconds_sd);
}

MethodOutcome run_method(const DataMatrix& X, int K, const MethodSpec& method, const EngineConfig& engine,
                         const TuningConfig& tuning, const RngSpec& rng) {
  const CenterRule rule = center_rule_of(method.id);
  MethodOutcome out;
  switch (method.id) {
    case MethodId::SmSscm:
      out.fit = fit_sm_sscm(X, K, engine, rng);
      break;
    case MethodId::KSpatialMedian:
    case MethodId::KMeans:
    case MethodId::KMedians:
      out.fit = fit_baseline(X, K, rule, engine, rng);
      break;
    case MethodId::SparseSm:
    case MethodId::SparseKMeans:
    case MethodId::SparseKMedians:
      if (method.tau) {
        out.fit = fit_baseline(X, K, rule, engine, rng, *method.tau);
      } else {
        TuningConfig tc = tuning;
        tc.center_rule = rule;
        TunedFit tuned = select_tau(X, K, engine, tc, rng);
        out.fit = std::move(tuned.fit);
        out.gap = std::move(tuned.report);
      }
      break;
  }
  return out;
}

BenchSummaryRow summarize(const std::vector<BenchRecord>& records) {
  if (records.empty()) throw Error(ErrorCode::EmptyInput, "cannot summarize zero replications");
  BenchSummaryRow row;
  row.sweep_value = records.front().sweep_value;
  row.method = records.front().method;
  row.replications = records.size();
  std::vector<double> values(records.size());
  for (int m = 0; m < 5; ++m) {
    for (std::size_t i = 0; i < records.size(); ++i) values[i] = metric_at(records[i].metrics, m);
    const auto [mean, sd] = mean_sd(values);
    metric_ref(row.mean, m) = mean;
    metric_ref(row.sd, m) = sd;
  }
  for (std::size_t i = 0; i < records.size(); ++i) values[i] = static_cast<double>(records[i].active_size);
  row.active_mean = mean_sd(values).first;
  for (std::size_t i = 0; i < records.size(); ++i) values[i] = records[i].seconds;
  std::tie(row.seconds_mean, row.seconds_sd) = mean_sd(values);
  return row;
}

BenchReport run_bench(const ExperimentSpec& spec, int workers) {
  spec.validate();
  std::optional<CsvData> csv;
  if (spec.input.csv_path) {
    CsvOptions opts;
    opts.has_header = spec.input.has_header;
    opts.label_column = spec.input.label_column;
    csv = ingest_csv(*spec.input.csv_path, opts);
    if (!csv->labels) throw Error(ErrorCode::InvalidConfig, "bench on a CSV input needs input.label_column");
    if (spec.input.standardize) csv->X = standardize_columns(csv->X, *spec.input.standardize);
  }

  std::vector<std::optional<double>> sweep_values;
  if (spec.sweep.parameter == SweepParameter::None) {
    sweep_values.push_back(std::nullopt);
  } else {
    for (double v : spec.sweep.values) sweep_values.push_back(v);
  }
  const auto R = static_cast<std::size_t>(spec.replications);
  const std::size_t M = spec.methods.size();
  const RngSpec root{spec.seed, 0};

  std::vector<BenchRecord> slots(sweep_values.size() * R * M);
  parallel_for(sweep_values.size() * R, workers, [&](std::size_t cell) {
    const std::size_t v = cell / R;
    const std::size_t r = cell % R;
    const RngSpec rep = root.child(r);
    std::optional<SimOutput> sim;
    if (!csv) {
      const SimDesign design =
          sweep_values[v] ? apply_sweep(spec.input.design, spec.sweep.parameter, *sweep_values[v]) : spec.input.design;
      sim = sample(design, rep.child(0));
    }
    const DataMatrix& X = csv ? csv->X : sim->X;
    const Partition& truth = csv ? *csv->labels : sim->truth;
    const int K = csv ? spec.K : (sim->truth.K());
    for (std::size_t m = 0; m < M; ++m) {
      const auto start = std::chrono::steady_clock::now();
      MethodOutcome outcome = run_method(X, K, spec.methods[m], spec.engine, spec.tuning, rep.child(1));
      const auto stop = std::chrono::steady_clock::now();
      BenchRecord& rec = slots[cell * M + m];
      rec.replication = r;
      rec.sweep_value = sweep_values[v];
      rec.method = to_string(spec.methods[m].id);
      rec.metrics = evaluate_all(outcome.fit.partition, truth);
      rec.seconds = std::chrono::duration<double>(stop - start).count();
      if (outcome.fit.sparse) {
        rec.tau = outcome.fit.sparse->tau;
        rec.active_size = outcome.fit.sparse->active.size();
      } else {
        rec.active_size = static_cast<std::size_t>(X.p());
      }
    }
  });

  BenchReport report;
  const char* names[] = {"none", "p", "epsilon", "delta"};
  report.sweep_parameter = names[static_cast<int>(spec.sweep.parameter)];
  report.records = std::move(slots);
  for (std::size_t v = 0; v < sweep_values.size(); ++v) {
    for (std::size_t m = 0; m < M; ++m) {
      std::vector<BenchRecord> group;
      for (std::size_t r = 0; r < R; ++r) group.push_back(report.records[(v * R + r) * M + m]);
      report.summary.push_back(summarize(group));
    }
  }
  return report;
}

std::string summary_to_csv(const BenchReport& report, bool with_timing) {
  std::string out = "sweep,value,method,replications";
  for (const char* name : kMetricNames) out += std::string(",") + name + "_mean," + name + "_sd";
  out += ",active_mean";
  if (with_timing) out += ",seconds_mean,seconds_sd";
  out += '\n';
  for (const auto& row : report.summary) {
    out += report.sweep_parameter + ',' + opt_to_string(row.sweep_value) + ',' + row.method + ',' +
           std::to_string(row.replications);
    for (int m = 0; m < 5; ++m) {
      out += ',' + format_double(metric_at(row.mean, m)) + ',' + format_double(metric_at(row.sd, m));
    }
    out += ',' + format_double(row.active_mean);
    if (with_timing) out += ',' + format_double(row.seconds_mean) + ',' + format_double(row.seconds_sd);
    out += '\n';
  }
  return out;
}

std::vector<BenchSummaryRow> summary_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyInput, "summary CSV is empty");
  const auto header = split(line);
  const bool with_timing = header.size() == 17;
  if (header.size() != 15 && !with_timing) {
    throw Error(ErrorCode::RaggedRows, "summary CSV header has an unexpected width", 1);
  }
  std::vector<BenchSummaryRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != header.size()) throw Error(ErrorCode::RaggedRows, "summary CSV row has the wrong width", line_no);
    BenchSummaryRow row;
    try {
      row.sweep_value = opt_from_string(f[1]);
      row.method = f[2];
      row.replications = std::stoul(f[3]);
      for (int m = 0; m < 5; ++m) {
        metric_ref(row.mean, m) = std::stod(f[4 + 2 * m]);
        metric_ref(row.sd, m) = std::stod(f[5 + 2 * m]);
      }
      row.active_mean = std::stod(f[14]);
      if (with_timing) {
        row.seconds_mean = std::stod(f[15]);
        row.seconds_sd = std::stod(f[16]);
      }
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::NonNumericCell, "summary CSV has a non-numeric cell", line_no);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string records_to_csv(const BenchReport& report, bool with_timing) {
  std::string out = "sweep,value,replication,method,ari,purity,nmi,fmi,v_measure,tau,active_size";
  if (with_timing) out += ",seconds";
  out += '\n';
  for (const auto& r : report.records) {
    out += report.sweep_parameter + ',' + opt_to_string(r.sweep_value) + ',' + std::to_string(r.replication) + ',' +
           r.method;
    for (int m = 0; m < 5; ++m) out += ',' + format_double(metric_at(r.metrics, m));
    out += ',' + opt_to_string(r.tau) + ',' + std::to_string(r.active_size);
    if (with_timing) out += ',' + format_double(r.seconds);
    out += '\n';
  }
  return out;
}

std::string records_to_jsonl(const BenchReport& report, bool with_timing) {
  std::string out;
  for (const auto& r : report.records) {
    nlohmann::ordered_json j;
    j["replication"] = r.replication;
    if (r.sweep_value) j[report.sweep_parameter] = *r.sweep_value;
    j["method"] = r.method;
    for (int m = 0; m < 5; ++m) j[kMetricNames[m]] = metric_at(r.metrics, m);
    j["tau"] = r.tau ? nlohmann::ordered_json(*r.tau) : nlohmann::ordered_json(nullptr);
    j["active_size"] = r.active_size;
    if (with_timing) j["seconds"] = r.seconds;
    out += j.dump() + '\n';
  }
  return out;
}

}  // namespace sparsesm
