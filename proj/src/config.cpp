#include "sparsesm/config.hpp"

#include <cmath>
#include <json.hpp>
#include <set>

#include "sparsesm/io.hpp"

namespace sparsesm {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "config key '" + key + "': " + what);
}

void check_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) bad(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!ok.count(item.key())) bad(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
  }
}

template <typename T>
T get(const json& obj, const char* key, const std::string& where, T fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  try {
    return obj[key].get<T>();
  } catch (const json::exception&) {
    bad(where.empty() ? key : where + "." + key, "wrong type");
  }
}

int get_int(const json& obj, const char* key, const std::string& where, int fallback) {
  if (!obj.contains(key) || obj[key].is_null()) return fallback;
  if (!obj[key].is_number_integer()) bad(where.empty() ? key : where + "." + key, "expected an integer");
  return obj[key].get<int>();
}

CovarianceSpec parse_covariance(const json& j, CovarianceSpec c) {
  check_keys(j, "design.covariance", {"kind", "rho", "block_scales"});
  const std::string kind = get<std::string>(j, "kind", "design.covariance",
                                            c.kind == CovarianceSpec::Kind::Ar1 ? "ar1" : "heteroscedastic-ar1");
  if (kind == "ar1") c.kind = CovarianceSpec::Kind::Ar1;
  else if (kind == "heteroscedastic-ar1") c.kind = CovarianceSpec::Kind::HeteroscedasticAr1;
  else bad("design.covariance.kind", "expected ar1 or heteroscedastic-ar1");
  c.rho = get<double>(j, "rho", "design.covariance", c.rho);
  c.block_scales = get<std::vector<double>>(j, "block_scales", "design.covariance", c.block_scales);
  return c;
}

ContaminationSpec parse_contamination(const json& j) {
  check_keys(j, "design.contamination", {"kind", "epsilon", "row_sigma", "epsilon_noise", "cell_sd"});
  ContaminationSpec c;
  const std::string kind = get<std::string>(j, "kind", "design.contamination", "row-wise");
  if (kind == "row-wise") c.kind = ContaminationSpec::Kind::RowWise;
  else if (kind == "cell-wise") c.kind = ContaminationSpec::Kind::CellWise;
  else bad("design.contamination.kind", "expected row-wise or cell-wise");
  c.epsilon = get<double>(j, "epsilon", "design.contamination", c.epsilon);
  c.row_sigma = get<double>(j, "row_sigma", "design.contamination", c.row_sigma);
  c.epsilon_noise = get<double>(j, "epsilon_noise", "design.contamination", c.epsilon_noise);
  c.cell_sd = get<double>(j, "cell_sd", "design.contamination", c.cell_sd);
  return c;
}

SimDesign parse_design(const json& j) {
  check_keys(j, "design", {"preset", "n0", "K", "p", "s_p", "delta", "family", "nu", "mix_prob", "mix_factor",
                           "covariance", "contamination"});
  const int p = get_int(j, "p", "design", 200);
  const int n0 = get_int(j, "n0", "design", 100);
  Family family = Family::Gaussian;
  if (j.contains("family")) {
    try {
      family = family_from_string(get<std::string>(j, "family", "design", "gaussian"));
    } catch (const Error&) {
      bad("design.family", "expected gaussian, student-t or scale-mixture");
    }
  }
  const std::string preset = get<std::string>(j, "preset", "design", "sparse-mean");
  SimDesign d;
  if (preset == "sparse-mean") {
    d = SimDesign::sparse_mean_design(p, n0, get<double>(j, "delta", "design", 3.0), family);
  } else if (preset == "weakly-sparse") {
    d = SimDesign::weakly_sparse_design(p, n0, family, get<double>(j, "nu", "design", 5.0));
  } else {
    bad("design.preset", "expected sparse-mean or weakly-sparse");
  }
  d.K = get_int(j, "K", "design", d.K);
  d.s_p = get_int(j, "s_p", "design", d.s_p);
  d.delta = get<double>(j, "delta", "design", d.delta);
  d.nu = get<double>(j, "nu", "design", d.nu);
  d.mix_prob = get<double>(j, "mix_prob", "design", d.mix_prob);
  d.mix_factor = get<double>(j, "mix_factor", "design", d.mix_factor);
  if (j.contains("covariance")) d.covariance = parse_covariance(j["covariance"], d.covariance);
  if (j.contains("contamination") && !j["contamination"].is_null()) {
    d.contamination = parse_contamination(j["contamination"]);
  }
  return d;
}

json design_json(const SimDesign& d) {
  json j;
  j["n0"] = d.n0;
  j["K"] = d.K;
  j["p"] = d.p;
  j["s_p"] = d.s_p;
  j["delta"] = d.delta;
  j["family"] = to_string(d.family);
  j["nu"] = d.nu;
  j["mix_prob"] = d.mix_prob;
  j["mix_factor"] = d.mix_factor;
  j["covariance"] = {{"kind", d.covariance.kind == CovarianceSpec::Kind::Ar1 ? "ar1" : "heteroscedastic-ar1"},
                     {"rho", d.covariance.rho},
                     {"block_scales", d.covariance.block_scales}};
  if (d.contamination) {
    const auto& c = *d.contamination;
    j["contamination"] = {{"kind", c.kind == ContaminationSpec::Kind::RowWise ? "row-wise" : "cell-wise"},
                          {"epsilon", c.epsilon},
                          {"row_sigma", c.row_sigma},
                          {"epsilon_noise", c.epsilon_noise},
                          {"cell_sd", c.cell_sd}};
  }
  return j;
}

EngineConfig parse_engine(const json& j) {
  check_keys(j, "engine", {"max_iter", "restarts", "init", "lambda", "banding", "reset_excluded", "weiszfeld"});
  EngineConfig c;
  c.max_iter = get_int(j, "max_iter", "engine", c.max_iter);
  c.init.restarts = get_int(j, "restarts", "engine", c.init.restarts);
  const std::string init = get<std::string>(j, "init", "engine", "random");
  if (init == "random") c.init.kind = InitKind::RandomAssignment;
  else if (init == "max-min") c.init.kind = InitKind::MaxMinSeeding;
  else bad("engine.init", "expected random or max-min");
  c.lambda = get<double>(j, "lambda", "engine", c.lambda);
  if (j.contains("banding") && !j["banding"].is_null()) c.banding = get_int(j, "banding", "engine", 0);
  c.reset_excluded = get<bool>(j, "reset_excluded", "engine", c.reset_excluded);
  if (j.contains("weiszfeld")) {
    const json& w = j["weiszfeld"];
    check_keys(w, "engine.weiszfeld", {"max_iter", "tol", "anchor_epsilon"});
    c.weiszfeld.max_iter = get_int(w, "max_iter", "engine.weiszfeld", c.weiszfeld.max_iter);
    c.weiszfeld.tol = get<double>(w, "tol", "engine.weiszfeld", c.weiszfeld.tol);
    c.weiszfeld.anchor_epsilon = get<double>(w, "anchor_epsilon", "engine.weiszfeld", c.weiszfeld.anchor_epsilon);
  }
  return c;
}

TuningConfig parse_tuning(const json& j) {
  check_keys(j, "tuning", {"tau_grid", "grid_size", "grid_floor_ratio", "B", "reference_restarts", "convention",
                           "workers"});
  TuningConfig t;
  t.tau_grid = get<std::vector<double>>(j, "tau_grid", "tuning", t.tau_grid);
  t.grid_size = get_int(j, "grid_size", "tuning", t.grid_size);
  t.grid_floor_ratio = get<double>(j, "grid_floor_ratio", "tuning", t.grid_floor_ratio);
  t.B = get_int(j, "B", "tuning", t.B);
  if (j.contains("reference_restarts") && !j["reference_restarts"].is_null()) {
    t.reference_restarts = get_int(j, "reference_restarts", "tuning", 1);
  }
  const std::string conv = get<std::string>(j, "convention", "tuning", "full-space");
  if (conv == "full-space") t.convention = SeparationConvention::FullSpace;
  else if (conv == "active-subspace") t.convention = SeparationConvention::ActiveSubspace;
  else bad("tuning.convention", "expected full-space or active-subspace");
  t.workers = get_int(j, "workers", "tuning", t.workers);
  return t;
}

MethodSpec parse_method(const json& j) {
  MethodSpec m;
  try {
    if (j.is_string()) {
      m.id = method_from_string(j.get<std::string>());
      return m;
    }
    check_keys(j, "methods[]", {"id", "tau"});
    if (!j.contains("id") || !j["id"].is_string()) bad("methods[].id", "required string");
    m.id = method_from_string(j["id"].get<std::string>());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidConfig) throw;
    bad("methods", e.what());
  }
  if (j.contains("tau") && !j["tau"].is_null()) {
    if (!is_sparse(m.id)) bad("methods[].tau", "only sparse methods take a threshold");
    m.tau = get<double>(j, "tau", "methods[]", 0.0);
  }
  return m;
}

const char* sweep_name(SweepParameter s) {
  switch (s) {
    case SweepParameter::None: return "none";
    case SweepParameter::P: return "p";
    case SweepParameter::Epsilon: return "epsilon";
    case SweepParameter::Delta: return "delta";
  }
  return "none";
}

}  // namespace

std::string to_string(Task task) {
  switch (task) {
    case Task::Simulate: return "simulate";
    case Task::Cluster: return "cluster";
    case Task::TuneTau: return "tune-tau";
    case Task::SelectK: return "select-k";
    case Task::Evaluate: return "evaluate";
    case Task::Bench: return "bench";
  }
  return "unknown";
}

Task task_from_string(const std::string& name) {
  for (Task t : {Task::Simulate, Task::Cluster, Task::TuneTau, Task::SelectK, Task::Evaluate, Task::Bench}) {
    if (to_string(t) == name) return t;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown task '" + name + "'");
}

std::string to_string(MethodId id) {
  switch (id) {
    case MethodId::SmSscm: return "sm-sscm";
    case MethodId::SparseSm: return "sparse-sm";
    case MethodId::KSpatialMedian: return "k-spatial-median";
    case MethodId::KMeans: return "kmeans";
    case MethodId::KMedians: return "kmedians";
    case MethodId::SparseKMeans: return "sparse-kmeans";
    case MethodId::SparseKMedians: return "sparse-kmedians";
  }
  return "unknown";
}

MethodId method_from_string(const std::string& name) {
  for (MethodId m : {MethodId::SmSscm, MethodId::SparseSm, MethodId::KSpatialMedian, MethodId::KMeans,
                     MethodId::KMedians, MethodId::SparseKMeans, MethodId::SparseKMedians}) {
    if (to_string(m) == name) return m;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown method '" + name + "'");
}

bool is_sparse(MethodId id) {
  return id == MethodId::SparseSm || id == MethodId::SparseKMeans || id == MethodId::SparseKMedians;
}

CenterRule center_rule_of(MethodId id) {
  switch (id) {
    case MethodId::KMeans:
    case MethodId::SparseKMeans: return CenterRule::Mean;
    case MethodId::KMedians:
    case MethodId::SparseKMedians: return CenterRule::CoordinateMedian;
    default: return CenterRule::SpatialMedian;
  }
}

void ExperimentSpec::validate() const {
  if (replications < 1) throw Error(ErrorCode::InvalidConfig, "replications must be at least 1");
  if (K < 1) throw Error(ErrorCode::InvalidConfig, "K must be at least 1");
  if (methods.empty()) throw Error(ErrorCode::InvalidConfig, "at least one method is required");
  for (int k : k_grid) {
    if (k < 2) throw Error(ErrorCode::InvalidConfig, "k_grid values must be at least 2");
  }
  if (sweep.parameter != SweepParameter::None && sweep.values.empty()) {
    throw Error(ErrorCode::InvalidConfig, "sweep needs at least one value");
  }
  if (sweep.parameter == SweepParameter::Epsilon && !input.design.contamination) {
    throw Error(ErrorCode::InvalidConfig, "an epsilon sweep needs design.contamination");
  }
  if (sweep.parameter != SweepParameter::None && input.csv_path) {
    throw Error(ErrorCode::InvalidConfig, "sweeps apply to simulated designs only");
  }
  try {
    engine.validate();
    tuning.validate();
    if (!input.csv_path) input.design.validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidConfig, e.what());
  }
}

ExperimentSpec parse_experiment(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("experiment is not valid JSON: ") + e.what());
  }
  check_keys(doc, "", {"task", "seed", "replications", "K", "k_grid", "methods", "input", "design", "engine",
                       "tuning", "sweep", "output"});
  ExperimentSpec s;
  s.task = task_from_string(get<std::string>(doc, "task", "", "bench"));
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) bad("seed", "expected a nonnegative integer");
    s.seed = doc["seed"].get<std::uint64_t>();
  }
  s.replications = get_int(doc, "replications", "", s.replications);
  s.K = get_int(doc, "K", "", s.K);
  s.k_grid = get<std::vector<int>>(doc, "k_grid", "", s.k_grid);
  if (doc.contains("methods")) {
    if (!doc["methods"].is_array()) bad("methods", "expected an array");
    s.methods.clear();
    for (const auto& m : doc["methods"]) s.methods.push_back(parse_method(m));
  }
  if (doc.contains("input")) {
    const json& in = doc["input"];
    check_keys(in, "input", {"csv", "header", "label_column", "standardize"});
    s.input.csv_path = get<std::string>(in, "csv", "input", "");
    if (s.input.csv_path->empty()) s.input.csv_path.reset();
    s.input.has_header = get<bool>(in, "header", "input", true);
    if (in.contains("label_column") && !in["label_column"].is_null()) {
      s.input.label_column = in["label_column"].is_number_integer() ? std::to_string(in["label_column"].get<int>())
                                                                     : get<std::string>(in, "label_column", "input", "");
    }
    const std::string st = get<std::string>(in, "standardize", "input", "none");
    if (st == "robust") s.input.standardize = Standardization::Robust;
    else if (st == "classical") s.input.standardize = Standardization::Classical;
    else if (st != "none") bad("input.standardize", "expected none, robust or classical");
  }
  if (doc.contains("design")) s.input.design = parse_design(doc["design"]);
  if (doc.contains("engine")) s.engine = parse_engine(doc["engine"]);
  if (doc.contains("tuning")) s.tuning = parse_tuning(doc["tuning"]);
  if (doc.contains("sweep")) {
    const json& sw = doc["sweep"];
    check_keys(sw, "sweep", {"parameter", "values"});
    const std::string param = get<std::string>(sw, "parameter", "sweep", "none");
    if (param == "p") s.sweep.parameter = SweepParameter::P;
    else if (param == "epsilon") s.sweep.parameter = SweepParameter::Epsilon;
    else if (param == "delta") s.sweep.parameter = SweepParameter::Delta;
    else if (param != "none") bad("sweep.parameter", "expected p, epsilon or delta");
    s.sweep.values = get<std::vector<double>>(sw, "values", "sweep", {});
  }
  if (doc.contains("output") && !doc["output"].is_null()) s.output = get<std::string>(doc, "output", "", "");
  s.validate();
  return s;
}

ExperimentSpec load_experiment(const std::string& path) { return parse_experiment(read_text(path)); }

std::string design_to_json(const SimDesign& design) { return design_json(design).dump(2); }

std::string experiment_to_json(const ExperimentSpec& s) {
  json doc;
  doc["task"] = to_string(s.task);
  doc["seed"] = s.seed;
  doc["replications"] = s.replications;
  doc["K"] = s.K;
  doc["k_grid"] = s.k_grid;
  json methods = json::array();
  for (const auto& m : s.methods) {
    json jm = {{"id", to_string(m.id)}};
    if (m.tau) jm["tau"] = *m.tau;
    methods.push_back(jm);
  }
  doc["methods"] = methods;
  if (s.input.csv_path) {
    json in = {{"csv", *s.input.csv_path}, {"header", s.input.has_header}};
    if (s.input.label_column) in["label_column"] = *s.input.label_column;
    in["standardize"] = !s.input.standardize                                    ? "none"
                        : *s.input.standardize == Standardization::Robust ? "robust"
                                                                           : "classical";
    doc["input"] = in;
  }
  doc["design"] = design_json(s.input.design);
  json engine = {{"max_iter", s.engine.max_iter},
                 {"restarts", s.engine.init.restarts},
                 {"init", s.engine.init.kind == InitKind::RandomAssignment ? "random" : "max-min"},
                 {"lambda", s.engine.lambda},
                 {"reset_excluded", s.engine.reset_excluded},
                 {"weiszfeld",
                  {{"max_iter", s.engine.weiszfeld.max_iter},
                   {"tol", s.engine.weiszfeld.tol},
                   {"anchor_epsilon", s.engine.weiszfeld.anchor_epsilon}}}};
  engine["banding"] = s.engine.banding ? json(*s.engine.banding) : json(nullptr);
  doc["engine"] = engine;
  json tuning = {{"tau_grid", s.tuning.tau_grid},
                 {"grid_size", s.tuning.grid_size},
                 {"grid_floor_ratio", s.tuning.grid_floor_ratio},
                 {"B", s.tuning.B},
                 {"convention",
                  s.tuning.convention == SeparationConvention::FullSpace ? "full-space" : "active-subspace"},
                 {"workers", s.tuning.workers}};
  tuning["reference_restarts"] = s.tuning.reference_restarts ? json(*s.tuning.reference_restarts) : json(nullptr);
  doc["tuning"] = tuning;
  if (s.sweep.parameter != SweepParameter::None) {
    doc["sweep"] = {{"parameter", sweep_name(s.sweep.parameter)}, {"values", s.sweep.values}};
  }
  if (s.output) doc["output"] = *s.output;
  return doc.dump(2);
}

}  // namespace sparsesm
