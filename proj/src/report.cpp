#include "sparsesm/report.hpp"

#include <json.hpp>

#include "sparsesm/config.hpp"

namespace sparsesm {

using ojson = nlohmann::ordered_json;

namespace {

ojson one_based(const std::vector<Index>& idx) {
  ojson arr = ojson::array();
  for (Index j : idx) arr.push_back(j + 1);
  return arr;
}

ojson vector_json(const Vector& v) {
  ojson arr = ojson::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

ojson metrics_obj(const MetricSet& m) {
  return {{"ari", m.ari}, {"purity", m.purity}, {"nmi", m.nmi}, {"fmi", m.fmi}, {"v_measure", m.v_measure}};
}

ojson gap_obj(const GapReport& r) {
  ojson j;
  j["tau_grid"] = r.tau_grid;
  j["observed"] = r.observed;
  j["reference"] = matrix_json(r.reference);
  j["gap"] = r.gap;
  j["active_sizes"] = r.active_sizes;
  j["selected_tau"] = r.selected_tau;
  j["selected_active_size"] = r.active_sizes.empty() ? 0 : r.active_sizes[r.selected_index];
  j["degenerate"] = r.degenerate;
  return j;
}

}  // namespace

std::string fit_to_json(const FitResult& fit, const std::string& method, const std::optional<GapReport>& gap,
                        const std::optional<MetricSet>& metrics) {
  ojson j;
  j["method"] = method;
  j["K"] = fit.partition.K();
  j["n"] = fit.partition.n();
  j["p"] = fit.centers.cols();
  j["objective"] = fit.objective;
  j["restart"] = fit.restart + 1;
  j["iterations"] = fit.diagnostics.iterations;
  j["converged"] = fit.diagnostics.converged;
  j["empty_cluster_repairs"] = fit.diagnostics.empty_cluster_repairs;
  j["degenerate_cluster_repairs"] = fit.diagnostics.degenerate_cluster_repairs;
  j["median_nonconvergence"] = fit.diagnostics.median_nonconvergence;
  j["cluster_sizes"] = fit.partition.sizes();
  if (fit.sparse) {
    j["tau"] = fit.sparse->tau;
    j["active"] = one_based(fit.sparse->active);
    j["fallback"] = fit.sparse->fallback;
    j["scores"] = vector_json(fit.sparse->scores);
  }
  if (fit.metric) {
    j["lambda"] = fit.metric->lambda;
    j["banding"] = fit.metric->banding ? ojson(*fit.metric->banding) : ojson(nullptr);
  }
  if (gap) j["gap_report"] = gap_obj(*gap);
  if (metrics) j["metrics"] = metrics_obj(*metrics);
  j["centers"] = matrix_json(fit.centers);
  j["labels"] = fit.partition.one_based();
  return j.dump(2);
}

std::string gap_report_to_json(const GapReport& report) { return gap_obj(report).dump(2); }

std::string k_selection_to_json(const KSelectionReport& r) {
  ojson j;
  j["k_grid"] = r.k_grid;
  j["tau_per_k"] = r.tau_per_k;
  j["active_sizes"] = r.active_sizes;
  j["abdm"] = r.abdm;
  j["awdm"] = r.awdm;
  j["bwdm"] = r.bwdm;
  j["selected_k"] = r.selected_k;
  for (std::size_t g = 0; g < r.k_grid.size(); ++g) {
    if (r.k_grid[g] == r.selected_k) j["labels"] = r.partitions[g].one_based();
  }
  return j.dump(2);
}

std::string metrics_to_json(const MetricSet& metrics) { return metrics_obj(metrics).dump(2); }

std::string simulation_sidecar_json(const SimDesign& design, const RngSpec& rng, const SimOutput& sim) {
  ojson j;
  j["design"] = ojson::parse(design_to_json(design));
  j["seed"] = rng.seed;
  j["stream"] = rng.stream;
  j["n"] = sim.X.n();
  j["p"] = sim.X.p();
  j["informative"] = one_based(sim.informative);
  j["truth"] = sim.truth.one_based();
  return j.dump(2);
}

std::string error_to_json(const std::string& code, const std::string& message, std::size_t line,
                          std::size_t column) {
  ojson j;
  j["error"] = code;
  j["message"] = message;
  if (line) j["line"] = line;
  if (column) j["column"] = column;
  return j.dump();
}

}  // namespace sparsesm
