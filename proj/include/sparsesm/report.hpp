#pragma once

#include <optional>
#include <string>

#include "sparsesm/datagen.hpp"
#include "sparsesm/engines.hpp"
#include "sparsesm/metrics.hpp"
#include "sparsesm/tuning.hpp"

namespace sparsesm {

// JSON documents emitted by the command-line tool. Labels and coordinate
// indices are 1-based, matching the CSV surfaces.

std::string fit_to_json(const FitResult& fit, const std::string& method,
                        const std::optional<GapReport>& gap = std::nullopt,
                        const std::optional<MetricSet>& metrics = std::nullopt);
std::string gap_report_to_json(const GapReport& report);
std::string k_selection_to_json(const KSelectionReport& report);
std::string metrics_to_json(const MetricSet& metrics);
/// Sidecar of a simulated dataset: design, RNG spec, truth labels, informative set.
std::string simulation_sidecar_json(const SimDesign& design, const RngSpec& rng, const SimOutput& sim);
std::string error_to_json(const std::string& code, const std::string& message, std::size_t line = 0,
                          std::size_t column = 0);

}  // namespace sparsesm
