#pragma once

// Randomized property checks shared by the unit tests and the acceptance run.

#include <cstdint>
#include <string>
#include <vector>

#include "sparsesm/core.hpp"
#include "sparsesm/rng.hpp"

namespace properties {

struct Outcome {
  int cases = 0;
  int failures = 0;
  /// Description of the first failing case.
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
};

/// SSCM eigenvalues in [lambda, 1 + lambda], trace <= 1 + p lambda, agreement
/// with a per-observation sign average, and A Sigma = I for the inverse.
Outcome sscm_sandwich(int cases, std::uint64_t seed = 77);

/// Spatial median inside the convex hull (exact 2-D hull, plus random
/// separating directions in every dimension).
Outcome median_hull(int cases, std::uint64_t seed = 2024);

/// Weiszfeld objective never increases along the iteration.
Outcome median_monotone(int cases, std::uint64_t seed = 2025);

/// |s_j - s'_j| <= 2 K b when every center coordinate moves by at most b.
Outcome score_perturbation(int cases, std::uint64_t seed = 31);

/// All five metrics against brute-force pair and entropy oracles on every
/// pair of set partitions of 1..max_items items, tolerance 1e-12.
Outcome metric_oracles(int max_items = 6);

/// Scaling every O and O^(b) by one positive constant leaves the gap values
/// (within 1e-12) and the selected index unchanged.
Outcome gap_scaling(int cases, std::uint64_t seed = 12);

/// Restricted growth strings: every set partition of n items.
std::vector<std::vector<int>> all_partitions(int n);

/// Random point set; some sets repeat points so the iterate can land on data.
sparsesm::Matrix random_point_set(sparsesm::Rng& rng, sparsesm::Index m, sparsesm::Index p);

/// Distance from q to the convex hull of 2-D points (0 inside).
double distance_to_hull_2d(const sparsesm::Matrix& pts, const Eigen::Vector2d& q);

}  // namespace properties
