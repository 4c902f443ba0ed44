#pragma once

#include <cstdint>

namespace sparsesm {

/// Identifies an independent pseudo-random stream. Child streams are derived
/// by hashing, so a replication's stream never depends on execution order.
struct RngSpec {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  RngSpec child(std::uint64_t index) const;

  friend bool operator==(const RngSpec&, const RngSpec&) = default;
};

/// xoshiro256** seeded from (seed, stream) through SplitMix64. All variate
/// generators are implemented here rather than via <random> distributions so
/// that sequences are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(const RngSpec& spec);

  std::uint64_t next_u64();
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform integer on [0, bound). bound must be positive.
  std::uint64_t uniform_index(std::uint64_t bound);
  double normal();
  /// Gamma(shape, 1) by Marsaglia-Tsang.
  double gamma(double shape);
  double chi_square(double dof);
  bool bernoulli(double prob);

 private:
  std::uint64_t state_[4];
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace sparsesm
