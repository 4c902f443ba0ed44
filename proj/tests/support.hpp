#pragma once

#include <doctest.h>

#include <cstdint>
#include <vector>

#include "sparsesm/core.hpp"
#include "sparsesm/rng.hpp"

namespace testsupport {

using sparsesm::Index;
using sparsesm::Matrix;
using sparsesm::Vector;

inline Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed, double sd = 1.0) {
  sparsesm::Rng rng(sparsesm::RngSpec{seed, 99});
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = sd * rng.normal();
  }
  return m;
}

/// K blobs of `per` points each; cluster k is centered at shift * k on the first coordinate.
inline Matrix blobs(int K, Index per, Index p, double shift, std::uint64_t seed) {
  Matrix m = gaussian_matrix(K * per, p, seed);
  for (int k = 0; k < K; ++k) m.block(k * per, 0, per, 1).array() += shift * k;
  return m;
}

inline std::vector<int> blob_labels(int K, Index per) {
  std::vector<int> labels;
  for (int k = 0; k < K; ++k) labels.insert(labels.end(), static_cast<std::size_t>(per), k);
  return labels;
}

/// Uniformly random orthogonal matrix from the QR factor of a Gaussian matrix.
Matrix random_orthogonal(Index p, std::uint64_t seed);

}  // namespace testsupport
