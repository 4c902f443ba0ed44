#include "support.hpp"

#include <Eigen/QR>

namespace testsupport {

Matrix random_orthogonal(Index p, std::uint64_t seed) {
  const Matrix g = gaussian_matrix(p, p, seed);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  // sign fix so the distribution is Haar
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < p; ++j) {
    if (r(j, j) < 0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace testsupport
