#include <algorithm>

#include "sparsesm/sscm.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace sparsesm;

TEST_SUITE("sscm") {
  TEST_CASE("two orthogonal signs with lambda 0.05") {
    Matrix X(2, 2);
    X << 1, 0, 0, 1;
    const Matrix centers = Matrix::Zero(1, 2);
    const auto est = estimate_sscm(validate_matrix(X), centers, Partition({0, 0}, 1), 0.05, std::nullopt);
    CHECK(est.sigma(0, 0) == doctest::Approx(0.55));
    CHECK(est.sigma(1, 1) == doctest::Approx(0.55));
    CHECK(est.sigma(0, 1) == 0.0);
    CHECK(est.sigma(1, 0) == 0.0);

    const MetricSpec A = inverse_metric(est);
    CHECK((*A.weight())(0, 0) == doctest::Approx(1.0 / 0.55));
    CHECK((*A.weight())(1, 1) == doctest::Approx(1.0 / 0.55));
    CHECK(std::abs((*A.weight())(0, 1)) < 1e-15);
  }

  TEST_CASE("zero residuals give the ridge alone") {
    Matrix X(3, 2);
    X << 1, 2, 1, 2, 1, 2;
    Matrix centers(1, 2);
    centers << 1, 2;
    const auto est = estimate_sscm(validate_matrix(X), centers, Partition({0, 0, 0}, 1), 0.3, std::nullopt);
    CHECK((est.sigma - 0.3 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
    const MetricSpec A = inverse_metric(est);
    CHECK(((*A.weight()) - Matrix::Identity(2, 2) / 0.3).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("spectral sandwich, trace bound and inverse on 1000 random inputs") {
    const auto r = properties::sscm_sandwich(1000);
    CHECK_MESSAGE(r.failures == 0, r.first_failure);
    CHECK(r.cases == 1000);
  }

  TEST_CASE("observation order does not matter") {
    const Matrix X = testsupport::gaussian_matrix(12, 4, 5);
    Matrix centers = testsupport::gaussian_matrix(2, 4, 6);
    std::vector<int> labels{0, 1, 0, 1, 1, 0, 0, 1, 1, 1, 0, 0};
    const auto a = estimate_sscm(validate_matrix(X), centers, Partition(labels, 2), 0.1, std::nullopt);
    Matrix Xr = X.colwise().reverse();
    std::vector<int> lr(labels.rbegin(), labels.rend());
    const auto b = estimate_sscm(validate_matrix(Xr), centers, Partition(lr, 2), 0.1, std::nullopt);
    CHECK((a.sigma - b.sigma).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("banding zeroes entries outside the band before the ridge") {
    const Matrix X = testsupport::gaussian_matrix(30, 5, 9);
    const Matrix centers = Matrix::Zero(1, 5);
    const Partition part(std::vector<int>(30, 0), 1);
    const auto full = estimate_sscm(validate_matrix(X), centers, part, 0.1, std::nullopt);
    const auto banded = estimate_sscm(validate_matrix(X), centers, part, 0.1, 1);
    for (Index i = 0; i < 5; ++i) {
      for (Index j = 0; j < 5; ++j) {
        if (std::abs(i - j) > 1) {
          CHECK(banded.sigma(i, j) == 0.0);
        } else {
          CHECK(banded.sigma(i, j) == full.sigma(i, j));
        }
      }
    }
    CHECK(banded.banding == 1);
    CHECK_NOTHROW(inverse_metric(banded));
  }

  TEST_CASE("indefinite estimate gets one extra ridge, then fails") {
    SscmEstimate est;
    est.lambda = 0.5;
    est.sigma = Matrix::Identity(2, 2) * 0.1;
    est.sigma(0, 0) = -0.2;  // fixed by one extra ridge of 0.5
    const MetricSpec A = inverse_metric(est);
    CHECK((*A.weight())(0, 0) == doctest::Approx(1.0 / 0.3));
    est.sigma(0, 0) = -5.0;
    try {
      inverse_metric(est);
      FAIL("expected SingularMatrix");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SingularMatrix);
    }
  }

  TEST_CASE("argument validation") {
    const DataMatrix X = validate_matrix(testsupport::gaussian_matrix(4, 2, 1));
    const Matrix centers = Matrix::Zero(1, 2);
    const Partition part(std::vector<int>(4, 0), 1);
    CHECK_THROWS_AS(estimate_sscm(X, centers, part, 0.0, std::nullopt), Error);
    CHECK_THROWS_AS(estimate_sscm(X, centers, part, 0.1, -1), Error);
    CHECK_THROWS_AS(estimate_sscm(X, centers, Partition(std::vector<int>(3, 0), 1), 0.1, std::nullopt), Error);
    CHECK_THROWS_AS(estimate_sscm(X, Matrix::Zero(2, 2), part, 0.1, std::nullopt), Error);
  }
}
