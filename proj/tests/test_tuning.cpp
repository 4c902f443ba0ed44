#include <algorithm>
#include <cmath>

#include "sparsesm/datagen.hpp"
#include "sparsesm/tuning.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace sparsesm;

namespace {

DataMatrix four_points() {
  Matrix m(4, 1);
  m << -1, 1, 9, 11;
  return validate_matrix(m);
}

FitResult two_cluster_fit() {
  FitResult f;
  f.partition = Partition({0, 0, 1, 1}, 2);
  f.centers = CenterSet(2, 1);
  f.centers << 0, 10;
  return f;
}

EngineConfig quick(int restarts) {
  EngineConfig cfg;
  cfg.init.restarts = restarts;
  return cfg;
}

}  // namespace

TEST_SUITE("tuning") {
  TEST_CASE("between-cluster separation by hand") {
    CHECK(between_separation(four_points(), two_cluster_fit()) == doctest::Approx(100.0).epsilon(1e-10));
  }

  TEST_CASE("single cluster has zero separation") {
    const DataMatrix X = validate_matrix(testsupport::gaussian_matrix(20, 3, 2));
    const FitResult f = fit_baseline(X, 1, CenterRule::SpatialMedian, quick(1), RngSpec{1, 0});
    CHECK(between_separation(X, f) < 1e-12);
  }

  TEST_CASE("separation is translation invariant") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 10, 4, 3.0, 5));
    FitResult f = fit_baseline(X, 3, CenterRule::SpatialMedian, quick(2), RngSpec{2, 0});
    const double base = between_separation(X, f);
    Eigen::RowVectorXd shift(4);
    shift << 100, -7, 0.5, 3;
    const DataMatrix Y = validate_matrix(X.values().rowwise() + shift);
    f.centers.rowwise() += shift;
    // equal up to the Weiszfeld stopping tolerance
    CHECK(between_separation(Y, f) == doctest::Approx(base).epsilon(1e-6));
  }

  TEST_CASE("active-subspace convention only counts retained coordinates") {
    const DataMatrix X = validate_matrix(testsupport::blobs(2, 15, 3, 6.0, 7));
    const FitResult f = fit_sparse_sm(X, 2, 3.0, quick(2), RngSpec{3, 0});
    REQUIRE(f.sparse->active == std::vector<Index>{0});
    const double sub = between_separation(X, f, {}, SeparationConvention::ActiveSubspace);
    const Vector m = spatial_median(X.values().col(0));
    const auto sizes = f.partition.sizes();
    double oracle = 0;
    for (int k = 0; k < 2; ++k) oracle += sizes[k] * std::pow(f.centers(k, 0) - m[0], 2);
    CHECK(sub == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(between_separation(X, f) >= sub - 1e-9);
  }

  TEST_CASE("column permutation") {
    const DataMatrix one = validate_matrix(testsupport::gaussian_matrix(1, 5, 3));
    CHECK(permute_columns(one, RngSpec{1, 1}).values() == one.values());

    const DataMatrix X = validate_matrix(testsupport::gaussian_matrix(30, 4, 4));
    const DataMatrix a = permute_columns(X, RngSpec{2, 3});
    const DataMatrix b = permute_columns(X, RngSpec{2, 3});
    CHECK(a.values() == b.values());
    CHECK(a.values() != X.values());
    for (Index j = 0; j < 4; ++j) {
      std::vector<double> x(X.values().col(j).data(), X.values().col(j).data() + 30);
      std::vector<double> y(a.values().col(j).data(), a.values().col(j).data() + 30);
      std::sort(x.begin(), x.end());
      std::sort(y.begin(), y.end());
      CHECK(x == y);
    }
  }

  TEST_CASE("gap values") {
    const std::vector<double> obs{std::exp(1.0) * 2.0, std::exp(1.0) * 5.0};
    Matrix ref(3, 2);
    ref << 2, 5, 2, 5, 2, 5;
    const auto g = gap_values(obs, ref);
    CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(1.0).epsilon(1e-14));

    const std::vector<double> same{2.0, 5.0};
    const auto z = gap_values(same, ref);
    CHECK(z[0] == 0.0);
    CHECK(z[1] == 0.0);
    CHECK(argmax_gap(z, {0.0, 1.0}) == 0);
    CHECK(argmax_gap(z, {1.0, 0.5}) == 1);

    bool degenerate = false;
    const auto d = gap_values({0.0, 1.0}, ref, &degenerate);
    CHECK(degenerate);
    CHECK(d[0] == doctest::Approx(std::log(1e-12) - std::log(2.0)));
    CHECK_THROWS_AS(gap_values({1.0}, ref), Error);
  }

  TEST_CASE("gap is unchanged when every O is scaled by the same constant") {
    const auto r = properties::gap_scaling(1000);
    CHECK_MESSAGE(r.failures == 0, r.first_failure);
  }

  TEST_CASE("automatic grid") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 10, 5, 4.0, 9));
    TuningConfig tc;
    const auto grid = default_tau_grid(X, 3, quick(2), tc, RngSpec{4, 0});
    REQUIRE(grid.size() == 12);
    CHECK(grid[0] == 0.0);
    const FitResult pre = fit_sparse_sm(X, 3, 0.0, quick(2), RngSpec{4, 0}.child(0));
    CHECK(grid.back() == pre.sparse->scores.maxCoeff());
    CHECK(grid[1] == doctest::Approx(0.01 * grid.back()));
    for (std::size_t l = 2; l < grid.size(); ++l) {
      CHECK(grid[l] > grid[l - 1]);
      CHECK(grid[l] / grid[l - 1] == doctest::Approx(std::pow(100.0, 1.0 / 10.0)));
    }
  }

  TEST_CASE("identical references give zero gap and the smallest tau") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 10, 5, 4.0, 10));
    TuningConfig tc;
    tc.B = 3;
    tc.tau_grid = {0.0, 0.5, 1.0, 2.0};
    tc.reference = ReferenceKind::Identity;
    const TunedFit t = select_tau(X, 3, quick(2), tc, RngSpec{5, 0});
    for (double g : t.report.gap) CHECK(g == 0.0);
    CHECK(t.report.selected_index == 0);
    CHECK(t.report.selected_tau == 0.0);
  }

  TEST_CASE("select_tau is reproducible and independent of worker count") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 12, 8, 5.0, 11));
    TuningConfig tc;
    tc.B = 3;
    tc.grid_size = 5;
    tc.reference_restarts = 1;
    const TunedFit a = select_tau(X, 3, quick(2), tc, RngSpec{6, 0});
    tc.workers = 3;
    const TunedFit b = select_tau(X, 3, quick(2), tc, RngSpec{6, 0});
    CHECK(a.report.gap == b.report.gap);
    CHECK(a.report.selected_tau == b.report.selected_tau);
    CHECK(a.fit.partition == b.fit.partition);
    CHECK(a.report.reference.rows() == 3);
    CHECK(a.report.reference.cols() == 5);
    CHECK(a.report.active_sizes.size() == 5);
  }

  TEST_CASE("BWDM by hand") {
    const FitResult f = two_cluster_fit();
    const BwdmTerms t = bwdm_terms(four_points(), f.partition, f.centers);
    CHECK(t.abdm == doctest::Approx(10.0));
    CHECK(t.awdm == doctest::Approx(1.0));
    CHECK(t.bwdm == doctest::Approx(20.0));
  }

  TEST_CASE("BWDM ignores cluster labels") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 8, 3, 4.0, 13));
    const FitResult f = fit_baseline(X, 3, CenterRule::SpatialMedian, quick(2), RngSpec{7, 0});
    const std::vector<int> perm{1, 2, 0};
    std::vector<int> relabeled;
    for (int l : f.partition.labels()) relabeled.push_back(perm[static_cast<std::size_t>(l)]);
    CenterSet c(3, 3);
    for (int k = 0; k < 3; ++k) c.row(perm[static_cast<std::size_t>(k)]) = f.centers.row(k);
    const BwdmTerms a = bwdm_terms(X, f.partition, f.centers);
    const BwdmTerms b = bwdm_terms(X, Partition(relabeled, 3), c);
    CHECK(a.bwdm == doctest::Approx(b.bwdm).epsilon(1e-14));
    CHECK(a.abdm == doctest::Approx(b.abdm).epsilon(1e-14));
  }

  TEST_CASE("K selection") {
    const SimOutput sim = sample(SimDesign::sparse_mean_design(40, 20, 10.0), RngSpec{0, 4});
    const DataMatrix& X = sim.X;
    TuningConfig tc;
    tc.B = 3;
    tc.grid_size = 6;
    tc.reference_restarts = 1;
    const auto single = select_k(X, {3}, quick(3), tc, RngSpec{8, 0});
    CHECK(single.selected_k == 3);
    const auto rep = select_k(X, {2, 3, 4}, quick(3), tc, RngSpec{8, 0});
    CHECK(rep.selected_k == 3);
    CHECK(rep.bwdm.size() == 3);
    CHECK_THROWS_AS(select_k(X, {1}, quick(1), tc, RngSpec{}), Error);
    CHECK_THROWS_AS(select_k(X, {}, quick(1), tc, RngSpec{}), Error);
  }
}
