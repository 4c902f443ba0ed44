#include <algorithm>
#include <set>

#include "sparsesm/engines.hpp"
#include "sparsesm/metrics.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace sparsesm;

namespace {

DataMatrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Index>(values.size()), 1);
  Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return validate_matrix(m);
}

double ari_vs(const Partition& pred, const std::vector<int>& truth, int K) {
  return ari(contingency(pred, Partition(truth, K)));
}

EngineConfig quick(int restarts = 5) {
  EngineConfig cfg;
  cfg.init.restarts = restarts;
  return cfg;
}

}  // namespace

TEST_SUITE("engines") {
  TEST_CASE("separation scores") {
    CenterSet c(3, 2);
    c << 0, 5, 3, 5, -3, 5;
    const Vector s = separation_scores(c);
    CHECK(s[0] == doctest::Approx(6.0));
    CHECK(s[1] == 0.0);
    CHECK_THROWS_AS(separation_scores(CenterSet::Zero(1, 2)), Error);
  }

  TEST_CASE("active set threshold uses >=") {
    Vector s(3);
    s << 6, 0.1, 0;
    CHECK(active_set(s, 1.0) == std::vector<Index>{0});
    CHECK(active_set(s, 0.0) == std::vector<Index>{0, 1, 2});
    CHECK(active_set(s, 0.1) == std::vector<Index>{0, 1});
    CHECK(active_set(s, 7.0).empty());
    CHECK_THROWS_AS(active_set(s, -1.0), Error);
  }

  TEST_CASE("threshold fallback keeps the top coordinate") {
    Vector s(4);
    s << 1, 3, 3, 2;
    const SparseState st = threshold_scores(s, 10.0);
    CHECK(st.fallback);
    CHECK(st.active == std::vector<Index>{1});
    const SparseState ok = threshold_scores(s, 2.0);
    CHECK_FALSE(ok.fallback);
    CHECK(ok.active == std::vector<Index>{1, 2, 3});
  }

  TEST_CASE("assignment examples and ties") {
    const DataMatrix X = column({0, 10, 5});
    CenterSet c(2, 1);
    c << 0, 10;
    const Partition a = assign(X, c, MetricSpec::euclidean_squared());
    CHECK(a.one_based() == std::vector<int>{1, 2, 1});
    CHECK(assign_l1(X, c).one_based() == std::vector<int>{1, 2, 1});
    const std::vector<Index> act{0};
    CHECK(assign(X, c, act).one_based() == std::vector<int>{1, 2, 1});
    CHECK_THROWS_AS(assign(X, c, std::span<const Index>{}), Error);
  }

  TEST_CASE("center update examples") {
    Matrix m(2, 2);
    m << 0, 0, 2, 2;
    const auto mean = update_centers(validate_matrix(m), Partition({0, 0}, 1), CenterRule::Mean, {});
    CHECK(mean.centers(0, 0) == 1.0);
    CHECK(mean.centers(0, 1) == 1.0);

    const DataMatrix X = column({0, 1, 10});
    const Partition one({0, 0, 0}, 1);
    CHECK(update_centers(X, one, CenterRule::CoordinateMedian, {}).centers(0, 0) == 1.0);
    CHECK(update_centers(X, one, CenterRule::SpatialMedian, {}).centers(0, 0) == doctest::Approx(1.0).epsilon(1e-6));

    Matrix single(1, 2);
    single << 7, -2;
    const auto s = update_centers(validate_matrix(single), Partition({0}, 1), CenterRule::SpatialMedian, {});
    CHECK(s.centers(0, 0) == 7.0);
    CHECK(s.centers(0, 1) == -2.0);
  }

  TEST_CASE("empty cluster receives the farthest point") {
    const DataMatrix X = column({0, 1, 2, 50});
    const auto upd = update_centers(X, Partition({0, 0, 0, 0}, 2), CenterRule::Mean, {});
    CHECK(upd.empty_repairs == 1);
    CHECK(upd.partition.one_based() == std::vector<int>{1, 1, 1, 2});
    CHECK(upd.centers(1, 0) == 50.0);
  }

  TEST_CASE("max-min seeding") {
    const DataMatrix X = column({0, 1, 10});
    const CenterSet seeds = max_min_seed(X, 2, MetricSpec::euclidean_squared());
    CHECK(seeds(0, 0) == 10.0);
    CHECK(seeds(1, 0) == 0.0);

    const CenterSet all = max_min_seed(X, 3, MetricSpec::euclidean_squared());
    std::multiset<double> got(all.col(0).data(), all.col(0).data() + 3);
    CHECK(got == std::multiset<double>{0, 1, 10});

    // tight blobs: one seed in each
    const Matrix b = testsupport::blobs(2, 20, 2, 50.0, 3) * 0.1;
    const CenterSet bs = max_min_seed(validate_matrix(b), 2, MetricSpec::euclidean_squared());
    CHECK(((bs(0, 0) < 2.5) != (bs(1, 0) < 2.5)));
  }

  TEST_CASE("well separated blobs are recovered by every engine") {
    Matrix m = testsupport::gaussian_matrix(60, 2, 21);
    m.topRows(30).col(0).array() += 10.0;
    m.bottomRows(30).col(0).array() -= 10.0;
    const DataMatrix X = validate_matrix(m);
    const auto truth = testsupport::blob_labels(2, 30);
    const RngSpec rng{4, 0};
    const EngineConfig cfg = quick();
    CHECK(ari_vs(fit_baseline(X, 2, CenterRule::Mean, cfg, rng).partition, truth, 2) == 1.0);
    CHECK(ari_vs(fit_baseline(X, 2, CenterRule::CoordinateMedian, cfg, rng).partition, truth, 2) == 1.0);
    CHECK(ari_vs(fit_baseline(X, 2, CenterRule::SpatialMedian, cfg, rng).partition, truth, 2) == 1.0);
    CHECK(ari_vs(fit_sm_sscm(X, 2, cfg, rng).partition, truth, 2) == 1.0);
    CHECK(ari_vs(fit_sparse_sm(X, 2, 1.0, cfg, rng).partition, truth, 2) == 1.0);

    EngineConfig mm = cfg;
    mm.init.kind = InitKind::MaxMinSeeding;
    CHECK(ari_vs(fit_sparse_sm(X, 2, 1.0, mm, rng).partition, truth, 2) == 1.0);
  }

  TEST_CASE("K = 1 gives one cluster centered at the overall spatial median") {
    const DataMatrix X = validate_matrix(testsupport::gaussian_matrix(25, 3, 8));
    const FitResult f = fit_baseline(X, 1, CenterRule::SpatialMedian, quick(2), RngSpec{1, 0});
    CHECK(f.partition.sizes() == std::vector<std::size_t>{25});
    const Vector m = spatial_median(X.values());
    CHECK((f.centers.row(0).transpose() - m).norm() < 1e-9);
    CHECK_THROWS_AS(fit_baseline(X, 0, CenterRule::Mean, quick(), RngSpec{1, 0}), Error);
    CHECK_THROWS_AS(fit_baseline(X, 26, CenterRule::Mean, quick(), RngSpec{1, 0}), Error);
  }

  TEST_CASE("duplicate rows do not break the SSCM step") {
    Matrix m(8, 2);
    m << 1, 1, 1, 1, 1, 1, 1, 1, 5, 5, 5, 5, 5, 5, 5, 5;
    const DataMatrix X = validate_matrix(m);
    const FitResult f = fit_sm_sscm(X, 2, quick(3), RngSpec{2, 0});
    CHECK(ari_vs(f.partition, testsupport::blob_labels(2, 4), 2) == 1.0);
    REQUIRE(f.metric.has_value());
    CHECK((f.metric->sigma - 0.1 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("tau above every score falls back to one coordinate and completes") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 15, 4, 6.0, 5));
    const FitResult f = fit_sparse_sm(X, 3, 1e6, quick(2), RngSpec{3, 0});
    REQUIRE(f.sparse.has_value());
    CHECK(f.sparse->fallback);
    CHECK(f.sparse->active.size() == 1);
  }

  TEST_CASE("converged fits are fixed points") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const DataMatrix X = validate_matrix(testsupport::blobs(3, 12, 5, 4.0, 100 + seed));
      for (const EngineSpec& e : {EngineSpec::k_means(), EngineSpec::k_medians(), EngineSpec::k_spatial_median(),
                                  EngineSpec::sm_sscm(), EngineSpec::sparse_sm(0.5)}) {
        const FitResult f = fit(X, 3, e, quick(2), RngSpec{seed, 1});
        if (!f.diagnostics.converged) continue;
        EngineConfig one = quick(1);
        const FitResult again = fit_from_partition(X, e, one, f.partition);
        CHECK(again.partition.labels() == f.partition.labels());
        CHECK((again.centers - f.centers).cwiseAbs().maxCoeff() == 0.0);
        CHECK(again.diagnostics.iterations == 1);
        if (f.metric) CHECK((again.metric->sigma - f.metric->sigma).cwiseAbs().maxCoeff() == 0.0);
        if (f.sparse) CHECK(again.sparse->active == f.sparse->active);
      }
    }
  }

  TEST_CASE("tau = 0 matches the plain K-spatial-median engine") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const DataMatrix X = validate_matrix(testsupport::blobs(3, 10, 6, 2.0, 200 + seed));
      const RngSpec rng{seed, 0};
      const FitResult a = fit_sparse_sm(X, 3, 0.0, quick(3), rng);
      const FitResult b = fit(X, 3, EngineSpec::k_spatial_median(), quick(3), rng);
      CHECK(a.partition.labels() == b.partition.labels());
      CHECK(a.sparse->active.size() == 6);
    }
  }

  TEST_CASE("score perturbation bound on 1000 random center pairs") {
    const auto r = properties::score_perturbation(1000);
    CHECK_MESSAGE(r.failures == 0, r.first_failure);
    CHECK(r.cases == 1000);
  }

  TEST_CASE("relabeling the initial partition permutes the output labels") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 10, 4, 3.0, 17));
    const Partition init = initial_partition(X, 3, quick(), RngSpec{9, 0}, 0);
    const std::vector<int> perm{2, 0, 1};
    std::vector<int> relabeled;
    for (int l : init.labels()) relabeled.push_back(perm[static_cast<std::size_t>(l)]);
    for (const EngineSpec& e : {EngineSpec::k_means(), EngineSpec::k_spatial_median(), EngineSpec::sparse_sm(0.3)}) {
      const FitResult a = fit_from_partition(X, e, quick(), init);
      const FitResult b = fit_from_partition(X, e, quick(), Partition(relabeled, 3));
      for (std::size_t i = 0; i < a.partition.n(); ++i) {
        CHECK(b.partition[i] == perm[static_cast<std::size_t>(a.partition[i])]);
      }
    }
  }

  TEST_CASE("identical inputs give identical fits") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 10, 4, 1.0, 41));
    const FitResult a = fit_sm_sscm(X, 3, quick(3), RngSpec{5, 5});
    const FitResult b = fit_sm_sscm(X, 3, quick(3), RngSpec{5, 5});
    CHECK(a.partition.labels() == b.partition.labels());
    CHECK(a.objective == b.objective);
    CHECK(a.restart == b.restart);
  }

  TEST_CASE("K-means objective never increases") {
    const DataMatrix X = validate_matrix(testsupport::blobs(4, 15, 3, 1.5, 43));
    const FitResult f = fit_from_partition(X, EngineSpec::k_means(), quick(), initial_partition(X, 4, quick(), RngSpec{6, 0}, 0));
    const auto& tr = f.diagnostics.objective_trace;
    for (std::size_t t = 1; t < tr.size(); ++t) CHECK(tr[t] <= tr[t - 1] + 1e-9);
  }

  TEST_CASE("restart with the lowest objective is returned") {
    const DataMatrix X = validate_matrix(testsupport::blobs(3, 10, 3, 1.0, 47));
    const EngineConfig cfg = quick(6);
    const RngSpec rng{8, 0};
    const FitResult best = fit(X, 3, EngineSpec::k_means(), cfg, rng);
    for (int r = 0; r < 6; ++r) {
      const FitResult f = fit_from_partition(X, EngineSpec::k_means(), cfg, initial_partition(X, 3, cfg, rng, r));
      CHECK(best.objective <= f.objective);
    }
  }

  TEST_CASE("excluded coordinates can be reset to the overall median") {
    const DataMatrix X = validate_matrix(testsupport::blobs(2, 20, 5, 8.0, 51));
    EngineConfig cfg = quick(2);
    cfg.reset_excluded = true;
    const FitResult f = fit_sparse_sm(X, 2, 4.0, cfg, RngSpec{1, 0});
    REQUIRE(f.sparse.has_value());
    CHECK(f.sparse->active == std::vector<Index>{0});
    const Vector m = spatial_median(X.values());
    for (Index j = 1; j < 5; ++j) {
      CHECK(f.centers(0, j) == m[j]);
      CHECK(f.centers(1, j) == m[j]);
    }
  }

  TEST_CASE("configuration validation") {
    EngineConfig cfg;
    cfg.max_iter = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.init.restarts = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.lambda = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    const DataMatrix X = column({0, 1, 2});
    EngineSpec bad = EngineSpec::sm_sscm();
    bad.tau = 1.0;
    CHECK_THROWS_AS(fit(X, 2, bad, quick(), RngSpec{}), Error);
    CHECK_THROWS_AS(fit_sparse_sm(X, 2, -1.0, quick(), RngSpec{}), Error);
  }
}
