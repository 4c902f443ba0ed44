#include <cmath>
#include <algorithm>

#include "sparsesm/metrics.hpp"
#include "properties.hpp"
#include "support.hpp"

using namespace sparsesm;

namespace {

int n_labels(const std::vector<int>& a) { return *std::max_element(a.begin(), a.end()) + 1; }

Partition P(const std::vector<int>& a) { return Partition(a, n_labels(a)); }

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("contingency counting") {
    const auto t = contingency(Partition::from_one_based({1, 1, 1, 2, 2, 2}, 2), Partition::from_one_based({1, 1, 2, 2, 2, 2}, 2));
    CHECK(t.counts(0, 0) == 2);
    CHECK(t.counts(0, 1) == 1);
    CHECK(t.counts(1, 0) == 0);
    CHECK(t.counts(1, 1) == 3);
    CHECK(t.n == 6);

    const auto single = contingency(P({0, 0, 0, 0}), P({0, 1, 1, 2}));
    CHECK(single.counts.rows() == 1);
    CHECK(single.counts(0, 1) == 2);
    const auto diag = contingency(P({0, 1, 1}), P({0, 1, 1}));
    CHECK(diag.counts(0, 1) == 0);
    CHECK(diag.counts(1, 0) == 0);
    CHECK_THROWS_AS(contingency(P({0, 1}), P({0, 1, 0})), Error);
  }

  TEST_CASE("worked examples") {
    const auto t = ContingencyTable::from_counts({{2, 1}, {0, 3}});
    CHECK(ari(t) == doctest::Approx((4.0 - 2.8) / (6.5 - 2.8)).epsilon(1e-14));
    CHECK(ari(t) == doctest::Approx(0.3243).epsilon(1e-3));
    CHECK(fmi(t) == doctest::Approx(4.0 / std::sqrt(42.0)).epsilon(1e-14));
    CHECK(purity(ContingencyTable::from_counts({{2, 0}, {1, 3}})) == doctest::Approx(5.0 / 6.0));

    // independent table: counts = row * col / n
    const auto ind = ContingencyTable::from_counts({{1, 2}, {2, 4}});
    CHECK(std::abs(nmi(ind)) < 1e-15);

    const auto one = ContingencyTable::from_counts({{3, 3}});
    CHECK(v_measure(one) == 0.0);
    CHECK(purity(one) == 0.5);
  }

  TEST_CASE("perfect agreement scores one") {
    const auto t = contingency(P({0, 0, 1, 1, 2}), P({2, 2, 0, 0, 1}));
    const MetricSet m = evaluate_all(P({0, 0, 1, 1, 2}), P({2, 2, 0, 0, 1}));
    CHECK(m.ari == doctest::Approx(1.0));
    CHECK(m.purity == 1.0);
    CHECK(m.nmi == doctest::Approx(1.0));
    CHECK(m.fmi == doctest::Approx(1.0));
    CHECK(m.v_measure == doctest::Approx(1.0));
    CHECK(t.n == 5);
  }

  TEST_CASE("all partition pairs up to six items match the brute-force oracles") {
    CHECK(properties::all_partitions(4).size() == 15);
    CHECK(properties::all_partitions(6).size() == 203);
    const auto r = properties::metric_oracles(6);
    CHECK_MESSAGE(r.failures == 0, r.first_failure);
    CHECK(r.cases == 1 + 4 + 25 + 225 + 52 * 52 + 203 * 203);
  }

  TEST_CASE("symmetric metrics and relabeling") {
    const std::vector<int> a{0, 0, 1, 1, 1, 2, 2};
    const std::vector<int> b{1, 0, 0, 1, 1, 1, 2};
    const auto ab = contingency(P(a), P(b));
    const auto ba = contingency(P(b), P(a));
    CHECK(ari(ab) == doctest::Approx(ari(ba)).epsilon(1e-14));
    CHECK(nmi(ab) == doctest::Approx(nmi(ba)).epsilon(1e-14));
    CHECK(fmi(ab) == doctest::Approx(fmi(ba)).epsilon(1e-14));
    CHECK(v_measure(ab) == doctest::Approx(v_measure(ba)).epsilon(1e-14));

    std::vector<int> a2;
    for (int x : a) a2.push_back((x + 1) % 3);
    const MetricSet m1 = evaluate_all(P(a), P(b));
    const MetricSet m2 = evaluate_all(P(a2), P(b));
    CHECK(m1.ari == doctest::Approx(m2.ari).epsilon(1e-14));
    CHECK(m1.purity == m2.purity);
    CHECK(m1.nmi == doctest::Approx(m2.nmi).epsilon(1e-14));
    CHECK(m1.fmi == doctest::Approx(m2.fmi).epsilon(1e-14));
    CHECK(m1.v_measure == doctest::Approx(m2.v_measure).epsilon(1e-14));
  }

  TEST_CASE("purity is not symmetric") {
    const auto t = contingency(P({0, 0, 0, 0}), P({0, 1, 2, 3}));
    CHECK(purity(t) == 0.25);
    CHECK(purity(t.transposed()) == 1.0);
  }

  TEST_CASE("degenerate inputs") {
    CHECK_THROWS_AS(ari(contingency(P({0}), P({0}))), Error);
    CHECK(nmi(contingency(P({0, 0}), P({0, 0}))) == 1.0);
    CHECK(ari(contingency(P({0, 1, 2}), P({0, 1, 2}))) == 1.0);
    CHECK(fmi(contingency(P({0, 1, 2}), P({0, 1, 2}))) == 0.0);
    CHECK_THROWS_AS(ContingencyTable::from_counts({{1, 2}, {3}}), Error);
  }
}
