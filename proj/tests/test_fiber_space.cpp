#include <doctest.h>

#include <cmath>
#include <random>

#include "skewlab/fiber_space.hpp"

using namespace skewlab;

TEST_CASE("sparse vectors sort, deduplicate and drop zeros") {
    SparseVector v({{5, {1.0, 0.0}}, {2, {0.0, 3.0}}, {7, {0.0, 0.0}}});
    REQUIRE(v.entries().size() == 2);
    CHECK(v.entries()[0].first == 2);
    CHECK(v.at(5) == std::complex<double>(1.0, 0.0));
    CHECK(v.at(9) == std::complex<double>(0.0, 0.0));
    CHECK_THROWS_AS(SparseVector({{1, {1.0, 0.0}}, {1, {2.0, 0.0}}}), Error);

    SparseVector sum = v + SparseVector::basis(2, {0.0, -3.0});
    CHECK(sum.entries().size() == 1);  // exact cancellation removes the entry
    CHECK((v - v).empty());
    CHECK(v.scaled(2.0).at(5) == std::complex<double>(2.0, 0.0));
}

TEST_CASE("log vectors round trip and guard materialization") {
    SparseVector v({{1, {0.5, -0.25}}, {4, {-2.0, 1.0}}});
    LogVector lv = LogVector::from_sparse(v);
    SparseVector back = lv.to_sparse();
    for (const auto& [idx, c] : v.entries()) CHECK(std::abs(back.at(idx) - c) < 1e-14);

    LogVector big = lv.scaled(LogPolar{600.0, 0.0});
    CHECK_THROWS_AS(big.to_sparse(), OverflowScaleError);
    LogVector tiny = lv.scaled(LogPolar{-600.0, 0.0});
    CHECK_THROWS_AS(tiny.to_sparse(), OverflowScaleError);
}

TEST_CASE("window membership") {
    WindowSpec w(4);
    CHECK_FALSE(w.window_of(3));
    CHECK(w.window_of(4) == 1);
    CHECK(w.window_of(5) == 1);
    CHECK_FALSE(w.window_of(6));
    CHECK_FALSE(w.window_of(14));
    CHECK(w.window_of(15) == 2);
    CHECK(w.window_of(18) == 2);
    CHECK_FALSE(w.window_of(19));
    CHECK_FALSE(w.window_of(61));
    CHECK(w.window_of(62) == 3);
    CHECK(w.window_of(67) == 3);
    CHECK_FALSE(w.window_of(68));
    CHECK(w.window_of(253) == 4);
    CHECK(w.window_of(260) == 4);
    CHECK(w.center(2) == 16);

    CHECK_THROWS_AS(WindowSpec(1), Error);
    CHECK_THROWS_AS(WindowSpec::from_centers({4, 6}), Error);
    auto custom = WindowSpec::from_centers({10, 100});
    CHECK(custom.window_of(10) == 1);
    CHECK(custom.window_of(99) == 2);
    CHECK(custom.coverage() == 102);
}

TEST_CASE("branch index recursion") {
    CHECK(example1_r(1) == 1);
    CHECK(example1_r(2) == 7);
    CHECK(example1_r(3) == 31);
    CHECK(example1_r(7) == 8191);
    for (int k = 1; k <= 14; ++k) CHECK(example1_r(k + 1) == 4 * example1_r(k) + 3);
    CHECK_THROWS_AS(example1_r(0), Error);
}

TEST_CASE("branch-tile weight rule") {
    WeightSequence w = WeightSequence::example1(1.0, 0.25);
    CHECK(w.log_weight(1) == 0.0);
    CHECK(w.log_weight(2) == doctest::Approx(0.75));
    CHECK(w.log_weight(3) == doctest::Approx(0.0));
    CHECK(w.log_weight(4) == doctest::Approx(6.0));
    CHECK(w.log_weight(5) == doctest::Approx(4.0));
    CHECK(w.log_weight(6) == doctest::Approx(2.0));
    CHECK(w.log_weight(7) == doctest::Approx(0.0));
    CHECK(w.log_weight(8) == doctest::Approx(5.25));
    CHECK(w.log_weight(15) == doctest::Approx(0.0));
    CHECK(w.log_weight(16) == doctest::Approx(30.0));
    CHECK(w.log_range_product(4, 6) == doctest::Approx(12.0));
    CHECK_THROWS_AS(WeightSequence::example1(0.5, 0.5), Error);
}

TEST_CASE("windowed weight rule closed-form products") {
    WeightSequence w = WeightSequence::example2(0.5);
    struct Probe {
        std::int64_t n;
        double L;
    };
    // independently summed oracle values at gamma = 1/2
    for (Probe p : {Probe{3, -1.5}, Probe{4, -1.5}, Probe{5, -2.5}, Probe{16, -7.0}, Probe{17, -8.0},
                    Probe{18, -9.0}, Probe{63, -30.5}, Probe{64, -30.5}, Probe{67, -33.5},
                    Probe{100, -50.0}, Probe{256, -126.0}, Probe{260, -130.0}})
        CHECK(w.log_prefix_product(p.n) == doctest::Approx(p.L).epsilon(1e-13));

    // closed form agrees with direct summation far past the construction check
    double acc = 0.0;
    WindowSpec win(4);
    for (std::int64_t n = 1; n <= 100000; ++n) {
        acc += w.log_weight(n);
        if (n % 977 == 0 || win.window_of(n))
            CHECK(acc == doctest::Approx(w.log_prefix_product(n)).epsilon(1e-9));
        if (!win.window_of(n))
            CHECK(std::fabs(w.log_prefix_product(n) + 0.5 * static_cast<double>(n)) < 1e-9);
    }
    CHECK_THROWS_AS(WeightSequence::example2(0.0), Error);
}

TEST_CASE("table and constant weight rules") {
    WeightSequence t(WeightSequence::Table{{2.0, 3.0, 4.0}});
    CHECK(t.log_weight(2) == doctest::Approx(std::log(3.0)));
    CHECK(t.log_prefix_product(3) == doctest::Approx(std::log(24.0)));
    CHECK_THROWS_AS(t.log_weight(4), Error);
    CHECK_THROWS_AS(WeightSequence(WeightSequence::Table{{1.0, 0.0}}), Error);

    WeightSequence c = WeightSequence::constant(2.0);
    CHECK(c.log_range_product(-5, -3) == doctest::Approx(3.0 * std::log(2.0)));
    CHECK_THROWS_AS(t.log_range_product(-1, 2), Error);
    CHECK_THROWS_AS(WeightSequence::constant(0.0), Error);
}

TEST_CASE("norms in plain and weighted spaces") {
    NormSpace l2 = NormSpace::plain();
    CHECK(norm(SparseVector::basis(3, {3.0, 4.0}), l2) == doctest::Approx(5.0));
    SparseVector v({{1, {3.0, 0.0}}, {2, {4.0, 0.0}}});
    CHECK(norm(v, l2) == doctest::Approx(5.0));
    NormSpace l1 = NormSpace::plain(1.0);
    CHECK(norm(v, l1) == doctest::Approx(7.0));

    NormSpace weighted = NormSpace::weighted(WeightSequence::constant(2.0));
    CHECK(norm(SparseVector::basis(5), weighted) == doctest::Approx(2.0));

    CHECK(norm(SparseVector(), l2) == 0.0);
    CHECK(norm_log(SparseVector(), l2) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("shift apply and right inverse") {
    ShiftOperator T = ShiftOperator::weighted_unilateral(WeightSequence::constant(2.0));
    SparseVector out = T.apply(SparseVector::basis(5), 2);
    REQUIRE(out.entries().size() == 1);
    CHECK(out.entries()[0].first == 3);
    CHECK(out.entries()[0].second.real() == doctest::Approx(4.0));

    CHECK(T.apply(SparseVector::basis(2), 3).empty());  // annihilation below index 1

    SparseVector s = T.right_inverse(SparseVector::basis(3), 2);
    REQUIRE(s.entries().size() == 1);
    CHECK(s.entries()[0].first == 5);
    CHECK(s.entries()[0].second.real() == doctest::Approx(0.25));
}

TEST_CASE("right inverse law on random vectors and weights") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> wdist(0.2, 3.0), amp(-1.0, 1.0);
    std::vector<double> table;
    for (int i = 0; i < 120; ++i) table.push_back(wdist(rng));
    ShiftOperator T = ShiftOperator::weighted_unilateral(WeightSequence(WeightSequence::Table{table}));

    for (int trial = 0; trial < 40; ++trial) {
        std::vector<SparseVector::Entry> es;
        std::uniform_int_distribution<std::int64_t> idx(1, 20);
        for (int j = 0; j < 4; ++j) {
            std::int64_t i = idx(rng) + 21 * j;  // disjoint bands keep indices distinct
            es.emplace_back(i, std::complex<double>(amp(rng), amp(rng)));
        }
        SparseVector y(std::move(es));
        std::uniform_int_distribution<std::int64_t> nd(0, 30);
        std::int64_t n = nd(rng);
        SparseVector back = T.apply(T.right_inverse(y, n), n);
        double err = norm(back - y, T.space()) / (1.0 + norm(y, T.space()));
        CHECK(err <= 1e-12);
    }
}

TEST_CASE("bilateral power law") {
    ShiftOperator T = ShiftOperator::weighted_bilateral(2.0);
    SparseVector v({{-3, {1.0, 0.0}}, {0, {0.0, 2.0}}, {4, {-1.0, 0.5}}});
    LogVector lv = LogVector::from_sparse(v);
    for (std::int64_t m : {-7, -1, 0, 3, 9}) {
        SparseVector round = T.power_log(T.power_log(lv, m), -m).to_sparse();
        CHECK(norm(round - v, T.space()) <= 1e-12);
    }
    ShiftOperator U = ShiftOperator::weighted_unilateral(WeightSequence::constant(2.0));
    CHECK_THROWS_AS(U.power_log(lv, -1), NonInvertibleError);
    CHECK_THROWS_AS(ShiftOperator(WeightSequence::example2(0.5), Side::bilateral, NormSpace::plain()),
                    Error);
}

TEST_CASE("windowed weights drive the expected operator decay") {
    WeightSequence w = WeightSequence::example2(0.5);
    ShiftOperator T = ShiftOperator::weighted_unilateral(w);
    // (T^n e_{n+1})_1 carries the full prefix product
    for (std::int64_t n : {10, 100, 1000}) {
        SparseVector img = T.apply(SparseVector::basis(n + 1), n);
        REQUIRE(img.entries().size() == 1);
        CHECK(std::log(std::abs(img.entries()[0].second)) ==
              doctest::Approx(w.log_prefix_product(n)).epsilon(1e-10));
    }
}
