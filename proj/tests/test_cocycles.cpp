#include <doctest.h>

#include <cmath>
#include <random>

#include "skewlab/cocycles.hpp"

using namespace skewlab;

TEST_CASE("log-polar arithmetic") {
    LogPolar z = LogPolar::from_complex({3.0, 4.0});
    CHECK(z.log_mag == doctest::Approx(std::log(5.0)).epsilon(1e-14));
    auto back = z.to_complex();
    CHECK(back.real() == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(back.imag() == doctest::Approx(4.0).epsilon(1e-13));

    LogPolar w = z * z;
    CHECK(w.log_mag == doctest::Approx(2.0 * std::log(5.0)).epsilon(1e-13));
    CHECK((z * z.inverse()).log_mag == doctest::Approx(0.0));
    CHECK_THROWS_AS(LogPolar::from_complex({0.0, 0.0}), SingularCocycleError);
}

TEST_CASE("constant integer cocycle sums linearly") {
    BaseSystem r = BaseSystem::rotation(golden_alpha());
    IntegerCocycle c(r, IntegerCocycle::Constant{3});
    CHECK(c.sum(CirclePoint{0.2}, 7) == 21);
    CHECK(c.sum(CirclePoint{0.2}, -7) == -21);
    CHECK(c.sum(CirclePoint{0.2}, 0) == 0);

    BaseSystem d = BaseSystem::doubling();
    IntegerCocycle cd(d, IntegerCocycle::Constant{1});
    CHECK_THROWS_AS(cd.sum(CirclePoint{0.2}, -1), NonInvertibleError);
}

TEST_CASE("cylinder table generator on the odometer") {
    BaseSystem o = BaseSystem::odometer(8);
    IntegerCocycle c(o, IntegerCocycle::CylinderTable{2, {5, -1, 2, 7}});
    CHECK(c.generator_value(o.origin()) == 5);
    CHECK(c.generator_value(o.apply(o.origin(), 1)) == -1);
    CHECK(c.generator_value(o.apply(o.origin(), 2)) == 2);
    CHECK(c.generator_value(o.apply(o.origin(), 3)) == 7);
    CHECK(c.sum(o.origin(), 4) == 13);

    CHECK_THROWS_AS(IntegerCocycle(o, IntegerCocycle::CylinderTable{2, {1, 2, 3}}), Error);
    BaseSystem r = BaseSystem::rotation(golden_alpha());
    CHECK_THROWS_AS(IntegerCocycle(r, IntegerCocycle::CylinderTable{2, {1, 2, 3, 4}}), Error);
}

TEST_CASE("coboundary sums telescope") {
    BaseSystem o = BaseSystem::odometer(16);
    std::vector<std::int64_t> g = {0, 4, -3, 2, 1, -5, 6, 0};
    IntegerCocycle cb(o, IntegerCocycle::OdometerCoboundary{3, g});
    IntegerCocycle table(o, IntegerCocycle::CylinderTable{3, g});  // reuses cylinder indexing

    auto g_at = [&](const BasePoint& p) { return table.generator_value(p); };

    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> nd(-300, 300);
    for (int i = 0; i < 50; ++i) {
        std::int64_t n = nd(rng);
        BasePoint a = o.sample_measure(1, 1000 + static_cast<std::uint64_t>(i))[0];
        CHECK(cb.sum(a, n) == g_at(o.apply(a, n)) - g_at(a));
        CHECK(std::llabs(cb.sum(a, n)) <= 2 * *cb.coboundary_sup());
    }
    CHECK(*cb.coboundary_sup() == 6);
}

TEST_CASE("cocycle identity holds exactly for integer cocycles") {
    BaseSystem o = BaseSystem::odometer(20);
    IntegerCocycle c(o, IntegerCocycle::CylinderTable{3, {1, -2, 0, 3, -1, 2, 5, -4}});
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> mn(-50, 50);
    for (int i = 0; i < 100; ++i) {
        BasePoint a = o.sample_measure(1, 500 + static_cast<std::uint64_t>(i))[0];
        CHECK(verify_cocycle_identity(c, a, mn(rng), mn(rng)));
    }
}

TEST_CASE("boundedness report") {
    BaseSystem o = BaseSystem::odometer(16);
    IntegerCocycle cb(o, IntegerCocycle::OdometerCoboundary{3, {0, 4, -3, 2, 1, -5, 6, 0}});
    auto rep = boundedness_report(cb, o.origin(), 5000);
    CHECK(rep.verdict == BoundednessVerdict::bounded_within_horizon);
    CHECK(rep.max_abs <= 12);

    BaseSystem r = BaseSystem::rotation(golden_alpha());
    IntegerCocycle one(r, IntegerCocycle::Constant{1});
    auto grow = boundedness_report(one, CirclePoint{0.0}, 1000);
    CHECK(grow.verdict == BoundednessVerdict::growth_detected);
    CHECK(grow.max_abs == 1000);
    CHECK_THROWS_AS(boundedness_report(one, CirclePoint{0.0}, 0), Error);
}

TEST_CASE("scalar cocycle values and products") {
    BaseSystem r = BaseSystem::rotation(golden_alpha());
    ScalarCocycle c(r, ScalarCocycle::Constant{{0.0, 2.0}});
    CHECK(c.value(CirclePoint{0.3}).log_mag == doctest::Approx(std::log(2.0)));
    CHECK(c.log_product(CirclePoint{0.3}, 5).log_mag == doctest::Approx(5.0 * std::log(2.0)));
    CHECK_THROWS_AS(ScalarCocycle(r, ScalarCocycle::Constant{{0.0, 0.0}}), SingularCocycleError);

    ScalarCocycle cp(r, ScalarCocycle::CosProfile{2.0, 1.0});
    CHECK(cp.value(CirclePoint{0.0}).log_mag == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    CHECK(cp.value(CirclePoint{0.5}).log_mag == doctest::Approx(0.0));
    CHECK_THROWS_AS(ScalarCocycle(r, ScalarCocycle::CosProfile{1.0, 1.0}), Error);
    BaseSystem o = BaseSystem::odometer(4);
    CHECK_THROWS_AS(ScalarCocycle(o, ScalarCocycle::CosProfile{2.0, 1.0}), Error);
}

TEST_CASE("scalar cocycle identity within tolerance") {
    BaseSystem r = BaseSystem::rotation(golden_alpha());
    ScalarCocycle c(r, ScalarCocycle::CosProfile{2.0, 1.0});
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::int64_t> mn(0, 50);
    for (int i = 0; i < 100; ++i) {
        BasePoint a = r.sample_measure(1, 900 + static_cast<std::uint64_t>(i))[0];
        CHECK(verify_cocycle_identity(c, a, mn(rng), mn(rng)));
    }
}

TEST_CASE("gamma estimates") {
    BaseSystem r = BaseSystem::rotation(golden_alpha());
    ScalarCocycle c21(r, ScalarCocycle::CosProfile{2.0, 1.0});
    // closed form: mean log(p + q cos 2 pi a) = log((p + sqrt(p^2-q^2))/2)
    CHECK(estimate_gamma(c21, QuadratureMode{512}) ==
          doctest::Approx(0.62381071636487140).epsilon(1e-12));
    ScalarCocycle c53(r, ScalarCocycle::CosProfile{5.0, 3.0});
    CHECK(estimate_gamma(c53, QuadratureMode{1024}) ==
          doctest::Approx(1.50407739677627407).epsilon(1e-12));
    ScalarCocycle c30(r, ScalarCocycle::CosProfile{3.0, 0.0});
    CHECK(estimate_gamma(c30, QuadratureMode{64}) == doctest::Approx(std::log(3.0)).epsilon(1e-13));

    double birk = estimate_gamma(c21, BirkhoffMode{CirclePoint{0.0}, 100000});
    CHECK(birk == doctest::Approx(0.62381495207001966).epsilon(1e-8));  // same-orbit oracle
    CHECK(std::fabs(birk - 0.62381071636487140) < 1e-4);

    ScalarCocycle cc(r, ScalarCocycle::Constant{{0.0, 2.0}});
    CHECK(estimate_gamma(cc, QuadratureMode{1}) == doctest::Approx(std::log(2.0)));
    CHECK_THROWS_AS(estimate_gamma(c21, QuadratureMode{0}), Error);
    CHECK_THROWS_AS(estimate_gamma(c21, BirkhoffMode{CirclePoint{0.0}, 0}), Error);
}
