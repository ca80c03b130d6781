#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "skewlab/base_systems.hpp"

using namespace skewlab;

TEST_CASE("wrap_unit reduces into [0,1)") {
    CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
    CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
    CHECK(wrap_unit(3.0) == 0.0);
    CHECK(wrap_unit(-2.0) == 0.0);
    CHECK(wrap_unit(0.999) == doctest::Approx(0.999));
}

TEST_CASE("golden alpha") {
    CHECK(golden_alpha() == doctest::Approx(0.61803398874989485).epsilon(1e-15));
}

TEST_CASE("rotation dynamics and flags") {
    BaseSystem r = BaseSystem::rotation(golden_alpha());
    CHECK(r.minimal());
    CHECK(r.uniquely_ergodic());
    CHECK_FALSE(r.mixing());
    CHECK(r.invertible());

    BasePoint a = CirclePoint{0.1};
    auto b = std::get<CirclePoint>(r.apply(a, 3));
    CHECK(b.x == doctest::Approx(wrap_unit(0.1 + 3 * golden_alpha())).epsilon(1e-14));
    // invertibility
    auto back = std::get<CirclePoint>(r.apply(r.apply(a, 17), -17));
    CHECK(r.distance(back, a) < 1e-12);

    CHECK(r.distance(CirclePoint{0.1}, CirclePoint{0.9}) == doctest::Approx(0.2));
    CHECK_THROWS_AS(BaseSystem::rotation(0.0), Error);
    CHECK_THROWS_AS(BaseSystem::rotation(1.5), Error);
}

TEST_CASE("rotation with an exact small rational angle is not declared minimal") {
    BaseSystem r = BaseSystem::rotation(0.5);
    CHECK_FALSE(r.minimal());
    CHECK_FALSE(r.uniquely_ergodic());
    BaseSystem r2 = BaseSystem::rotation(0.125);
    CHECK_FALSE(r2.minimal());
}

TEST_CASE("doubling map") {
    BaseSystem d = BaseSystem::doubling();
    CHECK(d.mixing());
    CHECK_FALSE(d.invertible());
    CHECK(std::get<CirclePoint>(d.apply(CirclePoint{0.3}, 1)).x == doctest::Approx(0.6));
    CHECK(std::get<CirclePoint>(d.apply(CirclePoint{0.3}, 2)).x == doctest::Approx(0.2));
    CHECK_THROWS_AS(d.apply(CirclePoint{0.3}, -1), NonInvertibleError);
}

TEST_CASE("odometer is integer addition on digits") {
    BaseSystem o = BaseSystem::odometer(4);
    auto p5 = std::get<OdometerPoint>(o.apply(o.origin(), 5));
    CHECK(p5.digits == std::vector<std::uint8_t>{1, 0, 1, 0});
    // wraparound at 2^depth
    auto p16 = std::get<OdometerPoint>(o.apply(o.origin(), 16));
    CHECK(p16.digits == std::vector<std::uint8_t>{0, 0, 0, 0});
    // group law
    auto q = std::get<OdometerPoint>(o.apply(o.apply(o.origin(), 11), -11));
    CHECK(o.distance(q, o.origin()) == 0.0);
    CHECK(o.distance(o.origin(), o.apply(o.origin(), 1)) == doctest::Approx(0.5));
    CHECK(o.distance(o.origin(), o.apply(o.origin(), 2)) == doctest::Approx(0.25));

    CHECK_THROWS_AS(BaseSystem::odometer(0), Error);
    CHECK_THROWS_AS(BaseSystem::odometer(65), Error);
}

TEST_CASE("odometer orbit of the origin is minimal at finite depth") {
    BaseSystem o = BaseSystem::odometer(8);
    std::set<std::vector<std::uint8_t>> seen;
    BasePoint p = o.origin();
    for (int i = 0; i < 256; ++i) {
        seen.insert(std::get<OdometerPoint>(p).digits);
        p = o.apply(p, 1);
    }
    CHECK(seen.size() == 256);
    CHECK(o.distance(p, o.origin()) == 0.0);
}

TEST_CASE("torus skew closed-form iterate") {
    double alpha = golden_alpha();
    BaseSystem t = BaseSystem::torus_skew(alpha);
    auto one = std::get<TorusPoint>(t.apply(TorusPoint{0.3, 0.7}, 1));
    CHECK(one.x == doctest::Approx(wrap_unit(0.3 + alpha)).epsilon(1e-14));
    CHECK(one.y == doctest::Approx(wrap_unit(0.3 + 0.7)).epsilon(1e-14));

    // long-horizon iterate against a high-precision oracle
    auto far = std::get<TorusPoint>(t.apply(TorusPoint{0.3, 0.7}, 1000000));
    CHECK(far.x == doctest::Approx(0.28874989489999999).epsilon(1e-9));
    CHECK(far.y == doctest::Approx(0.65307505254999999).epsilon(1e-6));

    // semigroup law of the closed form
    auto ab = t.apply(t.apply(TorusPoint{0.12, 0.45}, 1000), 500);
    auto once = t.apply(TorusPoint{0.12, 0.45}, 1500);
    CHECK(t.distance(ab, once) < 1e-9);
}

TEST_CASE("sample_measure is deterministic and equidistributed") {
    BaseSystem r = BaseSystem::rotation(golden_alpha());
    auto s1 = r.sample_measure(100, 42);
    auto s2 = r.sample_measure(100, 42);
    for (std::size_t i = 0; i < s1.size(); ++i)
        CHECK(std::get<CirclePoint>(s1[i]).x == std::get<CirclePoint>(s2[i]).x);

    double mean = 0.0;
    auto big = r.sample_measure(4000, 7);
    for (const auto& p : big) mean += std::get<CirclePoint>(p).x;
    mean /= 4000.0;
    CHECK(mean == doctest::Approx(0.5).epsilon(0.05));
    CHECK_THROWS_AS(r.sample_measure(0, 1), Error);
}

TEST_CASE("check_point rejects foreign points") {
    BaseSystem r = BaseSystem::rotation(golden_alpha());
    CHECK_THROWS_AS(r.apply(TorusPoint{0.0, 0.0}, 1), KindMismatchError);
    BaseSystem o = BaseSystem::odometer(4);
    OdometerPoint wrong;
    wrong.digits = {0, 1};
    CHECK_THROWS_AS(o.apply(wrong, 1), KindMismatchError);
}
