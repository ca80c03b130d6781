#include "skewlab/base_systems.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace skewlab {

double wrap_unit(double x) {
    double r = std::fmod(x, 1.0);
    if (r < 0.0) r += 1.0;
    if (r >= 1.0) r = 0.0;  // fmod can round up to 1.0 after the correction
    return r;
}

double golden_alpha() {
    return (std::sqrt(5.0) - 1.0) / 2.0;
}

std::string to_string(BaseKind k) {
    switch (k) {
        case BaseKind::rotation: return "rotation";
        case BaseKind::doubling: return "doubling";
        case BaseKind::odometer: return "odometer";
        case BaseKind::torus_skew: return "torus_skew";
    }
    return "?";
}

BaseSystem BaseSystem::rotation(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("rotation: alpha must lie in (0,1)");
    BaseSystem s;
    s.kind_ = BaseKind::rotation;
    s.alpha_ = alpha;
    // Declared per known theory; irrationality cannot be certified from a double,
    // so the minimal flag is refused only for angles supplied as exact small rationals.
    bool exact_rational = false;
    for (int q = 1; q <= 64; ++q) {
        double num = alpha * q;
        if (num == std::round(num)) { exact_rational = true; break; }
    }
    s.minimal_ = !exact_rational;
    s.uniquely_ergodic_ = !exact_rational;
    s.mixing_ = false;
    return s;
}

BaseSystem BaseSystem::doubling() {
    BaseSystem s;
    s.kind_ = BaseKind::doubling;
    s.minimal_ = false;
    s.uniquely_ergodic_ = false;
    s.mixing_ = true;  // w.r.t. length measure
    return s;
}

BaseSystem BaseSystem::odometer(int depth) {
    if (depth < 1 || depth > 64) throw Error("odometer: depth must be in [1,64]");
    BaseSystem s;
    s.kind_ = BaseKind::odometer;
    s.depth_ = depth;
    s.minimal_ = true;
    s.uniquely_ergodic_ = true;
    s.mixing_ = false;
    return s;
}

BaseSystem BaseSystem::torus_skew(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("torus_skew: alpha must lie in (0,1)");
    BaseSystem s;
    s.kind_ = BaseKind::torus_skew;
    s.alpha_ = alpha;
    s.minimal_ = true;
    s.uniquely_ergodic_ = true;
    s.mixing_ = false;
    return s;
}

BasePoint BaseSystem::origin() const {
    switch (kind_) {
        case BaseKind::rotation:
        case BaseKind::doubling:
            return CirclePoint{0.0};
        case BaseKind::odometer:
            return OdometerPoint{std::vector<std::uint8_t>(static_cast<std::size_t>(depth_), 0)};
        case BaseKind::torus_skew:
            return TorusPoint{0.0, 0.0};
    }
    return CirclePoint{0.0};
}

void BaseSystem::check_point(const BasePoint& a) const {
    bool ok = false;
    switch (kind_) {
        case BaseKind::rotation:
        case BaseKind::doubling:
            ok = std::holds_alternative<CirclePoint>(a);
            break;
        case BaseKind::odometer:
            ok = std::holds_alternative<OdometerPoint>(a) &&
                 std::get<OdometerPoint>(a).digits.size() == static_cast<std::size_t>(depth_);
            break;
        case BaseKind::torus_skew:
            ok = std::holds_alternative<TorusPoint>(a);
            break;
    }
    if (!ok) throw KindMismatchError("base point does not match system kind " + to_string(kind_));
}

namespace {

std::uint64_t odometer_value(const OdometerPoint& p) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < p.digits.size(); ++i)
        if (p.digits[i]) v |= (std::uint64_t{1} << i);
    return v;
}

OdometerPoint odometer_from_value(std::uint64_t v, int depth) {
    OdometerPoint p;
    p.digits.resize(static_cast<std::size_t>(depth));
    for (int i = 0; i < depth; ++i) p.digits[static_cast<std::size_t>(i)] = (v >> i) & 1u;
    return p;
}

}  // namespace

BasePoint BaseSystem::apply(const BasePoint& a, std::int64_t n) const {
    check_point(a);
    switch (kind_) {
        case BaseKind::rotation: {
            double x = std::get<CirclePoint>(a).x;
            return CirclePoint{wrap_unit(x + static_cast<double>(n) * alpha_)};
        }
        case BaseKind::doubling: {
            if (n < 0) throw NonInvertibleError("doubling map is not invertible");
            double x = std::get<CirclePoint>(a).x;
            for (std::int64_t k = 0; k < n; ++k) x = wrap_unit(2.0 * x);
            return CirclePoint{x};
        }
        case BaseKind::odometer: {
            std::uint64_t v = odometer_value(std::get<OdometerPoint>(a));
            std::uint64_t step = static_cast<std::uint64_t>(n);  // two's complement add = add mod 2^64
            std::uint64_t w = v + step;
            if (depth_ < 64) w &= (std::uint64_t{1} << depth_) - 1;
            return odometer_from_value(w, depth_);
        }
        case BaseKind::torus_skew: {
            // F(a,x) = (a+alpha, a+x); closed form of the n-th iterate.
            const auto& p = std::get<TorusPoint>(a);
            long double nn = static_cast<long double>(n);
            long double ax = static_cast<long double>(p.x) + nn * static_cast<long double>(alpha_);
            long double fy = static_cast<long double>(p.y) + nn * static_cast<long double>(p.x) +
                             static_cast<long double>(alpha_) * nn * (nn - 1.0L) / 2.0L;
            return TorusPoint{wrap_unit(static_cast<double>(std::fmod(ax, 1.0L))),
                              wrap_unit(static_cast<double>(std::fmod(fy, 1.0L)))};
        }
    }
    return a;
}

double BaseSystem::distance(const BasePoint& a, const BasePoint& b) const {
    check_point(a);
    check_point(b);
    auto arc = [](double u, double v) {
        double d = std::fabs(u - v);
        return std::min(d, 1.0 - d);
    };
    switch (kind_) {
        case BaseKind::rotation:
        case BaseKind::doubling:
            return arc(std::get<CirclePoint>(a).x, std::get<CirclePoint>(b).x);
        case BaseKind::odometer: {
            const auto& da = std::get<OdometerPoint>(a).digits;
            const auto& db = std::get<OdometerPoint>(b).digits;
            for (std::size_t i = 0; i < da.size(); ++i)
                if (da[i] != db[i]) return std::ldexp(1.0, -static_cast<int>(i + 1));
            return 0.0;
        }
        case BaseKind::torus_skew: {
            const auto& pa = std::get<TorusPoint>(a);
            const auto& pb = std::get<TorusPoint>(b);
            return std::max(arc(pa.x, pb.x), arc(pa.y, pb.y));
        }
    }
    return 0.0;
}

std::vector<BasePoint> BaseSystem::sample_measure(std::size_t count, std::uint64_t seed) const {
    if (count < 1) throw Error("sample_measure: count must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<BasePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        switch (kind_) {
            case BaseKind::rotation:
            case BaseKind::doubling:
                out.push_back(CirclePoint{unit(rng)});
                break;
            case BaseKind::odometer: {
                OdometerPoint p;
                p.digits.resize(static_cast<std::size_t>(depth_));
                for (auto& d : p.digits) d = static_cast<std::uint8_t>(rng() & 1u);
                out.push_back(std::move(p));
                break;
            }
            case BaseKind::torus_skew:
                out.push_back(TorusPoint{unit(rng), unit(rng)});
                break;
        }
    }
    return out;
}

}  // namespace skewlab
