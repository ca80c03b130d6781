#include "skewlab/cocycles.hpp"

#include <cmath>

namespace skewlab {

std::complex<double> LogPolar::to_complex() const {
    return std::polar(std::exp(log_mag), phase);
}

LogPolar LogPolar::from_complex(std::complex<double> z) {
    double m = std::abs(z);
    if (m == 0.0) throw SingularCocycleError("log-polar form of zero");
    return {std::log(m), std::arg(z)};
}

IntegerCocycle::IntegerCocycle(BaseSystem base, Generator gen) : base_(std::move(base)), gen_(std::move(gen)) {
    if (!std::holds_alternative<Constant>(gen_)) {
        if (base_.kind() != BaseKind::odometer)
            throw Error("nonconstant integer generators are only continuous on the odometer");
        int depth = std::holds_alternative<CylinderTable>(gen_) ? std::get<CylinderTable>(gen_).depth
                                                                : std::get<OdometerCoboundary>(gen_).depth;
        std::size_t need = std::size_t{1} << depth;
        const auto& vals = std::holds_alternative<CylinderTable>(gen_) ? std::get<CylinderTable>(gen_).values
                                                                       : std::get<OdometerCoboundary>(gen_).g;
        if (depth < 1 || depth > base_.depth() || vals.size() != need)
            throw Error("cylinder table must list 2^depth values with depth <= base depth");
    }
}

std::int64_t IntegerCocycle::cylinder_index(const BasePoint& a, int depth) const {
    const auto& digits = std::get<OdometerPoint>(a).digits;
    std::int64_t idx = 0;
    for (int i = 0; i < depth; ++i)
        if (digits[static_cast<std::size_t>(i)]) idx |= (std::int64_t{1} << i);
    return idx;
}

std::int64_t IntegerCocycle::generator_value(const BasePoint& a) const {
    base_.check_point(a);
    if (const auto* c = std::get_if<Constant>(&gen_)) return c->c;
    if (const auto* t = std::get_if<CylinderTable>(&gen_))
        return t->values[static_cast<std::size_t>(cylinder_index(a, t->depth))];
    const auto& cb = std::get<OdometerCoboundary>(gen_);
    std::int64_t gfa = cb.g[static_cast<std::size_t>(cylinder_index(base_.apply(a, 1), cb.depth))];
    std::int64_t ga = cb.g[static_cast<std::size_t>(cylinder_index(a, cb.depth))];
    return gfa - ga;
}

std::int64_t IntegerCocycle::sum(const BasePoint& a, std::int64_t n) const {
    if (n < 0 && !base_.invertible()) throw NonInvertibleError("negative cocycle time on a non-invertible base");
    std::int64_t s = 0;
    if (n >= 1) {
        BasePoint p = a;
        for (std::int64_t k = 0; k < n; ++k) {
            s += generator_value(p);
            p = base_.apply(p, 1);
        }
    } else if (n < 0) {
        BasePoint p = a;
        for (std::int64_t k = 1; k <= -n; ++k) {
            p = base_.apply(p, -1);
            s -= generator_value(p);
        }
    }
    return s;
}

std::optional<std::int64_t> IntegerCocycle::coboundary_sup() const {
    if (const auto* cb = std::get_if<OdometerCoboundary>(&gen_)) {
        std::int64_t m = 0;
        for (auto v : cb->g) m = std::max(m, std::int64_t{std::llabs(v)});
        return m;
    }
    return std::nullopt;
}

BoundednessReport boundedness_report(const IntegerCocycle& c, const BasePoint& a, std::int64_t horizon,
                                     std::int64_t threshold) {
    if (horizon < 1) throw Error("boundedness_report: horizon must be >= 1");
    bool two_sided = c.base().invertible();

    BoundednessReport rep;
    // Running max indexed by |n|; incremental forward and backward scans.
    std::vector<std::int64_t> running(static_cast<std::size_t>(horizon) + 1, 0);
    std::int64_t fwd = 0, bwd = 0;
    BasePoint pf = a, pb = a;
    for (std::int64_t k = 1; k <= horizon; ++k) {
        fwd += c.generator_value(pf);
        pf = c.base().apply(pf, 1);
        std::int64_t m = std::llabs(fwd);
        std::int64_t at = k;
        if (two_sided) {
            pb = c.base().apply(pb, -1);
            bwd -= c.generator_value(pb);
            if (std::llabs(bwd) > m) {
                m = std::llabs(bwd);
                at = -k;
            }
        }
        if (m > rep.max_abs) {
            rep.max_abs = m;
            rep.attained_at = at;
        }
        running[static_cast<std::size_t>(k)] = rep.max_abs;
    }
    std::int64_t q = (3 * horizon) / 4;
    bool still_growing = running[static_cast<std::size_t>(horizon)] > running[static_cast<std::size_t>(q)];
    rep.verdict = (rep.max_abs > threshold && still_growing) ? BoundednessVerdict::growth_detected
                                                             : BoundednessVerdict::bounded_within_horizon;
    return rep;
}

ScalarCocycle::ScalarCocycle(BaseSystem base, Generator gen) : base_(std::move(base)), gen_(std::move(gen)) {
    if (const auto* c = std::get_if<Constant>(&gen_)) {
        if (std::abs(c->c) == 0.0) throw SingularCocycleError("constant scalar cocycle must be nonzero");
    } else {
        const auto& cp = std::get<CosProfile>(gen_);
        if (!(cp.p > std::fabs(cp.q)) || cp.q < 0.0)
            throw Error("cos_profile requires p > |q| >= 0");
        if (base_.kind() == BaseKind::odometer)
            throw Error("cos_profile is defined on circle coordinates");
    }
}

LogPolar ScalarCocycle::value(const BasePoint& a) const {
    base_.check_point(a);
    if (const auto* c = std::get_if<Constant>(&gen_)) return LogPolar::from_complex(c->c);
    const auto& cp = std::get<CosProfile>(gen_);
    double x = std::holds_alternative<CirclePoint>(a) ? std::get<CirclePoint>(a).x : std::get<TorusPoint>(a).x;
    double v = cp.p + cp.q * std::cos(2.0 * M_PI * x);
    if (v <= 0.0) throw SingularCocycleError("cos_profile hit a nonpositive value");
    return {std::log(v), 0.0};
}

LogPolar ScalarCocycle::log_product(const BasePoint& a, std::int64_t n) const {
    if (n < 0) throw Error("scalar log product is defined for n >= 0");
    LogPolar acc{0.0, 0.0};
    BasePoint p = a;
    for (std::int64_t k = 0; k < n; ++k) {
        acc *= value(p);
        p = base_.apply(p, 1);
    }
    return acc;
}

bool verify_cocycle_identity(const IntegerCocycle& c, const BasePoint& a, std::int64_t m, std::int64_t n) {
    std::int64_t lhs = c.sum(a, m + n);
    std::int64_t rhs = c.sum(c.base().apply(a, n), m) + c.sum(a, n);
    return lhs == rhs;
}

bool verify_cocycle_identity(const ScalarCocycle& c, const BasePoint& a, std::int64_t m, std::int64_t n,
                             double tol_scale) {
    if (m < 0 || n < 0) throw Error("scalar cocycle identity needs m,n >= 0");
    LogPolar lhs = c.log_product(a, m + n);
    LogPolar rhs = c.log_product(c.base().apply(a, n), m) * c.log_product(a, n);
    double tol = tol_scale * static_cast<double>(std::llabs(m) + std::llabs(n) + 1);
    double dphase = std::remainder(lhs.phase - rhs.phase, 2.0 * M_PI);
    return std::fabs(lhs.log_mag - rhs.log_mag) <= tol && std::fabs(dphase) <= tol;
}

double estimate_gamma(const ScalarCocycle& c, const BirkhoffMode& mode) {
    if (mode.horizon < 1) throw Error("estimate_gamma: horizon must be >= 1");
    double acc = 0.0;
    BasePoint p = mode.a;
    for (std::int64_t j = 0; j < mode.horizon; ++j) {
        acc += c.value(p).log_mag;
        p = c.base().apply(p, 1);
    }
    return acc / static_cast<double>(mode.horizon);
}

double estimate_gamma(const ScalarCocycle& c, const QuadratureMode& mode) {
    if (mode.panels < 1) throw Error("estimate_gamma: panels must be >= 1");
    if (std::holds_alternative<ScalarCocycle::Constant>(c.generator()))
        return c.value(c.base().origin()).log_mag;
    if (c.base().kind() == BaseKind::odometer)
        throw Error("quadrature gamma is defined for circle bases");
    const auto& cp = std::get<ScalarCocycle::CosProfile>(c.generator());
    double acc = 0.0;
    double h = 1.0 / static_cast<double>(mode.panels);
    for (std::int64_t i = 0; i < mode.panels; ++i) {
        double x = (static_cast<double>(i) + 0.5) * h;
        acc += std::log(cp.p + cp.q * std::cos(2.0 * M_PI * x));
    }
    return acc * h;
}

}  // namespace skewlab
