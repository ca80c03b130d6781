#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "skewlab/base_systems.hpp"

namespace skewlab {

struct SingularCocycleError : Error {
    using Error::Error;
};

/// Complex value in log-polar form: value = exp(log_mag + i*phase).
/// Multiplication is addition of both fields, so products of length 1e9
/// stay representable.
struct LogPolar {
    double log_mag = 0.0;
    double phase = 0.0;

    LogPolar operator*(const LogPolar& o) const { return {log_mag + o.log_mag, phase + o.phase}; }
    LogPolar& operator*=(const LogPolar& o) {
        log_mag += o.log_mag;
        phase += o.phase;
        return *this;
    }
    LogPolar inverse() const { return {-log_mag, -phase}; }

    std::complex<double> to_complex() const;
    static LogPolar from_complex(std::complex<double> z);  // throws SingularCocycleError on 0
};

/// Integer-valued cocycle h(n,a) generated by a locally constant h~.
///
/// Builtin generators: a constant, a cylinder-function table on the first
/// `depth` odometer digits, or the coboundary g(f(a)) - g(a) of such a table.
class IntegerCocycle {
public:
    struct Constant {
        std::int64_t c = 0;
    };
    /// value[i] indexed by the integer formed by the first `depth` digits (LSB first).
    struct CylinderTable {
        int depth = 0;
        std::vector<std::int64_t> values;
    };
    struct OdometerCoboundary {
        int depth = 0;
        std::vector<std::int64_t> g;
    };
    using Generator = std::variant<Constant, CylinderTable, OdometerCoboundary>;

    IntegerCocycle(BaseSystem base, Generator gen);

    const BaseSystem& base() const { return base_; }
    const Generator& generator() const { return gen_; }

    /// h~(a), the one-step generator.
    std::int64_t generator_value(const BasePoint& a) const;

    /// h(n,a) per the three-branch sum; n < 0 requires an invertible base.
    std::int64_t sum(const BasePoint& a, std::int64_t n) const;

    /// Maximum |g| for coboundary generators (telescoping bound 2*max|g|).
    std::optional<std::int64_t> coboundary_sup() const;

private:
    std::int64_t cylinder_index(const BasePoint& a, int depth) const;

    BaseSystem base_;
    Generator gen_;
};

enum class BoundednessVerdict { bounded_within_horizon, growth_detected };

struct BoundednessReport {
    std::int64_t max_abs = 0;
    std::int64_t attained_at = 0;
    BoundednessVerdict verdict = BoundednessVerdict::bounded_within_horizon;
};

/// Scans h(n,a) over [-N,N] (invertible base) or [0,N]. growth_detected when
/// max_abs exceeds `threshold` and the running max is still increasing in the
/// final quarter of the scan.
BoundednessReport boundedness_report(const IntegerCocycle& c, const BasePoint& a, std::int64_t horizon,
                                     std::int64_t threshold = 64);

/// Scalar cocycle h : A -> C with h_n(a) kept in log-polar form.
class ScalarCocycle {
public:
    struct Constant {
        std::complex<double> c;
    };
    /// h(a) = p + q cos(2 pi a) with p > |q| >= 0, so |h| stays positive.
    struct CosProfile {
        double p = 0.0;
        double q = 0.0;
    };
    using Generator = std::variant<Constant, CosProfile>;

    ScalarCocycle(BaseSystem base, Generator gen);

    const BaseSystem& base() const { return base_; }
    const Generator& generator() const { return gen_; }

    LogPolar value(const BasePoint& a) const;

    /// h_n(a) = h(f^{n-1}a) ... h(a); n = 0 gives the empty product (0,0).
    LogPolar log_product(const BasePoint& a, std::int64_t n) const;

private:
    BaseSystem base_;
    Generator gen_;
};

bool verify_cocycle_identity(const IntegerCocycle& c, const BasePoint& a, std::int64_t m, std::int64_t n);
bool verify_cocycle_identity(const ScalarCocycle& c, const BasePoint& a, std::int64_t m, std::int64_t n,
                             double tol_scale = 1e-9);

struct BirkhoffMode {
    BasePoint a;
    std::int64_t horizon = 1;
};
struct QuadratureMode {
    std::int64_t panels = 1;
};

/// gamma = mean of log|h| over the invariant measure: either the Birkhoff
/// average along an orbit, or composite-midpoint quadrature on circle bases.
double estimate_gamma(const ScalarCocycle& c, const BirkhoffMode& mode);
double estimate_gamma(const ScalarCocycle& c, const QuadratureMode& mode);

}  // namespace skewlab
