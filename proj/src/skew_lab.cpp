#include "skewlab/skew_lab.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace skewlab {

namespace {

constexpr double kLogClamp = 250.0;  // keeps |c|^2 inside double range
constexpr double kHitGuard = 1.0 - 1e-9;

bool same_base(const BaseSystem& a, const BaseSystem& b) {
    return a.kind() == b.kind() && a.alpha() == b.alpha() && a.depth() == b.depth();
}

/// Stable difference of two log-scale vectors.
LogVector log_difference(const LogVector& x, const LogVector& y) {
    LogVector out;
    auto a = x.entries.begin();
    auto b = y.entries.begin();
    auto push = [&](std::int64_t idx, const LogPolar& c) { out.entries.push_back({idx, c}); };
    while (a != x.entries.end() || b != y.entries.end()) {
        if (b == y.entries.end() || (a != x.entries.end() && a->index < b->index)) {
            push(a->index, a->coeff);
            ++a;
        } else if (a == x.entries.end() || b->index < a->index) {
            push(b->index, {b->coeff.log_mag, b->coeff.phase + M_PI});
            ++b;
        } else {
            double m = std::max(a->coeff.log_mag, b->coeff.log_mag);
            std::complex<double> d = std::polar(std::exp(a->coeff.log_mag - m), a->coeff.phase) -
                                     std::polar(std::exp(b->coeff.log_mag - m), b->coeff.phase);
            if (std::abs(d) > 0.0) push(a->index, {m + std::log(std::abs(d)), std::arg(d)});
            ++a;
            ++b;
        }
    }
    return out;
}

/// Base-cell samples for a metric ball, center included as sample 0.
std::vector<BasePoint> base_cell_samples(const BaseSystem& sys, const BasePoint& center, double radius,
                                         int count, std::uint64_t seed) {
    std::vector<BasePoint> out;
    out.push_back(center);
    std::mt19937_64 rng(seed ^ 0x517cc1b727220a95ull);
    switch (sys.kind()) {
        case BaseKind::rotation:
        case BaseKind::doubling: {
            double c = std::get<CirclePoint>(center).x;
            for (int i = 1; i < count; ++i) {
                double t = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
                out.push_back(CirclePoint{wrap_unit(c - radius + 2.0 * radius * t)});
            }
            break;
        }
        case BaseKind::odometer: {
            int fixed = 0;
            while (fixed < sys.depth() && std::ldexp(1.0, -(fixed + 1)) > radius) ++fixed;
            const auto& cd = std::get<OdometerPoint>(center).digits;
            for (int i = 1; i < count; ++i) {
                OdometerPoint p;
                p.digits = cd;
                for (int d = fixed; d < sys.depth(); ++d)
                    p.digits[static_cast<std::size_t>(d)] = static_cast<std::uint8_t>(rng() & 1u);
                out.push_back(std::move(p));
            }
            break;
        }
        case BaseKind::torus_skew: {
            const auto& c = std::get<TorusPoint>(center);
            std::uniform_real_distribution<double> off(-radius, radius);
            for (int i = 1; i < count; ++i)
                out.push_back(TorusPoint{wrap_unit(c.x + off(rng)), wrap_unit(c.y + off(rng))});
            break;
        }
    }
    return out;
}

}  // namespace

ScalarSkew::ScalarSkew(BaseSystem b, ScalarCocycle c, ShiftOperator f)
    : base(std::move(b)), cocycle(std::move(c)), fiber(std::move(f)) {
    if (!same_base(base, cocycle.base())) throw Error("cocycle base must match skew base");
}

std::pair<BasePoint, LogVector> ScalarSkew::iterate(const BasePoint& a, const LogVector& x,
                                                    std::int64_t n) const {
    if (n < 0) throw NonInvertibleError("scalar skew iterates forward only");
    LogPolar h = cocycle.log_product(a, n);
    return {base.apply(a, n), fiber.apply_log(x, n).scaled(h)};
}

IntSkew::IntSkew(BaseSystem b, IntegerCocycle c, ShiftOperator f)
    : base(std::move(b)), cocycle(std::move(c)), fiber(std::move(f)) {
    if (!same_base(base, cocycle.base())) throw Error("cocycle base must match skew base");
    if (!base.invertible()) throw Error("integer skew needs an invertible base");
    if (fiber.side() != Side::bilateral) throw Error("integer skew needs an invertible (bilateral) fiber");
}

std::pair<BasePoint, LogVector> IntSkew::iterate(const BasePoint& a, const LogVector& x,
                                                 std::int64_t n) const {
    std::int64_t h = cocycle.sum(a, n);
    return {base.apply(a, n), fiber.power_log(x, h)};
}

double fiber_min_distance_sq(const ShiftOperator& T, const LogPolar& h_n, std::int64_t n,
                             const SparseVector& u, double du, const SparseVector& v) {
    if (T.space().weight || T.space().p != 2.0)
        throw Error("exact fiber test is specialized to plain ell^2");

    // coordinates of the image map: y_j = c_j x_{n+j}, c_j = h_n * prod w
    std::set<std::int64_t> support;
    for (const auto& [j, c] : v.entries()) support.insert(j);
    for (const auto& [idx, c] : u.entries())
        if (idx - n >= 1) support.insert(idx - n);
    if (support.empty()) return 0.0;  // free coordinates reach v = 0 at zero cost

    struct Coord {
        std::complex<double> c, a, v;
    };
    std::vector<Coord> coords;
    coords.reserve(support.size());
    for (std::int64_t j : support) {
        double lc = h_n.log_mag + T.op_weights().log_range_product(j, j + n - 1);
        lc = std::clamp(lc, -kLogClamp, kLogClamp);
        coords.push_back({std::polar(std::exp(lc), h_n.phase), u.at(n + j), v.at(j)});
    }

    auto solve = [&](double lambda) {
        double budget = 0.0, obj = 0.0;
        for (const auto& q : coords) {
            std::complex<double> t = (std::conj(q.c) * q.v + lambda * q.a) / (std::norm(q.c) + lambda);
            budget += std::norm(t - q.a);
            obj += std::norm(q.c * t - q.v);
        }
        return std::pair{budget, obj};
    };

    if (du <= 0.0) {
        double obj = 0.0;
        for (const auto& q : coords) obj += std::norm(q.c * q.a - q.v);
        return obj;
    }

    double du2 = du * du;
    if (solve(0.0).first <= du2) return 0.0;

    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 400 && solve(hi).first > du2; ++i) {
        lo = hi;
        hi *= 4.0;
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * (1.0 + hi); ++i) {
        double mid = 0.5 * (lo + hi);
        (solve(mid).first > du2 ? lo : hi) = mid;
    }
    return solve(0.5 * (lo + hi)).second;
}

namespace {

/// Candidate construction z = u + h_n^{-1} S^n v: sufficient hit test usable
/// in any norm space.
bool candidate_hit(const ShiftOperator& T, const LogPolar& h_n, std::int64_t n, const SparseVector& u,
                   double du, const SparseVector& v, double dv) {
    LogVector shift_back = T.right_inverse_log(LogVector::from_sparse(v), n).scaled(h_n.inverse());
    double budget = norm_log(shift_back, T.space());
    if (!(budget < std::log(du))) return false;
    LogVector image_u = T.apply_log(LogVector::from_sparse(u), n).scaled(h_n);
    double imgdist = norm_log(image_u, T.space());
    return imgdist < std::log(dv);
}

struct SampleState {
    BasePoint point;    // f^n(a)
    LogPolar h;         // h_n(a)
    BasePoint initial;  // a
};

}  // namespace

HittingSet hitting_set(const ScalarSkew& skew, const Box& U, const Box& V, std::int64_t horizon,
                       const HittingOptions& opts) {
    if (U.base_radius <= 0.0 || V.base_radius <= 0.0 || U.fiber_radius <= 0.0 || V.fiber_radius <= 0.0)
        throw Error("box radii must be positive");
    bool exact = !skew.fiber.space().weight && skew.fiber.space().p == 2.0;

    HittingSet result;
    result.horizon = horizon;
    result.fiber_test_mode = exact ? "exact_p2" : "candidate";

    std::vector<SampleState> samples;
    for (auto& p : base_cell_samples(skew.base, U.base_center, U.base_radius,
                                     std::max(64, opts.base_samples), opts.seed))
        samples.push_back({p, LogPolar{0.0, 0.0}, p});

    double dv2 = V.fiber_radius * V.fiber_radius;
    for (std::int64_t n = 0; n <= horizon; ++n) {
        const SampleState* witness = nullptr;
        if (opts.ignore_base) {
            witness = &samples.front();
        } else {
            for (const auto& s : samples)
                if (skew.base.distance(s.point, V.base_center) <= V.base_radius) {
                    witness = &s;
                    break;
                }
        }
        HitRow row;
        row.n = n;
        row.fiber_distance_sq = -1.0;
        if (witness) {
            row.base_witness = true;
            row.log_scale = witness->h.log_mag;
            if (exact) {
                double d2 = fiber_min_distance_sq(skew.fiber, witness->h, n, U.fiber_center,
                                                  U.fiber_radius, V.fiber_center);
                row.fiber_distance_sq = d2;
                row.hit = d2 < dv2 * kHitGuard;
            } else {
                row.hit = candidate_hit(skew.fiber, witness->h, n, U.fiber_center, U.fiber_radius,
                                        V.fiber_center, V.fiber_radius);
            }
            if (row.hit) result.hits.push_back(n);
        }
        if (opts.record_rows) result.rows.push_back(row);
        for (auto& s : samples) {
            s.h *= skew.cocycle.value(s.point);
            s.point = skew.base.apply(s.point, 1);
        }
    }
    return result;
}

HittingSet product_hitting(const ScalarSkew& skew, const Box& U1, const Box& V1, const Box& U2,
                           const Box& V2, std::int64_t horizon, const HittingOptions& opts) {
    HittingSet h1 = hitting_set(skew, U1, V1, horizon, opts);
    HittingSet h2 = hitting_set(skew, U2, V2, horizon, opts);
    HittingSet out;
    out.horizon = horizon;
    out.fiber_test_mode = h1.fiber_test_mode;
    std::set_intersection(h1.hits.begin(), h1.hits.end(), h2.hits.begin(), h2.hits.end(),
                          std::back_inserter(out.hits));
    return out;
}

HittingSet int_skew_hitting(const IntSkew& skew, const Box& U, const Box& V, std::int64_t horizon,
                            const HittingOptions& opts) {
    HittingSet result;
    result.horizon = horizon;
    result.fiber_test_mode = "candidate";

    struct IntSample {
        BasePoint point;
        std::int64_t h;
    };
    std::vector<IntSample> samples;
    for (auto& p : base_cell_samples(skew.base, U.base_center, U.base_radius,
                                     std::max(64, opts.base_samples), opts.seed))
        samples.push_back({p, 0});

    LogVector u = LogVector::from_sparse(U.fiber_center);
    LogVector v = LogVector::from_sparse(V.fiber_center);
    for (std::int64_t n = 0; n <= horizon; ++n) {
        for (const auto& s : samples) {
            if (skew.base.distance(s.point, V.base_center) > V.base_radius) continue;
            LogVector image = skew.fiber.power_log(u, s.h);
            double d = norm_log(log_difference(image, v), skew.fiber.space());
            if (d < std::log(V.fiber_radius)) {
                result.hits.push_back(n);
            }
            break;
        }
        for (auto& s : samples) {
            s.h += skew.cocycle.generator_value(s.point);
            s.point = skew.base.apply(s.point, 1);
        }
    }
    return result;
}

ClassifyReport classify(const HittingSet& hits) {
    ClassifyReport rep;
    std::int64_t n = hits.horizon;

    // longest run of consecutive hits within each prefix checkpoint
    std::vector<std::int64_t> checkpoints;
    for (int i = 1; i <= 8; ++i) checkpoints.push_back(n * i / 8);
    std::size_t ci = 0;
    std::int64_t run = 0, best = 0;
    std::int64_t prev = -2;
    for (std::int64_t h : hits.hits) {
        while (ci < checkpoints.size() && h > checkpoints[ci]) {
            rep.thick_witness_runs.emplace_back(checkpoints[ci], best);
            ++ci;
        }
        run = (h == prev + 1) ? run + 1 : 1;
        best = std::max(best, run);
        prev = h;
    }
    while (ci < checkpoints.size()) {
        rep.thick_witness_runs.emplace_back(checkpoints[ci], best);
        ++ci;
    }

    if (!hits.hits.empty()) {
        if (hits.hits.back() == n) {
            std::size_t i = hits.hits.size() - 1;
            while (i > 0 && hits.hits[i - 1] == hits.hits[i] - 1) --i;
            rep.cofinite_tail_start = hits.hits[i];
        }
        auto bound_for = [](const std::vector<std::int64_t>& h, std::int64_t N) {
            std::int64_t miss = h.front();
            for (std::size_t i = 1; i < h.size(); ++i) miss = std::max(miss, h[i] - h[i - 1] - 1);
            miss = std::max(miss, N - h.back());
            return miss + 1;
        };
        std::int64_t m_full = bound_for(hits.hits, n);
        std::vector<std::int64_t> half;
        for (std::int64_t v : hits.hits)
            if (v <= n / 2) half.push_back(v);
        if (!half.empty() && bound_for(half, n / 2) == m_full) rep.syndetic_bound = m_full;
    }
    return rep;
}

Example1Report run_example1(double gamma, double eps, std::int64_t horizon) {
    if (!(gamma - eps > 0.0)) throw Error("example1 requires gamma - eps > 0");
    Example1Report rep;
    rep.gamma = gamma;
    rep.eps = eps;

    ShiftOperator T = ShiftOperator::unweighted_on_weighted_space(WeightSequence::example1(gamma, eps));
    DenseSetSpec d1, d2;
    d2.seed = 1;

    rep.along_rk = check_criterion(T, IndexSequence::example1_rk(horizon), d1, d2, gamma);
    rep.along_full = check_criterion(T, IndexSequence::full(horizon), d1, d2, gamma);

    SparseVector e1 = SparseVector::basis(1);
    for (int k = 1; example1_r(k) <= horizon; ++k) {
        Example1Milestone m;
        m.k = k;
        m.r_k = example1_r(k);
        m.n2 = 2 * m.r_k + 1;
        m.s_rk_root_log = norm_log(T.right_inverse_log(LogVector::from_sparse(e1), m.r_k), T.space()) /
                          static_cast<double>(m.r_k);
        if (m.n2 <= horizon)
            m.s_n2_root_log = norm_log(T.right_inverse_log(LogVector::from_sparse(e1), m.n2), T.space()) /
                              static_cast<double>(m.n2);
        rep.milestones.push_back(m);
    }
    return rep;
}

Example2Report run_example2(double gamma, const WindowSpec& windows, std::int64_t horizon,
                            std::int64_t hitting_horizon) {
    Example2Report rep;
    rep.gamma = gamma;
    rep.horizon = horizon;

    WeightSequence w = WeightSequence::example2(gamma, windows);
    for (std::int64_t n = 1; n <= horizon; ++n) {
        if (windows.window_of(n)) continue;
        double err = std::fabs(w.log_prefix_product(n) + static_cast<double>(n) * gamma);
        rep.max_product_identity_error = std::max(rep.max_product_identity_error, err);
        if (err > 1e-9) ++rep.product_identity_violations;
    }

    // fiber obstruction: U = ball(0, 1/2), V = ball(e_1, 1/2), h_n = e^{n gamma}
    ShiftOperator T = ShiftOperator::weighted_unilateral(w);
    SparseVector zero, e1 = SparseVector::basis(1);
    for (std::int64_t n = 0; n <= std::min(horizon, hitting_horizon); ++n) {
        if (windows.window_of(n)) continue;
        ++rep.nonwindow_times_checked;
        LogPolar hn{static_cast<double>(n) * gamma, 0.0};
        double d2 = fiber_min_distance_sq(T, hn, n, zero, 0.5, e1);
        if (d2 < 0.25 * kHitGuard) rep.nonwindow_hits.push_back(n);
    }

    // window-avoiding sequence: midpoints of the inter-window gaps
    std::vector<std::int64_t> mids;
    std::int64_t first_start = windows.center(1) - 1 + 1;
    if (first_start > 2) mids.push_back(first_start / 2);
    for (int k = 1; k < windows.count(); ++k) {
        std::int64_t gap_lo = windows.center(k) + k;
        std::int64_t gap_hi = windows.center(k + 1) - (k + 1);
        std::int64_t m = (gap_lo + gap_hi) / 2;
        if (m > std::min(horizon, hitting_horizon)) break;
        if (!windows.window_of(m) && m >= 1) mids.push_back(m);
    }
    if (!mids.empty()) {
        CriterionOptions opts;
        opts.strict = false;
        // the rates approach the thresholds like gamma + O(1/n); allow the
        // finite-size correction at the first tail term
        std::int64_t tail_first = mids[(mids.size() + 1) / 2 - 1];
        opts.tol = std::max(1e-6, 3.0 * gamma / static_cast<double>(tail_first));
        DenseSetSpec d1, d2;
        d2.seed = 1;
        rep.window_avoiding = check_criterion(
            T, IndexSequence::explicit_terms(mids, std::min(horizon, hitting_horizon)), d1, d2, gamma,
            opts);
    }
    return rep;
}

FurstenbergReport furstenberg_coverage(double alpha, std::int64_t steps, int grid) {
    FurstenbergReport rep;
    rep.steps = steps;
    rep.grid = grid;
    rep.cells_total = static_cast<std::int64_t>(grid) * grid;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(rep.cells_total), 0);
    double a = 0.0, x = 0.0;
    std::int64_t visited = 0;
    for (std::int64_t s = 0; s <= steps; ++s) {
        int ia = std::min(grid - 1, static_cast<int>(a * grid));
        int ix = std::min(grid - 1, static_cast<int>(x * grid));
        auto& cell = seen[static_cast<std::size_t>(ia) * static_cast<std::size_t>(grid) +
                          static_cast<std::size_t>(ix)];
        if (!cell) {
            cell = 1;
            ++visited;
            if (visited == rep.cells_total && rep.steps_to_full < 0) rep.steps_to_full = s;
        }
        double na = wrap_unit(a + alpha);
        x = wrap_unit(a + x);
        a = na;
    }
    rep.cells_visited = visited;
    return rep;
}

IntSkewReport run_intskew(double alpha, double weight, int pairs, std::int64_t horizon,
                          std::uint64_t seed) {
    IntSkewReport rep;
    rep.horizon = horizon;
    BaseSystem base = BaseSystem::rotation(alpha);
    IntSkew skew(base, IntegerCocycle(base, IntegerCocycle::Constant{1}),
                 ShiftOperator::weighted_bilateral(weight));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::int64_t> jdist(-3, 3), ndist(3, 12);
    std::uniform_real_distribution<double> adist(0.0, 1.0);
    bool all = true;
    for (int p = 0; p < pairs; ++p) {
        std::int64_t j = jdist(rng), n0 = ndist(rng);
        BasePoint a0 = CirclePoint{adist(rng)};
        Box U{a0, 0.3, SparseVector::basis(j), 0.4};
        double scale = std::pow(weight, static_cast<double>(n0));
        Box V{base.apply(a0, n0), 0.3, SparseVector::basis(j - n0, scale), 0.4};
        HittingOptions opts;
        opts.seed = seed + static_cast<std::uint64_t>(p);
        HittingSet hs = int_skew_hitting(skew, U, V, horizon, opts);
        rep.pair_first_hits.emplace_back(p, hs.hits.empty() ? -1 : hs.hits.front());
        all = all && !hs.hits.empty();
    }
    rep.all_nonempty = all;
    return rep;
}

}  // namespace skewlab
