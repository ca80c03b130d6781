#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skewlab/criterion.hpp"

namespace skewlab {

/// P(a,x) = (f(a), h(a) T x) with T a weighted backward shift.
struct ScalarSkew {
    BaseSystem base;
    ScalarCocycle cocycle;
    ShiftOperator fiber;

    ScalarSkew(BaseSystem b, ScalarCocycle c, ShiftOperator f);

    /// P^n(a,x) = (f^n(a), h_n(a) T^n x); fiber carried in log-polar scale.
    std::pair<BasePoint, LogVector> iterate(const BasePoint& a, const LogVector& x, std::int64_t n) const;
};

/// F(a,x) = (f(a), T^{h(1,a)} x) with an invertible bilateral fiber shift.
struct IntSkew {
    BaseSystem base;
    IntegerCocycle cocycle;
    ShiftOperator fiber;

    IntSkew(BaseSystem b, IntegerCocycle c, ShiftOperator f);

    std::pair<BasePoint, LogVector> iterate(const BasePoint& a, const LogVector& x, std::int64_t n) const;
};

/// Product box U = base ball x fiber ball.
struct Box {
    BasePoint base_center;
    double base_radius = 0.0;
    SparseVector fiber_center;
    double fiber_radius = 0.0;
};

struct HitRow {
    std::int64_t n = 0;
    bool hit = false;
    bool base_witness = false;       // some sampled point of U lands in V's base cell
    double fiber_distance_sq = 0.0;  // exact mode only; -1 otherwise
    double log_scale = 0.0;          // log |h_n(a)| at the witness
};

struct HittingSet {
    std::int64_t horizon = 0;
    std::vector<std::int64_t> hits;  // sorted, within [0, horizon]
    std::string fiber_test_mode;     // "exact_p2" or "candidate"
    std::vector<HitRow> rows;        // populated when record_rows is set
};

struct HittingOptions {
    int base_samples = 64;
    std::uint64_t seed = 0;
    /// When set, the base condition is treated as satisfied and h_n is taken
    /// at the box's base center (fiber-side-only analysis).
    bool ignore_base = false;
    bool record_rows = false;
};

/// N(U,V) within [0,N]: n is a hit when a sampled a in U's base cell lands in
/// V's base cell under f^n and the fiber distance test passes. For p = 2 the
/// fiber test is the exact separable constrained least squares solved by
/// single-multiplier bisection; other p fall back to the sufficient candidate
/// construction.
HittingSet hitting_set(const ScalarSkew& skew, const Box& U, const Box& V, std::int64_t horizon,
                       const HittingOptions& opts = {});

HittingSet product_hitting(const ScalarSkew& skew, const Box& U1, const Box& V1, const Box& U2,
                           const Box& V2, std::int64_t horizon, const HittingOptions& opts = {});

/// Candidate-based hitting set for the integer-cocycle skew.
HittingSet int_skew_hitting(const IntSkew& skew, const Box& U, const Box& V, std::int64_t horizon,
                            const HittingOptions& opts = {});

/// Exact fiber feasibility at time n: is there x with ||x - u|| <= du whose
/// image h_n T^n x lies within dv of v? Returns the minimal image distance
/// squared. Plain ell^2 only.
double fiber_min_distance_sq(const ShiftOperator& T, const LogPolar& h_n, std::int64_t n,
                             const SparseVector& u, double du, const SparseVector& v);

struct ClassifyReport {
    std::vector<std::pair<std::int64_t, std::int64_t>> thick_witness_runs;  // (prefix, longest run)
    std::optional<std::int64_t> syndetic_bound;
    std::optional<std::int64_t> cofinite_tail_start;
};

ClassifyReport classify(const HittingSet& hits);

struct Example1Milestone {
    int k = 0;
    std::int64_t r_k = 0;
    double s_rk_root_log = 0.0;   // (1/r_k) log ||S^{r_k} e_1||
    std::int64_t n2 = 0;          // 2 r_k + 1
    double s_n2_root_log = 0.0;   // (1/n2) log ||S^{n2} e_1||
};

struct Example1Report {
    double gamma = 0.0;
    double eps = 0.0;
    CriterionReport along_rk;
    CriterionReport along_full;
    std::vector<Example1Milestone> milestones;
};

/// Criterion regression for the branch-weight space: passes along (r_k),
/// fails condition (ii) along the full sequence.
Example1Report run_example1(double gamma, double eps, std::int64_t horizon);

struct Example2Report {
    double gamma = 0.0;
    std::int64_t horizon = 0;
    std::int64_t product_identity_violations = 0;  // count of |L(n)+n*gamma| > 1e-9 off-window
    double max_product_identity_error = 0.0;
    std::vector<std::int64_t> nonwindow_hits;  // should be empty
    std::int64_t nonwindow_times_checked = 0;
    CriterionReport window_avoiding;  // non-strict conditions along inter-window midpoints
    bool base_side_checkable = false;  // windows are parametrized, not tied to a concrete base
};

/// Obstruction regression for the bounded-weight example: the off-window
/// product identity L(n) = -n*gamma and the empty off-window hitting set for
/// U = ball(0, 1/2), V = ball(e_1, 1/2).
Example2Report run_example2(double gamma, const WindowSpec& windows, std::int64_t horizon,
                            std::int64_t hitting_horizon = 10000);

struct FurstenbergReport {
    std::int64_t steps = 0;
    int grid = 0;
    std::int64_t cells_visited = 0;
    std::int64_t cells_total = 0;
    std::int64_t steps_to_full = -1;  // first step count with every cell visited, -1 if never
};

/// Orbit coverage of (0,0) under the torus skew on a grid x grid partition.
FurstenbergReport furstenberg_coverage(double alpha, std::int64_t steps, int grid);

struct IntSkewReport {
    std::int64_t horizon = 0;
    std::vector<std::pair<std::int64_t, std::int64_t>> pair_first_hits;  // (pair id, first hit or -1)
    bool all_nonempty = false;
};

/// Transitivity witness experiment: rotation base, unit generator, bilateral
/// doubling-weight fiber; seeded reachable box pairs must all be hit.
IntSkewReport run_intskew(double alpha, double weight, int pairs, std::int64_t horizon,
                          std::uint64_t seed);

}  // namespace skewlab
