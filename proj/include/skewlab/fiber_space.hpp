#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "skewlab/cocycles.hpp"

namespace skewlab {

struct OverflowScaleError : Error {
    using Error::Error;
};

/// Finitely supported fiber vector: sorted (index, coefficient) entries,
/// no stored zeros. Unilateral indices start at 1; bilateral allow any integer.
class SparseVector {
public:
    using Entry = std::pair<std::int64_t, std::complex<double>>;

    SparseVector() = default;
    explicit SparseVector(std::vector<Entry> entries);

    static SparseVector basis(std::int64_t index, std::complex<double> coeff = 1.0);

    const std::vector<Entry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }
    std::complex<double> at(std::int64_t index) const;

    SparseVector operator+(const SparseVector& o) const;
    SparseVector operator-(const SparseVector& o) const;
    SparseVector scaled(std::complex<double> c) const;

private:
    std::vector<Entry> entries_;
};

/// Sparse vector with coefficients carried in log-polar scale, the working
/// representation for shift iterates whose magnitudes leave double range.
struct LogVector {
    struct Entry {
        std::int64_t index;
        LogPolar coeff;
    };
    std::vector<Entry> entries;  // sorted by index

    static LogVector from_sparse(const SparseVector& v);
    /// Materialize to linear scale; throws OverflowScaleError when any
    /// |log_mag| exceeds 500.
    SparseVector to_sparse() const;
    LogVector scaled(const LogPolar& s) const;
};

/// Window structure for the bounded-weight obstruction example: window k is
/// {r_k - k + 1, ..., r_k + k}, centers default to r_k = base^k.
class WindowSpec {
public:
    explicit WindowSpec(std::int64_t base = 4, int max_k = 30);
    static WindowSpec from_centers(std::vector<std::int64_t> centers);

    /// Window index k (1-based) containing n, if any.
    std::optional<int> window_of(std::int64_t n) const;
    std::int64_t center(int k) const { return centers_.at(static_cast<std::size_t>(k - 1)); }
    int count() const { return static_cast<int>(centers_.size()); }
    /// Largest index covered by any stored window.
    std::int64_t coverage() const;

private:
    std::vector<std::int64_t> centers_;
};

/// r_1 = 1, r_{k+1} = 4 r_k + 3; closed form 2*4^{k-1} - 1.
std::int64_t example1_r(int k);

/// Rule-based weight sequence w(n), n >= 1, with log-prefix-product
/// L(n) = sum_{i<=n} log w_i.
class WeightSequence {
public:
    struct Constant {
        double w = 1.0;
    };
    /// Branch table over the tiles (r_k, 2r_k+1] and (2r_k+1, r_{k+1}]; w_1 = 1.
    struct Example1 {
        double gamma = 1.0;
        double eps = 0.5;
    };
    /// 1 on the left half-window, e^{-2 gamma} on the right, e^{-gamma} elsewhere.
    struct Example2 {
        double gamma = 0.0;
        WindowSpec windows{4};
    };
    struct Table {
        std::vector<double> values;  // w(1), w(2), ...
    };
    using Rule = std::variant<Constant, Example1, Example2, Table>;

    explicit WeightSequence(Rule rule);

    static WeightSequence constant(double w) { return WeightSequence(Constant{w}); }
    static WeightSequence example1(double gamma, double eps) { return WeightSequence(Example1{gamma, eps}); }
    static WeightSequence example2(double gamma, WindowSpec windows = WindowSpec(4)) {
        return WeightSequence(Example2{gamma, std::move(windows)});
    }

    const Rule& rule() const { return rule_; }

    double log_weight(std::int64_t n) const;
    double weight(std::int64_t n) const;

    /// L(n); closed form for constant and example2 rules, cached prefix sums
    /// otherwise. L(0) = 0.
    double log_prefix_product(std::int64_t n) const;

    /// Prefix products over an arbitrary index range (bilateral shifts need
    /// negative indices; only the constant rule admits them).
    double log_range_product(std::int64_t first, std::int64_t last) const;

    bool constant_rule() const { return std::holds_alternative<Constant>(rule_); }

private:
    Rule rule_;
    mutable std::vector<double> prefix_cache_;  // prefix_cache_[n] = L(n)
};

enum class Side { unilateral, bilateral };

/// Norm space for sparse vectors: plain ell^p or weighted ell^p(w).
struct NormSpace {
    double p = 2.0;
    std::optional<WeightSequence> weight;

    static NormSpace plain(double p = 2.0) { return {p, std::nullopt}; }
    static NormSpace weighted(WeightSequence w, double p = 2.0) { return {p, std::move(w)}; }
};

double norm_log(const LogVector& v, const NormSpace& space);  // -inf for the zero vector
double norm_log(const SparseVector& v, const NormSpace& space);
double norm(const SparseVector& v, const NormSpace& space);

/// Weighted backward shift B_w together with the norm space it acts on.
/// Both standard layouts fit: an unweighted shift on a weighted space
/// (op_weights constant 1) and a weighted shift on plain ell^p.
class ShiftOperator {
public:
    ShiftOperator(WeightSequence op_weights, Side side, NormSpace space);

    static ShiftOperator weighted_unilateral(WeightSequence w, double p = 2.0);
    static ShiftOperator weighted_bilateral(double w, double p = 2.0);
    /// Unweighted backward shift on ell^p(w).
    static ShiftOperator unweighted_on_weighted_space(WeightSequence w, double p = 2.0);

    const WeightSequence& op_weights() const { return op_weights_; }
    Side side() const { return side_; }
    const NormSpace& space() const { return space_; }

    /// (B_w^n v)_j = prod_{i=j}^{n+j-1} w_i * v_{n+j}.
    LogVector apply_log(const LogVector& v, std::int64_t n) const;
    SparseVector apply(const SparseVector& v, std::int64_t n) const;

    /// Right inverse: (S v)_{j+1} = v_j / w_j, so B_w S = id.
    LogVector right_inverse_log(const LogVector& v, std::int64_t n) const;
    SparseVector right_inverse(const SparseVector& v, std::int64_t n) const;

    /// Signed power for invertible bilateral shifts: T^m with m < 0 meaning
    /// the inverse (the unweighted forward shift corrected by weights).
    LogVector power_log(const LogVector& v, std::int64_t m) const;

private:
    WeightSequence op_weights_;
    Side side_;
    NormSpace space_;
};

}  // namespace skewlab
