#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "skewlab/fiber_space.hpp"

namespace skewlab {

struct InsufficientDataError : Error {
    using Error::Error;
};

/// Strictly increasing positive integers (n_k) materialized up to a horizon.
class IndexSequence {
public:
    struct Full {};
    struct Arithmetic {
        std::int64_t start = 1;
        std::int64_t step = 1;
    };
    struct Example1Rk {};
    struct Explicit {
        std::vector<std::int64_t> terms;
    };
    using Rule = std::variant<Full, Arithmetic, Example1Rk, Explicit>;

    IndexSequence(Rule rule, std::int64_t horizon);

    static IndexSequence full(std::int64_t horizon) { return {Full{}, horizon}; }
    static IndexSequence arithmetic(std::int64_t start, std::int64_t step, std::int64_t horizon) {
        return {Arithmetic{start, step}, horizon};
    }
    static IndexSequence example1_rk(std::int64_t horizon) { return {Example1Rk{}, horizon}; }
    static IndexSequence explicit_terms(std::vector<std::int64_t> terms, std::int64_t horizon) {
        return {Explicit{std::move(terms)}, horizon};
    }

    const Rule& rule() const { return rule_; }
    std::int64_t horizon() const { return horizon_; }
    bool is_full() const { return std::holds_alternative<Full>(rule_); }
    const std::vector<std::int64_t>& terms() const { return terms_; }

private:
    Rule rule_;
    std::int64_t horizon_;
    std::vector<std::int64_t> terms_;
};

struct SequenceStats {
    std::int64_t max_gap = 0;
    bool is_cofinite_tail = false;
    std::int64_t cofinite_tail_start = 0;  // meaningful when is_cofinite_tail
    std::optional<std::int64_t> syndetic_bound;
};

SequenceStats sequence_stats(const IndexSequence& seq);

/// Tail-window maximum over [ceil(K/2), K], the finite-horizon limsup proxy.
/// Requires at least 8 samples.
double limsup_proxy(const std::vector<double>& values);

/// Generator family standing in for a dense set: canonical basis vectors
/// plus seeded random finite-support vectors.
struct DenseSetSpec {
    int basis_count = 8;
    int random_count = 8;
    std::int64_t max_support_index = 32;
    std::uint64_t seed = 0;
    std::int64_t first_index = 1;  // -max_support_index .. for bilateral use

    struct Member {
        std::string id;
        SparseVector vec;
    };
    std::vector<Member> generate() const;
};

enum class CriterionVerdict { mixing_certificate, weakly_mixing_certificate, transitive_certificate, fail };

struct ConditionRow {
    std::string vector_id;
    int condition = 0;           // 1, 2 or 3
    double tail_proxy = 0.0;     // log scale for (i)/(ii); linear residual for (iii)
    double witness_value = 0.0;  // max over the whole scan
    std::int64_t witness_n = 0;
    double threshold = 0.0;  // log threshold for (i)/(ii)
    double margin = 0.0;     // threshold - tail_proxy (log scale)
    bool pass = false;
};

struct CriterionSample {
    std::string vector_id;
    int condition = 0;
    std::int64_t k = 0;    // 1-based position in (n_k)
    std::int64_t n_k = 0;
    double log_value = 0.0;  // rate (log scale) for (i)/(ii), linear residual for (iii)
};

struct CriterionReport {
    double gamma = 0.0;
    double tol = 0.0;
    std::vector<ConditionRow> rows;
    std::vector<CriterionSample> samples;  // populated when keep_samples is set
    SequenceStats stats;
    CriterionVerdict verdict = CriterionVerdict::fail;
    int failed_condition = 0;         // 0 when passing
    std::string failure_witness_id;   // vector id of the first failing row

    bool all_pass() const { return failed_condition == 0; }
    const ConditionRow* row(const std::string& id, int condition) const;
};

std::string to_string(CriterionVerdict v);

struct CriterionOptions {
    double tol = 1e-6;            // log-scale margin the strict inequalities must clear
    double residual_tol = 1e-9;   // condition (iii) tail residual bound
    bool strict = true;           // false admits boundary equality (the limit form of the conditions)
    bool keep_samples = false;    // retain the per-(vector, n_k) values for reporting
};

/// Evaluates the three criterion conditions for the shift T along (n_k) in
/// log arithmetic, with margins against e^{-gamma} and e^{gamma}.
CriterionReport check_criterion(const ShiftOperator& T, const IndexSequence& seq, const DenseSetSpec& d1,
                                const DenseSetSpec& d2, double gamma, const CriterionOptions& opts = {});

enum class DichotomyComparison { above, below, inconclusive };

struct DichotomyReport {
    double limsup_proxy_log = 0.0;  // tail max of L(n)/n
    DichotomyComparison comparison = DichotomyComparison::inconclusive;
    std::string implied_verdict;
};

/// Compares limsup (prod w_i)^{1/n} against e^{-gamma}.
DichotomyReport shift_dichotomy(const WeightSequence& w, double gamma, std::int64_t horizon,
                                double tol = 1e-2);

}  // namespace skewlab
