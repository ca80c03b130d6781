#include "skewlab/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace skewlab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Tail-window max without the sample-count gate; the public limsup_proxy
// enforces the >= 8 precondition.
std::pair<double, std::size_t> tail_max(const std::vector<double>& values) {
    if (values.empty()) throw InsufficientDataError("no values");
    std::size_t k = values.size();
    std::size_t start = (k + 1) / 2 - 1;  // 1-based window [ceil(K/2), K]
    double m = kNegInf;
    std::size_t arg = start;
    for (std::size_t i = start; i < k; ++i)
        if (values[i] > m) {
            m = values[i];
            arg = i;
        }
    return {m, arg};
}

std::pair<double, std::size_t> full_max(const std::vector<double>& values) {
    double m = kNegInf;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] > m) {
            m = values[i];
            arg = i;
        }
    return {m, arg};
}

}  // namespace

IndexSequence::IndexSequence(Rule rule, std::int64_t horizon) : rule_(std::move(rule)), horizon_(horizon) {
    if (horizon_ < 1) throw Error("sequence horizon must be >= 1");
    if (std::holds_alternative<Full>(rule_)) {
        terms_.reserve(static_cast<std::size_t>(horizon_));
        for (std::int64_t n = 1; n <= horizon_; ++n) terms_.push_back(n);
    } else if (const auto* a = std::get_if<Arithmetic>(&rule_)) {
        if (a->start < 1 || a->step < 1) throw Error("arithmetic sequence needs start, step >= 1");
        for (std::int64_t n = a->start; n <= horizon_; n += a->step) terms_.push_back(n);
    } else if (std::holds_alternative<Example1Rk>(rule_)) {
        for (int k = 1; example1_r(k) <= horizon_; ++k) terms_.push_back(example1_r(k));
    } else {
        for (std::int64_t t : std::get<Explicit>(rule_).terms)
            if (t <= horizon_) terms_.push_back(t);
        for (std::size_t i = 0; i < terms_.size(); ++i) {
            if (terms_[i] < 1) throw Error("sequence terms must be positive");
            if (i > 0 && terms_[i] <= terms_[i - 1]) throw Error("sequence must be strictly increasing");
        }
    }
    if (terms_.empty()) throw Error("sequence is empty within the horizon");
}

SequenceStats sequence_stats(const IndexSequence& seq) {
    const auto& t = seq.terms();
    std::int64_t n = seq.horizon();
    SequenceStats st;
    st.max_gap = t.front();
    for (std::size_t i = 1; i < t.size(); ++i) st.max_gap = std::max(st.max_gap, t[i] - t[i - 1]);

    // cofinite tail: trailing run of consecutive terms reaching the horizon
    if (t.back() == n) {
        std::size_t i = t.size() - 1;
        while (i > 0 && t[i - 1] == t[i] - 1) --i;
        st.is_cofinite_tail = true;
        st.cofinite_tail_start = t[i];
    }

    // least M with every length-M block of [1, horizon] meeting the sequence
    auto bound_for = [](const std::vector<std::int64_t>& terms, std::int64_t N) {
        std::int64_t miss = terms.front() - 1;
        for (std::size_t i = 1; i < terms.size(); ++i)
            miss = std::max(miss, terms[i] - terms[i - 1] - 1);
        miss = std::max(miss, N - terms.back());
        return miss + 1;
    };
    std::int64_t m_full = bound_for(t, n);
    // reported only when the bound has stabilized over the first half of the
    // horizon, otherwise the finite value is an artifact of truncation
    std::vector<std::int64_t> half;
    for (std::int64_t v : t)
        if (v <= n / 2) half.push_back(v);
    if (!half.empty() && bound_for(half, n / 2) == m_full) st.syndetic_bound = m_full;
    return st;
}

double limsup_proxy(const std::vector<double>& values) {
    if (values.size() < 8) throw InsufficientDataError("limsup proxy needs at least 8 samples");
    return tail_max(values).first;
}

std::vector<DenseSetSpec::Member> DenseSetSpec::generate() const {
    std::vector<Member> out;
    for (int i = 0; i < basis_count; ++i) {
        std::int64_t idx = first_index + i;
        if (idx == 0 && first_index < 1) idx = basis_count;  // keep bilateral families index-distinct
        out.push_back({"e" + std::to_string(idx), SparseVector::basis(idx)});
    }
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> amp(-0.7, 0.7);
    for (int i = 0; i < random_count; ++i) {
        std::uniform_int_distribution<int> nsupp(1, 5);
        int s = nsupp(rng);
        std::vector<SparseVector::Entry> es;
        for (int j = 0; j < s; ++j) {
            std::uniform_int_distribution<std::int64_t> pick(first_index, max_support_index);
            std::int64_t idx = pick(rng);
            if (idx == 0 && first_index < 1) idx = 1;
            bool dup = false;
            for (auto& e : es) dup |= (e.first == idx);
            if (dup) continue;
            es.emplace_back(idx, std::complex<double>(amp(rng), amp(rng)));
        }
        if (es.empty()) es.emplace_back(1, std::complex<double>(0.5, 0.0));
        out.push_back({"rnd" + std::to_string(i), SparseVector(std::move(es))});
    }
    return out;
}

std::string to_string(CriterionVerdict v) {
    switch (v) {
        case CriterionVerdict::mixing_certificate: return "mixing_certificate";
        case CriterionVerdict::weakly_mixing_certificate: return "weakly_mixing_certificate";
        case CriterionVerdict::transitive_certificate: return "transitive_certificate";
        case CriterionVerdict::fail: return "fail";
    }
    return "?";
}

const ConditionRow* CriterionReport::row(const std::string& id, int condition) const {
    for (const auto& r : rows)
        if (r.vector_id == id && r.condition == condition) return &r;
    return nullptr;
}

CriterionReport check_criterion(const ShiftOperator& T, const IndexSequence& seq, const DenseSetSpec& d1,
                                const DenseSetSpec& d2, double gamma, const CriterionOptions& opts) {
    CriterionReport rep;
    rep.gamma = gamma;
    rep.tol = opts.tol;
    rep.stats = sequence_stats(seq);
    const auto& terms = seq.terms();

    auto passes = [&](double proxy, double threshold) {
        return opts.strict ? proxy < threshold - opts.tol : proxy <= threshold + opts.tol;
    };

    auto record_samples = [&](const std::string& id, int cond, const std::vector<double>& values) {
        if (!opts.keep_samples) return;
        for (std::size_t i = 0; i < values.size(); ++i)
            rep.samples.push_back({id, cond, static_cast<std::int64_t>(i + 1), terms[i], values[i]});
    };

    auto add_rate_row = [&](const std::string& id, int cond, const std::vector<double>& values,
                            double threshold) {
        ConditionRow row;
        row.vector_id = id;
        row.condition = cond;
        row.threshold = threshold;
        auto [proxy, _] = tail_max(values);
        auto [wmax, warg] = full_max(values);
        row.tail_proxy = proxy;
        row.witness_value = wmax;
        row.witness_n = terms[warg];
        row.margin = threshold - proxy;
        row.pass = passes(proxy, threshold);
        rep.rows.push_back(row);
    };

    for (const auto& m : d1.generate()) {
        std::vector<double> values;
        values.reserve(terms.size());
        LogVector x = LogVector::from_sparse(m.vec);
        for (std::int64_t n : terms) {
            double ln = norm_log(T.apply_log(x, n), T.space());
            values.push_back(ln / static_cast<double>(n));
        }
        add_rate_row(m.id, 1, values, -gamma);
        record_samples(m.id, 1, values);
    }

    for (const auto& m : d2.generate()) {
        std::vector<double> snorm, resid;
        snorm.reserve(terms.size());
        resid.reserve(terms.size());
        LogVector y = LogVector::from_sparse(m.vec);
        for (std::int64_t n : terms) {
            LogVector sy = T.right_inverse_log(y, n);
            snorm.push_back(norm_log(sy, T.space()) / static_cast<double>(n));
            LogVector back = T.apply_log(sy, n);
            SparseVector diff = back.to_sparse() - m.vec;
            // relative residual: the space norm can be astronomically scaled
            double r = norm(diff, T.space()) / (1.0 + norm(m.vec, T.space()));
            resid.push_back(r);
        }
        add_rate_row(m.id, 2, snorm, gamma);
        record_samples(m.id, 2, snorm);
        record_samples(m.id, 3, resid);

        ConditionRow r3;
        r3.vector_id = m.id;
        r3.condition = 3;
        auto [proxy, _] = tail_max(resid);
        auto [wmax, warg] = full_max(resid);
        r3.tail_proxy = proxy;
        r3.witness_value = wmax;
        r3.witness_n = terms[warg];
        r3.threshold = opts.residual_tol;
        r3.margin = opts.residual_tol - proxy;
        r3.pass = proxy <= opts.residual_tol;
        rep.rows.push_back(r3);
    }

    for (const auto& r : rep.rows) {
        if (!r.pass) {
            rep.failed_condition = r.condition;
            rep.failure_witness_id = r.vector_id;
            rep.verdict = CriterionVerdict::fail;
            return rep;
        }
    }

    if (seq.is_full() || (rep.stats.is_cofinite_tail && rep.stats.cofinite_tail_start == terms.front()))
        rep.verdict = CriterionVerdict::mixing_certificate;
    else if (rep.stats.syndetic_bound)
        rep.verdict = CriterionVerdict::weakly_mixing_certificate;
    else
        rep.verdict = CriterionVerdict::transitive_certificate;
    return rep;
}

DichotomyReport shift_dichotomy(const WeightSequence& w, double gamma, std::int64_t horizon, double tol) {
    if (horizon < 1000) throw Error("shift_dichotomy: horizon must be >= 1000");
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(horizon));
    for (std::int64_t n = 1; n <= horizon; ++n)
        values.push_back(w.log_prefix_product(n) / static_cast<double>(n));
    DichotomyReport rep;
    rep.limsup_proxy_log = tail_max(values).first;
    if (rep.limsup_proxy_log > -gamma + tol) {
        rep.comparison = DichotomyComparison::above;
        rep.implied_verdict = "weakly_mixing";
    } else if (rep.limsup_proxy_log < -gamma - tol) {
        rep.comparison = DichotomyComparison::below;
        rep.implied_verdict = "not_weakly_mixing_or_null_transitive_pairs";
    } else {
        rep.comparison = DichotomyComparison::inconclusive;
        rep.implied_verdict = "inconclusive";
    }
    return rep;
}

}  // namespace skewlab
